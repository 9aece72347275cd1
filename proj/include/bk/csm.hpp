#pragma once

#include <vector>

#include "bk/fan.hpp"
#include "bk/matroid.hpp"

namespace bk {

// Integer weight on the k-dimensional cones of a fan. The k = 0 weight lives
// on the single origin cone, stored as the empty ray set.
struct MinkowskiWeight {
    int k = 0;
    std::vector<std::vector<int>> cones;   // sorted ray-id sets of dimension k
    std::vector<long long> weights;        // aligned with `cones`

    long long weight_of(const std::vector<int>& cone) const;
};

// CSM weight on the fine fan: the cone of the flag F_1 c ... c F_k gets
// (-1)^{d-k} prod_{i=1..k+1} beta(M|F_i/F_{i-1}) with F_0 = empty, F_{k+1} = E.
MinkowskiWeight csm_weights(const Matroid& m, int k);
MinkowskiWeight csm_weights(const Matroid& m, int k, const Fan& fine);

// Support-intrinsic route: reconstruct the local reduced characteristic
// polynomial from wedge dimensions of the cones containing sigma, divide by
// (t-1)^k exactly and evaluate at 1. Works on any fan structure on B(M).
long long csm_weight_from_support(const Matroid& m, const Fan& fan,
                                  const std::vector<int>& cone, int k);

struct BalancingReport {
    bool balanced = true;
    int faces_checked = 0;
    std::vector<std::vector<int>> failing_faces;  // codim-1 cones that fail
};

// For every (k-1)-cone tau: sum of w(sigma) * u_{sigma/tau} over k-cones
// sigma > tau must lie in the span of tau (the fan is unimodular, so the
// primitive generator of the extra ray is a valid lattice normal vector).
BalancingReport balancing_check(const Fan& fan, const MinkowskiWeight& w);

}  // namespace bk
