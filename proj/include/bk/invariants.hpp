#pragma once

#include <vector>

#include "bk/fan.hpp"
#include "bk/matroid.hpp"
#include "bk/polynomial.hpp"

namespace bk {

struct SizeCapExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Wedge-dimension cap (entries of the stacked wedge matrix); the environment
// variable BERGMANKIT_SIZE_CAP overrides the default of 10^6.
long long wedge_size_cap();

// Characteristic polynomial via Moebius recursion on the lattice of flats.
IntPoly characteristic_polynomial(const Matroid& m);
// Independent route: deletion-contraction recursion on the rank oracle.
IntPoly characteristic_polynomial_delcon(const Matroid& m);

IntPoly reduced_characteristic_polynomial(const Matroid& m);
std::vector<long long> mu_vector(const Matroid& m);  // mu^0 .. mu^{r-1}, unsigned
long long mu(const Matroid& m, int k);
long long beta(const Matroid& m);

struct WedgeSpaceReport {
    int p = 0;
    long long dimension = 0;
    long long ambient = 0;  // C(|E|-1, p)
};

// dim F_p(B(M)) computed from wedge powers of the spans of the maximal cones
// of the fine fan, by exact rational rank.
WedgeSpaceReport os_dimension(const Matroid& m, int p);
WedgeSpaceReport os_dimension(const Matroid& m, int p, const Fan& fan);

struct OsIdentityRow {
    int p;
    long long mu;
    long long wedge_dim;
    bool match;
};
struct OsIdentityReport {
    std::vector<OsIdentityRow> rows;
    bool all_match = true;
};
OsIdentityReport verify_os_identity(const Matroid& m);

// dims of F_p(sum of wedge powers of the given span matrices) for p = 0..max_p;
// shared between the OS identity and the CSM support route.
std::vector<long long> wedge_dims(const std::vector<IntMat>& spans, int ambient_dim,
                                  int max_p, long long cap);

}  // namespace bk
