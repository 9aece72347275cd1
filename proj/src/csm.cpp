#include "bk/csm.hpp"

#include <algorithm>
#include <map>

#include "bk/invariants.hpp"
#include "bk/polynomial.hpp"

namespace bk {

long long MinkowskiWeight::weight_of(const std::vector<int>& cone) const {
    for (std::size_t i = 0; i < cones.size(); ++i)
        if (cones[i] == cone) return weights[i];
    throw std::invalid_argument("cone not present in Minkowski weight");
}

namespace {

long long beta_of_minor(const Matroid& m, Mask g, Mask f) {
    Matroid restricted = m.restrict_to(g);
    std::vector<int> gl = elements_of(g);
    Mask f_local = 0;
    for (std::size_t pos = 0; pos < gl.size(); ++pos)
        if (contains(f, gl[pos])) f_local |= bit(static_cast<int>(pos));
    return beta(restricted.contract(f_local));
}

}  // namespace

MinkowskiWeight csm_weights(const Matroid& m, int k, const Fan& fine) {
    int d = m.rank() - 1;
    if (k < 0 || k > d) throw std::invalid_argument("csm dimension k out of range");
    if (fine.structure() != "fine")
        throw std::invalid_argument("csm_weights is defined on the fine fan structure");
    MinkowskiWeight w;
    w.k = k;
    long long sign = (d - k) % 2 == 0 ? 1 : -1;
    if (k == 0) {
        w.cones.push_back({});
        w.weights.push_back(sign * beta_of_minor(m, m.everything(), 0));
        return w;
    }
    for (const auto& cone : fine.cones_of_dim(k)) {
        std::vector<Mask> flag;
        for (int id : cone) flag.push_back(*fine.rays()[id].flat);
        std::sort(flag.begin(), flag.end(),
                  [&](Mask a, Mask b) { return popcount(a) < popcount(b); });
        long long val = sign;
        Mask prev = 0;
        for (std::size_t i = 0; i <= flag.size(); ++i) {
            Mask next = i < flag.size() ? flag[i] : m.everything();
            val *= beta_of_minor(m, next, prev);
            if (val == 0) break;
            prev = next;
        }
        w.cones.push_back(cone);
        w.weights.push_back(val);
    }
    return w;
}

MinkowskiWeight csm_weights(const Matroid& m, int k) {
    Fan f = fine_fan(m);
    return csm_weights(m, k, f);
}

long long csm_weight_from_support(const Matroid& m, const Fan& fan,
                                  const std::vector<int>& cone, int k) {
    int d = m.rank() - 1;
    if (k != static_cast<int>(cone.size()))
        throw std::invalid_argument("cone dimension does not match k");
    if (!cone.empty() && !fan.is_cone(cone))
        throw std::invalid_argument("cone is not part of the fan");
    std::vector<IntMat> spans;
    for (const auto& max_cone : fan.maximal_cones()) {
        bool contains_sigma = std::includes(max_cone.begin(), max_cone.end(),
                                            cone.begin(), cone.end());
        if (contains_sigma) spans.push_back(fan.cone_matrix(max_cone));
    }
    auto dims = wedge_dims(spans, m.n() - 1, d, wedge_size_cap());
    // chi~_sigma(t) = sum_p (-1)^p dim F_p(Sigma(sigma)) t^{d-p}
    std::vector<long long> coeffs(d + 1, 0);
    for (int p = 0; p <= d; ++p) coeffs[d - p] = (p % 2 == 0 ? 1 : -1) * dims[p];
    IntPoly local_chi(std::move(coeffs));
    IntPoly divisor = IntPoly::constant(1);
    for (int i = 0; i < k; ++i) divisor = divisor * IntPoly({-1, 1});
    IntPoly quotient;
    try {
        quotient = local_chi.divide_exact(divisor);
    } catch (const std::domain_error&) {
        throw std::domain_error(
            "support route inconsistency: (t-1)^k does not divide the local polynomial");
    }
    return quotient.eval(1);
}

BalancingReport balancing_check(const Fan& fan, const MinkowskiWeight& w) {
    if (!is_unimodular(fan))
        throw std::invalid_argument("balancing check needs a unimodular fan");
    BalancingReport rep;
    int k = w.k;
    if (k == 0) return rep;  // no codimension-one faces below points
    std::map<std::vector<int>, long long> weight_of;
    for (std::size_t i = 0; i < w.cones.size(); ++i) weight_of[w.cones[i]] = w.weights[i];

    std::vector<std::vector<int>> taus;
    if (k == 1) taus.push_back({});
    else taus = fan.cones_of_dim(k - 1);

    int n = fan.base().n();
    for (const auto& tau : taus) {
        ++rep.faces_checked;
        IntVec total(n, 0);
        for (const auto& sigma : fan.cones_of_dim(k)) {
            if (!std::includes(sigma.begin(), sigma.end(), tau.begin(), tau.end())) continue;
            std::vector<int> extra;
            std::set_difference(sigma.begin(), sigma.end(), tau.begin(), tau.end(),
                                std::back_inserter(extra));
            if (extra.size() != 1) continue;
            long long wt = weight_of.at(sigma);
            const IntVec& u = fan.rays()[extra[0]].dir.coords();
            for (int j = 0; j < n; ++j) total[j] += wt * u[j];
        }
        QVec sum = QVec::from_lift(total);
        bool ok;
        if (tau.empty()) {
            ok = sum.is_zero();
        } else {
            RowBasis span(n - 1);
            for (int id : tau) span.add_row(fan.rays()[id].dir.quotient_coords());
            ok = span.in_span(sum.quotient_coords());
        }
        if (!ok) {
            rep.balanced = false;
            rep.failing_faces.push_back(tau);
        }
    }
    return rep;
}

}  // namespace bk
