#include "bk/invariants.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>

namespace bk {

long long wedge_size_cap() {
    static long long cap = [] {
        const char* env = std::getenv("BERGMANKIT_SIZE_CAP");
        if (env && *env) {
            long long v = std::atoll(env);
            if (v > 0) return v;
        }
        return 1000000LL;
    }();
    return cap;
}

IntPoly characteristic_polynomial(const Matroid& m) {
    if (!m.is_loop_free())
        throw std::invalid_argument(
            "characteristic polynomial rejected: matroid has loops (chi would be identically 0)");
    const FlatsLattice& lat = m.flats_lattice();
    int r = m.rank();
    std::map<Mask, long long> moebius;
    std::vector<long long> coeffs(r + 1, 0);
    for (int k = 0; k <= r; ++k) {
        for (Mask f : lat.by_rank[k]) {
            long long mu_f = (k == 0) ? 1 : 0;
            if (k > 0) {
                for (int j = 0; j < k; ++j)
                    for (Mask g : lat.by_rank[j])
                        if ((g & ~f) == 0) mu_f -= moebius.at(g);
            }
            moebius.emplace(f, mu_f);
            coeffs[r - k] += mu_f;
        }
    }
    return IntPoly(std::move(coeffs));
}

namespace {

IntPoly delcon(const Matroid& m) {
    std::vector<int> lp = m.loops();
    if (!lp.empty()) return IntPoly();  // chi of a matroid with a loop is 0
    Mask e = m.everything();
    // pick the first element that is neither a loop nor a coloop
    int r = m.rank();
    for (int i = 0; i < m.n(); ++i) {
        bool coloop = m.rank(e & ~bit(i)) == r - 1;
        if (!coloop) {
            return delcon(m.remove(bit(i))) - delcon(m.contract(bit(i)));
        }
    }
    // all elements are coloops: free matroid, chi = (t-1)^n
    IntPoly p = IntPoly::constant(1);
    IntPoly t_minus_1({-1, 1});
    for (int i = 0; i < m.n(); ++i) p = p * t_minus_1;
    return p;
}

}  // namespace

IntPoly characteristic_polynomial_delcon(const Matroid& m) {
    if (!m.is_loop_free())
        throw std::invalid_argument(
            "characteristic polynomial rejected: matroid has loops (chi would be identically 0)");
    return delcon(m);
}

IntPoly reduced_characteristic_polynomial(const Matroid& m) {
    return characteristic_polynomial(m).divide_exact(IntPoly({-1, 1}));
}

std::vector<long long> mu_vector(const Matroid& m) {
    IntPoly chi = reduced_characteristic_polynomial(m);
    int d = m.rank() - 1;
    std::vector<long long> out(d + 1, 0);
    for (int k = 0; k <= d; ++k) {
        long long c = chi.coeff(d - k);
        long long expect_sign = (k % 2 == 0) ? 1 : -1;
        if (c != 0 && ((c > 0) != (expect_sign > 0)))
            throw std::logic_error("reduced characteristic polynomial has unexpected sign pattern");
        out[k] = c < 0 ? -c : c;
    }
    return out;
}

long long mu(const Matroid& m, int k) {
    auto v = mu_vector(m);
    if (k < 0 || k >= static_cast<int>(v.size())) return 0;
    return v[k];
}

long long beta(const Matroid& m) {
    IntPoly chi = reduced_characteristic_polynomial(m);
    int d = m.rank() - 1;
    long long v = chi.eval(1);
    return (d % 2 == 0) ? v : -v;
}

std::vector<long long> wedge_dims(const std::vector<IntMat>& spans, int ambient_dim,
                                  int max_p, long long cap) {
    std::vector<long long> dims(max_p + 1, 0);
    dims[0] = 1;
    for (int p = 1; p <= max_p; ++p) {
        long long ambient = binomial(ambient_dim, p);
        if (ambient == 0) { dims[p] = 0; continue; }
        long long rows = 0;
        for (const auto& s : spans) rows += binomial(static_cast<long long>(s.size()), p);
        if (ambient * std::max(rows, 1LL) > cap)
            throw SizeCapExceeded("wedge matrix exceeds the configured size cap");
        // enumerate column subsets once, in Gosper (ascending-mask) order
        std::vector<Mask> col_subsets;
        Mask limit = full_mask(ambient_dim);
        for (Mask cm = first_subset_of_size(p); cm != 0; cm = next_subset_same_size(cm, limit))
            col_subsets.push_back(cm);
        RowBasis basis(col_subsets.size());
        for (const auto& s : spans) {
            int g = static_cast<int>(s.size());
            if (g < p) continue;
            Mask row_limit = full_mask(g);
            for (Mask rm = first_subset_of_size(p); rm != 0; rm = next_subset_same_size(rm, row_limit)) {
                std::vector<int> rsel = elements_of(rm);
                IntVec wedge(col_subsets.size(), 0);
                for (std::size_t ci = 0; ci < col_subsets.size(); ++ci) {
                    std::vector<int> csel = elements_of(col_subsets[ci]);
                    IntMat minor(p, IntVec(p));
                    for (int a = 0; a < p; ++a)
                        for (int b = 0; b < p; ++b) minor[a][b] = s[rsel[a]][csel[b]];
                    wedge[ci] = det(minor);
                }
                basis.add_row(wedge);
            }
            if (basis.rank() == static_cast<int>(ambient)) break;  // already full
        }
        dims[p] = basis.rank();
    }
    return dims;
}

WedgeSpaceReport os_dimension(const Matroid& m, int p, const Fan& fan) {
    if (p < 0) throw std::invalid_argument("wedge power must be nonnegative");
    WedgeSpaceReport rep;
    rep.p = p;
    rep.ambient = binomial(m.n() - 1, p);
    if (p == 0) { rep.dimension = 1; return rep; }
    std::vector<IntMat> spans;
    for (const auto& cone : fan.maximal_cones()) spans.push_back(fan.cone_matrix(cone));
    auto dims = wedge_dims(spans, m.n() - 1, p, wedge_size_cap());
    rep.dimension = dims[p];
    return rep;
}

WedgeSpaceReport os_dimension(const Matroid& m, int p) {
    Fan fan = fine_fan(m);
    return os_dimension(m, p, fan);
}

OsIdentityReport verify_os_identity(const Matroid& m) {
    OsIdentityReport rep;
    auto mus = mu_vector(m);
    Fan fan = fine_fan(m);
    for (int p = 0; p < static_cast<int>(mus.size()); ++p) {
        WedgeSpaceReport w = os_dimension(m, p, fan);
        bool match = (w.dimension == mus[p]);
        rep.rows.push_back({p, mus[p], w.dimension, match});
        rep.all_match = rep.all_match && match;
    }
    return rep;
}

}  // namespace bk
