#include "bk/chow.hpp"

#include <algorithm>

#include "bk/invariants.hpp"

namespace bk {

namespace {

// mu^j of the minor M|G/F (F c G flats); the minor is loop-free because F is
// a flat, so the characteristic polynomial is defined.
long long minor_mu(const Matroid& m, Mask g, Mask f, int j) {
    if (j < 0) return 0;
    Matroid restricted = m.restrict_to(g);
    std::vector<int> gl = elements_of(g);
    Mask f_local = 0;
    for (std::size_t pos = 0; pos < gl.size(); ++pos)
        if (contains(f, gl[pos])) f_local |= bit(static_cast<int>(pos));
    Matroid minor = restricted.contract(f_local);
    if (j >= minor.rank()) return 0;
    return mu(minor, j);
}

bool is_strict_chain(const std::vector<Mask>& flats) {
    for (std::size_t i = 0; i + 1 < flats.size(); ++i) {
        if (flats[i] == flats[i + 1] || (flats[i] & ~flats[i + 1]) != 0) return false;
    }
    return true;
}

// monomials are commutative: sort factors by size and merge repeats
FlagMonomial normalized(const FlagMonomial& monomial) {
    std::vector<std::pair<Mask, int>> factors;
    for (std::size_t i = 0; i < monomial.flats.size(); ++i)
        factors.push_back({monomial.flats[i], monomial.exponents[i]});
    std::sort(factors.begin(), factors.end(), [](const auto& a, const auto& b) {
        return popcount(a.first) != popcount(b.first) ? popcount(a.first) < popcount(b.first)
                                                      : a.first < b.first;
    });
    FlagMonomial out;
    for (const auto& [f, e] : factors) {
        if (!out.flats.empty() && out.flats.back() == f) out.exponents.back() += e;
        else { out.flats.push_back(f); out.exponents.push_back(e); }
    }
    return out;
}

}  // namespace

DegreeValue eur_degree(const Matroid& m, const FlagMonomial& raw) {
    int d = m.rank() - 1;
    if (raw.flats.size() != raw.exponents.size())
        throw std::invalid_argument("flag monomial: flats/exponents length mismatch");
    for (int e : raw.exponents)
        if (e < 1) throw std::invalid_argument("flag monomial exponents must be positive");
    for (Mask f : raw.flats) {
        if (f == 0 || f == m.everything() || !m.is_flat(f))
            throw std::invalid_argument("flag monomial factors must be proper nonempty flats");
    }
    if (raw.total_degree() != d)
        throw std::invalid_argument("flag monomial degree must equal rank(M) - 1");
    FlagMonomial monomial = normalized(raw);
    if (!is_strict_chain(monomial.flats)) return {0, true};

    int k = static_cast<int>(monomial.flats.size());
    long long value = (d - k) % 2 == 0 ? 1 : -1;
    int prefix = 0;
    for (int i = 0; i < k; ++i) {
        prefix += monomial.exponents[i];
        int r_i = m.rank(monomial.flats[i]);
        long long b = binomial(monomial.exponents[i] - 1, prefix - r_i);
        if (b == 0) return {0, false};
        Mask next = (i + 1 < k) ? monomial.flats[i + 1] : m.everything();
        value *= b * minor_mu(m, next, monomial.flats[i], prefix - r_i);
        if (value == 0) return {0, false};
    }
    return {value, false};
}

namespace {

// partial * x_F, or nullopt when the product is a non-face.
std::optional<FlagMonomial> multiply_by_flat(const FlagMonomial& partial, Mask f) {
    FlagMonomial out = partial;
    for (std::size_t i = 0; i < out.flats.size(); ++i) {
        if (out.flats[i] == f) {
            out.exponents[i] += 1;
            return out;
        }
    }
    std::size_t pos = 0;
    for (; pos < out.flats.size(); ++pos) {
        Mask g = out.flats[pos];
        if ((f & ~g) == 0) break;          // f strictly inside g: insert here
        if ((g & ~f) != 0) return std::nullopt;  // incomparable
    }
    out.flats.insert(out.flats.begin() + pos, f);
    out.exponents.insert(out.exponents.begin() + pos, 1);
    return out;
}

}  // namespace

RelationCheck relation_annihilation_check(const Matroid& m, const FlagMonomial& raw_partial,
                                          int i, int j) {
    int d = m.rank() - 1;
    if (raw_partial.total_degree() != d - 1)
        throw std::invalid_argument("relation check needs a monomial of degree rank(M) - 2");
    FlagMonomial partial = normalized(raw_partial);
    if (!is_strict_chain(partial.flats))
        return {true, 0, 0};  // the partial monomial already lies in the non-face ideal
    auto sum_over = [&](int elt) {
        long long total = 0;
        for (Mask f : m.proper_nonempty_flats()) {
            if (!contains(f, elt)) continue;
            auto prod = multiply_by_flat(partial, f);
            if (!prod) continue;  // non-face: contributes 0
            total += eur_degree(m, *prod).value;
        }
        return total;
    };
    RelationCheck out;
    out.sum_i = sum_over(i);
    out.sum_j = sum_over(j);
    out.equal = out.sum_i == out.sum_j;
    return out;
}

long long coarse_rank3_degree(const Matroid& m, Mask ray_a, Mask ray_b) {
    if (m.rank() != 3) throw std::invalid_argument("coarse rank-3 degrees need a rank-3 matroid");
    if (!m.is_simple()) throw std::invalid_argument("coarse rank-3 degrees need a simple matroid");
    if (!feichtner_sturmfels_criterion(m))
        throw std::invalid_argument(
            "coarse rank-3 degrees unavailable: matroid is a non-trivial parallel connection");
    auto classify = [&](Mask f) {
        if (f == 0 || !m.is_flat(f))
            throw std::invalid_argument("ray must be a flat of the matroid");
        int r = m.rank(f);
        if (r == 1) return 1;
        if (r == 2 && popcount(f) > 2) return 2;  // connected rank-2 flat
        throw std::invalid_argument("flat does not give a ray of the coarse structure");
    };
    int ra = classify(ray_a), rb = classify(ray_b);
    if (ra > rb) { std::swap(ray_a, ray_b); std::swap(ra, rb); }
    if (ra == 1 && rb == 1) {
        if (ray_a == ray_b) {
            int k = first_element(ray_a);
            long long big = 0;
            for (Mask f : m.flats_of_rank(2))
                if (contains(f, k) && popcount(f) > 2) ++big;
            return 1 - big;
        }
        return m.closure(ray_a | ray_b) == (ray_a | ray_b) ? 1 : 0;
    }
    if (ra == 1 && rb == 2) return (ray_a & ~ray_b) == 0 ? 1 : 0;
    // both rank 2
    return ray_a == ray_b ? -1 : 0;
}

ChowPresentation chow_presentation(const Fan& fan) {
    if (!is_unimodular(fan))
        throw std::invalid_argument("Chow presentation requires a unimodular fan");
    ChowPresentation out;
    int nrays = static_cast<int>(fan.rays().size());
    out.generator_count = nrays;

    // minimal non-faces: size-2 first, then extensions of cones by one ray
    // beyond their largest index (every proper subset must be a cone)
    for (int a = 0; a < nrays; ++a)
        for (int b = a + 1; b < nrays; ++b)
            if (!fan.is_cone({a, b})) out.minimal_non_faces.push_back({a, b});
    for (int s = 3; s <= fan.dim() + 1; ++s) {
        for (const auto& cone : fan.cones_of_dim(s - 1)) {
            for (int r = cone.back() + 1; r < nrays; ++r) {
                std::vector<int> cand = cone;
                cand.push_back(r);
                if (fan.is_cone(cand)) continue;
                bool all_faces = true;
                for (std::size_t drop = 0; drop + 1 < cand.size() && all_faces; ++drop) {
                    std::vector<int> sub = cand;
                    sub.erase(sub.begin() + drop);
                    if (!fan.is_cone(sub)) all_faces = false;
                }
                if (all_faces) out.minimal_non_faces.push_back(std::move(cand));
            }
        }
    }
    std::sort(out.minimal_non_faces.begin(), out.minimal_non_faces.end());

    int n = fan.base().n();
    out.relations.assign(n - 1, IntVec(nrays, 0));
    for (int i = 1; i < n; ++i)
        for (int r = 0; r < nrays; ++r)
            out.relations[i - 1][r] = fan.rays()[r].dir.coords()[i];
    return out;
}

}  // namespace bk
