#include "bk/fan.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace bk {

const std::vector<std::vector<int>> Fan::kNoCones;

const std::vector<std::vector<int>>& Fan::cones_of_dim(int k) const {
    if (k < 1 || k > dim()) return kNoCones;
    return cones_[k - 1];
}

bool Fan::is_cone(const std::vector<int>& sorted_ray_ids) const {
    if (sorted_ray_ids.empty()) return true;
    return cone_set_.count(sorted_ray_ids) > 0;
}

int Fan::ray_index(const QVec& primitive) const {
    auto it = ray_lookup_.find(primitive);
    return it == ray_lookup_.end() ? -1 : it->second;
}

int Fan::add_ray(Ray r) {
    int id = static_cast<int>(rays_.size());
    ray_lookup_.emplace(r.dir, id);
    rays_.push_back(std::move(r));
    return id;
}

void Fan::add_cone(std::vector<int> ray_ids) {
    std::sort(ray_ids.begin(), ray_ids.end());
    if (ray_ids.empty() || cone_set_.count(ray_ids)) return;
    int k = static_cast<int>(ray_ids.size());
    if (k > static_cast<int>(cones_.size())) cones_.resize(k);
    cones_[k - 1].push_back(ray_ids);
    cone_set_.insert(std::move(ray_ids));
}

IntMat Fan::cone_matrix(const std::vector<int>& cone) const {
    IntMat m;
    for (int id : cone) m.push_back(rays_[id].dir.quotient_coords());
    return m;
}

IntVec Fan::cone_point(const std::vector<int>& cone, const IntVec& weights) const {
    if (weights.size() != cone.size())
        throw std::invalid_argument("cone_point weight count mismatch");
    IntVec p(base_.n(), 0);
    for (std::size_t i = 0; i < cone.size(); ++i) {
        const IntVec& c = rays_[cone[i]].dir.coords();
        for (int j = 0; j < base_.n(); ++j) p[j] += weights[i] * c[j];
    }
    return p;
}

bool bergman_membership(const Matroid& m, const IntVec& lifted_point) {
    if (static_cast<int>(lifted_point.size()) != m.n())
        throw std::invalid_argument("membership point dimension mismatch");
    if (!m.is_loop_free())
        throw std::invalid_argument("Bergman membership requires a loop-free matroid");
    for (Mask c : m.circuits()) {
        long long best = 0;
        int hits = 0;
        bool first = true;
        for (int i : elements_of(c)) {
            long long v = lifted_point[i];
            if (first || v < best) { best = v; hits = 1; first = false; }
            else if (v == best) ++hits;
        }
        if (hits < 2) return false;
    }
    return true;
}

namespace {

void require_loop_free(const Matroid& m, const char* what) {
    if (!m.is_loop_free())
        throw std::invalid_argument(std::string(what) + " requires a loop-free matroid");
}

// All chains of the given flats (partially ordered by inclusion), emitted as
// sorted ray-id vectors via add_cone.
void add_chain_cones(Fan& fan, const std::vector<Mask>& flats) {
    int n = static_cast<int>(flats.size());
    std::vector<std::vector<int>> above(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && (flats[i] & ~flats[j]) == 0) above[i].push_back(j);
    std::vector<int> chain;
    std::function<void(int)> extend = [&](int last) {
        fan.add_cone(chain);
        for (int nxt : above[last]) {
            chain.push_back(nxt);
            extend(nxt);
            chain.pop_back();
        }
    };
    for (int i = 0; i < n; ++i) {
        chain.assign(1, i);
        extend(i);
    }
}

}  // namespace

Fan fine_fan(const Matroid& m) {
    require_loop_free(m, "fine_fan");
    Fan fan(m, "fine");
    std::vector<Mask> flats = m.proper_nonempty_flats();
    std::sort(flats.begin(), flats.end(), [&](Mask a, Mask b) {
        int ra = m.rank(a), rb = m.rank(b);
        return ra != rb ? ra < rb : a < b;
    });
    for (Mask f : flats) {
        Ray r;
        r.dir = QVec::indicator(f, m.n()).primitive();
        r.flat = f;
        r.flat_rank = m.rank(f);
        fan.add_ray(std::move(r));
    }
    add_chain_cones(fan, flats);
    return fan;
}

Fan nested_fan(const Matroid& m) {
    require_loop_free(m, "nested_fan");
    Fan fan(m, "nested");
    std::vector<Mask> flats;
    for (Mask f : m.proper_nonempty_flats())
        if (m.restriction_is_connected(f)) flats.push_back(f);
    std::sort(flats.begin(), flats.end(), [&](Mask a, Mask b) {
        int ra = m.rank(a), rb = m.rank(b);
        return ra != rb ? ra < rb : a < b;
    });
    for (Mask f : flats) {
        Ray r;
        r.dir = QVec::indicator(f, m.n()).primitive();
        r.flat = f;
        r.flat_rank = m.rank(f);
        fan.add_ray(std::move(r));
    }

    std::map<Mask, bool> join_connected;
    auto connected_join = [&](Mask u) {
        auto it = join_connected.find(u);
        if (it != join_connected.end()) return it->second;
        bool c = m.restriction_is_connected(m.closure(u));
        join_connected.emplace(u, c);
        return c;
    };
    int n = static_cast<int>(flats.size());
    int d = m.rank() - 1;

    // S is nested iff every antichain subset of size >= 2 has a join whose
    // restriction is disconnected. Checked incrementally for subsets that
    // contain the newly added flat.
    std::vector<int> current;
    auto extension_ok = [&](int cand) {
        std::vector<int> incomparable;
        for (int i : current) {
            Mask a = flats[i], b = flats[cand];
            if ((a & ~b) != 0 && (b & ~a) != 0) incomparable.push_back(i);
        }
        int t = static_cast<int>(incomparable.size());
        for (Mask sub = 1; sub < (Mask{1} << t); ++sub) {
            // the subset must itself be an antichain
            std::vector<int> pick;
            for (int i = 0; i < t; ++i)
                if (contains(sub, i)) pick.push_back(incomparable[i]);
            bool antichain = true;
            for (std::size_t a = 0; a < pick.size() && antichain; ++a)
                for (std::size_t b = a + 1; b < pick.size() && antichain; ++b) {
                    Mask x = flats[pick[a]], y = flats[pick[b]];
                    if ((x & ~y) == 0 || (y & ~x) == 0) antichain = false;
                }
            if (!antichain) continue;
            Mask u = flats[cand];
            for (int i : pick) u |= flats[i];
            if (connected_join(u)) return false;
        }
        return true;
    };
    std::function<void(int)> extend = [&](int start) {
        if (!current.empty()) fan.add_cone(current);
        if (static_cast<int>(current.size()) == d) return;
        for (int c = start; c < n; ++c) {
            if (!extension_ok(c)) continue;
            current.push_back(c);
            extend(c + 1);
            current.pop_back();
        }
    };
    extend(0);
    return fan;
}

bool feichtner_sturmfels_criterion(const Matroid& m) {
    std::vector<Mask> all = m.flats_lattice().all_flats();
    std::vector<Mask> connected;
    for (Mask g : all)
        if (g != 0 && m.restriction_is_connected(g)) connected.push_back(g);
    for (Mask g : connected) {
        Matroid mg = m.restrict_to(g);
        std::vector<int> gl = elements_of(g);
        for (Mask f : all) {
            if (f == g || (f & ~g) != 0) continue;  // need f proper subset of g
            Mask f_local = 0;
            for (std::size_t pos = 0; pos < gl.size(); ++pos)
                if (contains(f, gl[pos])) f_local |= bit(static_cast<int>(pos));
            if (!mg.contract(f_local).is_connected()) return false;
        }
    }
    return true;
}

namespace {

// Pull a factor-space canonical vector back through the inverse of the
// splitting map: choose the lift with coordinate p equal to 0, then embed.
QVec pull_back_factor_ray(const QVec& v, const std::vector<int>& embed, int p_pos, int n) {
    IntVec lift(n, 0);
    const IntVec& c = v.coords();
    long long at_p = c[p_pos];
    for (std::size_t i = 0; i < embed.size(); ++i) {
        if (static_cast<int>(i) == p_pos) continue;
        lift[embed[i]] = c[i] - at_p;
    }
    return QVec::from_lift(std::move(lift)).primitive();
}

}  // namespace

Fan coarse_fan(const Matroid& m) {
    require_loop_free(m, "coarse_fan");
    if (!m.is_simple())
        throw std::invalid_argument("coarse_fan requires a simple matroid");
    if (m.is_totally_disconnected()) {
        // the support is a linear space; its coarsest decomposition is the
        // single lineality cone, with no rays at all
        return Fan(m, "coarse");
    }
    if (feichtner_sturmfels_criterion(m)) {
        Fan fan = nested_fan(m);
        fan.set_structure("coarse");
        return fan;
    }
    auto p = m.nontrivial_parallel_connection_point();
    if (!p) throw CoarseUnsupportedError("coarse structure unsupported for this matroid");

    // Split E into E1 = C1 + p and E2 = (E - p - C1) + p along the components
    // of M/p, and pull the product of the factor coarse fans back.
    Matroid contracted = m.contract(bit(*p));
    std::vector<Mask> comps = contracted.connected_components();
    // component masks live in the contracted index space; re-embed
    std::vector<int> rest = elements_of(m.everything() & ~bit(*p));
    Mask c1 = 0;
    for (int pos : elements_of(comps[0])) c1 |= bit(rest[pos]);
    Mask e1 = c1 | bit(*p);
    Mask e2 = (m.everything() & ~c1);  // includes p
    Matroid m1 = m.restrict_to(e1);
    Matroid m2 = m.restrict_to(e2);
    Fan f1 = coarse_fan(m1);
    Fan f2 = coarse_fan(m2);

    Fan fan(m, "product");
    fan.set_factors(m1, m2);
    std::vector<int> embed1 = elements_of(e1);
    std::vector<int> embed2 = elements_of(e2);
    int p1_pos = static_cast<int>(std::find(embed1.begin(), embed1.end(), *p) - embed1.begin());
    int p2_pos = static_cast<int>(std::find(embed2.begin(), embed2.end(), *p) - embed2.begin());

    std::vector<int> map1, map2;  // factor ray id -> product fan ray id
    for (const Ray& r : f1.rays()) {
        Ray nr;
        nr.dir = pull_back_factor_ray(r.dir, embed1, p1_pos, m.n());
        nr.factor = 0;
        nr.factor_flat = r.flat;
        nr.flat_rank = r.flat_rank;
        map1.push_back(fan.add_ray(std::move(nr)));
    }
    for (const Ray& r : f2.rays()) {
        Ray nr;
        nr.dir = pull_back_factor_ray(r.dir, embed2, p2_pos, m.n());
        nr.factor = 1;
        nr.factor_flat = r.flat;
        nr.flat_rank = r.flat_rank;
        map2.push_back(fan.add_ray(std::move(nr)));
    }
    // cones: products of cones (including the trivial cone on either side)
    std::vector<std::vector<int>> cones1{{}}, cones2{{}};
    for (int k = 1; k <= f1.dim(); ++k)
        for (const auto& c : f1.cones_of_dim(k)) cones1.push_back(c);
    for (int k = 1; k <= f2.dim(); ++k)
        for (const auto& c : f2.cones_of_dim(k)) cones2.push_back(c);
    for (const auto& ca : cones1)
        for (const auto& cb : cones2) {
            if (ca.empty() && cb.empty()) continue;
            std::vector<int> cone;
            for (int id : ca) cone.push_back(map1[id]);
            for (int id : cb) cone.push_back(map2[id]);
            fan.add_cone(std::move(cone));
        }
    return fan;
}

LocalMatroid star(const Matroid& m, const std::vector<Mask>& flag) {
    require_loop_free(m, "star");
    std::vector<Mask> chain = flag;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        if (chain[i] == 0 || chain[i] == m.everything() || !m.is_flat(chain[i]))
            throw std::invalid_argument("star flag must consist of proper nonempty flats");
        if (i > 0 && ((chain[i - 1] & ~chain[i]) != 0 || chain[i - 1] == chain[i]))
            throw std::invalid_argument("star flag is not a strictly increasing chain");
    }
    std::vector<Mask> padded;
    padded.push_back(0);
    padded.insert(padded.end(), chain.begin(), chain.end());
    padded.push_back(m.everything());
    std::optional<Matroid> acc;
    for (std::size_t i = 1; i < padded.size(); ++i) {
        Matroid piece = m.restrict_to(padded[i]);
        // contract the previous flat inside the restriction's index space
        std::vector<int> gl = elements_of(padded[i]);
        Mask prev_local = 0;
        for (std::size_t pos = 0; pos < gl.size(); ++pos)
            if (contains(padded[i - 1], gl[pos])) prev_local |= bit(static_cast<int>(pos));
        piece = piece.contract(prev_local);
        acc = acc ? Matroid::direct_sum(*acc, piece) : piece;
    }
    return {chain, *acc};
}

int lineality_dim(const Matroid& m) {
    return static_cast<int>(m.connected_components().size()) - 1;
}

RayRankProfile ray_rank_profile(const Fan& fan) {
    RayRankProfile out;
    bool product = fan.factors().has_value();
    out.per_factor.resize(product ? 2 : 1);
    for (const Ray& r : fan.rays()) {
        int f = product ? r.factor : 0;
        out.per_factor[f][r.flat_rank] += 1;
    }
    return out;
}

bool is_unimodular(const Fan& fan) {
    for (const auto& cone : fan.maximal_cones()) {
        IntVec d = smith_diagonal(fan.cone_matrix(cone));
        if (static_cast<int>(d.size()) != static_cast<int>(cone.size())) return false;
        for (long long x : d)
            if (x != 1) return false;
    }
    return true;
}

}  // namespace bk
