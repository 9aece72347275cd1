#include "bk/maps.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace bk {

bool LatticeMap::descends() const {
    for (auto [so, sn] : src_blocks) {
        IntVec ones(src_dim(), 0);
        for (int i = so; i < so + sn; ++i) ones[i] = 1;
        IntVec img = apply_lift(ones);
        for (auto [to, tn] : tgt_blocks) {
            for (int i = to + 1; i < to + tn; ++i)
                if (img[i] != img[to]) return false;
        }
    }
    return true;
}

std::optional<long long> LatticeMap::ones_multiplier() const {
    if (!single_block()) return std::nullopt;
    IntVec ones(src_dim(), 1);
    IntVec img = apply_lift(ones);
    for (int i = 1; i < tgt_dim(); ++i)
        if (img[i] != img[0]) return std::nullopt;
    return img[0];
}

QVec LatticeMap::apply(const QVec& v) const {
    if (tgt_blocks.size() != 1)
        throw std::logic_error("quotient application needs a single target block");
    return QVec::from_lift(apply_lift(v.coords()));
}

IntMat LatticeMap::quotient_matrix() const {
    if (!single_block()) throw std::logic_error("quotient matrix needs single blocks");
    int n1 = src_dim(), n2 = tgt_dim();
    IntMat q(n2 - 1, IntVec(n1 - 1, 0));
    for (int j = 1; j < n1; ++j) {
        IntVec e(n1, 0);
        e[j] = 1;
        QVec img = QVec::from_lift(apply_lift(e));
        for (int i = 1; i < n2; ++i) q[i - 1][j - 1] = img.coords()[i];
    }
    return q;
}

LatticeMap LatticeMap::from_permutation(const std::vector<std::string>& src,
                                        const std::vector<std::string>& tgt,
                                        const std::vector<int>& perm) {
    LatticeMap m;
    m.src_labels = src;
    m.tgt_labels = tgt;
    int n = static_cast<int>(src.size());
    m.matrix.assign(tgt.size(), IntVec(n, 0));
    for (int j = 0; j < n; ++j) m.matrix[perm[j]][j] = 1;
    m.src_blocks = {{0, n}};
    m.tgt_blocks = {{0, static_cast<int>(tgt.size())}};
    return m;
}

LatticeMap from_matroid_iso(const std::vector<int>& f, const Matroid& m1, const Matroid& m2) {
    if (static_cast<int>(f.size()) != m1.n() || m1.n() != m2.n())
        throw std::invalid_argument("matroid isomorphism must be a bijection of equal ground sets");
    std::vector<bool> hit(f.size(), false);
    for (int v : f) {
        if (v < 0 || v >= m2.n() || hit[v])
            throw std::invalid_argument("matroid isomorphism is not a bijection");
        hit[v] = true;
    }
    if (m1.n() <= 16) {
        for (Mask s = 0; s <= m1.everything(); ++s) {
            Mask img = 0;
            for (int i : elements_of(s)) img |= bit(f[i]);
            if (m1.rank(s) != m2.rank(img)) {
                std::ostringstream os;
                os << "bijection does not preserve rank on subset {";
                bool first = true;
                for (int i : elements_of(s)) {
                    if (!first) os << ",";
                    os << m1.ground().label(i);
                    first = false;
                }
                os << "}";
                throw std::invalid_argument(os.str());
            }
        }
    } else {
        // flats-lattice comparison for larger ground sets
        const FlatsLattice& l1 = m1.flats_lattice();
        for (int k = 0; k <= l1.rank(); ++k) {
            for (Mask fl : l1.by_rank[k]) {
                Mask img = 0;
                for (int i : elements_of(fl)) img |= bit(f[i]);
                if (!m2.is_flat(img) || m2.rank(img) != k)
                    throw std::invalid_argument("bijection does not transport the flats lattice");
            }
        }
    }
    return LatticeMap::from_permutation(m1.ground().labels(), m2.ground().labels(), f);
}

CremonaCriterion cremona_criterion(const Matroid& m, Mask basis) {
    if (!m.is_simple())
        throw std::invalid_argument("Cremona criterion requires a simple matroid");
    if (popcount(basis) != m.rank() || m.rank(basis) != m.rank())
        throw std::invalid_argument("Cremona criterion: the given set is not a basis");
    CremonaCriterion out;
    std::vector<int> b = elements_of(basis);
    Mask rest = m.everything() & ~basis;
    Mask covered = 0;
    out.holds = true;
    for (std::size_t i = 0; i < b.size(); ++i)
        for (std::size_t j = i + 1; j < b.size(); ++j) {
            Mask flat = m.closure(bit(b[i]) | bit(b[j]));
            Mask block = flat & ~bit(b[i]) & ~bit(b[j]);
            if ((block & basis) != 0) {
                out.holds = false;
                out.witness = "rank-2 flat of a basis pair contains a third basis element";
            }
            if ((block & covered) != 0 && out.witness.empty()) {
                out.holds = false;
                out.witness = "blocks overlap: element " +
                              m.ground().label(first_element(block & covered)) +
                              " lies in two rank-2 basis flats";
            }
            covered |= block;
            out.blocks.push_back({{b[i], b[j]}, block});
        }
    if (covered != rest && out.holds) {
        out.holds = false;
        Mask missing = rest & ~covered;
        out.witness = "element " + m.ground().label(first_element(missing)) +
                      " is not covered by any rank-2 basis flat";
    }
    return out;
}

LatticeMap cremona_map_unchecked(const Matroid& m, Mask basis) {
    if (popcount(basis) != m.rank() || m.rank(basis) != m.rank())
        throw std::invalid_argument("Cremona map: the given set is not a basis");
    int n = m.n();
    LatticeMap map;
    map.src_labels = map.tgt_labels = m.ground().labels();
    map.src_blocks = map.tgt_blocks = {{0, n}};
    map.matrix.assign(n, IntVec(n, 0));
    for (int j = 0; j < n; ++j) {
        if (!contains(basis, j)) {
            map.matrix[j][j] = 1;
            continue;
        }
        Mask complement_flat = m.closure(basis & ~bit(j));
        for (int i : elements_of(complement_flat)) map.matrix[i][j] = 1;
    }
    return map;
}

LatticeMap cremona_map(const Matroid& m, Mask basis) {
    CremonaCriterion crit = cremona_criterion(m, basis);
    if (!crit.holds)
        throw std::invalid_argument("Cremona partition criterion fails: " + crit.witness);
    LatticeMap map = cremona_map_unchecked(m, basis);
    auto c = map.ones_multiplier();
    int d = m.rank() - 1;
    if (!c || *c != d)
        throw std::logic_error("Cremona map does not scale the all-ones vector by rank-1");
    // involution on the quotient: squared matrix differs from the identity by
    // constant columns
    IntMat sq = mat_mul(map.matrix, map.matrix);
    for (int j = 0; j < m.n(); ++j) {
        IntVec col(m.n());
        for (int i = 0; i < m.n(); ++i) col[i] = sq[i][j] - (i == j ? 1 : 0);
        for (int i = 1; i < m.n(); ++i)
            if (col[i] != col[0])
                throw std::logic_error("Cremona map is not an involution on the quotient");
    }
    return map;
}

SupportReport preserves_support(const LatticeMap& map, const Matroid& source,
                                const std::vector<Matroid>& targets, int samples) {
    SupportReport rep;
    if (targets.size() != map.tgt_blocks.size())
        throw std::invalid_argument("one target matroid per target block expected");
    if (!map.descends()) {
        rep.ok = false;
        rep.stage = "descends";
        return rep;
    }
    if (map.single_block()) {
        auto c = map.ones_multiplier();
        if (!c || *c == 0) {
            rep.ok = false;
            rep.stage = "descends";
            return rep;
        }
    }
    Fan fine = fine_fan(source);
    auto check_point = [&](const IntVec& p) {
        ++rep.points_checked;
        IntVec img = map.apply_lift(p);
        for (std::size_t bidx = 0; bidx < map.tgt_blocks.size(); ++bidx) {
            auto [off, len] = map.tgt_blocks[bidx];
            IntVec slice(img.begin() + off, img.begin() + off + len);
            if (!bergman_membership(targets[bidx], slice)) {
                if (rep.ok) {
                    rep.ok = false;
                    rep.stage = "membership";
                    rep.failing_point = p;
                }
                return false;
            }
        }
        return true;
    };
    for (const auto& cone : fine.maximal_cones()) {
        ++rep.cones_checked;
        int g = static_cast<int>(cone.size());
        // systematic small-weight grid, then pseudo-random weights
        IntVec weights(g, 1);
        std::function<bool(int)> grid = [&](int pos) {
            if (pos == g) return check_point(fine.cone_point(cone, weights));
            for (int w = 1; w <= 3; ++w) {
                weights[pos] = w;
                if (!grid(pos + 1)) return false;
            }
            weights[pos] = 1;
            return true;
        };
        if (!grid(0)) return rep;
        SplitMix64 rng(0xc0de5eedull + rep.cones_checked);
        for (int s = 0; s < samples; ++s) {
            IntVec w(g);
            for (int i = 0; i < g; ++i) w[i] = rng.range(1, 23);
            if (!check_point(fine.cone_point(cone, w))) return rep;
        }
    }
    return rep;
}

namespace {

const Provenance& pc_provenance(const Matroid& m) {
    const Provenance& p = m.provenance();
    if (p.kind != Provenance::Kind::ParallelConnection || !p.pc_left || !p.pc_right)
        throw std::invalid_argument(
            "matroid lacks parallel-connection provenance (build it with parallel_connection)");
    return p;
}

}  // namespace

LatticeMap parallel_split_map(const Matroid& m) {
    const Provenance& p = pc_provenance(m);
    const Matroid& m1 = *p.pc_left;
    const Matroid& m2 = *p.pc_right;
    int n1 = m1.n(), n2 = m2.n();
    int i1 = m1.ground().index(p.pc_left_point);
    int i2 = m2.ground().index(p.pc_right_point);
    int glued = m.ground().index(p.pc_glued_label);

    LatticeMap map;
    map.src_labels = m.ground().labels();
    map.tgt_labels = m1.ground().labels();
    for (const auto& l : m2.ground().labels()) map.tgt_labels.push_back(l + "@2");
    map.src_blocks = {{0, m.n()}};
    map.tgt_blocks = {{0, n1}, {n1, n2}};
    map.matrix.assign(n1 + n2, IntVec(m.n(), 0));
    // source ground: E1 in order, then E2 minus p2 in order
    for (int j = 0; j < m.n(); ++j) {
        if (j == glued) {
            map.matrix[i1][j] = 1;
            map.matrix[n1 + i2][j] = 1;
        } else if (j < n1) {
            map.matrix[j][j] = 1;
        } else {
            int pos = j - n1;
            int orig = pos < i2 ? pos : pos + 1;
            map.matrix[n1 + orig][j] = 1;
        }
    }
    return map;
}

LatticeMap parallel_split_inverse(const Matroid& m) {
    const Provenance& p = pc_provenance(m);
    const Matroid& m1 = *p.pc_left;
    const Matroid& m2 = *p.pc_right;
    int n1 = m1.n(), n2 = m2.n();
    int i1 = m1.ground().index(p.pc_left_point);
    int i2 = m2.ground().index(p.pc_right_point);
    int glued = m.ground().index(p.pc_glued_label);

    LatticeMap map;
    map.src_labels = m1.ground().labels();
    for (const auto& l : m2.ground().labels()) map.src_labels.push_back(l + "@2");
    map.tgt_labels = m.ground().labels();
    map.src_blocks = {{0, n1}, {n1, n2}};
    map.tgt_blocks = {{0, m.n()}};
    map.matrix.assign(m.n(), IntVec(n1 + n2, 0));
    // w_i -> v_i away from the base point; w_{p_{E_i}} -> -v_{E_i - p}
    for (int j = 0; j < n1; ++j) {
        if (j == i1) {
            for (int i = 0; i < n1; ++i)
                if (i != i1) map.matrix[i][j] = -1;  // E1 indices coincide in m
        } else {
            map.matrix[j][j] = 1;
        }
    }
    for (int j = 0; j < n2; ++j) {
        if (j == i2) {
            for (int i = 0; i < n2; ++i) {
                if (i == i2) continue;
                int pos = i < i2 ? i : i - 1;
                map.matrix[n1 + pos][n1 + j] = -1;
            }
        } else {
            int pos = j < i2 ? j : j - 1;
            map.matrix[n1 + pos][n1 + j] = 1;
        }
    }
    (void)glued;
    return map;
}

IsoReport verify_fan_isomorphism(const LatticeMap& map, const Fan& fan1, const Fan& fan2) {
    IsoReport rep;
    if (!map.single_block()) {
        rep.ok = false;
        rep.reason = "fan isomorphism verification needs single-block maps";
        return rep;
    }
    if (!map.descends() || !map.ones_multiplier() || *map.ones_multiplier() == 0) {
        rep.ok = false;
        rep.reason = "map does not descend to the quotient";
        return rep;
    }
    IntMat q = map.quotient_matrix();
    if (q.size() != q[0].size()) {
        rep.ok = false;
        rep.reason = "quotient matrix is not square";
        return rep;
    }
    long long dq = det(q);
    if (dq != 1 && dq != -1) {
        rep.ok = false;
        rep.reason = "quotient matrix is not unimodular (det " + std::to_string(dq) + ")";
        return rep;
    }
    // rays forward
    int r1 = static_cast<int>(fan1.rays().size());
    int r2 = static_cast<int>(fan2.rays().size());
    if (r1 != r2) {
        rep.ok = false;
        rep.reason = "ray counts differ";
        return rep;
    }
    rep.ray_map.assign(r1, -1);
    std::vector<bool> hit(r2, false);
    for (int i = 0; i < r1; ++i) {
        QVec img = map.apply(fan1.rays()[i].dir).primitive();
        int j = fan2.ray_index(img);
        if (j < 0 || hit[j]) {
            rep.ok = false;
            rep.reason = "image of ray " + std::to_string(i) + " is not a (fresh) ray of the target";
            return rep;
        }
        rep.ray_map[i] = j;
        hit[j] = true;
    }
    // cones forward
    for (int k = 1; k <= fan1.dim(); ++k) {
        for (const auto& cone : fan1.cones_of_dim(k)) {
            std::vector<int> img;
            for (int id : cone) img.push_back(rep.ray_map[id]);
            std::sort(img.begin(), img.end());
            if (!fan2.is_cone(img)) {
                rep.ok = false;
                rep.reason = "a cone of the source maps to a non-cone of the target";
                return rep;
            }
        }
    }
    if (fan1.dim() != fan2.dim()) {
        rep.ok = false;
        rep.reason = "fans have different dimensions";
        return rep;
    }
    // inverse direction (required by the definition of a fan isomorphism)
    auto qinv = unimodular_inverse(q);
    if (!qinv) {
        rep.ok = false;
        rep.reason = "quotient matrix has no integral inverse";
        return rep;
    }
    std::vector<int> inverse_map(r2, -1);
    for (int j = 0; j < r2; ++j) inverse_map[rep.ray_map[j]] = j;
    for (int k = 1; k <= fan2.dim(); ++k) {
        for (const auto& cone : fan2.cones_of_dim(k)) {
            std::vector<int> img;
            for (int id : cone) {
                // verify with the actual inverse matrix, not just the lookup
                IntVec qc = fan2.rays()[id].dir.quotient_coords();
                IntVec pre = mat_apply(*qinv, qc);
                IntVec lift(fan1.base().n(), 0);
                for (std::size_t t = 0; t < pre.size(); ++t) lift[t + 1] = pre[t];
                int back = fan1.ray_index(QVec::from_lift(lift).primitive());
                if (back < 0 || inverse_map[id] != back) {
                    rep.ok = false;
                    rep.reason = "inverse map does not restore rays";
                    return rep;
                }
                img.push_back(back);
            }
            std::sort(img.begin(), img.end());
            if (!fan1.is_cone(img)) {
                rep.ok = false;
                rep.reason = "a cone of the target pulls back to a non-cone of the source";
                return rep;
            }
        }
    }
    return rep;
}

std::vector<int> ray_permutation(const LatticeMap& map, const Fan& fan) {
    IsoReport rep = verify_fan_isomorphism(map, fan, fan);
    if (!rep.ok)
        throw std::invalid_argument("map is not an automorphism of the fan: " + rep.reason);
    return rep.ray_map;
}

long long group_closure_order(const std::vector<std::vector<int>>& generators) {
    if (generators.empty()) return 1;
    std::size_t n = generators[0].size();
    std::vector<int> id(n);
    for (std::size_t i = 0; i < n; ++i) id[i] = static_cast<int>(i);
    std::set<std::vector<int>> group{id};
    std::vector<std::vector<int>> frontier{id};
    while (!frontier.empty()) {
        std::vector<std::vector<int>> next;
        for (const auto& g : frontier) {
            for (const auto& gen : generators) {
                if (gen.size() != n) throw std::invalid_argument("generator size mismatch");
                std::vector<int> prod(n);
                for (std::size_t i = 0; i < n; ++i) prod[i] = gen[g[i]];
                if (group.insert(prod).second) next.push_back(std::move(prod));
            }
        }
        frontier = std::move(next);
    }
    return static_cast<long long>(group.size());
}

}  // namespace bk
