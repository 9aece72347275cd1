#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bk/matroid.hpp"
#include "bk/quotient.hpp"

namespace bk {

struct CoarseUnsupportedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Ray {
    QVec dir;                          // primitive canonical representative
    std::optional<Mask> flat;          // flat of the base matroid, when known
    int flat_rank = -1;
    int factor = -1;                   // product fans: 0/1; -1 otherwise
    std::optional<Mask> factor_flat;   // flat inside the factor matroid
};

// Polyhedral fan structure on the Bergman fan of `base`. Cones are stored as
// sorted ray-index sets grouped by dimension; faces are always present.
class Fan {
public:
    Fan(Matroid base, std::string structure) : base_(std::move(base)), structure_(std::move(structure)) {}

    const Matroid& base() const { return base_; }
    const std::string& structure() const { return structure_; }
    const std::vector<Ray>& rays() const { return rays_; }
    int dim() const { return static_cast<int>(cones_.size()); }
    int ambient_dim() const { return base_.n() - 1; }

    const std::vector<std::vector<int>>& cones_of_dim(int k) const;
    const std::vector<std::vector<int>>& maximal_cones() const { return cones_of_dim(dim()); }
    bool is_cone(const std::vector<int>& sorted_ray_ids) const;
    int ray_index(const QVec& primitive) const;  // -1 when absent

    const std::optional<std::pair<Matroid, Matroid>>& factors() const { return factors_; }

    // Integer matrix whose rows are the quotient coordinates of a cone's rays.
    IntMat cone_matrix(const std::vector<int>& cone) const;
    // Interior point of the cone with the given positive weights (lift in Z^E).
    IntVec cone_point(const std::vector<int>& cone, const IntVec& weights) const;

    // construction helpers (used by the builders)
    int add_ray(Ray r);
    void add_cone(std::vector<int> ray_ids);
    void set_factors(Matroid a, Matroid b) { factors_ = std::make_pair(std::move(a), std::move(b)); }
    void set_structure(std::string s) { structure_ = std::move(s); }

private:
    Matroid base_;
    std::string structure_;
    std::optional<std::pair<Matroid, Matroid>> factors_;
    std::vector<Ray> rays_;
    std::map<QVec, int> ray_lookup_;
    std::vector<std::vector<std::vector<int>>> cones_;  // cones_[k-1] = dim-k cones
    std::set<std::vector<int>> cone_set_;
    static const std::vector<std::vector<int>> kNoCones;
};

// Membership of a lifted integer point in the Bergman fan support: for every
// circuit the minimum over the circuit is attained at least twice.
bool bergman_membership(const Matroid& m, const IntVec& lifted_point);

Fan fine_fan(const Matroid& m);
Fan nested_fan(const Matroid& m);

// Three-way coarse policy: (a) Feichtner-Sturmfels criterion -> nested fan
// tagged coarse; (b) non-trivial parallel connection -> product fan pulled
// back through the splitting map; (c) CoarseUnsupportedError.
Fan coarse_fan(const Matroid& m);
bool feichtner_sturmfels_criterion(const Matroid& m);

struct LocalMatroid {
    std::vector<Mask> flag;  // proper nonempty flats, strictly increasing
    Matroid local;           // direct sum of the flag minors
};

LocalMatroid star(const Matroid& m, const std::vector<Mask>& flag);
int lineality_dim(const Matroid& m);

struct RayRankProfile {
    // one histogram (flat rank -> ray count) per factor; a single entry for
    // non-product fans
    std::vector<std::map<int, int>> per_factor;
};
RayRankProfile ray_rank_profile(const Fan& fan);

// Elementary divisors of every maximal cone's generator matrix are all 1.
bool is_unimodular(const Fan& fan);

}  // namespace bk
