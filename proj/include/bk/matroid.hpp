#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bk/ground_set.hpp"
#include "bk/util.hpp"

namespace bk {

struct AxiomViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Finite group given by its multiplication table. Element 0 is the identity.
struct GroupTable {
    std::vector<std::string> names;
    std::vector<std::vector<int>> mul;

    int order() const { return static_cast<int>(names.size()); }
    int times(int a, int b) const { return mul[a][b]; }
    int inverse(int a) const;
    void verify() const;  // throws AxiomViolation

    static GroupTable cyclic(int m);
    static GroupTable trivial() { return cyclic(1); }
};

class Matroid;

struct Provenance {
    enum class Kind {
        Uniform, Graphic, Linear, Projective, Dowling,
        Bases, Circuits, ParallelConnection, Derived
    };
    Kind kind = Kind::Derived;

    int uniform_r = 0, uniform_n = 0;
    int graphic_vertices = 0;
    std::vector<std::pair<int, int>> graphic_edges;  // 1-based vertex pairs
    int prime = 0;
    std::vector<std::vector<int>> columns;
    int pg_dim = 0;
    int dowling_d = 0;
    GroupTable group;
    std::vector<Mask> bases;
    std::vector<Mask> circuits;
    std::shared_ptr<const Matroid> pc_left, pc_right;
    std::string pc_left_point, pc_right_point;  // labels in the factors
    std::string pc_glued_label;                 // label of p in the connection
    std::string derived_from;                   // human-readable description

    static const char* kind_name(Kind k);
};

struct FlatsLattice {
    std::vector<std::vector<Mask>> by_rank;           // by_rank[k] sorted ascending
    std::map<Mask, std::vector<Mask>> upper_covers;   // F -> flats covering F
    int rank() const { return static_cast<int>(by_rank.size()) - 1; }
    std::vector<Mask> all_flats() const;
};

struct SimplifyResult;

// Matroid with a memoized rank oracle. Values are immutable and cheap to
// copy; the memo cache is synchronized so instances can be shared across
// threads.
class Matroid {
public:
    using RankFn = std::function<int(Mask)>;

    Matroid(GroundSet ground, RankFn rank_fn, Provenance prov);

    // -- constructors ------------------------------------------------------
    static Matroid uniform(int r, int n);
    // Self-loops are always rejected; duplicate edges only when the caller
    // requests a simple graph.
    static Matroid graphic(int vertex_count, std::vector<std::pair<int, int>> edges,
                           std::vector<std::string> labels = {}, bool require_simple = false);
    static Matroid linear(int prime, std::vector<std::vector<int>> columns,
                          std::vector<std::string> labels = {});
    static Matroid projective_geometry(int d, int p);
    static Matroid dowling(int d, GroupTable group);
    static Matroid from_bases(std::vector<std::string> labels, std::vector<Mask> bases);
    static Matroid from_circuits(std::vector<std::string> labels, std::vector<Mask> circuits);
    static Matroid parallel_connection(const Matroid& m1, const Matroid& m2,
                                       const std::string& p1, const std::string& p2);
    static Matroid direct_sum(const Matroid& m1, const Matroid& m2);

    // -- basic queries -----------------------------------------------------
    const GroundSet& ground() const;
    const Provenance& provenance() const;
    int n() const { return ground().size(); }
    Mask everything() const { return full_mask(n()); }
    int rank(Mask s) const;
    int rank() const { return rank(everything()); }
    bool is_independent(Mask s) const { return rank(s) == popcount(s); }

    std::vector<int> loops() const;
    std::vector<int> coloops() const;
    bool is_loop_free() const { return loops().empty(); }
    bool is_simple() const;

    // -- closure and flats -------------------------------------------------
    Mask closure(Mask s) const;
    bool is_flat(Mask s) const { return closure(s) == s; }
    std::vector<Mask> flats_of_rank(int k) const;
    const FlatsLattice& flats_lattice() const;
    std::vector<Mask> proper_nonempty_flats() const;

    // -- circuits and connectivity ------------------------------------------
    const std::vector<Mask>& circuits() const;
    std::vector<Mask> connected_components() const;
    bool is_connected() const;
    bool is_totally_disconnected() const;
    bool restriction_is_connected(Mask s) const;
    bool is_nontrivial_parallel_connection_along(int i) const;
    std::optional<int> nontrivial_parallel_connection_point() const;

    // -- minors --------------------------------------------------------------
    Matroid restrict_to(Mask s) const;
    Matroid contract(Mask s) const;
    Matroid remove(Mask s) const;  // deletion
    Matroid truncate(int k) const;
    SimplifyResult simplify() const;

    // -- comparisons ---------------------------------------------------------
    bool same_rank_oracle(const Matroid& other) const;  // same labels, all subsets
    // Brute force over label bijections; ground sets of size <= 12.
    std::vector<std::vector<int>> automorphisms() const;
    std::optional<std::vector<int>> isomorphism_to(const Matroid& other) const;
    bool rank_preserving(const Matroid& other, const std::vector<int>& f) const;

private:
    struct Impl;
    std::shared_ptr<Impl> impl_;

    void spot_check_axioms() const;
};

struct SimplifyResult {
    Matroid matroid;
    std::map<std::string, std::string> label_quotient;  // original -> representative
};

}  // namespace bk
