#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bk/fan.hpp"
#include "bk/matroid.hpp"

namespace bk {

// Integer-linear map Z^src -> Z^tgt that maps every source block's all-ones
// vector into the span of the target blocks' all-ones vectors, so it descends
// to the corresponding quotients. Plain maps have a single block on each
// side; the parallel-connection splitting map has two target blocks.
struct LatticeMap {
    std::vector<std::string> src_labels, tgt_labels;
    IntMat matrix;  // |tgt| x |src|
    std::vector<std::pair<int, int>> src_blocks;  // (offset, size)
    std::vector<std::pair<int, int>> tgt_blocks;

    int src_dim() const { return static_cast<int>(src_labels.size()); }
    int tgt_dim() const { return static_cast<int>(tgt_labels.size()); }
    bool single_block() const { return src_blocks.size() == 1 && tgt_blocks.size() == 1; }

    // True iff the map descends to the block quotients (each source block's
    // ones-vector maps to a vector constant on every target block).
    bool descends() const;
    // For single-block maps: the c with A*1 = c*1, when defined.
    std::optional<long long> ones_multiplier() const;

    IntVec apply_lift(const IntVec& x) const { return mat_apply(matrix, x); }
    QVec apply(const QVec& v) const;  // single-block target only

    // Action on quotient coordinates (images of e_1..e_{n-1}); single-block.
    IntMat quotient_matrix() const;

    static LatticeMap from_permutation(const std::vector<std::string>& src,
                                       const std::vector<std::string>& tgt,
                                       const std::vector<int>& perm);
};

// Map induced by a matroid isomorphism; rank preservation is verified on all
// subsets (exhaustively for |E| <= 16, via the flats lattice otherwise).
LatticeMap from_matroid_iso(const std::vector<int>& f, const Matroid& m1, const Matroid& m2);

struct CremonaCriterion {
    bool holds = false;
    std::vector<std::pair<std::pair<int, int>, Mask>> blocks;  // ((b_i, b_j), F_ij minus {b_i,b_j})
    std::string witness;  // failure description when !holds
};

CremonaCriterion cremona_criterion(const Matroid& m, Mask basis);

// The raw Cremona matrix for any basis; no partition-criterion checks.
LatticeMap cremona_map_unchecked(const Matroid& m, Mask basis);
// Checked variant: criterion must hold; the result descends with multiplier
// rank(M)-1 and is an involution on the quotient.
LatticeMap cremona_map(const Matroid& m, Mask basis);

struct SupportReport {
    bool ok = true;
    std::string stage;  // "descends" | "membership" | ""
    int cones_checked = 0;
    long long points_checked = 0;
    std::optional<IntVec> failing_point;  // source lift whose image leaves the support
};

// Maps generators and deterministic interior points of every maximal fine
// cone of the source and tests membership of the images (per target block).
SupportReport preserves_support(const LatticeMap& map, const Matroid& source,
                                const std::vector<Matroid>& targets, int samples);

// Splitting map of a recorded parallel connection into the product space, and
// its inverse.
LatticeMap parallel_split_map(const Matroid& m);
LatticeMap parallel_split_inverse(const Matroid& m);

struct IsoReport {
    bool ok = true;
    std::string reason;
    std::vector<int> ray_map;  // fan1 ray id -> fan2 ray id (when ok)
};

// A fan isomorphism must be unimodular on the quotient, send every cone to a
// cone bijectively, and its inverse must do the same.
IsoReport verify_fan_isomorphism(const LatticeMap& map, const Fan& fan1, const Fan& fan2);

std::vector<int> ray_permutation(const LatticeMap& map, const Fan& fan);

// Order of the permutation group generated by the given ray permutations.
long long group_closure_order(const std::vector<std::vector<int>>& generators);

}  // namespace bk
