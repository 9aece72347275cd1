#pragma once

#include <optional>
#include <vector>

#include "bk/rational.hpp"

namespace bk {

using IntVec = std::vector<long long>;
using IntMat = std::vector<IntVec>;  // row major

// Incremental exact row-echelon basis over Q. Rows are reduced against the
// stored pivots; independent rows are kept. Used for wedge-space dimensions,
// span-membership tests and generic rank computations.
class RowBasis {
public:
    explicit RowBasis(std::size_t cols) : cols_(cols) {}

    // Returns true if the row was independent of the current basis.
    bool add_row(std::vector<Rat> row);
    bool add_row(const IntVec& row);

    // True iff row lies in the span of the rows added so far.
    bool in_span(const IntVec& row) const;

    int rank() const { return static_cast<int>(rows_.size()); }
    std::size_t cols() const { return cols_; }

private:
    std::vector<Rat> reduce(std::vector<Rat> row) const;

    std::size_t cols_;
    std::vector<std::vector<Rat>> rows_;  // each normalized with leading 1
    std::vector<std::size_t> pivots_;
};

int rank_of(const IntMat& m);

// Determinant of a square integer matrix (Bareiss, __int128 intermediates).
long long det(const IntMat& m);

// Diagonal of the Smith normal form (nonnegative, divisibility chain).
IntVec smith_diagonal(IntMat m);

// Inverse of a square integer matrix with det +-1; nullopt otherwise.
std::optional<IntMat> unimodular_inverse(const IntMat& m);

IntMat mat_mul(const IntMat& a, const IntMat& b);
IntVec mat_apply(const IntMat& a, const IntVec& x);
IntMat identity_matrix(int n);

}  // namespace bk
