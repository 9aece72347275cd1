#include "bk/linalg.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <stdexcept>

namespace bk {

std::vector<Rat> RowBasis::reduce(std::vector<Rat> row) const {
    for (std::size_t k = 0; k < rows_.size(); ++k) {
        const Rat& c = row[pivots_[k]];
        if (!c.is_zero()) {
            const auto& basis_row = rows_[k];
            Rat f = c;  // basis rows have leading coefficient 1
            for (std::size_t j = 0; j < cols_; ++j) {
                if (!basis_row[j].is_zero()) row[j] = row[j] - f * basis_row[j];
            }
        }
    }
    return row;
}

bool RowBasis::add_row(std::vector<Rat> row) {
    if (row.size() != cols_) throw std::invalid_argument("row size mismatch");
    row = reduce(std::move(row));
    std::size_t p = 0;
    while (p < cols_ && row[p].is_zero()) ++p;
    if (p == cols_) return false;
    Rat lead = row[p];
    for (auto& x : row) x = x / lead;
    rows_.push_back(std::move(row));
    pivots_.push_back(p);
    return true;
}

bool RowBasis::add_row(const IntVec& row) {
    std::vector<Rat> r(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) r[i] = Rat(row[i]);
    return add_row(std::move(r));
}

bool RowBasis::in_span(const IntVec& row) const {
    std::vector<Rat> r(row.size());
    for (std::size_t i = 0; i < row.size(); ++i) r[i] = Rat(row[i]);
    r = reduce(std::move(r));
    return std::all_of(r.begin(), r.end(), [](const Rat& x) { return x.is_zero(); });
}

int rank_of(const IntMat& m) {
    if (m.empty()) return 0;
    RowBasis b(m[0].size());
    for (const auto& row : m) b.add_row(row);
    return b.rank();
}

long long det(const IntMat& m) {
    std::size_t n = m.size();
    if (n == 0) return 1;
    std::vector<std::vector<__int128>> a(n, std::vector<__int128>(n));
    for (std::size_t i = 0; i < n; ++i) {
        if (m[i].size() != n) throw std::invalid_argument("det of non-square matrix");
        for (std::size_t j = 0; j < n; ++j) a[i][j] = m[i][j];
    }
    __int128 prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t s = k + 1;
            while (s < n && a[s][k] == 0) ++s;
            if (s == n) return 0;
            std::swap(a[k], a[s]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
            a[i][k] = 0;
        }
        prev = a[k][k];
    }
    return checked_narrow(sign * a[n - 1][n - 1], "determinant");
}

IntVec smith_diagonal(IntMat m) {
    std::size_t rows = m.size();
    std::size_t cols = rows ? m[0].size() : 0;
    IntVec diag;
    std::size_t r = 0, c = 0;
    while (r < rows && c < cols) {
        // find smallest nonzero entry in the remaining block
        std::size_t pi = rows, pj = cols;
        long long best = 0;
        for (std::size_t i = r; i < rows; ++i)
            for (std::size_t j = c; j < cols; ++j) {
                long long v = m[i][j] < 0 ? -m[i][j] : m[i][j];
                if (v != 0 && (best == 0 || v < best)) { best = v; pi = i; pj = j; }
            }
        if (best == 0) break;
        std::swap(m[r], m[pi]);
        for (std::size_t i = 0; i < rows; ++i) std::swap(m[i][c], m[i][pj]);
        bool dirty = true;
        while (dirty) {
            dirty = false;
            for (std::size_t i = r + 1; i < rows; ++i) {
                long long q = m[i][c] / m[r][c];
                if (q != 0)
                    for (std::size_t j = c; j < cols; ++j) m[i][j] -= q * m[r][j];
                if (m[i][c] != 0) { std::swap(m[r], m[i]); dirty = true; }
            }
            for (std::size_t j = c + 1; j < cols; ++j) {
                long long q = m[r][j] / m[r][c];
                if (q != 0)
                    for (std::size_t i = r; i < rows; ++i) m[i][j] -= q * m[i][c];
                if (m[r][j] != 0) {
                    for (std::size_t i = 0; i < rows; ++i) std::swap(m[i][c], m[i][j]);
                    dirty = true;
                }
            }
        }
        diag.push_back(m[r][c] < 0 ? -m[r][c] : m[r][c]);
        ++r; ++c;
    }
    // enforce divisibility chain
    for (std::size_t i = 0; i + 1 < diag.size(); ++i) {
        for (std::size_t j = i + 1; j < diag.size(); ++j) {
            long long a = diag[i], b = diag[j];
            long long g = std::gcd(a, b);
            if (g == 0) continue;
            long long l = checked_narrow(static_cast<__int128>(a) / g * b, "smith lcm");
            diag[i] = g;
            diag[j] = l;
        }
    }
    return diag;
}

std::optional<IntMat> unimodular_inverse(const IntMat& m) {
    std::size_t n = m.size();
    long long d = det(m);
    if (d != 1 && d != -1) return std::nullopt;
    // Gauss-Jordan over Q; result is integral because |det| = 1.
    std::vector<std::vector<Rat>> a(n, std::vector<Rat>(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) a[i][j] = Rat(m[i][j]);
        a[i][n + i] = Rat(1);
    }
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && a[p][k].is_zero()) ++p;
        if (p == n) return std::nullopt;
        std::swap(a[k], a[p]);
        Rat lead = a[k][k];
        for (auto& x : a[k]) x = x / lead;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k || a[i][k].is_zero()) continue;
            Rat f = a[i][k];
            for (std::size_t j = 0; j < 2 * n; ++j) a[i][j] = a[i][j] - f * a[k][j];
        }
    }
    IntMat inv(n, IntVec(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const Rat& x = a[i][n + j];
            if (x.den != 1) return std::nullopt;
            inv[i][j] = x.num;
        }
    return inv;
}

IntMat mat_mul(const IntMat& a, const IntMat& b) {
    std::size_t n = a.size(), k = b.size(), m0 = k ? b[0].size() : 0;
    IntMat out(n, IntVec(m0, 0));
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].size() != k) throw std::invalid_argument("mat_mul shape mismatch");
        for (std::size_t t = 0; t < k; ++t) {
            long long av = a[i][t];
            if (av == 0) continue;
            for (std::size_t j = 0; j < m0; ++j)
                out[i][j] = checked_narrow(static_cast<__int128>(out[i][j]) +
                                               static_cast<__int128>(av) * b[t][j],
                                           "mat_mul");
        }
    }
    return out;
}

IntVec mat_apply(const IntMat& a, const IntVec& x) {
    IntVec out(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != x.size()) throw std::invalid_argument("mat_apply shape mismatch");
        __int128 acc = 0;
        for (std::size_t j = 0; j < x.size(); ++j)
            acc += static_cast<__int128>(a[i][j]) * x[j];
        out[i] = checked_narrow(acc, "mat_apply");
    }
    return out;
}

IntMat identity_matrix(int n) {
    IntMat m(n, IntVec(n, 0));
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

}  // namespace bk
