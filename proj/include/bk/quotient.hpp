#pragma once

#include <numeric>
#include <stdexcept>
#include <vector>

#include "bk/linalg.hpp"
#include "bk/util.hpp"

namespace bk {

// Integer vector in Z^E viewed modulo the all-ones line. The canonical
// representative subtracts coordinate 0, so coords()[0] == 0 always and
// equality of representatives is equality in the quotient.
class QVec {
public:
    QVec() = default;
    static QVec from_lift(IntVec lift) {
        if (lift.empty()) throw std::invalid_argument("empty quotient vector");
        long long base = lift[0];
        for (auto& x : lift) x -= base;
        QVec q;
        q.c_ = std::move(lift);
        return q;
    }
    static QVec indicator(Mask f, int n) {
        IntVec v(n, 0);
        for (int i : elements_of(f)) v[i] = 1;
        return from_lift(std::move(v));
    }

    const IntVec& coords() const { return c_; }
    int dim() const { return static_cast<int>(c_.size()); }
    bool is_zero() const {
        for (long long x : c_) if (x != 0) return false;
        return true;
    }

    // Divide by the (positive) gcd of the coordinates. The sign is kept, so
    // opposite rays stay distinct.
    QVec primitive() const {
        long long g = 0;
        for (long long x : c_) g = std::gcd(g, x < 0 ? -x : x);
        if (g <= 1) return *this;
        QVec q;
        q.c_ = c_;
        for (auto& x : q.c_) x /= g;
        return q;
    }

    // Coordinates in the quotient basis (images of e_1..e_{n-1}).
    IntVec quotient_coords() const { return IntVec(c_.begin() + 1, c_.end()); }

    friend QVec operator+(const QVec& a, const QVec& b) {
        check_dims(a, b);
        IntVec v(a.c_);
        for (int i = 0; i < b.dim(); ++i) v[i] += b.c_[i];
        return from_lift(std::move(v));
    }
    friend QVec operator-(const QVec& a, const QVec& b) {
        check_dims(a, b);
        IntVec v(a.c_);
        for (int i = 0; i < b.dim(); ++i) v[i] -= b.c_[i];
        return from_lift(std::move(v));
    }
    friend QVec operator*(long long s, const QVec& a) {
        IntVec v(a.c_);
        for (auto& x : v) x *= s;
        return from_lift(std::move(v));
    }
    friend bool operator==(const QVec& a, const QVec& b) { return a.c_ == b.c_; }
    friend bool operator!=(const QVec& a, const QVec& b) { return a.c_ != b.c_; }
    friend bool operator<(const QVec& a, const QVec& b) { return a.c_ < b.c_; }

private:
    static void check_dims(const QVec& a, const QVec& b) {
        if (a.dim() != b.dim()) throw std::invalid_argument("quotient vector dimension mismatch");
    }
    IntVec c_;
};

}  // namespace bk
