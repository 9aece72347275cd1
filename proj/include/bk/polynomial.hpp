#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bk {

// Integer-coefficient univariate polynomial, coefficients low-to-high with no
// trailing zeros.
class IntPoly {
public:
    IntPoly() = default;
    explicit IntPoly(std::vector<long long> coeffs) : c_(std::move(coeffs)) { trim(); }
    static IntPoly constant(long long v) { return IntPoly({v}); }
    static IntPoly variable() { return IntPoly({0, 1}); }

    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c_.empty(); }
    long long coeff(int k) const {
        return (k >= 0 && k < static_cast<int>(c_.size())) ? c_[k] : 0;
    }
    const std::vector<long long>& coeffs() const { return c_; }

    long long eval(long long x) const {
        long long acc = 0;
        for (int k = degree(); k >= 0; --k) acc = acc * x + c_[k];
        return acc;
    }

    friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
        std::vector<long long> c(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
        return IntPoly(std::move(c));
    }
    friend IntPoly operator-(const IntPoly& a, const IntPoly& b) {
        std::vector<long long> c(std::max(a.c_.size(), b.c_.size()), 0);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
        return IntPoly(std::move(c));
    }
    friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
        if (a.is_zero() || b.is_zero()) return IntPoly();
        std::vector<long long> c(a.c_.size() + b.c_.size() - 1, 0);
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return IntPoly(std::move(c));
    }
    friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const IntPoly& a, const IntPoly& b) { return !(a == b); }

    // Exact division; throws if the divisor does not divide exactly.
    IntPoly divide_exact(const IntPoly& d) const {
        if (d.is_zero()) throw std::invalid_argument("polynomial division by zero");
        std::vector<long long> rem = c_;
        std::vector<long long> quot(rem.size() > d.c_.size() ? rem.size() - d.c_.size() + 1 : 1, 0);
        long long lead = d.c_.back();
        for (int k = static_cast<int>(rem.size()) - 1; k >= d.degree(); --k) {
            if (rem[k] == 0) continue;
            if (rem[k] % lead != 0)
                throw std::domain_error("polynomial division is not exact");
            long long q = rem[k] / lead;
            quot[k - d.degree()] = q;
            for (int j = 0; j <= d.degree(); ++j) rem[k - d.degree() + j] -= q * d.c_[j];
        }
        for (long long r : rem)
            if (r != 0) throw std::domain_error("polynomial division is not exact");
        return IntPoly(std::move(quot));
    }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string out;
        for (int k = degree(); k >= 0; --k) {
            long long v = c_[k];
            if (v == 0) continue;
            if (!out.empty()) out += v > 0 ? " + " : " - ";
            else if (v < 0) out += "-";
            long long a = v < 0 ? -v : v;
            std::string term;
            if (k == 0 || a != 1) term += std::to_string(a);
            if (k >= 1) { term += "t"; if (k > 1) term += "^" + std::to_string(k); }
            out += term;
        }
        return out;
    }

private:
    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
    std::vector<long long> c_;
};

}  // namespace bk
