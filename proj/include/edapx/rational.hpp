#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>

#include "edapx/errors.hpp"

namespace edapx {

// Exact rational on int64. The oracles return rationals because their inputs
// are integer vectors; this keeps reference values free of float noise.
class Rational {
  public:
    Rational() = default;
    Rational(int64_t num) : num_(num) {}  // NOLINT: implicit by design
    Rational(int64_t num, int64_t den) : num_(num), den_(den) {
        if (den_ == 0) throw InvalidInput("Rational: zero denominator");
        normalize();
    }

    int64_t num() const { return num_; }
    int64_t den() const { return den_; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    Rational& operator+=(const Rational& o) {
        // int128 intermediates; oracle sums stay small but don't rely on it
        __int128 n = static_cast<__int128>(num_) * o.den_ + static_cast<__int128>(o.num_) * den_;
        __int128 d = static_cast<__int128>(den_) * o.den_;
        assign128(n, d);
        return *this;
    }
    Rational& operator*=(const Rational& o) {
        __int128 n = static_cast<__int128>(num_) * o.num_;
        __int128 d = static_cast<__int128>(den_) * o.den_;
        assign128(n, d);
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return a < b || a == b; }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
        os << r.num_;
        if (r.den_ != 1) os << '/' << r.den_;
        return os;
    }

  private:
    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }
    void assign128(__int128 n, __int128 d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 a = n < 0 ? -n : n;
        __int128 b = d;
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            n /= a;
            d /= a;
        }
        constexpr __int128 lim = INT64_MAX;
        if (n > lim || -n > lim || d > lim)
            throw ConfigError("Rational: value exceeds 64-bit range");
        num_ = static_cast<int64_t>(n);
        den_ = static_cast<int64_t>(d);
    }

    int64_t num_ = 0;
    int64_t den_ = 1;
};

}  // namespace edapx
