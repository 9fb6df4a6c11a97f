#pragma once

/**
 * Exact rational arithmetic on 64-bit integers.
 *
 * Every value is kept in lowest terms with a positive denominator; zero is
 * always 0/1. Intermediate products run through 128-bit integers and the
 * narrowing back to 64 bits is checked, so a result that does not fit is a
 * loud std::overflow_error rather than a wrong answer. The quantities this
 * library manipulates (slopes, orbit averages, prefix sums) have numerators
 * and denominators bounded by small multiples of rank x factor count, far
 * below the checked range.
 */

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fcrystal {

class Rat {
public:
    constexpr Rat() : num_(0), den_(1) {}
    constexpr Rat(long long n) : num_(n), den_(1) {}
    Rat(long long n, long long d) {
        if (d == 0) throw std::domain_error("Rat: zero denominator");
        normalize_from(n, d);
    }

    long long num() const { return num_; }
    long long den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }

    friend Rat operator+(const Rat& a, const Rat& b) {
        __int128 n = i128(a.num_) * b.den_ + i128(b.num_) * a.den_;
        __int128 d = i128(a.den_) * b.den_;
        return from_i128(n, d);
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        __int128 n = i128(a.num_) * b.den_ - i128(b.num_) * a.den_;
        __int128 d = i128(a.den_) * b.den_;
        return from_i128(n, d);
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return from_i128(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num_ == 0) throw std::domain_error("Rat: division by zero");
        return from_i128(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }
    Rat operator-() const {
        Rat r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    Rat& operator+=(const Rat& b) { return *this = *this + b; }
    Rat& operator-=(const Rat& b) { return *this = *this - b; }
    Rat& operator*=(const Rat& b) { return *this = *this * b; }
    Rat& operator/=(const Rat& b) { return *this = *this / b; }

    Rat abs() const { return num_ < 0 ? -*this : *this; }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
    friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

    /// "a" when integral, "a/b" otherwise.
    std::string str() const {
        std::string s = std::to_string(num_);
        if (den_ != 1) s += "/" + std::to_string(den_);
        return s;
    }

    /// Parses "a" or "a/b". Throws std::invalid_argument on malformed input.
    static Rat parse(std::string_view s);

private:
    using i128 = __int128;

    static Rat from_i128(i128 n, i128 d) {
        if (d < 0) { n = -n; d = -d; }
        if (n == 0) return Rat();
        i128 g = gcd128(n < 0 ? -n : n, d);
        n /= g;
        d /= g;
        Rat r;
        r.num_ = narrow(n);
        r.den_ = narrow(d);
        return r;
    }

    static i128 gcd128(i128 a, i128 b) {
        while (b != 0) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    static long long narrow(i128 v) {
        if (v > INT64_MAX || v < INT64_MIN)
            throw std::overflow_error("Rat: value exceeds 64-bit range");
        return static_cast<long long>(v);
    }

    void normalize_from(long long n, long long d) {
        if (d < 0) { n = -n; d = -d; }
        if (n == 0) { num_ = 0; den_ = 1; return; }
        long long g = std::gcd(n < 0 ? -n : n, d);
        num_ = n / g;
        den_ = d / g;
    }

    long long num_;
    long long den_;
};

inline Rat Rat::parse(std::string_view s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string_view::npos)
            return Rat(std::stoll(std::string(s)));
        long long n = std::stoll(std::string(s.substr(0, slash)));
        long long d = std::stoll(std::string(s.substr(slash + 1)));
        return Rat(n, d);
    } catch (const std::domain_error&) {
        throw;
    } catch (const std::exception&) {
        throw std::invalid_argument("Rat: cannot parse '" + std::string(s) + "'");
    }
}

} // namespace fcrystal
