#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <string>

namespace mpde {

/// Exact rational p/q with q > 0 in lowest terms. Intermediate products are
/// formed in 128-bit integers; overflow of the reduced result throws.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t n) : num_(n), den_(1) {} // NOLINT: implicit by design
    Rational(std::int64_t n, std::int64_t d);

    std::int64_t numerator() const { return num_; }
    std::int64_t denominator() const { return den_; }

    Rational operator-() const { Rational r; r.num_ = -num_; r.den_ = den_; return r; }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
    static Rational reduce(__int128 n, __int128 d);
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;

inline double to_double(const Rational& r)
{
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

/// Formats as "p" or "p/q".
std::string to_string(const Rational& r);

/// Parses "p", "-p/q" or a decimal with at most 9 fractional digits ("0.25").
/// Throws std::invalid_argument on malformed input.
Rational parse_rational(const std::string& text);

/// Least common multiple and greatest common divisor of nonnegative integers.
std::int64_t lcm64(std::int64_t a, std::int64_t b);
std::int64_t gcd64(std::int64_t a, std::int64_t b);

/// Largest integer not exceeding r.
std::int64_t floor_rat(const Rational& r);

/// Best rational approximation with denominator at most max_den, or nothing
/// when no such rational lies within tol of x.
bool rationalize(double x, std::int64_t max_den, double tol, Rational& out);

} // namespace mpde
