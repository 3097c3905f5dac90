#include "mpde/rational.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace mpde {

namespace {

__int128 gcd128(__int128 a, __int128 b)
{
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

} // namespace

Rational::Rational(std::int64_t n, std::int64_t d)
{
    if (d == 0) throw std::domain_error("rational with zero denominator");
    *this = reduce(n, d);
}

Rational Rational::reduce(__int128 n, __int128 d)
{
    if (d == 0) throw std::domain_error("rational division by zero");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    __int128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    constexpr __int128 lim = std::numeric_limits<std::int64_t>::max();
    if (n > lim || n < -lim || d > lim) throw std::overflow_error("rational overflow");
    Rational r;
    r.num_ = static_cast<std::int64_t>(n);
    r.den_ = static_cast<std::int64_t>(d);
    return r;
}

Rational operator+(const Rational& a, const Rational& b)
{
    return Rational::reduce(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
                            static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b)
{
    return Rational::reduce(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b)
{
    return Rational::reduce(static_cast<__int128>(a.num_) * b.den_, static_cast<__int128>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b)
{
    __int128 l = static_cast<__int128>(a.num_) * b.den_;
    __int128 r = static_cast<__int128>(b.num_) * a.den_;
    return l <=> r;
}

std::string to_string(const Rational& r)
{
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

namespace {

std::int64_t parse_int(const std::string& s, const std::string& whole)
{
    if (s.empty()) throw std::invalid_argument("empty integer in rational '" + whole + "'");
    std::size_t pos = 0;
    std::int64_t v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed rational '" + whole + "'");
    }
    if (pos != s.size()) throw std::invalid_argument("malformed rational '" + whole + "'");
    return v;
}

} // namespace

Rational parse_rational(const std::string& text)
{
    std::string t;
    for (char c : text)
        if (c != ' ') t.push_back(c);
    auto slash = t.find('/');
    if (slash != std::string::npos) {
        auto num = parse_int(t.substr(0, slash), text);
        auto den = parse_int(t.substr(slash + 1), text);
        if (den == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
        return Rational(num, den);
    }
    auto dot = t.find('.');
    if (dot == std::string::npos) return Rational(parse_int(t, text));
    std::string ip = t.substr(0, dot), fp = t.substr(dot + 1);
    if (fp.size() > 9) throw std::invalid_argument("too many decimals in '" + text + "'");
    bool neg = !ip.empty() && ip[0] == '-';
    if (neg || (!ip.empty() && ip[0] == '+')) ip = ip.substr(1);
    std::int64_t den = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
    std::int64_t whole = ip.empty() ? 0 : parse_int(ip, text);
    std::int64_t frac = fp.empty() ? 0 : parse_int(fp, text);
    if (whole < 0 || frac < 0) throw std::invalid_argument("malformed rational '" + text + "'");
    Rational r(whole * den + frac, den);
    return neg ? -r : r;
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

std::int64_t lcm64(std::int64_t a, std::int64_t b) { return std::lcm(a, b); }

std::int64_t floor_rat(const Rational& r)
{
    std::int64_t n = r.numerator(), d = r.denominator();
    std::int64_t q = n / d;
    if ((n % d != 0) && (n < 0)) --q;
    return q;
}

bool rationalize(double x, std::int64_t max_den, double tol, Rational& out)
{
    if (!std::isfinite(x)) return false;
    for (std::int64_t d = 1; d <= max_den; ++d) {
        double n = std::round(x * static_cast<double>(d));
        if (std::abs(n / static_cast<double>(d) - x) <= tol) {
            out = Rational(static_cast<std::int64_t>(n), d);
            return true;
        }
    }
    return false;
}

} // namespace mpde
