#include "mpde/wright.hpp"

#include "mpde/errors.hpp"
#include "mpde/jet.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/sin_pi.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace mpde {

namespace {

using mp50 = boost::multiprecision::cpp_bin_float_50;
using mp100 = boost::multiprecision::cpp_bin_float_100;

constexpr std::size_t kTerms = 900;

template <class Real>
struct MpComplex {
    Real re = 0, im = 0;
};

template <class Real>
std::vector<Real> wright_coefficients(const Rational& nu)
{
    std::vector<Real> b(kTerms);
    const Real pi_r = boost::math::constants::pi<Real>();
    for (std::size_t n = 0; n < kTerms; ++n) {
        Rational x = 1 - nu * Rational(static_cast<std::int64_t>(n + 1));
        Real sign = (n % 2 == 0) ? Real(1) : Real(-1);
        if (x <= 0 && x.denominator() == 1) {
            b[n] = 0;
            continue;
        }
        Real xr = Real(x.numerator()) / Real(x.denominator());
        Real lfact = boost::math::lgamma(Real(n + 1));
        if (x > 0) {
            b[n] = sign * exp(-lfact - boost::math::lgamma(xr));
        } else {
            // 1/Γ(x) = sin(pi x) Γ(1 - x) / pi
            Real s = boost::math::sin_pi(xr);
            b[n] = sign * s * exp(boost::math::lgamma(1 - xr) - lfact) / pi_r;
        }
    }
    return b;
}

} // namespace

struct WrightKernel::Coefficients {
    std::vector<double> d;
    std::vector<mp50> m50;
    std::vector<mp100> m100;
};

namespace {

std::shared_ptr<const WrightKernel::Coefficients> cached_coefficients(const Rational& nu)
{
    static std::mutex mu;
    static std::map<std::pair<std::int64_t, std::int64_t>, std::shared_ptr<const WrightKernel::Coefficients>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_pair(nu.numerator(), nu.denominator());
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto c = std::make_shared<WrightKernel::Coefficients>();
    c->m100 = wright_coefficients<mp100>(nu);
    c->m50.reserve(kTerms);
    c->d.reserve(kTerms);
    for (const auto& v : c->m100) {
        c->m50.push_back(static_cast<mp50>(v));
        c->d.push_back(static_cast<double>(v));
    }
    cache.emplace(key, c);
    return c;
}

template <class Real>
cplx series_mp(const std::vector<Real>& b, cplx y)
{
    bool converged = false;
    Real yr = y.real(), yi = y.imag();
    Real pr = 1, pi_ = 0; // y^n
    Real sr = 0, si = 0;
    Real eps = std::numeric_limits<Real>::epsilon();
    Real peak = 0;
    int quiet = 0;
    for (std::size_t n = 0; n < b.size(); ++n) {
        if (b[n] != 0) {
            Real tr = b[n] * pr, ti = b[n] * pi_;
            sr += tr;
            si += ti;
            Real mag = abs(tr) + abs(ti);
            if (mag > peak) peak = mag;
            if (mag < eps * peak * 1e-3) {
                if (++quiet > 4) {
                    converged = true;
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        Real nr = pr * yr - pi_ * yi;
        pi_ = pr * yi + pi_ * yr;
        pr = nr;
    }
    if (!converged || peak * eps > Real(1e-3))
        throw NumericalFailure("M-Wright series out of range at |y| = " + std::to_string(std::abs(y)));
    return {static_cast<double>(sr), static_cast<double>(si)};
}

} // namespace

WrightKernel::WrightKernel(const Rational& nu) : nu_(nu)
{
    if (nu <= 0 || nu >= 1) throw std::domain_error("M-Wright index must lie in (0, 1)");
    gaussian_ = nu == Rational(1, 2);
    if (!gaussian_) coeffs_ = cached_coefficients(nu);
}

cplx WrightKernel::value(cplx y) const
{
    if (gaussian_) return std::exp(-y * y / 4.0) / std::sqrt(pi);
    const auto& b = coeffs_->d;
    cplx sum = 0.0, pw = 1.0;
    double abs_sum = 0.0, peak = 0.0, ay = std::abs(y);
    bool ok = false;
    int quiet = 0;
    for (std::size_t n = 0; n < b.size(); ++n) {
        double mag = std::abs(b[n]) * std::abs(pw);
        if (!std::isfinite(mag) || mag > 1e250) break;
        sum += b[n] * pw;
        abs_sum += mag;
        peak = std::max(peak, mag);
        if (b[n] != 0.0) {
            if (mag < 1e-19 * peak) {
                if (++quiet > 4) {
                    ok = true;
                    break;
                }
            } else {
                quiet = 0;
            }
        }
        pw *= y;
        if (ay == 0.0) {
            ok = true;
            break;
        }
    }
    if (ok && abs_sum < 1e2) return sum;
    double log10_peak = ok ? std::log10(std::max(peak, 1.0)) : 300.0;
    if (log10_peak < 30.0) return series_mp(coeffs_->m50, y);
    return series_mp(coeffs_->m100, y);
}

std::vector<cplx> WrightKernel::taylor(cplx y0, std::size_t order) const
{
    if (gaussian_) {
        Jet h = Jet::variable(order, y0);
        Jet e = exp(h * h * cplx(-0.25)) * cplx(1.0 / std::sqrt(pi));
        return e.coefficients();
    }
    // c_j = Σ_n b_n C(n, j) y0^{n-j}; d_j(n) = C(n, j) y0^{n-j} by Pascal's rule.
    const auto& b = coeffs_->m100;
    using R = mp100;
    std::vector<R> dr(order + 1, R(0)), di(order + 1, R(0));
    std::vector<R> cr(order + 1, R(0)), ci(order + 1, R(0));
    dr[0] = 1;
    R yr = y0.real(), yi = y0.imag();
    R peak = 0;
    R eps = std::numeric_limits<R>::epsilon();
    int quiet = 0;
    for (std::size_t n = 0; n < b.size(); ++n) {
        R mag = 0;
        for (std::size_t j = 0; j <= order && j <= n; ++j) {
            R tr = b[n] * dr[j], ti = b[n] * di[j];
            cr[j] += tr;
            ci[j] += ti;
            mag = std::max<R>(mag, abs(tr) + abs(ti));
        }
        if (n > order) {
            if (mag > peak) peak = mag;
            if (b[n] != 0) {
                if (mag < eps * peak * 1e-3) {
                    if (++quiet > 4) break;
                } else {
                    quiet = 0;
                }
            }
        }
        for (std::size_t j = std::min(order, n + 1); j >= 1; --j) {
            R nr = dr[j] * yr - di[j] * yi + dr[j - 1];
            R ni = dr[j] * yi + di[j] * yr + di[j - 1];
            dr[j] = nr;
            di[j] = ni;
        }
        R nr = dr[0] * yr - di[0] * yi;
        di[0] = dr[0] * yi + di[0] * yr;
        dr[0] = nr;
    }
    std::vector<cplx> out(order + 1);
    for (std::size_t j = 0; j <= order; ++j) out[j] = {static_cast<double>(cr[j]), static_cast<double>(ci[j])};
    return out;
}

double WrightKernel::decay_half_angle() const { return (1.0 - to_double(nu_)) * pi / 2.0; }

double WrightKernel::decay_radius(double beta, double log_drop) const
{
    double nu = to_double(nu_);
    double rho = 1.0 / (1.0 - nu);
    double sigma = (1.0 - nu) * std::pow(nu, nu / (1.0 - nu));
    double c = std::cos(beta * rho);
    if (c <= 0) return HUGE_VAL;
    return std::pow(log_drop / (sigma * c), 1.0 / rho);
}

} // namespace mpde
