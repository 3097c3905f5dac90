#include "mpde/moment.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mpde {

MomentFunction::MomentFunction(std::vector<GammaFactor> factors) : factors_(std::move(factors))
{
    normalize();
}

MomentFunction MomentFunction::gamma(const Rational& s)
{
    return MomentFunction({GammaFactor{s, 1}});
}

void MomentFunction::normalize()
{
    std::vector<GammaFactor> merged;
    for (const auto& f : factors_) {
        if (f.s == 0 || f.exponent == 0) continue;
        auto it = std::find_if(merged.begin(), merged.end(), [&](const GammaFactor& g) { return g.s == f.s; });
        if (it == merged.end())
            merged.push_back(f);
        else
            it->exponent += f.exponent;
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(), [](const GammaFactor& g) { return g.exponent == 0; }),
                 merged.end());
    std::sort(merged.begin(), merged.end(), [](const GammaFactor& a, const GammaFactor& b) { return a.s < b.s; });
    factors_ = std::move(merged);
}

Rational MomentFunction::order() const
{
    Rational r(0);
    for (const auto& f : factors_) r += Rational(f.exponent) * f.s;
    return r;
}

double MomentFunction::log_eval(double u) const
{
    if (u < 0) throw std::domain_error("moment function evaluated at negative argument");
    if (u == 0) return 0.0;
    double acc = 0.0;
    for (const auto& f : factors_) {
        double s = to_double(f.s);
        double lg = s >= 0 ? std::lgamma(1.0 + s * u) : -std::lgamma(1.0 - s * u);
        acc += f.exponent * lg;
    }
    return acc;
}

double MomentFunction::eval(double u) const
{
    if (u == 0) return 1.0;
    return std::exp(log_eval(u));
}

bool MomentFunction::is_classical() const
{
    return factors_.size() == 1 && factors_[0].exponent == 1 && factors_[0].s > 0;
}

MomentFunction MomentFunction::operator*(const MomentFunction& other) const
{
    auto f = factors_;
    f.insert(f.end(), other.factors_.begin(), other.factors_.end());
    return MomentFunction(std::move(f));
}

MomentFunction MomentFunction::operator/(const MomentFunction& other) const
{
    auto f = factors_;
    for (auto g : other.factors_) {
        g.exponent = -g.exponent;
        f.push_back(g);
    }
    return MomentFunction(std::move(f));
}

std::string MomentFunction::describe() const
{
    if (factors_.empty()) return "1";
    std::ostringstream os;
    bool first = true;
    for (const auto& f : factors_) {
        if (!first) os << "*";
        first = false;
        os << "Gamma_" << to_string(f.s);
        if (f.exponent != 1) os << "^" << f.exponent;
    }
    return os.str();
}

double moment_eval(const MomentFunction& m, double u) { return m.eval(u); }

Rational moment_order(const MomentFunction& m) { return m.order(); }

// ---------------------------------------------------------------------------
// Mittag-Leffler

namespace {

using mp50 = boost::multiprecision::cpp_bin_float_50;
using mp100 = boost::multiprecision::cpp_bin_float_100;

struct SeriesResult {
    cplx value;
    double abs_sum = 0.0; // Σ|term|, measures cancellation
    bool converged = false;
};

SeriesResult ml_series_double(double alpha, cplx z)
{
    SeriesResult r;
    if (z == cplx(0)) {
        r.value = 1.0;
        r.abs_sum = 1.0;
        r.converged = true;
        return r;
    }
    double lz = std::log(std::abs(z));
    double th = std::arg(z);
    cplx sum = 0.0;
    double abs_sum = 0.0, prev = HUGE_VAL;
    for (int j = 0; j < 20000; ++j) {
        double lm = j * lz - std::lgamma(1.0 + alpha * j);
        if (lm > 700.0) {
            abs_sum = HUGE_VAL;
            break;
        }
        double mag = std::exp(lm);
        cplx term = std::polar(mag, j * th);
        sum += term;
        abs_sum += mag;
        bool decreasing = mag < prev;
        prev = mag;
        if (j > 2 && decreasing && mag <= 1e-18 * std::max(std::abs(sum), 1e-300) &&
            mag <= 1e-18 * abs_sum) {
            r.converged = true;
            break;
        }
    }
    r.value = sum;
    r.abs_sum = abs_sum;
    return r;
}

template <class Real>
cplx ml_series_mp(double alpha_d, const Rational& alpha, cplx z)
{
    using boost::multiprecision::cos;
    using boost::multiprecision::exp;
    using boost::multiprecision::log;
    using boost::multiprecision::sin;
    Real a = Real(alpha.numerator()) / Real(alpha.denominator());
    Real lz = log(Real(std::abs(z)));
    Real th = Real(std::arg(z));
    Real re = 0, im = 0, prev = 1e300;
    Real eps = std::numeric_limits<Real>::epsilon();
    (void)alpha_d;
    for (int j = 0; j < 40000; ++j) {
        Real lm = j * lz - boost::math::lgamma(Real(1) + a * j);
        Real mag = exp(lm);
        re += mag * cos(j * th);
        im += mag * sin(j * th);
        Real s = sqrt(re * re + im * im);
        bool decreasing = mag < prev;
        prev = mag;
        if (j > 2 && decreasing && mag < eps * s) break;
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

// 1/Γ(x) for real x, exact zero at non-positive integers.
double rgamma(double x)
{
    if (x <= 0 && x == std::floor(x)) return 0.0;
    return 1.0 / std::tgamma(x);
}

MittagLefflerValue ml_asymptotic(double alpha, cplx z)
{
    MittagLefflerValue out;
    double r = std::abs(z);
    double th = std::arg(z);
    double ra = std::pow(r, 1.0 / alpha);
    cplx expsum = 0.0;
    int kmax = static_cast<int>(std::ceil(alpha)) + 1;
    for (int k = -kmax; k <= kmax; ++k) {
        double phase = th + 2 * pi * k;
        double excess = std::abs(phase) - alpha * pi;
        if (excess > 1e-13) continue;
        double weight = std::abs(excess) <= 1e-13 ? 0.5 : 1.0;
        cplx w = std::polar(ra, phase / alpha);
        expsum += weight * std::exp(w);
    }
    expsum /= alpha;
    cplx alg = 0.0;
    double smallest = 0.0;
    bool integer_alpha = alpha == std::floor(alpha);
    if (!integer_alpha) {
        double prev = HUGE_VAL;
        cplx zinv = 1.0 / z, zp = 1.0;
        for (int j = 1; j < 200; ++j) {
            zp *= zinv;
            double c = rgamma(1.0 - alpha * j);
            double mag = std::abs(c) * std::abs(zp);
            if (c != 0.0 && mag > prev) break;
            if (c != 0.0) prev = mag;
            alg += c * zp;
            smallest = mag;
            if (mag < 1e-20 * std::max(std::abs(expsum), 1e-300)) break;
        }
    }
    out.value = expsum - alg;
    out.error_estimate = smallest;
    out.converged = smallest <= 1e-10 * std::max(std::abs(out.value), 1e-300);
    return out;
}

} // namespace

MittagLefflerValue mittag_leffler(const Rational& alpha, cplx z)
{
    if (alpha <= 0) throw std::domain_error("Mittag-Leffler index must be positive");
    double a = to_double(alpha);
    MittagLefflerValue out;
    if (z == cplx(0)) {
        out.value = 1.0;
        return out;
    }
    double threshold = 4.0 * (1.0 / a + 1.0);
    double log_peak = std::pow(std::abs(z), 1.0 / a); // ~ log of the largest term
    bool series_regime = std::abs(z) <= threshold && log_peak < 600.0;
    if (!series_regime) {
        out = ml_asymptotic(a, z);
        if (out.converged) return out;
    }
    // Series regime, or asymptotic fallback that missed tolerance.
    if (log_peak > 2000.0) {
        out.converged = false;
        return out;
    }
    auto s = ml_series_double(a, z);
    double ratio = s.abs_sum / std::max(std::abs(s.value), 1e-300);
    if (s.converged && ratio < 1e4) {
        out.value = s.value;
        out.error_estimate = 1e-16 * s.abs_sum;
        out.converged = true;
        return out;
    }
    double digits_needed = std::log10(std::max(ratio, 1.0)) + 18.0;
    if (!std::isfinite(ratio)) digits_needed = log_peak / std::log(10.0) + 18.0;
    if (digits_needed <= 48.0)
        out.value = ml_series_mp<mp50>(a, alpha, z);
    else if (digits_needed <= 98.0)
        out.value = ml_series_mp<mp100>(a, alpha, z);
    else {
        out.value = s.value;
        out.error_estimate = 1e-16 * s.abs_sum;
        out.converged = false;
        return out;
    }
    out.error_estimate = 1e-17 * std::abs(out.value);
    out.converged = true;
    return out;
}

// ---------------------------------------------------------------------------
// classical kernels

ClassicalKernel::ClassicalKernel(const Rational& order) : k(order)
{
    if (k <= 0) throw std::domain_error("kernel order must be positive");
    p = 1;
    while (Rational(p) * k <= Rational(1, 2)) ++p;
}

KernelValue kernel_e(const ClassicalKernel& kernel, cplx z)
{
    KernelValue out;
    double k = to_double(kernel.k);
    if (z == cplx(0)) {
        out.value = 0.0;
        return out;
    }
    out.in_flat_sector = std::abs(std::arg(z)) < pi / (2 * k);
    if (kernel.p == 1) {
        cplx zk = std::exp(k * std::log(z));
        out.value = k * zk * std::exp(-zk);
    } else {
        double kt = k * kernel.p;
        cplx w = std::exp(std::log(z) / static_cast<double>(kernel.p));
        cplx wk = std::exp(kt * std::log(w));
        out.value = kt * wk * std::exp(-wk) / static_cast<double>(kernel.p);
    }
    return out;
}

MittagLefflerValue kernel_E(const ClassicalKernel& kernel, cplx z)
{
    return mittag_leffler(1 / kernel.k, z);
}

} // namespace mpde
