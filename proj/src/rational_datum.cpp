#include "mpde/rational_datum.hpp"

#include "mpde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mpde {

namespace {

double binom(int n, int k)
{
    if (k < 0 || k > n) return 0.0;
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

// (k)_j = k (k+1) ... (k+j-1)
double rising(int k, int j)
{
    double r = 1.0;
    for (int i = 0; i < j; ++i) r *= k + i;
    return r;
}

} // namespace

RationalDatum::RationalDatum(cplx z0, std::vector<cplx> poles, std::vector<cplx> poly)
    : z0_(z0), poles_(std::move(poles)), poly_(std::move(poly))
{
    trim();
    if (!poles_.empty() && z0_ == cplx(0)) throw SpecError("branch point z0 must be nonzero");
}

void RationalDatum::trim()
{
    while (!poles_.empty() && poles_.back() == cplx(0)) poles_.pop_back();
    while (!poly_.empty() && poly_.back() == cplx(0)) poly_.pop_back();
}

cplx RationalDatum::operator()(cplx z) const
{
    cplx s = 0.0;
    if (!poles_.empty()) {
        cplx d = z0_ - z;
        if (d == cplx(0)) throw PoleCollision("datum evaluated at its pole");
        cplx inv = 1.0 / d, pw = inv;
        for (const auto& c : poles_) {
            s += c * pw;
            pw *= inv;
        }
    }
    cplx p = 0.0;
    for (std::size_t i = poly_.size(); i-- > 0;) p = p * z + poly_[i];
    return s + p;
}

RationalDatum RationalDatum::derivative(int n) const
{
    if (n < 0) throw std::invalid_argument("negative derivative order");
    if (n == 0) return *this;
    // d^n/dz^n (z0 - z)^{-k} = (k)_n (z0 - z)^{-(k+n)}
    std::vector<cplx> np(poles_.empty() ? 0 : poles_.size() + n, cplx(0));
    for (std::size_t k = 1; k <= poles_.size(); ++k) np[k + n - 1] = poles_[k - 1] * rising(static_cast<int>(k), n);
    std::vector<cplx> pp;
    for (std::size_t j = n; j < poly_.size(); ++j) pp.push_back(poly_[j] * rising(static_cast<int>(j - n + 1), n));
    return RationalDatum(z0_, std::move(np), std::move(pp));
}

std::vector<cplx> RationalDatum::taylor(cplx z, int n) const
{
    std::vector<cplx> a(n + 1, cplx(0));
    if (!poles_.empty()) {
        cplx d = z0_ - z;
        if (d == cplx(0)) throw PoleCollision("Taylor expansion at the pole");
        // 1/(d - h)^k = Σ_j C(k+j-1, j) h^j / d^{k+j}
        for (int j = 0; j <= n; ++j) {
            cplx acc = 0.0;
            for (std::size_t k = 1; k <= poles_.size(); ++k)
                acc += poles_[k - 1] * binom(static_cast<int>(k) + j - 1, j) / std::pow(d, static_cast<int>(k + j));
            a[j] = acc;
        }
    }
    for (std::size_t m = 0; m < poly_.size(); ++m)
        for (int j = 0; j <= std::min<int>(n, static_cast<int>(m)); ++j)
            a[j] += poly_[m] * binom(static_cast<int>(m), j) * std::pow(z, static_cast<int>(m - j));
    return a;
}

RationalDatum RationalDatum::shifted(cplx z) const
{
    std::vector<cplx> pp;
    if (!poly_.empty()) pp = RationalDatum(0.0, {}, poly_).taylor(z, static_cast<int>(poly_.size()) - 1);
    return RationalDatum(z0_ - z, poles_, std::move(pp));
}

RationalDatum RationalDatum::scaled(cplx c) const
{
    if (c == cplx(0)) throw std::invalid_argument("scale must be nonzero");
    // 1/(z0 - c s)^k = c^{-k} / (z0/c - s)^k
    std::vector<cplx> np(poles_.size());
    for (std::size_t k = 1; k <= poles_.size(); ++k) np[k - 1] = poles_[k - 1] / std::pow(c, static_cast<int>(k));
    std::vector<cplx> pp(poly_.size());
    for (std::size_t j = 0; j < poly_.size(); ++j) pp[j] = poly_[j] * std::pow(c, static_cast<int>(j));
    return RationalDatum(poles_.empty() ? 0.0 : z0_ / c, std::move(np), std::move(pp));
}

cplx RationalDatum::laurent_negative(int k) const
{
    if (k < 1 || k > max_order()) return 0.0;
    // 1/(z0 - w)^k = (-1)^k h^{-k}
    return (k % 2 == 0 ? 1.0 : -1.0) * poles_[k - 1];
}

RationalDatum RationalDatum::operator+(const RationalDatum& o) const
{
    if (!poles_.empty() && !o.poles_.empty() && std::abs(z0_ - o.z0_) > 1e-14 * std::abs(z0_))
        throw std::invalid_argument("data with different branch points");
    cplx z0 = poles_.empty() ? o.z0_ : z0_;
    std::vector<cplx> np(std::max(poles_.size(), o.poles_.size()), cplx(0));
    for (std::size_t i = 0; i < poles_.size(); ++i) np[i] += poles_[i];
    for (std::size_t i = 0; i < o.poles_.size(); ++i) np[i] += o.poles_[i];
    std::vector<cplx> pp(std::max(poly_.size(), o.poly_.size()), cplx(0));
    for (std::size_t i = 0; i < poly_.size(); ++i) pp[i] += poly_[i];
    for (std::size_t i = 0; i < o.poly_.size(); ++i) pp[i] += o.poly_[i];
    cplx branch = np.empty() ? cplx(0) : z0;
    return RationalDatum(branch, std::move(np), std::move(pp));
}

RationalDatum RationalDatum::operator*(cplx s) const
{
    RationalDatum r = *this;
    for (auto& c : r.poles_) c *= s;
    for (auto& c : r.poly_) c *= s;
    r.trim();
    return r;
}

RationalDatum RationalDatum::operator-(const RationalDatum& o) const { return *this + o * cplx(-1.0); }

double RationalDatum::coefficient_distance(const RationalDatum& o) const
{
    double d = 0.0;
    std::size_t np = std::max(poles_.size(), o.poles_.size());
    for (std::size_t i = 0; i < np; ++i) {
        cplx a = i < poles_.size() ? poles_[i] : 0.0, b = i < o.poles_.size() ? o.poles_[i] : 0.0;
        d = std::max(d, std::abs(a - b));
    }
    std::size_t nq = std::max(poly_.size(), o.poly_.size());
    for (std::size_t i = 0; i < nq; ++i) {
        cplx a = i < poly_.size() ? poly_[i] : 0.0, b = i < o.poly_.size() ? o.poly_[i] : 0.0;
        d = std::max(d, std::abs(a - b));
    }
    return d;
}

} // namespace mpde
