#include "mpde/jet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mpde {

Jet Jet::variable(std::size_t order, cplx x0)
{
    Jet j(order, x0);
    if (order >= 1) j.c_[1] = 1.0;
    return j;
}

Jet Jet::operator+(const Jet& o) const
{
    Jet r(std::min(order(), o.order()));
    for (std::size_t i = 0; i <= r.order(); ++i) r.c_[i] = c_[i] + o.c_[i];
    return r;
}

Jet Jet::operator-(const Jet& o) const
{
    Jet r(std::min(order(), o.order()));
    for (std::size_t i = 0; i <= r.order(); ++i) r.c_[i] = c_[i] - o.c_[i];
    return r;
}

Jet Jet::operator*(const Jet& o) const
{
    Jet r(std::min(order(), o.order()));
    for (std::size_t i = 0; i <= r.order(); ++i)
        for (std::size_t k = 0; k <= i; ++k) r.c_[i] += c_[k] * o.c_[i - k];
    return r;
}

Jet Jet::operator/(const Jet& o) const
{
    if (o.c_[0] == cplx(0)) throw std::domain_error("jet division by a jet vanishing at the base point");
    Jet r(std::min(order(), o.order()));
    for (std::size_t i = 0; i <= r.order(); ++i) {
        cplx acc = c_[i];
        for (std::size_t k = 1; k <= i; ++k) acc -= o.c_[k] * r.c_[i - k];
        r.c_[i] = acc / o.c_[0];
    }
    return r;
}

Jet Jet::operator*(cplx s) const
{
    Jet r = *this;
    for (auto& x : r.c_) x *= s;
    return r;
}

Jet Jet::operator+(cplx s) const
{
    Jet r = *this;
    r.c_[0] += s;
    return r;
}

Jet Jet::derivative() const
{
    if (order() == 0) return Jet(0);
    Jet r(order() - 1);
    for (std::size_t i = 0; i <= r.order(); ++i) r.c_[i] = c_[i + 1] * static_cast<double>(i + 1);
    return r;
}

Jet Jet::truncated(std::size_t ord) const
{
    Jet r(std::min(ord, order()));
    for (std::size_t i = 0; i <= r.order(); ++i) r.c_[i] = c_[i];
    return r;
}

Jet exp(const Jet& f)
{
    // g' = f' g
    std::size_t n = f.order();
    Jet g(n);
    g[0] = std::exp(f[0]);
    for (std::size_t i = 1; i <= n; ++i) {
        cplx acc = 0.0;
        for (std::size_t k = 1; k <= i; ++k) acc += static_cast<double>(k) * f[k] * g[i - k];
        g[i] = acc / static_cast<double>(i);
    }
    return g;
}

Jet pow(const Jet& f, double a)
{
    // g = f^a satisfies f g' = a f' g
    if (f[0] == cplx(0)) throw std::domain_error("jet power at a zero base point");
    std::size_t n = f.order();
    Jet g(n);
    g[0] = std::pow(f[0], a);
    for (std::size_t i = 1; i <= n; ++i) {
        cplx acc = 0.0;
        for (std::size_t k = 1; k <= i; ++k)
            acc += (a * static_cast<double>(k) - static_cast<double>(i - k)) * f[k] * g[i - k];
        g[i] = acc / (static_cast<double>(i) * f[0]);
    }
    return g;
}

Jet compose(const std::vector<cplx>& taylor, const Jet& g)
{
    std::size_t n = g.order();
    Jet d = g;
    d[0] = 0.0;
    Jet acc(n);
    // Horner: (((t_m d + t_{m-1}) d + ...) d + t_0)
    std::size_t m = std::min(taylor.size() - 1, n);
    acc[0] = taylor[m];
    for (std::size_t j = m; j-- > 0;) {
        acc = acc * d;
        acc[0] += taylor[j];
    }
    return acc;
}

} // namespace mpde
