#pragma once

#include "mpde/rational.hpp"

#include <cstddef>
#include <vector>

namespace mpde {

/// Truncated Taylor expansion f(x0 + h) = Σ_{j<=n} c_j h^j.
class Jet {
public:
    Jet() = default;
    explicit Jet(std::size_t order) : c_(order + 1, cplx(0)) {}
    Jet(std::size_t order, cplx value) : c_(order + 1, cplx(0)) { c_[0] = value; }

    /// The identity jet x0 + h.
    static Jet variable(std::size_t order, cplx x0);
    static Jet from_coefficients(std::vector<cplx> c) { Jet j; j.c_ = std::move(c); return j; }

    std::size_t order() const { return c_.size() - 1; }
    cplx operator[](std::size_t i) const { return c_[i]; }
    cplx& operator[](std::size_t i) { return c_[i]; }
    const std::vector<cplx>& coefficients() const { return c_; }

    Jet operator+(const Jet& o) const;
    Jet operator-(const Jet& o) const;
    Jet operator*(const Jet& o) const;
    Jet operator/(const Jet& o) const;
    Jet operator*(cplx s) const;
    Jet operator+(cplx s) const;

    /// d/dh; the order drops by one.
    Jet derivative() const;
    /// Same expansion truncated to a lower order.
    Jet truncated(std::size_t order) const;

private:
    std::vector<cplx> c_;
};

Jet exp(const Jet& f);
/// Principal power f^a; requires f[0] != 0.
Jet pow(const Jet& f, double a);
/// Σ_j taylor[j] (g - g[0])^j: composition with a function known by its
/// Taylor coefficients at g[0].
Jet compose(const std::vector<cplx>& taylor, const Jet& g);

} // namespace mpde
