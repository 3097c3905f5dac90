#pragma once

#include "mpde/rational.hpp"

#include <memory>
#include <vector>

namespace mpde {

/// M-Wright function M_nu(y) = Σ (-y)^n / (n! Γ(1 - nu(n+1))), 0 < nu < 1.
///
/// It satisfies ∫_0^∞ y^δ M_nu(y) dy = Γ(1+δ)/Γ(1+nu δ), which makes it the
/// Laplace kernel of the moment Γ_a/Γ_{a nu} after the substitution s = t y^a.
/// M_{1/2}(y) = exp(-y²/4)/√π; M_{1/3}(y) is the Ecalle kernel C_3.
class WrightKernel {
public:
    explicit WrightKernel(const Rational& nu);

    const Rational& nu() const { return nu_; }
    cplx value(cplx y) const;
    /// Taylor coefficients c_0..c_order of M_nu at y0.
    std::vector<cplx> taylor(cplx y0, std::size_t order) const;
    /// Largest |arg y| with exponential decay: (1 - nu) pi / 2.
    double decay_half_angle() const;
    /// Radius beyond which |M_nu(r e^{i beta})| < exp(-log_drop).
    double decay_radius(double beta, double log_drop) const;

    struct Coefficients;

private:
    Rational nu_;
    bool gaussian_;
    std::shared_ptr<const Coefficients> coeffs_;
};

} // namespace mpde
