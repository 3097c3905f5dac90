#pragma once

#include "mpde/moment.hpp"
#include "mpde/quadrature.hpp"
#include "mpde/rational_datum.hpp"
#include "mpde/symbol.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace mpde {

/// A point of the Riemann surface of log t: modulus and unreduced argument.
struct CoveringPoint {
    double modulus = 0.0;
    double arg = 0.0;

    static CoveringPoint polar(double r, double a) { return {r, a}; }
    static CoveringPoint principal(cplx t) { return {std::abs(t), std::arg(t)}; }
    cplx value() const { return std::polar(modulus, arg); }
    /// t^x on the covering surface.
    cplx power(double x) const { return std::polar(std::pow(modulus, x), arg * x); }
};

/// ∂_{m1,t}^p u = λ0 ∂_{m2,z}^q u with u(0,z) = φ(z) and ∂_{m1,t}^j u(0,z) = 0
/// for 0 < j < p. beta > 1 raises the operator to that power (only the
/// double-contour representation accepts it).
struct SimpleEquation {
    int p = 1;
    int q = 1;
    int beta = 1;
    cplx lambda0{1.0};
    MomentFunction m1 = MomentFunction::gamma(1);
    MomentFunction m2 = MomentFunction::gamma(1);
    RationalDatum datum;

    Rational s1() const { return m1.order(); }
    Rational s2() const { return m2.order(); }
    /// p s1 >= q s2: the formal solution converges.
    bool convergent() const;
    /// a = q s2 / p, the order of Γ_a = m1 · (Borel moment).
    Rational a() const;
    /// ν = s1 / a, the M-Wright parameter of the Laplace kernel.
    Rational nu() const;
    /// Summability level K = 1 / (a - s1).
    Rational K() const;
    /// Borel moment m = Γ_a / m1 of order a - s1.
    MomentFunction borel_moment() const;

    /// Structural checks: positive integers, λ0 ≠ 0, positive orders.
    void validate() const;
    /// True when m1 = Γ_{s1} and m2 = Γ_{s2} (needed by the numerical routes).
    bool gamma_moments() const;
};

/// Singular directions (q arg(z0 - z) - arg λ0 + 2πj)/p lying in [lo, hi].
std::vector<double> singular_directions_between(const SimpleEquation& eq, cplx z, double lo, double hi);
/// Distance from d to the nearest singular direction at z (infinity when the
/// datum is entire).
double distance_to_singular(const SimpleEquation& eq, double d, cplx z);

/// (1/q) Σ_l φ(z + ω^l (λ0 s^p)^{1/q}), ω = e^{2πi/q}: the Borel transform
/// of the formal solution with respect to Γ_a / m1, in closed form.
cplx borel_closed_form(const SimpleEquation& eq, cplx s, cplx z);

struct SeriesValue {
    cplx value{0.0};
    double tail = 0.0;     ///< modulus of the last retained term
    std::size_t terms = 0;
    bool diverging = false; ///< terms were still growing at the truncation
};

/// Σ_{n<=M} λ0^n ∂_{m2}^{qn}φ(z) s^{pn} / (m1(pn) m(pn)).
SeriesValue borel_series(const SimpleEquation& eq, int M, cplx s, cplx z);

/// Σ λ0^n ∂_{m2}^{qn}φ(z) t^{pn} / m1(pn) summed directly; for p s1 >= q s2.
SeriesValue convergent_sum(const SimpleEquation& eq, CoveringPoint t, cplx z, double tol = 1e-14);

struct LaplaceResult {
    cplx value{0.0};
    double error = 0.0;
    std::size_t evaluations = 0;
    double radius = 0.0;   ///< truncation of the integration variable
    std::string substitution;
};

/// ∫_{e^{id}R+} e_m(s/t) v(s) ds/s for the classical kernel of order k,
/// computed as ∫_0^{∞e^{iκ}} e^{-x} v(t x^{1/k}) dx with κ = k(d - arg t).
/// growth_degree bounds |v(s)| <= C(1+|s|)^degree for the truncation.
LaplaceResult laplace_sum_direction(const std::function<cplx(cplx)>& v, const ClassicalKernel& kernel, double d,
                                    CoveringPoint t, double tol, int growth_degree = 0);

/// u^d(t,z) for a divergent SimpleEquation: ∫_0^{∞e^{iβ}} M_ν(y) v(t y^a, z) dy
/// with β = (d - arg t)/a. Convergent equations return the series sum.
LaplaceResult directional_sum(const SimpleEquation& eq, double d, CoveringPoint t, cplx z, double tol = 1e-12);

struct LateralPair {
    double direction = 0.0;
    double offset = 0.0;
    cplx u_plus{0.0};
    cplx u_minus{0.0};
    std::size_t nodes = 0;
    double error = 0.0;
    cplx difference() const { return u_plus - u_minus; }
};

/// min(gap/4, (π/(2K) - |arg t - δ|)/2), gap the distance to the next
/// singular direction.
double default_lateral_offset(const SimpleEquation& eq, double delta, CoveringPoint t, cplx z);

LateralPair lateral_sums(const SimpleEquation& eq, double delta, std::optional<double> eta, CoveringPoint t, cplx z,
                         double tol = 1e-12);

struct VIntegralOptions {
    std::optional<double> eps; ///< contour radius; default between the kernel threshold and |z0|
    double psi = 0.0;          ///< inner ray angle relative to -arg w
    double r0 = 0.0;           ///< inner ray starting radius
    int nodes = 64;            ///< trapezoid nodes on |w| = eps
    double tol = 1e-12;        ///< inner ray tolerance
};

struct VIntegralResult {
    cplx value{0.0};
    double error = 0.0; ///< trapezoid (half-node comparison) plus ray errors
    double eps = 0.0;
    bool experimental = false; ///< beta > 1 finite-difference prefactor
};

/// The double-contour representation of the Borel transform:
/// (1/2πi)∮_{|w|=ε} φ(w) ∫_{r0 e^{iθ}}^{∞e^{iθ}} E_{Γ_a}(tλ0ζ^q) E_{m2}(ζz) e_{m2}(ζw)/(ζw) dζ dw,
/// θ = -arg w + ψ. Requires p = 1 and Γ-type moments.
VIntegralResult v_integral(const SimpleEquation& eq, cplx t, cplx z, const VIntegralOptions& opts = {});

/// Π_i (∂_{m1,t} - λ_i ∂_z^{q_i}) u = 0 with ∂_{m1,t}^j u(0,z) = φ_j(z).
struct ProductEquation {
    std::vector<MonomialFactor> factors;
    MomentFunction m1 = MomentFunction::gamma(1);
    std::vector<RationalDatum> data;

    /// The single-factor equation of factor i with datum psi.
    SimpleEquation factor_equation(std::size_t i, const RationalDatum& psi) const;
};

/// Component data ψ_i with u = Σ u_i, u_i solving factor i with datum ψ_i.
/// With symbols given, ψ_i = Σ_j c_ij(∂)φ_j uses them; otherwise the
/// Vandermonde symbols are built. The result is checked against
/// Σ_i μ_i(∂)^j ψ_i = φ_j.
std::vector<RationalDatum> decompose(const ProductEquation& eq,
                                     const std::vector<std::vector<RationalSymbol>>* symbols = nullptr);

struct MultisumResult {
    cplx value{0.0};
    std::vector<cplx> components;
    double error = 0.0;
};

/// Σ_i S_{K_i, d_i} û_i (convergent factors summed directly).
MultisumResult multisum(const ProductEquation& eq, const std::vector<RationalDatum>& components,
                        const std::vector<double>& directions, CoveringPoint t, cplx z, double tol = 1e-12);

} // namespace mpde
