#pragma once

#include "mpde/quadrature.hpp"
#include "mpde/resummation.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace mpde {

/// Orientation of the pairing: G[K] = kPairingOrientation · 2πi · Σ Res(g K),
/// residues taken counterclockwise. Fixed by the heat-equation lateral sums
/// (u^{δ+} - u^{δ-} runs clockwise around the poles between the two rays).
inline constexpr double kPairingOrientation = -1.0;

/// Laplace-type hyperfunction [g]_d with a rational defining function g(s)
/// whose poles lie on the support ray arg s = support.
struct Hyperfunction {
    RationalDatum defining;
    double support = 0.0;

    /// (location, order) of every pole.
    std::vector<std::pair<cplx, int>> singular_locus() const;
};

/// [φ(z + s)]_{arg(z0 - z)}.
Hyperfunction hyperfunction_at(const RationalDatum& phi, cplx z);

/// Taylor coefficients k_0..k_order of a test kernel at a point.
using KernelJet = std::function<std::vector<cplx>(cplx, std::size_t)>;

/// G[K] by residues at the poles of the defining function.
cplx pair(const Hyperfunction& hf, const KernelJet& kernel);

/// G[K] as ∫_{ray+} - ∫_{ray-} of g K along arg s = support ± eta, s <= radius.
QuadratureResult pair_two_edge(const Hyperfunction& hf, const std::function<cplx(cplx)>& kernel, double eta,
                               double radius, double tol);

/// G[K] as kPairingOrientation · ∮ g K ds over a circle of the given radius
/// around each pole (trapezoid rule).
cplx pair_circle(const Hyperfunction& hf, const std::function<cplx(cplx)>& kernel, double radius, int nodes = 256);

/// σ ↦ e_m(σ/T)/(qσ) for the moment m = Γ_{s2}/Γ_{ν s2}, where
/// e_m(x) = x^{1/s2} M_ν(x^{1/s2}) / s2. The branch of x^{1/s2} is fixed by
/// the ray: y = x^{1/s2} has argument y_arg_hint near the summation ray.
class MomentJumpKernel {
public:
    MomentJumpKernel(const Rational& nu, const Rational& s2, cplx T, int q);

    cplx value(cplx sigma) const;
    std::vector<cplx> jet(cplx sigma, std::size_t order) const;
    /// arg of y = (σ/T)^{1/s2} at the ray point σ (principal branch).
    double y_arg(cplx sigma) const;

private:
    Rational nu_;
    double s2_;
    cplx T_;
    int q_;
};

/// The kernel of SimpleEquation eq at the Stokes direction delta for the
/// point (t, z): T = (λ0 t^p)^{1/q} on the branch whose pole lies on delta.
MomentJumpKernel jump_kernel_for(const SimpleEquation& eq, double delta, CoveringPoint t, cplx z);

/// u^{δ+} - u^{δ-} by residues for a single-factor equation; 0 when delta is
/// not a singular direction at z, the datum is entire or the series converges.
cplx jump_simple(const SimpleEquation& eq, double delta, CoveringPoint t, cplx z);

/// ∂_{m1,t}^p u = ∂_z^q u with classical m1: [φ(z + s^{p/q})]_{qθ_z/p}[e_m(s/t)/(qs)].
/// delta defaults to q arg(z0 - z)/p.
cplx jump_case1(int p, int q, const MomentFunction& m1, const RationalDatum& phi, CoveringPoint t, cplx z,
                std::optional<double> delta = {});

/// ∂_{m1,t} u = ∂_{m2,z} u at z = 0: [φ(s)]_θ[e_m(s/t)/s], m = m2/m1.
cplx jump_case2(const MomentFunction& m1, const MomentFunction& m2, const RationalDatum& phi, CoveringPoint t,
                std::optional<double> delta = {});

/// ∂_{m1,t}^p u = ∂_{m2,z}^q u at z = 0 through v(τ) = u(τ^{q/p}): the Case 3
/// equation with m̃1(n) = m1(pn/q) is evaluated at τ = t^{p/q}.
cplx jump_case34(int p, int q, const MomentFunction& m1, const MomentFunction& m2, const RationalDatum& phi,
                 CoveringPoint t, std::optional<double> delta = {});

/// C_3(τ) = Σ (-τ)^n / (n! Γ(1 - (n+1)/3)).
cplx ecalle_c3(cplx tau);

/// (∂_t - ∂_z³) u = 0: [φ(z + s)]_{arg(z0-z)}[C_3(s/t^{1/3}) / (3 t^{1/3})].
cplx jump_ecalle(const RationalDatum& phi, CoveringPoint t, cplx z, std::optional<double> delta = {});

struct JumpReport {
    double direction = 0.0;
    Rational K{0};
    CoveringPoint t;
    cplx z{0.0};
    cplx lateral_value{0.0};
    cplx residue_value{0.0};
    double abs_discrepancy = 0.0;
    double lateral_error = 0.0;
    std::vector<int> l;       ///< multi-index after the jump (1-based)
    std::vector<int> l_prime; ///< multi-index before the jump
    std::string error;        ///< nonempty when the point failed
};

struct GridPoint {
    CoveringPoint t;
    cplx z{0.0};
};

/// l'_i for l_i = j: j - 1 when j > 1, n_i when j = 1.
int adjacent_index(int j, int n);

/// Stokes direction j (1-based among the q directions in [0, 2(q/p)π) at
/// z = 0), moved to the point z by δ(z) = δ + (q/p)(arg(z0 - z) - arg z0).
double stokes_direction(const SimpleEquation& eq, int j, cplx z);

/// Jumps of a single-factor equation at its j-th Stokes direction.
std::vector<JumpReport> jump_report(const SimpleEquation& eq, int j, const std::vector<GridPoint>& grid,
                                    double tol = 1e-12);

/// Jumps of a product equation at direction j of the level formed by the
/// factors with pole order q = level_q. Components come from decompose().
/// Levels with more than one root are rejected.
std::vector<JumpReport> jump_report(const ProductEquation& eq, const std::vector<RationalDatum>& components,
                                    int level_q, int j, const std::vector<GridPoint>& grid, double tol = 1e-12);

} // namespace mpde
