#include "mpde/jumps.hpp"

#include "mpde/errors.hpp"
#include "mpde/jet.hpp"
#include "mpde/wright.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace mpde {

namespace {

constexpr double kOnRay = 1e-9;

const WrightKernel& c3_kernel()
{
    static const WrightKernel k(Rational(1, 3));
    return k;
}

void require_translation_invariance(const SimpleEquation& eq, cplx z)
{
    if (z != cplx(0) && !(eq.m2 == MomentFunction::gamma(1)))
        throw SpecError("jumps at z != 0 need m2 = Γ_1 (translation-invariant moment derivative)");
}

} // namespace

std::vector<std::pair<cplx, int>> Hyperfunction::singular_locus() const
{
    if (defining.is_entire()) return {};
    return {{defining.branch_point(), defining.max_order()}};
}

Hyperfunction hyperfunction_at(const RationalDatum& phi, cplx z)
{
    Hyperfunction hf;
    if (phi.is_entire()) {
        hf.defining = phi.shifted(z);
        return hf;
    }
    if (phi.branch_point() == z) throw PoleCollision("z coincides with the branch point");
    hf.defining = phi.shifted(z);
    hf.support = std::arg(hf.defining.branch_point());
    return hf;
}

cplx pair(const Hyperfunction& hf, const KernelJet& kernel)
{
    cplx res = 0.0;
    for (const auto& [s, order] : hf.singular_locus()) {
        auto kc = kernel(s, static_cast<std::size_t>(order - 1));
        // c_k/(s* - s)^k = (-1)^k c_k/(s - s*)^k
        for (int k = 1; k <= order; ++k) res += hf.defining.laurent_negative(k) * kc[k - 1];
    }
    return kPairingOrientation * cplx(0, 2 * pi) * res;
}

QuadratureResult pair_two_edge(const Hyperfunction& hf, const std::function<cplx(cplx)>& kernel, double eta,
                               double radius, double tol)
{
    QuadratureResult out;
    for (int side : {+1, -1}) {
        const cplx rot = std::polar(1.0, hf.support + side * eta);
        auto f = [&](double r) {
            cplx s = r * rot;
            return hf.defining(s) * kernel(s) * rot;
        };
        auto q = integrate_panels(f, radius, 32, tol);
        out.value += static_cast<double>(side) * q.value;
        out.error += q.error;
        out.evaluations += q.evaluations;
        out.converged = out.converged && q.converged;
    }
    return out;
}

cplx pair_circle(const Hyperfunction& hf, const std::function<cplx(cplx)>& kernel, double radius, int nodes)
{
    cplx total = 0.0;
    for (const auto& loc : hf.singular_locus()) {
        cplx s0 = loc.first;
        // ∮ f ds = 2πi · mean(f(s) (s - s0))
        auto f = [&](double th) {
            cplx h = std::polar(radius, th);
            return hf.defining(s0 + h) * kernel(s0 + h) * h;
        };
        total += cplx(0, 2 * pi) * periodic_mean(f, nodes);
    }
    return kPairingOrientation * total;
}

MomentJumpKernel::MomentJumpKernel(const Rational& nu, const Rational& s2, cplx T, int q)
    : nu_(nu), s2_(to_double(s2)), T_(T), q_(q)
{
}

double MomentJumpKernel::y_arg(cplx sigma) const
{
    return std::arg(sigma / T_) / s2_;
}

cplx MomentJumpKernel::value(cplx sigma) const
{
    cplx y = std::exp(std::log(sigma / T_) / s2_);
    return y * WrightKernel(nu_).value(y) / (s2_ * static_cast<double>(q_) * sigma);
}

std::vector<cplx> MomentJumpKernel::jet(cplx sigma, std::size_t order) const
{
    WrightKernel M(nu_);
    cplx ystar = std::exp(std::log(sigma / T_) / s2_);
    // y(σ) = y* (σ/σ*)^{1/s2}
    Jet u = Jet::variable(order + 1, sigma) * (1.0 / sigma);
    Jet y = pow(u, 1.0 / s2_) * ystar;
    Jet m = compose(M.taylor(ystar, order + 1), y);
    Jet g = (m.truncated(order) * y.derivative()) * (1.0 / q_);
    return g.coefficients();
}

MomentJumpKernel jump_kernel_for(const SimpleEquation& eq, double delta, CoveringPoint t, cplx z)
{
    const cplx s_star = eq.datum.branch_point() - z;
    const double theta = std::arg(s_star);
    const double al = std::arg(eq.lambda0);
    const double l = std::round((eq.q * theta - al - eq.p * delta) / (2 * pi));
    const double argT = (eq.p * t.arg + al + 2 * pi * l) / eq.q;
    const cplx T = std::polar(std::pow(std::abs(eq.lambda0), 1.0 / eq.q) * std::pow(t.modulus, double(eq.p) / eq.q), argT);
    MomentJumpKernel k(eq.nu(), eq.s2(), T, eq.q);
    const double half = (1.0 - to_double(eq.nu())) * pi / 2;
    if (std::abs(k.y_arg(s_star)) >= half)
        throw KernelNonDecay("t lies outside the sector where the jump kernel decays on the Stokes ray");
    return k;
}

cplx jump_simple(const SimpleEquation& eq, double delta, CoveringPoint t, cplx z)
{
    eq.validate();
    if (eq.convergent() || eq.datum.is_entire()) return 0.0;
    if (!eq.gamma_moments()) throw SpecError("jumps need m1 = Γ_{s1} and m2 = Γ_{s2}");
    require_translation_invariance(eq, z);
    if (distance_to_singular(eq, delta, z) > kOnRay) return 0.0;
    auto hf = hyperfunction_at(eq.datum, z);
    auto kernel = jump_kernel_for(eq, delta, t, z);
    return pair(hf, [&](cplx s, std::size_t n) { return kernel.jet(s, n); });
}

cplx jump_case1(int p, int q, const MomentFunction& m1, const RationalDatum& phi, CoveringPoint t, cplx z,
                std::optional<double> delta)
{
    if (!m1.is_classical()) throw SpecError("Case 1 needs a classical moment m1 = Γ_{s1}");
    SimpleEquation eq;
    eq.p = p;
    eq.q = q;
    eq.m1 = m1;
    eq.m2 = MomentFunction::gamma(1);
    eq.datum = phi;
    if (!(Rational(p) * eq.s1() < Rational(q))) throw SpecError("Case 1 needs 0 < p s1 < q");
    if (phi.is_entire()) return 0.0;
    double d = delta ? *delta : q * std::arg(phi.branch_point() - z) / p;
    return jump_simple(eq, d, t, z);
}

cplx jump_case2(const MomentFunction& m1, const MomentFunction& m2, const RationalDatum& phi, CoveringPoint t,
                std::optional<double> delta)
{
    SimpleEquation eq;
    eq.m1 = m1;
    eq.m2 = m2;
    eq.datum = phi;
    if (!(eq.s2() > eq.s1())) throw SpecError("Case 2 needs s2 > s1");
    if (phi.is_entire()) return 0.0;
    double d = delta ? *delta : std::arg(phi.branch_point());
    return jump_simple(eq, d, t, 0.0);
}

cplx jump_case34(int p, int q, const MomentFunction& m1, const MomentFunction& m2, const RationalDatum& phi,
                 CoveringPoint t, std::optional<double> delta)
{
    const Rational s1 = m1.order(), s2 = m2.order();
    if (!(m1 == MomentFunction::gamma(s1))) throw SpecError("Case 4 reduction needs m1 = Γ_{s1}");
    if (!(Rational(0) < Rational(p) * s1 && Rational(p) * s1 < Rational(q) * s2))
        throw SpecError("Case 4 needs 0 < p s1 < q s2");
    if (phi.is_entire()) return 0.0;
    // v(τ) = u(τ^{q/p}) solves the Case 3 equation with m̃1 = Γ_{s1 p/q}
    SimpleEquation eq3;
    eq3.p = q;
    eq3.q = q;
    eq3.m1 = MomentFunction::gamma(s1 * Rational(p) / Rational(q));
    eq3.m2 = m2;
    eq3.datum = phi;
    double d = delta ? *delta : q * std::arg(phi.branch_point()) / p;
    CoveringPoint tau{std::pow(t.modulus, double(p) / q), t.arg * p / q};
    return jump_simple(eq3, d * p / q, tau, 0.0);
}

cplx ecalle_c3(cplx tau)
{
    return c3_kernel().value(tau);
}

cplx jump_ecalle(const RationalDatum& phi, CoveringPoint t, cplx z, std::optional<double> delta)
{
    if (phi.is_entire()) return 0.0;
    auto hf = hyperfunction_at(phi, z);
    const cplx s_star = hf.defining.branch_point();
    const double theta = std::arg(s_star);
    const double d = delta ? *delta : 3 * theta;
    if (std::abs(std::remainder(d - 3 * theta, 2 * pi)) > kOnRay) return 0.0;
    const double l = std::round((3 * theta - d) / (2 * pi));
    const cplx T = std::polar(std::cbrt(t.modulus), (t.arg + 2 * pi * l) / 3);
    if (std::abs(std::arg(s_star / T)) >= pi / 3)
        throw KernelNonDecay("t lies outside the sector where C_3 decays on the Stokes ray");
    auto jet = [&](cplx s, std::size_t n) {
        auto c = c3_kernel().taylor(s / T, n);
        cplx scale = 1.0 / (3.0 * T);
        for (auto& x : c) {
            x *= scale;
            scale /= T;
        }
        return c;
    };
    return pair(hf, jet);
}

int adjacent_index(int j, int n)
{
    return j > 1 ? j - 1 : n;
}

namespace {

// k-index (in δ = (q arg z0 - arg λ0 + 2πk)/p) of the j-th direction in [0, 2Qπ) at z = 0.
long long direction_k(const SimpleEquation& eq, int j, double Q)
{
    const int n = static_cast<int>(std::lround(Q * eq.p));
    if (j < 1 || j > n) throw SpecError("direction index out of range 1.." + std::to_string(n));
    const double base = (eq.q * std::arg(eq.datum.branch_point()) - std::arg(eq.lambda0)) / eq.p;
    const double step = 2 * pi / eq.p;
    auto k0 = static_cast<long long>(std::ceil(-base / step - 1e-12));
    return k0 + (j - 1);
}

double direction_at(const SimpleEquation& eq, long long k, cplx z)
{
    return (eq.q * std::arg(eq.datum.branch_point() - z) - std::arg(eq.lambda0) + 2 * pi * static_cast<double>(k)) / eq.p;
}

// 1-based gap index g with δ_g < d < δ_{g+1} (cyclic modulo 2Qπ).
int gap_index(const SimpleEquation& eq, double d, cplx z, double Q)
{
    const int n = static_cast<int>(std::lround(Q * eq.p));
    const double period = 2 * pi * Q;
    double dd = d - period * std::floor(d / period);
    int g = 0;
    for (int j = 1; j <= n; ++j) {
        double dj = direction_at(eq, direction_k(eq, j, Q), z);
        dj -= period * std::floor(dj / period);
        if (dj < dd) g = std::max(g, j);
    }
    return g == 0 ? n : g;
}

} // namespace

double stokes_direction(const SimpleEquation& eq, int j, cplx z)
{
    if (eq.datum.is_entire()) throw SpecError("entire datum has no Stokes directions");
    const double Q = double(eq.q) / eq.p;
    return direction_at(eq, direction_k(eq, j, Q), z);
}

std::vector<JumpReport> jump_report(const SimpleEquation& eq, int j, const std::vector<GridPoint>& grid, double tol)
{
    std::vector<JumpReport> out;
    const double Q = double(eq.q) / eq.p;
    const int n = eq.q;
    for (const auto& g : grid) {
        JumpReport r;
        r.t = g.t;
        r.z = g.z;
        r.l = {j};
        r.l_prime = {adjacent_index(j, n)};
        try {
            r.K = eq.K();
            r.direction = eq.datum.is_entire() ? g.t.arg : direction_at(eq, direction_k(eq, j, Q), g.z);
            auto lp = lateral_sums(eq, r.direction, std::nullopt, g.t, g.z, tol);
            r.lateral_value = lp.difference();
            r.lateral_error = lp.error;
            r.residue_value = jump_simple(eq, r.direction, g.t, g.z);
            r.abs_discrepancy = std::abs(r.lateral_value - r.residue_value);
        } catch (const std::exception& e) {
            r.error = e.what();
        }
        out.push_back(r);
    }
    return out;
}

std::vector<JumpReport> jump_report(const ProductEquation& eq, const std::vector<RationalDatum>& components,
                                    int level_q, int j, const std::vector<GridPoint>& grid, double tol)
{
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < eq.factors.size(); ++i)
        if (eq.factors[i].q == level_q) members.push_back(i);
    if (members.empty()) throw SpecError("no factor with pole order " + std::to_string(level_q));
    if (members.size() > 1)
        throw SpecError("level with several roots: jumps at shared directions are not separated (geometry only)");
    const std::size_t fi = members.front();
    const SimpleEquation eqi = eq.factor_equation(fi, components.at(fi));

    // divergent levels, q ascending; Q = lcm of their pole orders
    std::vector<std::size_t> divergent;
    for (std::size_t i = 0; i < eq.factors.size(); ++i)
        if (!eq.factor_equation(i, components[i]).convergent()) divergent.push_back(i);
    std::sort(divergent.begin(), divergent.end(),
              [&](std::size_t a, std::size_t b) { return eq.factors[a].q < eq.factors[b].q; });
    std::int64_t lcm = 1;
    for (auto i : divergent) lcm = lcm64(lcm, eq.factors[i].q);
    const double Q = static_cast<double>(lcm);

    std::vector<JumpReport> out;
    for (const auto& g : grid) {
        JumpReport r;
        r.t = g.t;
        r.z = g.z;
        try {
            r.K = eqi.K();
            r.direction = direction_at(eqi, direction_k(eqi, j, Q), g.z);
            const double eta = default_lateral_offset(eqi, r.direction, g.t, g.z);
            std::vector<double> dplus(eq.factors.size()), dminus;
            for (std::size_t k = 0; k < eq.factors.size(); ++k) {
                if (k == fi) continue;
                auto eqk = eq.factor_equation(k, components[k]);
                double d = g.t.arg;
                if (!eqk.convergent() && distance_to_singular(eqk, d, g.z) < 0.05)
                    d += 0.25 * std::min(pi / (2 * to_double(eqk.K())), 2 * pi / eqk.p);
                dplus[k] = d;
            }
            dminus = dplus;
            dplus[fi] = r.direction + eta;
            dminus[fi] = r.direction - eta;
            for (auto k : divergent) {
                auto eqk = eq.factor_equation(k, components[k]);
                if (k == fi) {
                    r.l.push_back(j);
                    r.l_prime.push_back(adjacent_index(j, static_cast<int>(std::lround(Q))));
                } else {
                    int gi = gap_index(eqk, dplus[k], g.z, Q);
                    r.l.push_back(gi);
                    r.l_prime.push_back(gi);
                }
            }
            auto up = multisum(eq, components, dplus, g.t, g.z, tol);
            auto um = multisum(eq, components, dminus, g.t, g.z, tol);
            r.lateral_value = up.value - um.value;
            r.lateral_error = up.error + um.error;
            r.residue_value = jump_simple(eqi, r.direction, g.t, g.z);
            r.abs_discrepancy = std::abs(r.lateral_value - r.residue_value);
        } catch (const std::exception& e) {
            r.error = e.what();
        }
        out.push_back(r);
    }
    return out;
}

} // namespace mpde
