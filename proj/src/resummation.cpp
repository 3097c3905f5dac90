#include "mpde/resummation.hpp"

#include "mpde/errors.hpp"
#include "mpde/wright.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mpde {

namespace {

constexpr double kSingularTol = 1e-9;

double log_scale(const RationalDatum& phi)
{
    double m = 1.0;
    for (const auto& c : phi.poles()) m = std::max(m, std::abs(c));
    for (const auto& c : phi.poly()) m = std::max(m, std::abs(c));
    return std::log(m);
}

// ∂_{m2}^k φ(z) / m2(k) = a_k(z) holds for z = 0 with any m2 and for every z
// when ∂_{m2} = ∂_z.
void require_series_coefficients(const SimpleEquation& eq, cplx z)
{
    if (z != cplx(0) && !(eq.m2 == MomentFunction::gamma(1)) && !eq.datum.is_entire())
        throw SpecError("moment derivative in z is not translation invariant; only z = 0 is supported unless m2 = Γ_1");
}

cplx datum_at(const RationalDatum& phi, cplx w)
{
    return phi(w);
}

} // namespace

bool SimpleEquation::convergent() const
{
    return Rational(p) * s1() >= Rational(q) * s2();
}

Rational SimpleEquation::a() const
{
    return Rational(q) * s2() / Rational(p);
}

Rational SimpleEquation::nu() const
{
    return s1() / a();
}

Rational SimpleEquation::K() const
{
    if (convergent()) throw SpecError("convergent equation has no summability level");
    return 1 / (a() - s1());
}

MomentFunction SimpleEquation::borel_moment() const
{
    return MomentFunction::gamma(a()) / m1;
}

void SimpleEquation::validate() const
{
    if (p < 1 || q < 1 || beta < 1) throw SpecError("p, q and beta must be positive integers");
    if (lambda0 == cplx(0)) throw SpecError("lambda0 must be nonzero");
    if (s1() <= Rational(0)) throw SpecError("m1 must have positive order");
    if (s2() <= Rational(0)) throw SpecError("m2 must have positive order");
}

bool SimpleEquation::gamma_moments() const
{
    return m1 == MomentFunction::gamma(s1()) && m2 == MomentFunction::gamma(s2());
}

std::vector<double> singular_directions_between(const SimpleEquation& eq, cplx z, double lo, double hi)
{
    std::vector<double> out;
    if (eq.datum.is_entire()) return out;
    double theta = std::arg(eq.datum.branch_point() - z);
    double base = (eq.q * theta - std::arg(eq.lambda0)) / eq.p;
    double step = 2 * pi / eq.p;
    auto j0 = static_cast<long long>(std::ceil((lo - base) / step));
    auto j1 = static_cast<long long>(std::floor((hi - base) / step));
    for (long long j = j0; j <= j1; ++j) out.push_back(base + step * static_cast<double>(j));
    return out;
}

double distance_to_singular(const SimpleEquation& eq, double d, cplx z)
{
    if (eq.datum.is_entire()) return std::numeric_limits<double>::infinity();
    double theta = std::arg(eq.datum.branch_point() - z);
    double base = (eq.q * theta - std::arg(eq.lambda0)) / eq.p;
    double step = 2 * pi / eq.p;
    double nearest = base + step * std::round((d - base) / step);
    return std::abs(d - nearest);
}

cplx borel_closed_form(const SimpleEquation& eq, cplx s, cplx z)
{
    eq.validate();
    if (!(eq.m2 == MomentFunction::gamma(eq.s2())))
        throw SpecError("closed-form Borel transform needs m2 = Γ_{s2}");
    require_series_coefficients(eq, z);
    cplx c = std::pow(eq.lambda0 * std::pow(s, eq.p), 1.0 / eq.q);
    cplx sum = 0.0;
    for (int l = 0; l < eq.q; ++l) sum += eq.datum(z + std::polar(1.0, 2 * pi * l / eq.q) * c);
    return sum / static_cast<double>(eq.q);
}

SeriesValue borel_series(const SimpleEquation& eq, int M, cplx s, cplx z)
{
    eq.validate();
    require_series_coefficients(eq, z);
    if (M < 0) throw std::invalid_argument("negative truncation");
    auto a = eq.datum.taylor(z, eq.q * M);
    double ad = to_double(eq.a());
    SeriesValue out;
    double prev = 0.0;
    for (int n = 0; n <= M; ++n) {
        cplx an = a[static_cast<std::size_t>(eq.q) * n];
        cplx term = 0.0;
        if (an != cplx(0)) {
            double lg = eq.m2.log_eval(eq.q * n) - std::lgamma(1.0 + ad * eq.p * n);
            cplx pw = n == 0 ? cplx(1) : std::exp(static_cast<double>(n) * std::log(eq.lambda0) +
                                                  static_cast<double>(eq.p * n) * std::log(s));
            if (s == cplx(0) && n > 0) pw = 0.0;
            term = an * std::exp(lg) * pw;
        }
        out.value += term;
        out.tail = std::abs(term);
        out.diverging = n > 0 && out.tail > prev && out.tail > 0.0;
        prev = out.tail;
        ++out.terms;
    }
    return out;
}

SeriesValue convergent_sum(const SimpleEquation& eq, CoveringPoint t, cplx z, double tol)
{
    eq.validate();
    if (!eq.convergent()) throw SpecError("series is divergent; use a directional sum");
    require_series_coefficients(eq, z);
    const bool entire = eq.datum.is_entire();
    for (int N = 32; N <= 2048; N *= 2) {
        auto a = eq.datum.taylor(z, eq.q * N);
        SeriesValue out;
        int small = 0;
        bool done = false;
        for (int n = 0; n <= N; ++n) {
            if (entire && eq.q * n > eq.datum.poly_degree()) {
                done = true;
                break;
            }
            cplx an = a[static_cast<std::size_t>(eq.q) * n];
            cplx term = 0.0;
            if (an != cplx(0) && (n == 0 || t.modulus > 0.0)) {
                double lg = eq.m2.log_eval(eq.q * n) - eq.m1.log_eval(eq.p * n);
                cplx pw = n == 0 ? cplx(1)
                                 : std::exp(static_cast<double>(n) * std::log(eq.lambda0)) * t.power(eq.p * n);
                term = an * std::exp(lg) * pw;
            }
            if (!std::isfinite(term.real()) || !std::isfinite(term.imag()))
                throw NumericalFailure("convergent series overflowed", std::abs(out.value));
            out.value += term;
            out.tail = std::abs(term);
            ++out.terms;
            small = out.tail <= tol * std::max(std::abs(out.value), 1e-300) ? small + 1 : 0;
            if (small >= 4) {
                done = true;
                break;
            }
        }
        if (done) return out;
    }
    throw NumericalFailure("convergent series did not settle (point outside the disc of convergence?)");
}

LaplaceResult laplace_sum_direction(const std::function<cplx(cplx)>& v, const ClassicalKernel& kernel, double d,
                                    CoveringPoint t, double tol, int growth_degree)
{
    const double k = to_double(kernel.k);
    const double kappa = k * (d - t.arg);
    if (std::abs(kappa) >= pi / 2)
        throw KernelNonDecay("kernel does not decay: |k (d - arg t)| >= pi/2");
    const double c = std::cos(kappa);
    const double L0 = -std::log(tol * 1e-2) + 2.0;
    double Rx = L0 / c;
    for (int it = 0; it < 4; ++it)
        Rx = (L0 + growth_degree * std::log(2.0 + t.modulus * std::pow(Rx, 1.0 / k))) / c;
    const cplx rot = std::polar(1.0, kappa);
    auto f = [&](double r) {
        cplx s = std::polar(t.modulus * std::pow(r, 1.0 / k), d);
        return std::exp(-r * rot) * v(s) * rot;
    };
    auto q = integrate_panels(f, Rx, 16, tol);
    if (!q.converged) throw NumericalFailure("Laplace quadrature missed its tolerance", std::abs(q.value));
    LaplaceResult out;
    out.value = q.value;
    out.error = q.error + std::abs(f(Rx));
    out.evaluations = q.evaluations;
    out.radius = Rx;
    std::ostringstream os;
    os << "x = (s/t)^" << to_string(kernel.k) << " on arg x = " << kappa << ", x <= " << Rx;
    out.substitution = os.str();
    return out;
}

LaplaceResult directional_sum(const SimpleEquation& eq, double d, CoveringPoint t, cplx z, double tol)
{
    eq.validate();
    if (eq.convergent()) {
        auto s = convergent_sum(eq, t, z, std::min(tol, 1e-14));
        LaplaceResult out;
        out.value = s.value;
        out.error = s.tail;
        out.evaluations = s.terms;
        out.substitution = "convergent series";
        return out;
    }
    if (!eq.gamma_moments()) throw SpecError("numerical summation needs m1 = Γ_{s1} and m2 = Γ_{s2}");
    require_series_coefficients(eq, z);
    const double half = pi / (2 * to_double(eq.K()));
    const double off = d - t.arg;
    if (std::abs(off) >= half) throw KernelNonDecay("|d - arg t| >= pi/(2K): kernel does not decay on the ray");
    if (distance_to_singular(eq, d, z) < kSingularTol)
        throw SingularDirection("summation direction is singular", d);

    const double a = to_double(eq.a());
    const double s2 = to_double(eq.s2());
    const double beta = off / a;
    WrightKernel M(eq.nu());
    const cplx c = std::polar(std::pow(std::abs(eq.lambda0), 1.0 / eq.q) * std::pow(t.modulus, double(eq.p) / eq.q),
                              (std::arg(eq.lambda0) + eq.p * t.arg) / eq.q);
    std::vector<cplx> roots(eq.q);
    for (int l = 0; l < eq.q; ++l) roots[l] = std::polar(1.0, 2 * pi * l / eq.q) * c;
    const cplx rot = std::polar(1.0, beta);
    const RationalDatum& phi = eq.datum;

    auto f = [&](double r) {
        cplx Y = std::polar(std::pow(r, s2), s2 * beta);
        cplx sum = 0.0;
        for (const auto& w : roots) sum += datum_at(phi, z + w * Y);
        return sum / static_cast<double>(eq.q) * M.value(r * rot) * rot;
    };

    const double L0 = -std::log(tol * 1e-2);
    const int D = std::max(phi.poly_degree(), 0);
    double L = L0, R = 1.0;
    for (int it = 0; it < 3; ++it) {
        R = M.decay_radius(beta, L);
        double S = std::abs(c) * std::pow(R, s2);
        L = L0 + D * std::log(2.0 + std::abs(z) + S) + log_scale(phi);
    }
    double scale = 1.0;
    try {
        scale = std::max(1.0, std::abs(phi(z)));
    } catch (const PoleCollision&) {
    }
    auto q = integrate_panels(f, R, 24, tol * scale);
    if (!q.converged) throw NumericalFailure("directional Laplace quadrature missed its tolerance", std::abs(q.value));
    LaplaceResult out;
    out.value = q.value;
    out.error = q.error + std::abs(f(R)) * R;
    out.evaluations = q.evaluations;
    out.radius = R;
    std::ostringstream os;
    os << "s = t y^" << to_string(eq.a()) << ", y on arg " << beta << " up to " << R << ", kernel M_" << to_string(eq.nu());
    out.substitution = os.str();
    return out;
}

double default_lateral_offset(const SimpleEquation& eq, double delta, CoveringPoint t, cplx z)
{
    (void)z;
    const double half = pi / (2 * to_double(eq.K()));
    const double room = half - std::abs(t.arg - delta);
    if (room <= 0) throw KernelNonDecay("arg t lies outside the sector of both lateral sums");
    const double gap = eq.datum.is_entire() ? std::numeric_limits<double>::infinity() : 2 * pi / eq.p;
    return std::min(gap / 4, room / 2);
}

LateralPair lateral_sums(const SimpleEquation& eq, double delta, std::optional<double> eta, CoveringPoint t, cplx z,
                         double tol)
{
    LateralPair out;
    out.direction = delta;
    out.offset = eta ? *eta : default_lateral_offset(eq, delta, t, z);
    if (out.offset <= 0) throw std::invalid_argument("lateral offset must be positive");
    if (!eq.datum.is_entire() && out.offset >= 2 * pi / eq.p)
        throw std::invalid_argument("lateral offset reaches the next singular direction");
    auto plus = directional_sum(eq, delta + out.offset, t, z, tol);
    auto minus = directional_sum(eq, delta - out.offset, t, z, tol);
    out.u_plus = plus.value;
    out.u_minus = minus.value;
    out.nodes = plus.evaluations + minus.evaluations;
    out.error = plus.error + minus.error;
    return out;
}

namespace {

cplx v_integral_beta1(const SimpleEquation& eq, cplx t, cplx z, const VIntegralOptions& opts, double eps,
                      double& err)
{
    const Rational a = eq.a();
    const Rational s2r = eq.s2();
    const double s2 = to_double(s2r);
    const ClassicalKernel e2(1 / s2r);
    const double rho = std::pow(eps, 1.0 / s2) * std::cos(opts.psi / s2) -
                       std::pow(std::abs(t * eq.lambda0), 1.0 / to_double(a)) - std::pow(std::abs(z), 1.0 / s2);
    if (rho <= 0) throw SpecError("contour radius too small: the inner ray integrand does not decay");
    const double L = -std::log(opts.tol) + 5.0;
    const double R = std::pow(L / rho, s2);

    double ray_err = 0.0;
    auto G = [&](cplx w) {
        const double theta = -std::arg(w) + opts.psi;
        const cplx rot = std::polar(1.0, theta);
        auto f = [&](double r) {
            cplx zeta = (opts.r0 + r) * rot;
            cplx x = zeta * w;
            cplx E1 = mittag_leffler(a, t * eq.lambda0 * std::pow(zeta, eq.q)).value;
            cplx E2 = z == cplx(0) ? cplx(1) : mittag_leffler(s2r, zeta * z).value;
            return E1 * E2 * kernel_e(e2, x).value / x * rot;
        };
        auto q = integrate_panels(f, R, 16, opts.tol);
        ray_err += q.error;
        return q.value;
    };

    const int N = opts.nodes;
    std::vector<cplx> vals(N);
    for (int j = 0; j < N; ++j) {
        cplx w = std::polar(eps, 2 * pi * j / N);
        vals[j] = eq.datum(w) * G(w) * w;
    }
    cplx full = 0.0, halfsum = 0.0;
    for (int j = 0; j < N; ++j) {
        full += vals[j];
        if (j % 2 == 0) halfsum += vals[j];
    }
    full /= static_cast<double>(N);
    halfsum /= static_cast<double>(N / 2);
    err += std::abs(full - halfsum) + ray_err / N;
    return full;
}

} // namespace

VIntegralResult v_integral(const SimpleEquation& eq, cplx t, cplx z, const VIntegralOptions& opts)
{
    eq.validate();
    if (eq.p != 1) throw SpecError("double-contour representation implemented for p = 1");
    if (!eq.gamma_moments()) throw SpecError("double-contour representation needs Γ-type moments");
    if (opts.nodes < 8 || opts.nodes % 2) throw std::invalid_argument("node count must be even and >= 8");
    const double s2 = to_double(eq.s2());
    if (std::abs(opts.psi) >= s2 * pi / 2) throw SpecError("inner ray angle outside (-s2 pi/2, s2 pi/2)");

    const double zmax = eq.datum.is_entire() ? std::numeric_limits<double>::infinity()
                                             : std::abs(eq.datum.branch_point());
    const double eps_min = std::pow(std::pow(std::abs(t * eq.lambda0), 1.0 / to_double(eq.a())) +
                                        std::pow(std::abs(z), 1.0 / s2),
                                    s2) /
                           std::pow(std::cos(opts.psi / s2), s2);
    double eps;
    if (opts.eps) {
        eps = *opts.eps;
    } else if (std::isinf(zmax)) {
        eps = std::max(2 * eps_min, 1.0);
    } else {
        eps = eps_min > 0 ? std::sqrt(eps_min * zmax) : zmax / 2;
    }
    if (!(std::abs(z) < eps && eps < zmax)) throw SpecError("contour radius must satisfy |z| < eps < |z0|");

    VIntegralResult out;
    out.eps = eps;
    if (eq.beta == 1) {
        out.value = v_integral_beta1(eq, t, z, opts, eps, out.error);
        return out;
    }
    // t^{β-1}/(β-1)! ∂_t^{β-1} by central differences
    out.experimental = true;
    const int n = eq.beta - 1;
    const double h = 1e-2 * std::max(std::abs(t), 1e-3);
    cplx acc = 0.0;
    double binom = 1.0;
    for (int k = 0; k <= n; ++k) {
        cplx tk = t + (0.5 * n - k) * h;
        acc += (k % 2 ? -1.0 : 1.0) * binom * v_integral_beta1(eq, tk, z, opts, eps, out.error);
        binom = binom * (n - k) / (k + 1);
    }
    double fact = std::tgamma(n + 1.0);
    out.value = std::pow(t, n) / fact * acc / std::pow(h, n);
    out.error += std::abs(out.value) * h * h;
    return out;
}

SimpleEquation ProductEquation::factor_equation(std::size_t i, const RationalDatum& psi) const
{
    SimpleEquation eq;
    eq.p = 1;
    eq.q = factors.at(i).q;
    eq.lambda0 = factors.at(i).lambda;
    eq.m1 = m1;
    eq.m2 = MomentFunction::gamma(1);
    eq.datum = psi;
    return eq;
}

std::vector<RationalDatum> decompose(const ProductEquation& eq, const std::vector<std::vector<RationalSymbol>>* symbols)
{
    const std::size_t n = eq.factors.size();
    if (eq.data.size() != n) throw SpecError("need one Cauchy datum per factor");
    std::vector<std::vector<RationalSymbol>> built;
    if (!symbols) {
        built = vandermonde_symbols(eq.factors);
        symbols = &built;
    }
    std::vector<RationalDatum> psi(n);
    for (std::size_t i = 0; i < n; ++i) {
        psi[i] = apply_row((*symbols)[i], eq.data);
    }
    for (std::size_t j = 0; j < n; ++j) {
        RationalDatum back;
        for (std::size_t i = 0; i < n; ++i) {
            ZetaPoly mu_j = ZetaPoly::constant(1.0);
            for (std::size_t r = 0; r < j; ++r) mu_j = mu_j * eq.factors[i].mu();
            back = back + apply_operator(mu_j, psi[i]);
        }
        double scale = 1.0;
        for (const auto& c : eq.data[j].poles()) scale = std::max(scale, std::abs(c));
        for (const auto& c : eq.data[j].poly()) scale = std::max(scale, std::abs(c));
        if (back.coefficient_distance(eq.data[j]) > 1e-9 * scale)
            throw NumericalFailure("decomposition does not reproduce the Cauchy data");
    }
    return psi;
}

MultisumResult multisum(const ProductEquation& eq, const std::vector<RationalDatum>& components,
                        const std::vector<double>& directions, CoveringPoint t, cplx z, double tol)
{
    if (components.size() != eq.factors.size() || directions.size() != eq.factors.size())
        throw std::invalid_argument("one component and one direction per factor");
    MultisumResult out;
    for (std::size_t i = 0; i < components.size(); ++i) {
        auto r = directional_sum(eq.factor_equation(i, components[i]), directions[i], t, z, tol);
        out.components.push_back(r.value);
        out.value += r.value;
        out.error += r.error;
    }
    return out;
}

} // namespace mpde
