#include "doctest.h"

#include "mpde/errors.hpp"
#include "mpde/jet.hpp"
#include "mpde/jumps.hpp"

#include <boost/math/special_functions/airy.hpp>

#include <cmath>

using namespace mpde;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

SimpleEquation heat(const RationalDatum& phi)
{
    SimpleEquation eq;
    eq.q = 2;
    eq.datum = phi;
    return eq;
}

SimpleEquation airy(const RationalDatum& phi)
{
    SimpleEquation eq;
    eq.q = 3;
    eq.datum = phi;
    return eq;
}

// e^{-s²/4t}/√(4πt) as a jet in s, built from exp of a polynomial jet
std::vector<cplx> heat_kernel_jet(cplx s, std::size_t n, cplx t)
{
    Jet h = Jet::variable(n, s);
    return (exp(h * h * (-1.0 / (4.0 * t))) * (1.0 / std::sqrt(4 * pi * t))).coefficients();
}

} // namespace

TEST_CASE("pairing orientation fixed by the heat lateral sums")
{
    // φ = 1/(1 - z), z = 0: u^{0+} - u^{0-} = +2πi e^{-1/(4t)} / √(4πt)
    auto eq = heat(RationalDatum::simple_pole(1.0));
    for (double r : {0.1, 0.2, 0.4}) {
        auto t = CoveringPoint::polar(r, 0.0);
        cplx lateral = lateral_sums(eq, 0.0, std::nullopt, t, 0.0).difference();
        cplx closed = cplx(0, 2 * pi) * std::exp(-1.0 / (4 * r)) / std::sqrt(4 * pi * r);
        CHECK(rel(lateral, closed) < 1e-9);
        CHECK(rel(jump_simple(eq, 0.0, t, 0.0), closed) < 1e-12);
    }
    CHECK(kPairingOrientation == -1.0);
}

TEST_CASE("pairing: residues, circle contours and the entire class")
{
    cplx z0(0.8, 0.6);
    RationalDatum phi(z0, {1.0, cplx(0.2, -0.1), 0.5}, {1.0, 2.0});
    auto hf = hyperfunction_at(phi, 0.0);
    CHECK(hf.support == doctest::Approx(std::arg(z0)));
    REQUIRE(hf.singular_locus().size() == 1);
    CHECK(hf.singular_locus()[0].second == 3);
    cplx t(0.3, 0.1);
    auto kfun = [&](cplx s) { return std::exp(-s * s / (4.0 * t)) / std::sqrt(4 * pi * t); };
    cplx byres = pair(hf, [&](cplx s, std::size_t n) { return heat_kernel_jet(s, n, t); });
    cplx c1 = pair_circle(hf, kfun, 0.1), c2 = pair_circle(hf, kfun, 0.3);
    CHECK(std::abs(c1 - c2) < 1e-10);
    CHECK(std::abs(c1 - byres) < 1e-10);

    auto entire = hyperfunction_at(RationalDatum::polynomial({1.0, 1.0}), 0.0);
    CHECK(entire.singular_locus().empty());
    CHECK(pair(entire, [&](cplx s, std::size_t n) { return heat_kernel_jet(s, n, t); }) == cplx(0));
}

TEST_CASE("Case 1: the heat equation gives the Gaussian heat-kernel pairing")
{
    cplx z0 = std::polar(1.0, pi / 6);
    RationalDatum phi(z0, {1.0, 0.5});
    for (cplx z : {cplx(0), cplx(0.1, -0.2)}) {
        double theta = std::arg(z0 - z);
        auto t = CoveringPoint::polar(0.15, 2 * theta);
        cplx via_case = jump_case1(1, 2, MomentFunction::gamma(1), phi, t, z);
        // F_{1,z}(s)[e^{-s²/4t}/√(4πt)] with t on the principal sheet
        auto hf = hyperfunction_at(phi, z);
        cplx gaussian = pair(hf, [&](cplx s, std::size_t n) { return heat_kernel_jet(s, n, t.value()); });
        CHECK(rel(via_case, gaussian) < 1e-12);
    }
    CHECK(jump_case1(1, 2, MomentFunction::gamma(1), RationalDatum::polynomial({1.0, 0.5}),
                     CoveringPoint::polar(0.2, 0.0), 0.0) == cplx(0));
}

TEST_CASE("Case 1: the Stokes direction follows q arg(z0 - z)/p as z moves")
{
    auto eq = heat(RationalDatum::simple_pole(1.0));
    cplx z(0.0, 0.3);
    double dz = 2 * std::arg(1.0 - z);
    auto t = CoveringPoint::polar(0.2, dz);
    auto moved = lateral_sums(eq, dz, std::nullopt, t, z);
    CHECK(std::abs(moved.difference()) > 1e-3);
    CHECK(std::abs(moved.difference() - jump_case1(1, 2, MomentFunction::gamma(1), eq.datum, t, z)) < 1e-10);
    // the z = 0 direction is no longer singular at this z
    auto old = lateral_sums(eq, 0.0, 0.1, t, z);
    CHECK(std::abs(old.difference()) < 1e-11);
    // scanning directions: the lateral difference is nonzero only across dz
    for (double d = dz - 1.2; d <= dz + 1.2; d += 0.125) {
        if (std::abs(d - dz) < 0.2) continue;
        CHECK(std::abs(lateral_sums(eq, d, 0.05, t, z).difference()) < 1e-11);
    }
}

TEST_CASE("Case 2: kernel of Γ_1/Γ_{1/2} and lateral agreement")
{
    MomentFunction m1 = MomentFunction::gamma(Rational(1, 2)), m2 = MomentFunction::gamma(1);
    cplx z0(1.0, 0.2);
    // e_m(x) = x M_{1/2}(x) = x e^{-x²/4}/√π for m(n) = n!/Γ(1 + n/2)
    MomentJumpKernel k(Rational(1, 2), Rational(1), 1.0, 1);
    for (double x : {0.3, 1.0, 2.5})
        CHECK(rel(k.value(x) * x, x * std::exp(-x * x / 4) / std::sqrt(pi)) < 1e-14);

    SimpleEquation eq;
    eq.m1 = m1;
    eq.m2 = m2;
    for (int order : {1, 2}) {
        std::vector<cplx> poles(order, 0.0);
        poles.back() = 1.0;
        eq.datum = RationalDatum(z0, poles);
        double theta = std::arg(z0);
        auto t = CoveringPoint::polar(0.4, theta + 0.1);
        cplx residue = jump_case2(m1, m2, eq.datum, t);
        cplx lateral = lateral_sums(eq, theta, std::nullopt, t, 0.0).difference();
        CHECK(std::abs(residue - lateral) < 1e-9);
        // two-edge quadrature of the same pairing
        auto kernel = jump_kernel_for(eq, theta, t, 0.0);
        auto two = pair_two_edge(hyperfunction_at(eq.datum, 0.0), [&](cplx s) { return kernel.value(s); }, 0.3, 40.0,
                                 1e-13);
        CHECK(std::abs(two.value - residue) < 1e-9);
    }
}

TEST_CASE("Cases 3 and 4: reduction to Case 3 and the vanishing rotated branches")
{
    cplx z0(0.9, 0.3);
    RationalDatum phi(z0, {1.0, 0.25});
    MomentFunction m1 = MomentFunction::gamma(Rational(1, 2)), m2 = MomentFunction::gamma(1);

    // p = q = 2 is Case 3 itself
    SimpleEquation c3;
    c3.p = 2;
    c3.q = 2;
    c3.m1 = m1;
    c3.m2 = m2;
    c3.datum = phi;
    double theta = std::arg(z0);
    auto t = CoveringPoint::polar(0.3, theta);
    cplx direct3 = jump_simple(c3, theta, t, 0.0);
    CHECK(rel(jump_case34(2, 2, m1, m2, phi, t), direct3) < 1e-12);
    CHECK(std::abs(lateral_sums(c3, theta, std::nullopt, t, 0.0).difference() - direct3) < 1e-9);

    // j ≠ 0: s ↦ φ(s e^{2πij/q}) has no singularity on arg s = θ
    for (int j = 1; j < 2; ++j) {
        Hyperfunction rot{phi.scaled(std::polar(1.0, 2 * pi * j / 2)), theta};
        auto kernel = jump_kernel_for(c3, theta, t, 0.0);
        auto two = pair_two_edge(rot, [&](cplx s) { return kernel.value(s); }, 0.2, 40.0, 1e-13);
        CHECK(std::abs(two.value) < 1e-10);
    }

    // p = 1, q = 2 through τ = t^{1/2} against the direct computation and lateral sums
    SimpleEquation c4;
    c4.p = 1;
    c4.q = 2;
    c4.m1 = m1;
    c4.m2 = m2;
    c4.datum = phi;
    auto t4 = CoveringPoint::polar(0.2, 2 * theta);
    cplx reduced = jump_case34(1, 2, m1, m2, phi, t4);
    CHECK(rel(reduced, jump_simple(c4, 2 * theta, t4, 0.0)) < 1e-12);
    CHECK(std::abs(lateral_sums(c4, 2 * theta, std::nullopt, t4, 0.0).difference() - reduced) < 1e-9);

    // p = q = 1, m1 = m2: convergent transport, no Stokes line
    SimpleEquation tr;
    tr.m1 = m2;
    tr.m2 = m2;
    tr.datum = phi;
    auto tt = CoveringPoint::polar(0.3, theta);
    CHECK(jump_simple(tr, theta, tt, 0.0) == cplx(0));
    CHECK(std::abs(directional_sum(tr, theta + 0.3, tt, 0.0).value - directional_sum(tr, theta - 0.3, tt, 0.0).value) <
          1e-13);
}

TEST_CASE("Ecalle kernel C3")
{
    CHECK(ecalle_c3(0.0).real() == doctest::Approx(1.0 / std::tgamma(2.0 / 3.0)).epsilon(1e-14));
    CHECK(ecalle_c3(0.0).real() == doctest::Approx(0.7384882).epsilon(1e-6));
    // C3(y) = 3^{2/3} Ai(y / 3^{1/3}) on the real axis
    for (double y : {0.0, 0.5, 1.7, 4.0, 9.0, -2.0})
        CHECK(rel(ecalle_c3(y), std::pow(3.0, 2.0 / 3) * boost::math::airy_ai(y / std::cbrt(3.0))) < 1e-10);

    cplx z0 = std::polar(1.0, pi / 6);
    RationalDatum phi(z0, {1.0, 0.3, 0.2});
    auto eq = airy(phi);
    for (cplx z : {cplx(0), cplx(0.05, 0.1)}) {
        double d = 3 * std::arg(z0 - z);
        for (double r : {0.05, 0.2}) {
            auto t = CoveringPoint::polar(r, d + 0.2);
            cplx e = jump_ecalle(phi, t, z);
            CHECK(rel(e, jump_simple(eq, d, t, z)) < 1e-10);
            CHECK(std::abs(lateral_sums(eq, d, std::nullopt, t, z).difference() - e) < 1e-8);
        }
    }
    CHECK(jump_ecalle(RationalDatum::polynomial({1.0}), CoveringPoint::polar(0.1, 0.0), 0.0) == cplx(0));
}

TEST_CASE("jump linearity, eta independence and zero jump off Stokes lines")
{
    cplx z0 = std::polar(1.0, pi / 6);
    RationalDatum a(z0, {1.0}), b(z0, {0.0, 0.5, 1.0});
    cplx c1(0.3, -1.2), c2(2.0, 0.5);
    auto t = CoveringPoint::polar(0.2, pi / 3);
    for (auto make : {heat, airy}) {
        auto ea = make(a), eb = make(b), ec = make(a * c1 + b * c2);
        double d = stokes_direction(ea, 1, 0.0);
        auto tt = CoveringPoint::polar(0.2, d);
        cplx ja = jump_simple(ea, d, tt, 0.0), jb = jump_simple(eb, d, tt, 0.0);
        CHECK(std::abs(jump_simple(ec, d, tt, 0.0) - (c1 * ja + c2 * jb)) < 1e-12);
        auto l1 = lateral_sums(ec, d, std::nullopt, tt, 0.0);
        auto l2 = lateral_sums(ec, d, l1.offset / 2, tt, 0.0);
        CHECK(std::abs(l1.difference() - l2.difference()) < 1e-9);
        // midway between Stokes directions
        auto off = lateral_sums(ec, d + pi, 0.1, CoveringPoint::polar(0.2, d + pi), 0.0);
        CHECK(std::abs(off.difference()) < 1e-10);
        CHECK(jump_simple(ec, d + pi, CoveringPoint::polar(0.2, d + pi), 0.0) == cplx(0));
    }
    (void)t;
}

TEST_CASE("jump_report on the heat equation and on an entire datum")
{
    auto eq = heat(RationalDatum::simple_pole(1.0));
    std::vector<GridPoint> grid;
    for (double r : {0.05, 0.1, 0.2, 0.35, 0.5}) grid.push_back({CoveringPoint::polar(r, 0.0), 0.0});
    auto rep = jump_report(eq, 1, grid);
    REQUIRE(rep.size() == 5);
    for (const auto& r : rep) {
        CHECK(r.error.empty());
        CHECK(r.abs_discrepancy < 1e-6);
        CHECK(r.direction == doctest::Approx(0.0));
        CHECK(r.K == Rational(1));
        CHECK(r.l == std::vector<int>{1});
        CHECK(r.l_prime == std::vector<int>{2});
    }
    auto flat = heat(RationalDatum::polynomial({1.0, 2.0, 3.0}));
    for (const auto& r : jump_report(flat, 1, grid)) {
        CHECK(r.error.empty());
        CHECK(std::abs(r.lateral_value) < 1e-12);
        CHECK(r.residue_value == cplx(0));
    }
    CHECK(adjacent_index(1, 6) == 6);
    CHECK(adjacent_index(4, 6) == 3);
}

TEST_CASE("two-level example: each level's jump is the jump of its own component")
{
    cplx z0 = std::polar(1.0, pi / 6);
    ProductEquation eq;
    eq.factors = {{1.0, 2}, {1.0, 3}};
    RationalDatum psi1(z0, {1.0, 0.5}), psi2(z0, {0.5, 1.0});
    eq.data = {psi1 + psi2, psi1.derivative(2) + psi2.derivative(3)};
    auto comps = decompose(eq);
    auto hand = heat_airy_example_symbols();
    RationalDatum tilde1 = apply_row(hand[0], eq.data), tilde2 = apply_row(hand[1], eq.data);

    for (int j : {1, 2}) {
        std::vector<GridPoint> grid;
        for (cplx z : {cplx(0), cplx(0.1, 0.05)}) {
            double d1 = 2 * std::arg(z0 - z) + 2 * pi * (j - 1);
            grid.push_back({CoveringPoint::polar(0.15, d1), z});
        }
        auto rep = jump_report(eq, comps, 2, j, grid);
        for (const auto& r : rep) {
            REQUIRE(r.error.empty());
            CHECK(r.abs_discrepancy < 1e-8);
            cplx standalone = jump_case1(1, 2, MomentFunction::gamma(1), tilde1, r.t, r.z, r.direction);
            CHECK(std::abs(r.lateral_value - standalone) < 1e-8);
            CHECK(r.l.size() == 2);
            CHECK(r.l[0] == j);
            CHECK(r.l_prime[0] == adjacent_index(j, 6));
            CHECK(r.l[1] == r.l_prime[1]);
        }
    }
    std::vector<GridPoint> grid;
    for (cplx z : {cplx(0), cplx(0.1, 0.05)}) grid.push_back({CoveringPoint::polar(0.1, 3 * std::arg(z0 - z) + 0.3), z});
    for (const auto& r : jump_report(eq, comps, 3, 1, grid)) {
        REQUIRE(r.error.empty());
        CHECK(r.abs_discrepancy < 1e-8);
        CHECK(std::abs(r.lateral_value - jump_ecalle(tilde2, r.t, r.z, r.direction)) < 1e-8);
        CHECK(r.K == Rational(1, 2));
    }

    ProductEquation mixed;
    mixed.factors = {{1.0, 2}, {-1.0, 2}};
    mixed.data = {psi1 + psi2, psi1.derivative(2) - psi2.derivative(2)};
    auto mc = decompose(mixed);
    CHECK_THROWS_AS(jump_report(mixed, mc, 2, 1, grid), SpecError);
}
