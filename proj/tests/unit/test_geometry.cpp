#include "doctest.h"

#include "mpde/errors.hpp"
#include "mpde/geometry.hpp"

#include <cmath>
#include <set>

using namespace mpde;

namespace {

Geometry example_geometry()
{
    auto P = CharPolynomial::product_of_monomials({{1.0, 2}, {1.0, 3}});
    return build_geometry(P, 1, 1, {std::polar(1.0, pi / 6), Rational(1, 6)});
}

Geometry heat_geometry(cplx z0 = 1.0)
{
    auto P = CharPolynomial::product_of_monomials({{1.0, 2}});
    return build_geometry(P, 1, 1, {z0, std::nullopt});
}

bool covered(const std::vector<Sector>& sectors, double a, double period)
{
    for (const auto& s : sectors) {
        double c = s.bisector.value(), h = s.opening.value() / 2;
        for (int k = -2; k <= 2; ++k) {
            double x = a + k * period;
            if (x > c - h && x < c + h) return true;
        }
    }
    return false;
}

} // namespace

TEST_CASE("exact angle arithmetic and parsing")
{
    auto b = AngleBasis::for_branch_point(std::polar(1.0, pi / 6));
    REQUIRE(b->arg_z0_over_pi.has_value());
    CHECK(*b->arg_z0_over_pi == Rational(1, 6));
    auto a = parse_angle("2*argz0 + 2*pi", b);
    CHECK(a.coeff_argz0() == Rational(2));
    CHECK(a.coeff_pi() == Rational(2));
    CHECK(*a.exact_over_pi() == Rational(7, 3));
    CHECK(std::abs(a.value() - 7 * pi / 3) < 1e-14);
    CHECK(parse_angle("pi/3", b).coeff_pi() == Rational(1, 3));
    CHECK(parse_angle("-1/2*pi", b).coeff_pi() == Rational(-1, 2));
    CHECK_THROWS(parse_angle("0.5", b));
    CHECK(compare(parse_angle("argz0", b), parse_angle("pi/6", b)).sign == 0);
    CHECK(compare(parse_angle("argz0", b), parse_angle("pi/6", b)).symbolic);

    auto t = AngleBasis::for_branch_point(cplx(1.0, 0.3));
    CHECK_FALSE(t->arg_z0_over_pi.has_value());
    auto c = compare(parse_angle("argz0", t), parse_angle("pi/6", t));
    CHECK(c.sign == -1);
    CHECK_FALSE(c.symbolic);
    CHECK(parse_angle("3*argz0 - pi", t).to_string() == "3*argz0 - pi");
}

TEST_CASE("compute_Q")
{
    auto mk = [](std::vector<Rational> qs) {
        std::vector<LevelData> v;
        for (auto q : qs) {
            LevelData l;
            l.q = q;
            v.push_back(l);
        }
        return v;
    };
    CHECK(compute_Q(mk({2, 3})) == Rational(6));
    CHECK(compute_Q(mk({2})) == Rational(2));
    CHECK(compute_Q(mk({1})) == Rational(1));
    CHECK(compute_Q(mk({Rational(3, 2), Rational(5, 2)})) == Rational(15, 2));
}

TEST_CASE("worked example: directions, intervals, J")
{
    auto g = example_geometry();
    REQUIRE(g.levels.size() == 2);
    CHECK(g.Q == Rational(6));
    for (int lvl = 0; lvl < 2; ++lvl) {
        const auto& d = g.levels[lvl].directions;
        REQUIRE(d.size() == 6);
        for (int l = 0; l < 6; ++l) {
            CHECK(d[l].coeff_argz0() == Rational(lvl + 2));
            CHECK(d[l].coeff_pi() == Rational(2 * l));
        }
    }
    const auto& idx = g.index;
    auto th = ExactAngle::arg_z0(g.basis);
    auto P = [&](Rational r) { return ExactAngle::pi_multiple(r, g.basis); };
    for (int j = 0; j < 6; ++j)
        for (int k = 0; k < 6; ++k) {
            auto len = intersection_length(idx, {j, k});
            int dist = std::min(std::abs(j - k), 6 - std::abs(j - k));
            if (j == k)
                CHECK(len.symbolically_equal(P(3)));
            else if (k == j + 1)
                CHECK(len.symbolically_equal(P(Rational(3, 2)) - th));
            else if (j == k + 1)
                CHECK(len.symbolically_equal(P(Rational(3, 2)) + th));
            else
                CHECK(compare(len, P(0)).sign == 0);
            (void)dist;
        }
    std::set<std::vector<int>> J(idx.J.begin(), idx.J.end());
    CHECK(J.size() == 16);
    for (int j = 0; j < 6; ++j)
        for (int k = 0; k < 6; ++k) CHECK((J.count({j, k}) == 1) == (std::abs(j - k) <= 1));
}

TEST_CASE("heat directions and anti-Stokes lines")
{
    auto g = heat_geometry();
    REQUIRE(g.levels.size() == 1);
    CHECK(g.Q == Rational(2));
    const auto& d = g.levels[0].directions;
    REQUIRE(d.size() == 2);
    CHECK(*d[0].exact_over_pi() == Rational(0));
    CHECK(*d[1].exact_over_pi() == Rational(2));
    auto as = anti_stokes_directions(g.levels[0], g.Q);
    REQUIRE(as.size() == 4);
    std::vector<Rational> want{Rational(1, 2), Rational(3, 2), Rational(5, 2), Rational(7, 2)};
    for (int i = 0; i < 4; ++i) CHECK(*as[i].exact_over_pi() == want[i]);
    CHECK(g.index.J.size() == 2);
}

TEST_CASE("anti-Stokes of the K = 1/2 level is 3θ ± π")
{
    auto g = example_geometry();
    auto as = anti_stokes_directions(g.levels[1], g.Q);
    auto th3 = ExactAngle::arg_z0(g.basis) * Rational(3);
    bool found_plus = false, found_minus = false;
    for (const auto& a : as) {
        if (compare(a, th3 + ExactAngle::pi_multiple(1, g.basis)).sign == 0) found_plus = true;
        if (compare(a, reduce_mod_period(th3 - ExactAngle::pi_multiple(1, g.basis), g.Q)).sign == 0)
            found_minus = true;
    }
    CHECK(found_plus);
    CHECK(found_minus);
}

TEST_CASE("transcendental arg z0 stays symbolic")
{
    auto P = CharPolynomial::product_of_monomials({{1.0, 2}, {1.0, 3}});
    auto g = build_geometry(P, 1, 1, {cplx(1.0, 0.3), std::nullopt});
    CHECK(g.index.J.size() == 16);
    auto len = intersection_length(g.index, {1, 0});
    CHECK(len.coeff_argz0() == Rational(1));
    CHECK(len.coeff_pi() == Rational(3, 2));
}

TEST_CASE("complex λ0 yields an arg-lambda generator")
{
    auto P = CharPolynomial::product_of_monomials({{cplx(1.0, 2.0), 2}});
    auto g = build_geometry(P, 1, 1, {1.0, std::nullopt});
    REQUIRE(g.levels[0].roots[0].generator.has_value());
    const auto& d = g.levels[0].directions;
    REQUIRE(d.size() == 2);
    for (const auto& a : d) {
        REQUIRE(a.coeff_arglam().size() == 1);
        CHECK(a.coeff_arglam()[0] == Rational(-1));
    }
    CHECK(std::abs(d[0].value() - (2 * pi - std::arg(cplx(1, 2)))) < 1e-13);
}

TEST_CASE("direction count = Q ν per root class, q with ν > 1")
{
    // λ² = ζ³: one cluster q = 3/2 of two branches
    CharPolynomial P(2, {{{2, 0}, 1.0}, {{0, 3}, -1.0}});
    auto g = build_geometry(P, 1, 1, {cplx(2.0, 0.0), std::nullopt});
    REQUIRE(g.levels.size() == 1);
    CHECK(g.Q == Rational(3, 2));
    CHECK(g.levels[0].directions.size() == 3);
    CHECK(g.levels[0].K == Rational(2));
}

TEST_CASE("interval length identity and periodicity")
{
    for (auto g : {example_geometry(), heat_geometry(std::polar(2.0, 0.4))}) {
        ExactAngle period = ExactAngle::pi_multiple(2 * g.Q, g.basis);
        for (std::size_t i = 0; i < g.levels.size(); ++i) {
            const auto& d = g.levels[i].directions;
            for (std::size_t j = 0; j < d.size(); ++j) {
                ExactAngle next = j + 1 < d.size() ? d[j + 1] : d[0] + period;
                auto want = next - d[j] + ExactAngle::pi_multiple(1 / g.levels[i].K, g.basis);
                CHECK(g.index.intervals[i][j].length().symbolically_equal(want));
                // adding the period reduces back to the same direction
                CHECK(reduce_mod_period(d[j] + period, g.Q).symbolically_equal(d[j]));
            }
        }
    }
}

TEST_CASE("J is monotone under interval enlargement")
{
    auto g = example_geometry();
    auto idx = g.index;
    for (auto& lvl : idx.intervals)
        for (auto& I : lvl) {
            I.lo = I.lo - ExactAngle::pi_multiple(Rational(1, 10), g.basis);
            I.hi = I.hi + ExactAngle::pi_multiple(Rational(1, 7), g.basis);
        }
    for (const auto& l : g.index.J)
        for (std::size_t i = 0; i < l.size(); ++i)
            CHECK(compare(intersection_length(idx, l, i), ExactAngle::pi_multiple(1 / idx.K[i], g.basis)).sign > 0);
}

TEST_CASE("sectors: covering, openings, eps bound, separation")
{
    for (auto g : {example_geometry(), heat_geometry(), heat_geometry(std::polar(1.0, 1.0))}) {
        auto sectors = maximal_family_sectors(g.index, std::nullopt, 0.5);
        CHECK(sectors.size() == g.index.J.size());
        double period = 2 * to_double(g.Q) * pi;
        for (int k = 0; k < 360; ++k) CHECK(covered(sectors, period * k / 360.0, period));
        ExactAngle need = ExactAngle::pi_multiple(1 / g.index.K.front(), g.basis);
        for (const auto& s : sectors) CHECK(compare(s.opening, need).sign > 0);

        auto maxeps = max_admissible_eps(g.index);
        CHECK_THROWS_AS(maximal_family_sectors(g.index, *maxeps.exact_over_pi(), 0.5), EpsTooLarge);
        auto ok = maximal_family_sectors(g.index, *maxeps.exact_over_pi() / 2, 0.5);
        for (const auto& s : ok) CHECK(compare(s.opening, need).sign > 0);

        // representative multidirections and pairwise separation
        std::vector<std::vector<ExactAngle>> reps;
        for (const auto& l : g.index.J) reps.push_back(representative_multidirection(g.index, g.levels, l));
        for (std::size_t a = 0; a < sectors.size(); ++a)
            for (std::size_t b = a + 1; b < sectors.size(); ++b) {
                const auto& la = sectors[a].l;
                const auto& lb = sectors[b].l;
                bool separated = false;
                for (std::size_t i = 0; i < la.size(); ++i) {
                    if (la[i] == lb[i]) continue;
                    double x = std::min(reps[a][i].value(), reps[b][i].value());
                    double y = std::max(reps[a][i].value(), reps[b][i].value());
                    for (const auto& d : g.levels[i].directions)
                        for (int k = -1; k <= 1; ++k) {
                            double v = d.value() + k * period;
                            if (v > x && v < y) separated = true;
                        }
                }
                CHECK(separated);
            }
    }
}

TEST_CASE("single level: every gap is admissible")
{
    auto P = CharPolynomial::product_of_monomials({{1.0, 3}});
    auto g = build_geometry(P, 1, 1, {cplx(0.5, 0.5), std::nullopt});
    CHECK(g.index.J.size() == g.levels[0].directions.size());
    CHECK(g.index.J.size() == 3);
}

TEST_CASE("one-direction degenerate case: one sector covering everything")
{
    // λ = ζ² with s1 = 1, s2 = 1: Q = 2 and two directions; λ = ζ with s1 = 1/2
    // has Q = 1 and a single direction per period.
    auto P = CharPolynomial::product_of_monomials({{1.0, 1}});
    auto g = build_geometry(P, Rational(1, 2), 1, {1.0, std::nullopt});
    REQUIRE(g.levels.size() == 1);
    CHECK(g.Q == Rational(1));
    CHECK(g.levels[0].directions.size() == 1);
    auto s = maximal_family_sectors(g.index, std::nullopt, 1.0);
    REQUIRE(s.size() == 1);
    for (int k = 0; k < 360; ++k) CHECK(covered(s, 2 * pi * k / 360.0, 2 * pi));
}
