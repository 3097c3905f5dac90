#include "mpde/geometry.hpp"

#include "mpde/errors.hpp"

#include <algorithm>
#include <functional>

namespace mpde {

Rational compute_Q(const std::vector<LevelData>& levels)
{
    if (levels.empty()) throw std::invalid_argument("compute_Q needs at least one level");
    std::int64_t l = 1, g = 0;
    for (const auto& lv : levels) {
        l = lcm64(l, std::abs(lv.mu()));
        g = gcd64(g, lv.nu());
    }
    return Rational(l, g);
}

void register_root_generators(std::vector<LevelData>& levels, AngleBasis& basis)
{
    for (auto& lv : levels)
        for (auto& r : lv.roots)
            if (!r.arg_over_pi && !r.generator) r.generator = basis.add_lambda_generator(std::arg(r.lambda0));
}

ExactAngle reduce_mod_period(const ExactAngle& a, const Rational& Q)
{
    ExactAngle period = ExactAngle::pi_multiple(2 * Q, a.basis());
    std::int64_t k = angle_floor_div(a, period);
    return a - period * Rational(k);
}

namespace {

void sort_unique(std::vector<ExactAngle>& v)
{
    std::stable_sort(v.begin(), v.end(), angle_less);
    std::vector<ExactAngle> out;
    for (auto& a : v)
        if (out.empty() || compare(out.back(), a).sign != 0) out.push_back(a);
    v = std::move(out);
}

ExactAngle arg_lambda_of(const LevelRoot& r, const std::shared_ptr<const AngleBasis>& basis)
{
    if (r.arg_over_pi) return ExactAngle::pi_multiple(*r.arg_over_pi, basis);
    if (!r.generator) throw std::logic_error("root without angle generator; call register_root_generators");
    return ExactAngle::arg_lambda(*r.generator, basis);
}

ExactAngle half_width(const Rational& K, const std::shared_ptr<const AngleBasis>& basis)
{
    return ExactAngle::pi_multiple(Rational(1, 2) / K, basis);
}

} // namespace

std::vector<ExactAngle> singular_directions(const LevelData& level, std::shared_ptr<const AngleBasis> basis,
                                            const Rational& Q)
{
    Rational count = Q * Rational(level.nu());
    if (count.denominator() != 1) throw std::invalid_argument("Q * nu must be an integer");
    std::vector<ExactAngle> out;
    for (const auto& r : level.roots) {
        ExactAngle base = ExactAngle::arg_z0(basis) * level.q - arg_lambda_of(r, basis);
        for (std::int64_t j = 0; j < count.numerator(); ++j) {
            ExactAngle d = base + ExactAngle::pi_multiple(Rational(2 * j, level.nu()), basis);
            out.push_back(reduce_mod_period(d, Q));
        }
    }
    sort_unique(out);
    return out;
}

std::vector<ExactAngle> anti_stokes_directions(const LevelData& level, const Rational& Q)
{
    std::vector<ExactAngle> out;
    for (const auto& d : level.directions) {
        ExactAngle h = half_width(level.K, d.basis());
        out.push_back(reduce_mod_period(d - h, Q));
        out.push_back(reduce_mod_period(d + h, Q));
    }
    sort_unique(out);
    return out;
}

AngleInterval tuple_intersection(const MaximalFamilyIndex& index, const std::vector<int>& l, std::size_t from)
{
    AngleInterval acc = index.intervals[from][l[from]];
    for (std::size_t i = from + 1; i < index.intervals.size(); ++i) {
        const auto& I = index.intervals[i][l[i]];
        acc.lo = angle_max(acc.lo, I.lo);
        acc.hi = angle_min(acc.hi, I.hi);
    }
    return acc;
}

ExactAngle intersection_length(const MaximalFamilyIndex& index, const std::vector<int>& l, std::size_t from)
{
    auto I = tuple_intersection(index, l, from);
    if (compare(I.hi, I.lo).sign <= 0) return ExactAngle::pi_multiple(0, index.basis);
    return I.hi - I.lo;
}

MaximalFamilyIndex admissible_index_set(const std::vector<LevelData>& levels, const Rational& Q)
{
    if (levels.empty()) throw std::invalid_argument("admissible_index_set needs at least one level");
    MaximalFamilyIndex idx;
    idx.Q = Q;
    idx.basis = levels.front().directions.empty() ? nullptr : levels.front().directions.front().basis();
    for (const auto& lv : levels) {
        if (lv.directions.empty()) throw std::invalid_argument("level without singular directions");
        idx.K.push_back(lv.K);
        std::vector<AngleInterval> ivs;
        std::size_t n = lv.directions.size();
        ExactAngle h = half_width(lv.K, idx.basis);
        ExactAngle period = ExactAngle::pi_multiple(2 * Q, idx.basis);
        for (std::size_t j = 0; j < n; ++j) {
            ExactAngle next = (j + 1 < n) ? lv.directions[j + 1] : lv.directions[0] + period;
            ivs.push_back({lv.directions[j] - h, next + h});
        }
        idx.intervals.push_back(std::move(ivs));
    }

    std::size_t nl = levels.size();
    std::vector<int> l(nl, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == nl) {
            for (std::size_t k = 0; k < nl; ++k) {
                ExactAngle need = ExactAngle::pi_multiple(1 / idx.K[k], idx.basis);
                if (compare(intersection_length(idx, l, k), need).sign <= 0) return;
            }
            idx.J.push_back(l);
            return;
        }
        for (std::size_t j = 0; j < idx.intervals[i].size(); ++j) {
            l[i] = static_cast<int>(j);
            rec(i + 1);
        }
    };
    rec(0);
    return idx;
}

ExactAngle covering_depth(const MaximalFamilyIndex& index)
{
    // f(x) = max_l min(x - lo_l, hi_l - x) over all translates; its minimum over
    // a period sits where a rising side meets a falling one.
    std::vector<AngleInterval> iv;
    for (const auto& l : index.J) iv.push_back(tuple_intersection(index, l, 0));
    ExactAngle period = ExactAngle::pi_multiple(2 * index.Q, index.basis);
    auto depth = [&](const ExactAngle& x) {
        ExactAngle best = ExactAngle::pi_multiple(-1000, index.basis);
        for (const auto& I : iv)
            for (int k = -2; k <= 2; ++k) {
                ExactAngle sh = period * Rational(k);
                ExactAngle d = angle_min(x - (I.lo + sh), (I.hi + sh) - x);
                best = angle_max(best, d);
            }
        return best;
    };
    ExactAngle worst;
    bool first = true;
    for (const auto& a : iv)
        for (const auto& b : iv)
            for (int k = -1; k <= 1; ++k) {
                ExactAngle x = reduce_mod_period((a.lo + b.hi + period * Rational(k)) * Rational(1, 2), index.Q);
                ExactAngle d = depth(x);
                if (first || angle_less(d, worst)) worst = d;
                first = false;
            }
    return worst;
}

ExactAngle max_admissible_eps(const MaximalFamilyIndex& index)
{
    ExactAngle need = ExactAngle::pi_multiple(1 / index.K.front(), index.basis);
    ExactAngle best = covering_depth(index) * Rational(2);
    for (const auto& l : index.J) {
        ExactAngle margin = intersection_length(index, l, 0) - need;
        if (angle_less(margin, best)) best = margin;
    }
    return best;
}

std::vector<Sector> maximal_family_sectors(const MaximalFamilyIndex& index, std::optional<Rational> eps_over_pi,
                                           double radius)
{
    if (radius <= 0) throw std::invalid_argument("sector radius must be positive");
    if (eps_over_pi && *eps_over_pi <= 0) throw std::invalid_argument("eps must be positive");
    std::vector<Sector> out;
    ExactAngle maxeps = max_admissible_eps(index);
    if (compare(maxeps, ExactAngle::pi_multiple(0, index.basis)).sign <= 0)
        throw EpsTooLarge("the admissible tuples do not cover the period for any eps", 0.0);
    ExactAngle eps = eps_over_pi ? ExactAngle::pi_multiple(*eps_over_pi, index.basis) : maxeps * Rational(1, 2);
    if (compare(eps, maxeps).sign >= 0)
        throw EpsTooLarge("eps must stay below " + maxeps.to_string() + " (" + std::to_string(maxeps.value()) +
                              " rad) to keep openings above pi/K1 and the sectors covering",
                          maxeps.value());
    for (const auto& l : index.J) {
        auto I = tuple_intersection(index, l, 0);
        out.push_back({l, (I.lo + I.hi) * Rational(1, 2), (I.hi - I.lo) - eps, radius});
    }
    return out;
}

std::vector<ExactAngle> representative_multidirection(const MaximalFamilyIndex& index,
                                                      const std::vector<LevelData>& levels,
                                                      const std::vector<int>& l)
{
    std::size_t n = index.intervals.size();
    std::vector<ExactAngle> d;
    auto half = [&](std::size_t i) { return half_width(index.K[i], index.basis); };
    auto A0 = tuple_intersection(index, l, 0);
    d.push_back((A0.lo + A0.hi) * Rational(1, 2));
    for (std::size_t i = 1; i < n; ++i) {
        auto A = tuple_intersection(index, l, i);
        ExactAngle prev_lo = d[i - 1] - half(i - 1), prev_hi = d[i - 1] + half(i - 1);
        // d_i - h_i <= prev_lo, d_i + h_i >= prev_hi, and (d_i - h_i, d_i + h_i) ⊆ A
        ExactAngle lo = angle_max(prev_hi - half(i), A.lo + half(i));
        ExactAngle hi = angle_min(prev_lo + half(i), A.hi - half(i));
        if (compare(lo, hi).sign > 0) throw NumericalFailure("no admissible multidirection for the tuple");
        d.push_back((lo + hi) * Rational(1, 2));
    }
    // verify gap membership
    for (std::size_t i = 0; i < n; ++i) {
        const auto& dirs = levels[i].directions;
        ExactAngle period = ExactAngle::pi_multiple(2 * index.Q, index.basis);
        std::size_t j = static_cast<std::size_t>(l[i]);
        ExactAngle gl = dirs[j];
        ExactAngle gh = (j + 1 < dirs.size()) ? dirs[j + 1] : dirs[0] + period;
        if (compare(d[i], gl).sign <= 0 || compare(d[i], gh).sign >= 0)
            throw NumericalFailure("representative direction fell on a singular direction");
    }
    return d;
}

Geometry build_geometry(const CharPolynomial& P, const Rational& s1, const Rational& s2, const BranchPoint& z0)
{
    if (z0.value == cplx(0)) throw SpecError("branch point z0 must be nonzero");
    Geometry g;
    auto terms = newton_polygon_leading_terms(P);
    g.levels = levels(terms, s1, s2);
    g.convergent = convergent_terms(terms, s1, s2);
    g.basis = AngleBasis::for_branch_point(z0.value, z0.arg_over_pi);
    if (g.levels.empty()) return g;
    register_root_generators(g.levels, *g.basis);
    g.Q = compute_Q(g.levels);
    for (auto& lv : g.levels) lv.directions = singular_directions(lv, g.basis, g.Q);
    g.index = admissible_index_set(g.levels, g.Q);
    return g;
}

} // namespace mpde
