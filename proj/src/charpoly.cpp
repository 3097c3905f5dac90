#include "mpde/charpoly.hpp"

#include "mpde/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace mpde {

CharPolynomial::CharPolynomial(int n_lambda, std::map<Key, cplx> coeffs, bool exact_input)
    : n_(n_lambda), exact_(exact_input)
{
    if (n_ < 1) throw SpecError("characteristic polynomial must have lambda-degree >= 1");
    for (const auto& [k, v] : coeffs) {
        if (k.first < 0 || k.second < 0) throw SpecError("negative exponent in characteristic polynomial");
        if (k.first > n_) throw SpecError("lambda exponent exceeds N in characteristic polynomial");
        if (v != cplx(0)) c_[k] += v;
    }
    for (auto it = c_.begin(); it != c_.end();) it = (it->second == cplx(0)) ? c_.erase(it) : std::next(it);
    bool leading = false;
    for (const auto& [k, v] : c_)
        if (k.first == n_) leading = true;
    if (!leading) throw DegeneratePolynomial("leading lambda coefficient P0 vanishes identically");
}

CharPolynomial CharPolynomial::product_of_monomials(const std::vector<std::pair<cplx, int>>& factors)
{
    std::map<Key, cplx> acc{{{0, 0}, 1.0}};
    for (const auto& [c, q] : factors) {
        std::map<Key, cplx> next;
        for (const auto& [k, v] : acc) {
            next[{k.first + 1, k.second}] += v;
            next[{k.first, k.second + q}] -= c * v;
        }
        acc = std::move(next);
    }
    bool exact = true;
    for (const auto& [c, q] : factors)
        if (c.real() != std::round(c.real()) || c.imag() != std::round(c.imag())) exact = false;
    return CharPolynomial(static_cast<int>(factors.size()), std::move(acc), exact);
}

cplx CharPolynomial::eval(cplx lambda, cplx zeta) const
{
    cplx s = 0.0;
    for (const auto& [k, v] : c_) s += v * std::pow(lambda, k.first) * std::pow(zeta, k.second);
    return s;
}

double CharPolynomial::dominant_monomial(cplx lambda, cplx zeta) const
{
    double m = 0.0;
    for (const auto& [k, v] : c_)
        m = std::max(m, std::abs(v) * std::pow(std::abs(lambda), k.first) * std::pow(std::abs(zeta), k.second));
    return m;
}

namespace {

cplx horner(const std::vector<cplx>& a, cplx x)
{
    cplx s = 0.0;
    for (std::size_t i = a.size(); i-- > 0;) s = s * x + a[i];
    return s;
}

std::vector<cplx> derivative(const std::vector<cplx>& a)
{
    std::vector<cplx> d;
    for (std::size_t i = 1; i < a.size(); ++i) d.push_back(a[i] * static_cast<double>(i));
    return d;
}

cplx newton_polish(const std::vector<cplx>& a, cplx x)
{
    auto da = derivative(a);
    double best = std::abs(horner(a, x));
    for (int it = 0; it < 50; ++it) {
        cplx f = horner(a, x), fp = horner(da, x);
        if (fp == cplx(0)) break;
        cplx nx = x - f / fp;
        double v = std::abs(horner(a, nx));
        if (!(v < best)) break;
        best = v;
        x = nx;
    }
    return x;
}

struct RootCluster {
    cplx root;
    int multiplicity;
};

// Roots of Σ a_i x^i (a_0, a_d nonzero) grouped by multiplicity.
std::vector<RootCluster> polynomial_roots(const std::vector<cplx>& a)
{
    std::size_t d = a.size() - 1;
    std::vector<cplx> raw;
    if (d == 1) {
        raw.push_back(-a[0] / a[1]);
    } else {
        Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(d, d);
        for (std::size_t i = 1; i < d; ++i) C(i, i - 1) = 1.0;
        for (std::size_t i = 0; i < d; ++i) C(i, d - 1) = -a[i] / a[d];
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
        for (std::size_t i = 0; i < d; ++i) raw.push_back(es.eigenvalues()(i));
    }
    for (auto& r : raw) r = newton_polish(a, r);

    std::vector<RootCluster> out;
    std::vector<bool> used(raw.size(), false);
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (used[i]) continue;
        cplx sum = raw[i];
        int m = 1;
        used[i] = true;
        for (std::size_t j = i + 1; j < raw.size(); ++j) {
            if (used[j]) continue;
            if (std::abs(raw[j] - raw[i]) <= 1e-5 * std::max(1.0, std::abs(raw[i]))) {
                used[j] = true;
                sum += raw[j];
                ++m;
            }
        }
        cplx r = sum / static_cast<double>(m);
        if (m > 1) {
            auto da = a;
            for (int k = 1; k < m; ++k) da = derivative(da);
            r = newton_polish(da, r);
        }
        out.push_back({r, m});
    }
    return out;
}

struct HullPoint {
    int i;
    int j;
};

} // namespace

std::vector<LeadingTerm> newton_polygon_leading_terms(const CharPolynomial& P)
{
    std::map<int, int> jmax;
    for (const auto& [k, v] : P.coeffs()) {
        auto it = jmax.find(k.first);
        if (it == jmax.end() || k.second > it->second) jmax[k.first] = k.second;
    }
    if (jmax.rbegin()->first != P.n_lambda())
        throw DegeneratePolynomial("leading lambda coefficient P0 vanishes identically");

    std::vector<HullPoint> hull;
    for (const auto& [i, j] : jmax) {
        HullPoint c{i, j};
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            long long cross = static_cast<long long>(b.i - a.i) * (c.j - a.j) - static_cast<long long>(b.j - a.j) * (c.i - a.i);
            if (cross >= 0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(c);
    }

    std::vector<LeadingTerm> out;
    for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
        const auto& a = hull[e];
        const auto& b = hull[e + 1];
        Rational q(a.j - b.j, b.i - a.i);
        std::int64_t nu = q.denominator();
        // edge polynomial Σ c_ij x^{i - a.i} over points on the supporting line,
        // a polynomial in X = x^nu
        int deg = (b.i - a.i) / static_cast<int>(nu);
        std::vector<cplx> poly(deg + 1, cplx(0));
        for (const auto& [k, v] : P.coeffs()) {
            if (k.first < a.i || k.first > b.i) continue;
            // on the line: i q + j == a.i q + a.j
            Rational lhs = Rational(k.first) * q + Rational(k.second);
            Rational rhs = Rational(a.i) * q + Rational(a.j);
            if (lhs != rhs) continue;
            int off = k.first - a.i;
            poly[off / nu] += v;
        }
        for (const auto& cl : polynomial_roots(poly)) {
            cplx lambda0 = std::pow(cl.root, 1.0 / static_cast<double>(nu));
            out.push_back({q, lambda0, cl.multiplicity * static_cast<int>(nu)});
        }
    }

    // merge coincident (q, λ0)
    std::vector<LeadingTerm> merged;
    for (const auto& t : out) {
        auto it = std::find_if(merged.begin(), merged.end(), [&](const LeadingTerm& m) {
            return m.q == t.q && std::abs(m.lambda0 - t.lambda0) <= 1e-12;
        });
        if (it == merged.end())
            merged.push_back(t);
        else
            it->multiplicity += t.multiplicity;
    }
    std::stable_sort(merged.begin(), merged.end(), [](const LeadingTerm& x, const LeadingTerm& y) {
        if (x.q != y.q) return x.q > y.q;
        double ax = std::arg(x.lambda0), ay = std::arg(y.lambda0);
        if (std::abs(ax - ay) > 1e-12) return ax < ay;
        return std::abs(x.lambda0) < std::abs(y.lambda0);
    });
    return merged;
}

double substitution_residual(const CharPolynomial& P, const LeadingTerm& lt, cplx zeta)
{
    cplx lam = lt.lambda0 * std::exp(to_double(lt.q) * std::log(zeta));
    double scale = P.dominant_monomial(lam, zeta);
    return std::abs(P.eval(lam, zeta)) / scale;
}

std::vector<LevelData> levels(const std::vector<LeadingTerm>& terms, const Rational& s1, const Rational& s2)
{
    if (s1 <= 0 || s2 <= 0) throw SpecError("moment orders s1, s2 must be positive");
    std::vector<LevelData> out;
    for (const auto& t : terms) {
        if (t.q <= s1 / s2) continue;
        auto it = std::find_if(out.begin(), out.end(), [&](const LevelData& l) { return l.q == t.q; });
        if (it == out.end()) {
            LevelData l;
            l.q = t.q;
            l.K = 1 / (t.q * s2 - s1);
            out.push_back(l);
            it = out.end() - 1;
        }
        LevelRoot r;
        r.lambda0 = t.lambda0;
        r.multiplicity = t.multiplicity;
        Rational a;
        double arg = std::arg(t.lambda0);
        if (rationalize(arg / pi, 48, 1e-12, a)) r.arg_over_pi = a;
        it->roots.push_back(r);
    }
    std::stable_sort(out.begin(), out.end(), [](const LevelData& a, const LevelData& b) { return a.q < b.q; });
    return out;
}

std::vector<LeadingTerm> convergent_terms(const std::vector<LeadingTerm>& terms, const Rational& s1, const Rational& s2)
{
    std::vector<LeadingTerm> out;
    for (const auto& t : terms)
        if (t.q <= s1 / s2) out.push_back(t);
    return out;
}

} // namespace mpde
