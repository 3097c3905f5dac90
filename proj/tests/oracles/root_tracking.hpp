#pragma once

// Independent oracle for leading terms of characteristic roots: solves
// P(λ, ζ) = 0 in 100-digit arithmetic at large |ζ| and reads off the pole
// order from the growth of |λ| and λ0 from λ / ζ^q.

#include "mpde/charpoly.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace oracle {

using mpc = boost::multiprecision::cpp_complex_100;
using mpr = boost::multiprecision::cpp_bin_float_100;

inline mpc horner(const std::vector<mpc>& a, const mpc& x)
{
    mpc s = 0;
    for (std::size_t i = a.size(); i-- > 0;) s = s * x + a[i];
    return s;
}

/// Aberth iteration for the roots of Σ a_i x^i with a_0, a_d != 0.
inline std::vector<mpc> aberth(const std::vector<mpc>& a)
{
    std::size_t d = a.size() - 1;
    std::vector<mpc> da;
    for (std::size_t i = 1; i < a.size(); ++i) da.push_back(a[i] * mpr(i));
    // Cauchy bound for the initial circle
    mpr bound = 0;
    for (std::size_t i = 0; i < d; ++i) bound = std::max<mpr>(bound, abs(a[i] / a[d]));
    bound += 1;
    std::vector<mpc> z(d);
    for (std::size_t k = 0; k < d; ++k) {
        mpr ang = mpr(2) * boost::math::constants::pi<mpr>() * mpr(k) / mpr(d) + mpr(0.4);
        z[k] = mpc(bound * cos(ang), bound * sin(ang));
    }
    for (int it = 0; it < 20000; ++it) {
        mpr worst = 0;
        for (std::size_t k = 0; k < d; ++k) {
            mpc ratio = horner(a, z[k]) / horner(da, z[k]);
            mpc sum = 0;
            for (std::size_t j = 0; j < d; ++j)
                if (j != k) sum += mpc(1) / (z[k] - z[j]);
            mpc w = ratio / (mpc(1) - ratio * sum);
            z[k] -= w;
            worst = std::max<mpr>(worst, abs(w) / std::max<mpr>(abs(z[k]), mpr(1e-300)));
        }
        if (worst < mpr(1e-80)) break;
    }
    return z;
}

struct TrackedRoot {
    mpde::Rational q;
    std::complex<double> lambda0; // λ / ζ^q at the largest radius
};

/// Nonzero roots λ(ζ) at ζ = R e^{iθ}, with q fitted between two radii.
inline std::vector<TrackedRoot> track_roots(const mpde::CharPolynomial& P, double theta, double log10_r1 = 30.0,
                                            double log10_r2 = 45.0)
{
    int n = P.n_lambda();
    auto solve_at = [&](double log10_r) {
        mpr R = pow(mpr(10), mpr(log10_r));
        mpc zeta(R * cos(mpr(theta)), R * sin(mpr(theta)));
        std::vector<mpc> a(n + 1, mpc(0));
        for (const auto& [k, v] : P.coeffs()) {
            mpc zp = 1;
            for (int j = 0; j < k.second; ++j) zp *= zeta;
            a[k.first] += mpc(mpr(v.real()), mpr(v.imag())) * zp;
        }
        // strip zero roots
        std::size_t lo = 0;
        while (lo < a.size() && a[lo] == mpc(0)) ++lo;
        std::vector<mpc> b(a.begin() + static_cast<long>(lo), a.end());
        return std::make_pair(zeta, aberth(b));
    };
    auto [z1, r1] = solve_at(log10_r1);
    auto [z2, r2] = solve_at(log10_r2);
    std::vector<TrackedRoot> out;
    std::vector<bool> used(r1.size(), false);
    for (const auto& lam2 : r2) {
        // pair with the root at the smaller radius of closest normalized slope
        double best = 1e300;
        std::size_t bi = 0;
        mpde::Rational bq;
        for (std::size_t i = 0; i < r1.size(); ++i) {
            if (used[i]) continue;
            double slope = static_cast<double>((log(abs(lam2)) - log(abs(r1[i]))) / (log(abs(z2)) - log(abs(z1))));
            mpde::Rational q;
            if (!mpde::rationalize(slope, 4, 1e-3, q)) continue;
            // compare normalized values λ/ζ^q
            mpc n1 = r1[i] / exp(mpc(mpr(static_cast<double>(q.numerator()) / static_cast<double>(q.denominator()))) * log(z1));
            mpc n2 = lam2 / exp(mpc(mpr(static_cast<double>(q.numerator()) / static_cast<double>(q.denominator()))) * log(z2));
            double dist = static_cast<double>(abs(n1 - n2) / abs(n2)) + std::abs(slope - mpde::to_double(q));
            if (dist < best) {
                best = dist;
                bi = i;
                bq = q;
            }
        }
        used[bi] = true;
        mpr qd = mpr(bq.numerator()) / mpr(bq.denominator());
        mpc l0 = lam2 / exp(mpc(qd) * log(z2));
        out.push_back({bq, {static_cast<double>(l0.real()), static_cast<double>(l0.imag())}});
    }
    return out;
}

/// Random polynomial with Gaussian-integer coefficients, λ-degree n, ζ-degree <= dz.
inline mpde::CharPolynomial random_polynomial(std::mt19937_64& rng, int n, int dz)
{
    std::uniform_int_distribution<int> coef(-5, 5), deg(0, dz), coin(0, 2);
    std::map<mpde::CharPolynomial::Key, std::complex<double>> c;
    for (int i = 0; i <= n; ++i) {
        int jm = deg(rng);
        for (int j = 0; j <= jm; ++j) {
            if (j < jm && coin(rng) == 0) continue;
            std::complex<double> v(coef(rng), coef(rng));
            if (j == jm && v == std::complex<double>(0)) v = 1.0;
            c[{i, j}] = v;
        }
    }
    return mpde::CharPolynomial(n, std::move(c), true);
}

/// Checks Newton-polygon output against the tracked roots: every tracked root
/// is matched to a leading term with equal q and λ^ν within tol relative.
inline bool leading_terms_match(const std::vector<mpde::LeadingTerm>& terms, const std::vector<TrackedRoot>& roots,
                                double tol, std::string* why = nullptr)
{
    std::vector<int> remaining;
    for (const auto& t : terms) remaining.push_back(t.multiplicity);
    for (const auto& r : roots) {
        bool ok = false;
        for (std::size_t k = 0; k < terms.size(); ++k) {
            const auto& t = terms[k];
            if (t.q != r.q || remaining[k] == 0) continue;
            double nu = static_cast<double>(t.nu());
            auto a = std::pow(r.lambda0, nu), b = std::pow(t.lambda0, nu);
            if (std::abs(a - b) <= tol * std::abs(b)) {
                --remaining[k];
                ok = true;
                break;
            }
        }
        if (!ok) {
            if (why) *why = "unmatched root q=" + mpde::to_string(r.q);
            return false;
        }
    }
    for (int m : remaining)
        if (m != 0) {
            if (why) *why = "leading-term multiplicity not consumed";
            return false;
        }
    return true;
}

} // namespace oracle
