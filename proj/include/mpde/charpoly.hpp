#pragma once

#include "mpde/angle.hpp"
#include "mpde/rational.hpp"

#include <map>
#include <utility>
#include <vector>

namespace mpde {

/// P(λ, ζ) = Σ c_{ij} λ^i ζ^j with λ-degree exactly N.
class CharPolynomial {
public:
    using Key = std::pair<int, int>; // (λ power, ζ power)

    CharPolynomial(int n_lambda, std::map<Key, cplx> coeffs, bool exact_input = true);

    /// Π_k (λ - c_k ζ^{q_k}) expanded.
    static CharPolynomial product_of_monomials(const std::vector<std::pair<cplx, int>>& factors);

    int n_lambda() const { return n_; }
    const std::map<Key, cplx>& coeffs() const { return c_; }
    /// False when some coefficient was not an exact Gaussian integer on input.
    bool exact_input() const { return exact_; }

    cplx eval(cplx lambda, cplx zeta) const;
    /// Largest |c_ij λ^i ζ^j|, the natural scale of P at (λ, ζ).
    double dominant_monomial(cplx lambda, cplx zeta) const;

private:
    int n_;
    std::map<Key, cplx> c_;
    bool exact_;
};

/// λ(ζ) ~ λ0 ζ^q at ζ → ∞. One entry per cluster of ν conjugate branches
/// (λ0 ω ζ^q with ω^ν = 1); multiplicity counts every root in the cluster.
struct LeadingTerm {
    Rational q;
    cplx lambda0;
    int multiplicity = 1;

    std::int64_t mu() const { return q.numerator(); }
    std::int64_t nu() const { return q.denominator(); }
};

std::vector<LeadingTerm> newton_polygon_leading_terms(const CharPolynomial& P);

/// |P(λ0 ζ^q, ζ)| relative to the dominant monomial at that point.
double substitution_residual(const CharPolynomial& P, const LeadingTerm& lt, cplx zeta);

struct LevelRoot {
    cplx lambda0;
    int multiplicity = 1;
    /// arg λ0 = value·pi when known exactly (positive/negative reals, roots of unity).
    std::optional<Rational> arg_over_pi;
    /// Generator index in the angle basis when arg λ0 is transcendental.
    std::optional<std::size_t> generator;
};

/// One summability level: all leading terms sharing a pole order q > s1/s2.
struct LevelData {
    Rational q;
    Rational K;
    std::vector<LevelRoot> roots;
    std::vector<ExactAngle> directions; ///< filled by the geometry module

    std::int64_t mu() const { return q.numerator(); }
    std::int64_t nu() const { return q.denominator(); }
};

/// Levels q > s1/s2 sorted by q ascending (K descending).
std::vector<LevelData> levels(const std::vector<LeadingTerm>& terms, const Rational& s1, const Rational& s2);
/// The leading terms with q <= s1/s2 (convergent part).
std::vector<LeadingTerm> convergent_terms(const std::vector<LeadingTerm>& terms, const Rational& s1, const Rational& s2);

} // namespace mpde
