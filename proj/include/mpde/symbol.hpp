#pragma once

#include "mpde/rational_datum.hpp"

#include <vector>

namespace mpde {

/// Polynomial Σ c_r ζ^r in the derivative symbol ζ.
struct ZetaPoly {
    std::vector<cplx> c;

    ZetaPoly() = default;
    explicit ZetaPoly(std::vector<cplx> coeffs);
    static ZetaPoly monomial(cplx coeff, int power);
    static ZetaPoly constant(cplx v) { return monomial(v, 0); }

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
    /// Index of the lowest nonzero coefficient.
    int valuation() const;
    cplx operator()(cplx zeta) const;

    ZetaPoly operator+(const ZetaPoly& o) const;
    ZetaPoly operator-(const ZetaPoly& o) const;
    ZetaPoly operator*(const ZetaPoly& o) const;
    ZetaPoly operator*(cplx s) const;
};

/// P(∂)φ = Σ c_r φ^{(r)}.
RationalDatum apply_operator(const ZetaPoly& P, const RationalDatum& phi);

/// The rational solution χ of D(∂)χ = g with vanishing component in the
/// polynomial kernel of D. Throws NonRationalAction when none exists (for
/// instance ∂χ = 1/(z0 - z) would need a logarithm).
RationalDatum solve_operator(const ZetaPoly& D, const RationalDatum& g);

/// N(ζ)/D(ζ) acting as D(∂)^{-1} N(∂).
struct RationalSymbol {
    ZetaPoly num;
    ZetaPoly den;
    RationalDatum apply(const RationalDatum& phi) const;
    cplx operator()(cplx zeta) const { return num(zeta) / den(zeta); }
};

/// Σ_j row[j](∂) data[j] solved over one common denominator: single terms
/// c_ij(∂)φ_j need not be rational even when the row sum is.
RationalDatum apply_row(const std::vector<RationalSymbol>& row, const std::vector<RationalDatum>& data);

/// Factor λ - lambda ζ^q of a product symbol.
struct MonomialFactor {
    cplx lambda;
    int q;
    ZetaPoly mu() const { return ZetaPoly::monomial(lambda, q); }
};

/// Symbols c_ij with ψ_i = Σ_j c_ij(∂) φ_j inverting φ_j = Σ_i μ_i(∂)^j ψ_i
/// for μ_i(ζ) = λ_i ζ^{q_i}. Factors must be pairwise distinct.
std::vector<std::vector<RationalSymbol>> vandermonde_symbols(const std::vector<MonomialFactor>& factors);

/// The decomposition symbols for (∂_t - ∂_z²)(∂_t - ∂_z³) written out by hand:
/// c11 = ζ/(ζ-1), c12 = 1/(ζ²-ζ³), c21 = 1/(1-ζ), c22 = 1/(ζ³-ζ²).
std::vector<std::vector<RationalSymbol>> heat_airy_example_symbols();

} // namespace mpde
