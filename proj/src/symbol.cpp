#include "mpde/symbol.hpp"

#include "mpde/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mpde {

namespace {

double rising(int k, int j)
{
    double r = 1.0;
    for (int i = 0; i < j; ++i) r *= k + i;
    return r;
}

// e!/(e-r)!... as (e+1)(e+2)...(e+r): coefficient of z^e in ∂^r z^{e+r}
double falling_up(int e, int r)
{
    double v = 1.0;
    for (int i = 1; i <= r; ++i) v *= e + i;
    return v;
}

double scale_of(const std::vector<cplx>& v)
{
    double s = 0.0;
    for (const auto& x : v) s = std::max(s, std::abs(x));
    return s;
}

} // namespace

ZetaPoly::ZetaPoly(std::vector<cplx> coeffs) : c(std::move(coeffs))
{
    while (!c.empty() && c.back() == cplx(0)) c.pop_back();
}

ZetaPoly ZetaPoly::monomial(cplx coeff, int power)
{
    std::vector<cplx> v(power + 1, cplx(0));
    v[power] = coeff;
    return ZetaPoly(std::move(v));
}

int ZetaPoly::valuation() const
{
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i] != cplx(0)) return static_cast<int>(i);
    return -1;
}

cplx ZetaPoly::operator()(cplx zeta) const
{
    cplx r = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) r = r * zeta + c[i];
    return r;
}

ZetaPoly ZetaPoly::operator+(const ZetaPoly& o) const
{
    std::vector<cplx> r(std::max(c.size(), o.c.size()), cplx(0));
    for (std::size_t i = 0; i < c.size(); ++i) r[i] += c[i];
    for (std::size_t i = 0; i < o.c.size(); ++i) r[i] += o.c[i];
    return ZetaPoly(std::move(r));
}

ZetaPoly ZetaPoly::operator-(const ZetaPoly& o) const { return *this + o * cplx(-1.0); }

ZetaPoly ZetaPoly::operator*(const ZetaPoly& o) const
{
    if (c.empty() || o.c.empty()) return ZetaPoly();
    std::vector<cplx> r(c.size() + o.c.size() - 1, cplx(0));
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = 0; j < o.c.size(); ++j) r[i + j] += c[i] * o.c[j];
    return ZetaPoly(std::move(r));
}

ZetaPoly ZetaPoly::operator*(cplx s) const
{
    std::vector<cplx> r = c;
    for (auto& x : r) x *= s;
    return ZetaPoly(std::move(r));
}

RationalDatum apply_operator(const ZetaPoly& P, const RationalDatum& phi)
{
    RationalDatum out(phi.branch_point(), {}, {});
    for (int r = 0; r <= P.degree(); ++r)
        if (P.c[r] != cplx(0)) out = out + phi.derivative(r) * P.c[r];
    return out;
}

RationalDatum solve_operator(const ZetaPoly& D, const RationalDatum& g)
{
    if (D.is_zero()) throw std::invalid_argument("zero operator");
    const int R = D.degree();
    const int r0 = D.valuation();
    const auto& d = D.c;

    // Principal part: ∂^r (z0 - z)^{-k} = (k)_r (z0 - z)^{-(k+r)}.
    std::vector<cplx> x;
    const auto& gp = g.poles();
    const int Kg = static_cast<int>(gp.size());
    if (Kg > 0) {
        const int K = Kg - R;
        if (K < 1) throw NonRationalAction("principal part of the right-hand side is too short for the operator");
        x.assign(K, cplx(0));
        auto coeff_of = [&](int m) { // coefficient of order m in D(∂)χ from known x
            cplx acc = 0.0;
            for (int r = 0; r <= R; ++r) {
                int k = m - r;
                if (k >= 1 && k <= K && d[r] != cplx(0)) acc += d[r] * rising(k, r) * x[k - 1];
            }
            return acc;
        };
        for (int k = K; k >= 1; --k) {
            int m = k + R;
            cplx rest = coeff_of(m); // x[k-1] still zero here
            x[k - 1] = (gp[m - 1] - rest) / (d[R] * rising(k, R));
        }
        double scale = scale_of(gp);
        for (int m = 1; m <= Kg; ++m) {
            if (std::abs(coeff_of(m) - gp[m - 1]) > 1e-10 * std::max(1.0, scale))
                throw NonRationalAction("operator has no rational inverse on this principal part");
        }
    }

    // Polynomial part, with the kernel part z^0..z^{r0-1} set to zero.
    std::vector<cplx> pp;
    const auto& gq = g.poly();
    if (!gq.empty()) {
        const int degP = static_cast<int>(gq.size()) - 1 + r0;
        pp.assign(degP + 1, cplx(0));
        for (int e = degP - r0; e >= 0; --e) {
            cplx acc = gq[e];
            for (int r = r0 + 1; r <= R; ++r)
                if (e + r <= degP) acc -= d[r] * falling_up(e, r) * pp[e + r];
            pp[e + r0] = acc / (d[r0] * falling_up(e, r0));
        }
    }
    return RationalDatum(g.branch_point(), std::move(x), std::move(pp));
}

RationalDatum RationalSymbol::apply(const RationalDatum& phi) const
{
    return solve_operator(den, apply_operator(num, phi));
}

RationalDatum apply_row(const std::vector<RationalSymbol>& row, const std::vector<RationalDatum>& data)
{
    if (row.size() != data.size()) throw std::invalid_argument("row and data sizes differ");
    // distinct denominators, compared coefficientwise
    std::vector<ZetaPoly> dens;
    for (const auto& sym : row) {
        bool seen = false;
        for (const auto& d : dens)
            if (d.c == sym.den.c) seen = true;
        if (!seen) dens.push_back(sym.den);
    }
    ZetaPoly common = ZetaPoly::constant(1.0);
    for (const auto& d : dens) common = common * d;
    RationalDatum rhs;
    for (std::size_t j = 0; j < row.size(); ++j) {
        ZetaPoly other = ZetaPoly::constant(1.0);
        for (const auto& d : dens)
            if (d.c != row[j].den.c) other = other * d;
        rhs = rhs + apply_operator(row[j].num * other, data[j]);
    }
    return solve_operator(common, rhs);
}

std::vector<std::vector<RationalSymbol>> vandermonde_symbols(const std::vector<MonomialFactor>& factors)
{
    const std::size_t n = factors.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = i + 1; k < n; ++k)
            if (factors[i].q == factors[k].q && std::abs(factors[i].lambda - factors[k].lambda) < 1e-14)
                throw SpecError("repeated monomial factor");
    std::vector<std::vector<RationalSymbol>> c(n, std::vector<RationalSymbol>(n));
    for (std::size_t i = 0; i < n; ++i) {
        // Π_{k≠i}(x - μ_k) as a polynomial in x with ZetaPoly coefficients
        std::vector<ZetaPoly> numer{ZetaPoly::constant(1.0)};
        ZetaPoly denom = ZetaPoly::constant(1.0);
        for (std::size_t k = 0; k < n; ++k) {
            if (k == i) continue;
            std::vector<ZetaPoly> next(numer.size() + 1);
            for (std::size_t j = 0; j < numer.size(); ++j) {
                next[j + 1] = next[j + 1] + numer[j];
                next[j] = next[j] - numer[j] * factors[k].mu();
            }
            numer = std::move(next);
            denom = denom * (factors[i].mu() - factors[k].mu());
        }
        for (std::size_t j = 0; j < n; ++j) c[i][j] = RationalSymbol{numer[j], denom};
    }
    return c;
}

std::vector<std::vector<RationalSymbol>> heat_airy_example_symbols()
{
    ZetaPoly z1({0.0, 1.0});
    ZetaPoly zm1({-1.0, 1.0});
    ZetaPoly one = ZetaPoly::constant(1.0);
    ZetaPoly z2_minus_z3({0.0, 0.0, 1.0, -1.0});
    ZetaPoly one_minus_z({1.0, -1.0});
    ZetaPoly z3_minus_z2({0.0, 0.0, -1.0, 1.0});
    return {{RationalSymbol{z1, zm1}, RationalSymbol{one, z2_minus_z3}},
            {RationalSymbol{one, one_minus_z}, RationalSymbol{one, z3_minus_z2}}};
}

} // namespace mpde
