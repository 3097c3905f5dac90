#pragma once

#include "mpde/rational.hpp"

#include <string>
#include <vector>

namespace mpde {

/// One factor Γ_s(u)^exponent with Γ_s(u) = Γ(1+su) for s >= 0 and
/// 1/Γ(1-su) for s < 0.
struct GammaFactor {
    Rational s;
    int exponent = 1;
};

/// Finite product of Γ_s factors.
class MomentFunction {
public:
    MomentFunction() = default;
    explicit MomentFunction(std::vector<GammaFactor> factors);

    static MomentFunction gamma(const Rational& s);
    /// Γ(1 + u/k), the moment function of the classical kernel of order k.
    static MomentFunction classical(const Rational& k) { return gamma(1 / k); }

    const std::vector<GammaFactor>& factors() const { return factors_; }

    Rational order() const;
    /// log m(u), u >= 0.
    double log_eval(double u) const;
    double eval(double u) const;

    /// True when the product reduces to a single Γ_s with s > 0.
    bool is_classical() const;

    MomentFunction operator*(const MomentFunction& other) const;
    MomentFunction operator/(const MomentFunction& other) const;
    bool operator==(const MomentFunction& other) const { return factors_ == other.factors_; }

    std::string describe() const;

private:
    void normalize();
    std::vector<GammaFactor> factors_;
};

inline bool operator==(const GammaFactor& a, const GammaFactor& b)
{
    return a.s == b.s && a.exponent == b.exponent;
}

double moment_eval(const MomentFunction& m, double u);
Rational moment_order(const MomentFunction& m);

struct MittagLefflerValue {
    cplx value;
    double error_estimate = 0.0;
    bool converged = true;
};

/// E_alpha(z) = Σ z^j / Γ(1 + alpha j).
MittagLefflerValue mittag_leffler(const Rational& alpha, cplx z);

/// Classical kernel e_m(z) = k z^k exp(-z^k) of order k with ramification p.
struct ClassicalKernel {
    Rational k;
    int p = 1;

    explicit ClassicalKernel(const Rational& order);
    MomentFunction moment() const { return MomentFunction::classical(k); }
};

struct KernelValue {
    cplx value;
    bool in_flat_sector = true;
};

KernelValue kernel_e(const ClassicalKernel& kernel, cplx z);

/// E_m(z) = Σ z^n/m(n) for the classical kernel, i.e. E_{1/k}(z).
MittagLefflerValue kernel_E(const ClassicalKernel& kernel, cplx z);

} // namespace mpde
