#pragma once

#include "mpde/rational.hpp"

#include <vector>

namespace mpde {

/// φ(z) = Σ_k c_k / (z0 - z)^k + Σ_j a_j z^j: a rational function whose only
/// pole is the branch point z0.
class RationalDatum {
public:
    RationalDatum() = default;
    /// poles[k-1] is the coefficient of 1/(z0 - z)^k.
    RationalDatum(cplx z0, std::vector<cplx> poles, std::vector<cplx> poly = {});

    static RationalDatum simple_pole(cplx z0, cplx c = 1.0) { return RationalDatum(z0, {c}); }
    static RationalDatum polynomial(std::vector<cplx> poly) { return RationalDatum(0.0, {}, std::move(poly)); }

    cplx branch_point() const { return z0_; }
    const std::vector<cplx>& poles() const { return poles_; }
    const std::vector<cplx>& poly() const { return poly_; }
    int max_order() const { return static_cast<int>(poles_.size()); }
    bool is_entire() const { return poles_.empty(); }
    int poly_degree() const { return static_cast<int>(poly_.size()) - 1; }

    cplx operator()(cplx z) const;
    /// n-th derivative as a rational datum.
    RationalDatum derivative(int n = 1) const;
    /// Taylor coefficients a_0..a_n of φ at z.
    std::vector<cplx> taylor(cplx z, int n) const;
    /// s ↦ φ(z + s), a datum with branch point z0 - z.
    RationalDatum shifted(cplx z) const;
    /// s ↦ φ(c s) for c != 0.
    RationalDatum scaled(cplx c) const;
    /// Coefficient of h^{-k} in the Laurent expansion at z0 (h = w - z0), k >= 1.
    cplx laurent_negative(int k) const;

    RationalDatum operator+(const RationalDatum& o) const;
    RationalDatum operator-(const RationalDatum& o) const;
    RationalDatum operator*(cplx s) const;

    /// Max-norm distance between coefficient vectors (same branch point assumed).
    double coefficient_distance(const RationalDatum& o) const;

private:
    void trim();
    cplx z0_{0.0};
    std::vector<cplx> poles_;
    std::vector<cplx> poly_;
};

} // namespace mpde
