#pragma once

#include "mpde/rational.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mpde {

/// Values of the transcendental generators an ExactAngle may refer to:
/// arg z0 and arg λ0 of each root class whose argument is not a known
/// rational multiple of pi.
struct AngleBasis {
    double arg_z0 = 0.0;
    std::optional<Rational> arg_z0_over_pi;
    std::vector<double> arg_lambda;
    std::vector<std::optional<Rational>> arg_lambda_over_pi;

    /// Basis for a branch point; detects arg z0 = r pi with denominator <= 48.
    static std::shared_ptr<AngleBasis> for_branch_point(cplx z0, std::optional<Rational> arg_over_pi = {});
    /// Registers arg λ0 as a generator and returns its index.
    std::size_t add_lambda_generator(double arg, std::optional<Rational> over_pi = {});
};

struct AngleOrder {
    int sign = 0;         ///< -1, 0, +1
    bool symbolic = true; ///< false when decided by the float fallback
};

/// c_pi·pi + c_z0·arg z0 + Σ c_k·arg λ_k with rational coefficients.
class ExactAngle {
public:
    ExactAngle() = default;
    explicit ExactAngle(std::shared_ptr<const AngleBasis> basis) : basis_(std::move(basis)) {}

    static ExactAngle pi_multiple(const Rational& r, std::shared_ptr<const AngleBasis> basis);
    static ExactAngle arg_z0(std::shared_ptr<const AngleBasis> basis);
    static ExactAngle arg_lambda(std::size_t k, std::shared_ptr<const AngleBasis> basis);

    const Rational& coeff_pi() const { return c_pi_; }
    const Rational& coeff_argz0() const { return c_z0_; }
    const std::vector<Rational>& coeff_arglam() const { return c_lam_; }
    const std::shared_ptr<const AngleBasis>& basis() const { return basis_; }

    void set_coefficients(const Rational& pi, const Rational& z0, std::vector<Rational> lam);

    double value() const;
    /// The angle divided by pi, when every generator it uses is known exactly.
    std::optional<Rational> exact_over_pi() const;
    bool is_zero_symbolically() const;

    ExactAngle operator+(const ExactAngle& o) const;
    ExactAngle operator-(const ExactAngle& o) const;
    ExactAngle operator-() const;
    ExactAngle operator*(const Rational& r) const;

    /// Same coefficients (not merely the same value).
    bool symbolically_equal(const ExactAngle& o) const;

    std::string to_string() const;

private:
    std::shared_ptr<const AngleBasis> basis_;
    Rational c_pi_{0};
    Rational c_z0_{0};
    std::vector<Rational> c_lam_;
};

/// Orders a and b: exactly when their difference is a known rational
/// multiple of pi, otherwise by floats with 1e-12 tolerance.
AngleOrder compare(const ExactAngle& a, const ExactAngle& b);

inline bool angle_less(const ExactAngle& a, const ExactAngle& b) { return compare(a, b).sign < 0; }

const ExactAngle& angle_max(const ExactAngle& a, const ExactAngle& b);
const ExactAngle& angle_min(const ExactAngle& a, const ExactAngle& b);

/// floor(a / period) for a positive period.
std::int64_t angle_floor_div(const ExactAngle& a, const ExactAngle& period);

/// Parses symbolic angles such as "pi/3", "2*argz0+2*pi", "-argz0 + 1/2*pi"
/// or "3/2*arglam0". Plain numbers are rejected; callers treat those as
/// floating-point radians.
ExactAngle parse_angle(const std::string& text, std::shared_ptr<const AngleBasis> basis);

} // namespace mpde
