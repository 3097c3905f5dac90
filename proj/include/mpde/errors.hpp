#pragma once

#include <stdexcept>
#include <string>

namespace mpde {

/// Malformed or inconsistent problem input.
struct SpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Polynomial whose leading lambda coefficient vanishes identically.
struct DegeneratePolynomial : SpecError {
    using SpecError::SpecError;
};

/// A requested summation direction coincides with a singular direction.
struct SingularDirection : std::runtime_error {
    SingularDirection(const std::string& what, double direction)
        : std::runtime_error(what), offending(direction) {}
    double offending;
};

/// The Laplace kernel does not decay on the integration ray.
struct KernelNonDecay : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A quadrature or series evaluation missed its tolerance.
struct NumericalFailure : std::runtime_error {
    NumericalFailure(const std::string& what, double best = 0.0)
        : std::runtime_error(what), best_estimate(best) {}
    double best_estimate;
};

/// Evaluation point hits a pole of the Cauchy datum.
struct PoleCollision : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Requested sector parameter leaves the admissible range.
struct EpsTooLarge : std::runtime_error {
    EpsTooLarge(const std::string& what, double max_eps)
        : std::runtime_error(what), max_admissible(max_eps) {}
    double max_admissible;
};

/// A rational symbol applied to rational data produced a non-rational result.
struct NonRationalAction : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace mpde
