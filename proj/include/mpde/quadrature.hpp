#pragma once

#include "mpde/rational.hpp"

#include <cstddef>
#include <functional>

namespace mpde {

struct QuadratureResult {
    cplx value{0.0};
    double error = 0.0;
    std::size_t evaluations = 0;
    bool converged = true;
};

/// Globally adaptive Gauss-Kronrod (15/31) of a complex integrand on [a, b]:
/// the interval with the largest error estimate is bisected until the total
/// estimate is below abs_tol or the evaluation budget is spent.
QuadratureResult integrate_segment(const std::function<cplx(double)>& f, double a, double b, double abs_tol,
                                   std::size_t max_evaluations = 200000);

/// Same, started from `panels` equal pieces of [0, R].
QuadratureResult integrate_panels(const std::function<cplx(double)>& f, double R, int panels, double abs_tol,
                                  std::size_t max_evaluations = 200000);

/// (1/N) Σ f(2πj/N): the trapezoid rule for the mean of a periodic function.
cplx periodic_mean(const std::function<cplx(double)>& f, int nodes);

} // namespace mpde
