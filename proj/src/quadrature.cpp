#include "mpde/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <queue>
#include <vector>

namespace mpde {

namespace {

struct Piece {
    double a, b;
    cplx value;
    double error;
    bool operator<(const Piece& o) const { return error < o.error; }
};

Piece gk31(const std::function<cplx(double)>& f, double a, double b)
{
    double err = 0.0;
    cplx v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &err);
    // the single-rule error is reported on the reference interval [-1, 1]
    return {a, b, v, err * 0.5 * (b - a)};
}

QuadratureResult run(const std::function<cplx(double)>& f, std::vector<double> cuts, double abs_tol,
                     std::size_t max_evaluations)
{
    std::priority_queue<Piece> heap;
    QuadratureResult out;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Piece p = gk31(f, cuts[i], cuts[i + 1]);
        out.evaluations += 31;
        total_err += p.error;
        heap.push(p);
    }
    while (total_err > abs_tol && out.evaluations + 62 <= max_evaluations) {
        Piece worst = heap.top();
        heap.pop();
        double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) { // no room left to bisect
            heap.push(worst);
            break;
        }
        Piece l = gk31(f, worst.a, mid), r = gk31(f, mid, worst.b);
        out.evaluations += 62;
        total_err += l.error + r.error - worst.error;
        heap.push(l);
        heap.push(r);
    }
    // re-sum to avoid drift in the running totals
    out.error = 0.0;
    while (!heap.empty()) {
        out.value += heap.top().value;
        out.error += heap.top().error;
        heap.pop();
    }
    out.converged = out.error <= abs_tol;
    return out;
}

} // namespace

QuadratureResult integrate_segment(const std::function<cplx(double)>& f, double a, double b, double abs_tol,
                                   std::size_t max_evaluations)
{
    return run(f, {a, b}, abs_tol, max_evaluations);
}

QuadratureResult integrate_panels(const std::function<cplx(double)>& f, double R, int panels, double abs_tol,
                                  std::size_t max_evaluations)
{
    if (panels < 1) panels = 1;
    std::vector<double> cuts(panels + 1);
    for (int i = 0; i <= panels; ++i) cuts[i] = R * i / panels;
    return run(f, std::move(cuts), abs_tol, max_evaluations);
}

cplx periodic_mean(const std::function<cplx(double)>& f, int nodes)
{
    cplx s = 0.0;
    for (int j = 0; j < nodes; ++j) s += f(2 * pi * j / nodes);
    return s / static_cast<double>(nodes);
}

} // namespace mpde
