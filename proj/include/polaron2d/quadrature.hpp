#pragma once

// Adaptive Gauss-Kronrod (7,15) quadrature with an absolute-error budget,
// plus a geometric-panel scheme for decaying integrands on [a, inf).

#include <functional>

#include "polaron2d/errors.hpp"

namespace polaron2d::quad {

struct Result {
  double value = 0.0;
  double error_estimate = 0.0;
  std::int64_t evaluations = 0;
};

// Integrate f over [a, b] to absolute tolerance abs_tol (plus rel_tol*|value|).
// Throws ConvergenceError when the interval budget is exhausted with the
// estimate still above 100x the requested tolerance.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, double rel_tol = 0.0, int max_intervals = 2000);

// Integrate f over [a, inf) for integrands decaying at infinity, by geometric
// panels of doubling width. Throws DivergenceError when panels fail to decay.
Result integrate_to_inf(const std::function<double(double)>& f, double a,
                        double abs_tol, double rel_tol = 0.0, int max_panels = 200);

}  // namespace polaron2d::quad
