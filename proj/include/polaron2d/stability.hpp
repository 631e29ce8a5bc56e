#pragma once

// Stability functionals for the positive-density lower bound:
//
//   beta(u,eps) = min{ 1, (M+1-u)(M+2)(1 - (1 + (M+1-u)/(M(M+2))) sqrt(eps))
//                         / ((M+1-u)(1-2 sqrt(eps)) + M(M+2)(1-sqrt(eps))) },
//   alpha(M,eps) = 1/2 ( 1/(M(1-sqrt(eps))+1)
//                        + int_0^1 du / (beta(u,eps) (M(1-sqrt(eps))+1-u)) ),
//
// the mass stability margin (1-eps^{1/3}) M/(M+1) - alpha(M,eps)/(1-eps), and
// the critical mass ratio where the zero-density margin changes sign.

#include "polaron2d/errors.hpp"

namespace polaron2d::stability {

// Largest eps this module accepts for a given M: keeps beta's numerator and
// denominator positive on all of u in [0,1] (and sqrt(eps) <= 1/2).
double eps_ceiling(double M);

double beta_u(double u, double eps, double M);

double alpha_M(double M, double eps, double quad_tol = 1e-10);

struct StabilityResult {
  double M = 0.0;
  double eps = 0.0;
  double alpha = 0.0;
  double margin = 0.0;
  bool condition_holds = false;
};

StabilityResult stability_margin(double M, double eps, double quad_tol = 1e-10);

struct CriticalMass {
  double M_star = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

// Bisection root of the margin in M, initial bracket [1,2], widened once to
// [0.5, 5] before failing.
CriticalMass critical_mass(double eps, double tol = 1e-6, double quad_tol = 1e-10);

// Decomposition error budget eps^{-1/2} (eps^{-1/2} + sqrt(log mu_tilde)
// + eps log mu_tilde).
double k_error(double eps, double mu_tilde);

}  // namespace polaron2d::stability
