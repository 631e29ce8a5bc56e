#include "polaron2d/stability.hpp"

#include <cmath>
#include <string>

#include "polaron2d/quadrature.hpp"

namespace polaron2d::stability {

namespace {

void validate_m(double M) {
  if (!(M > 0.0) || !std::isfinite(M)) {
    throw DomainError("stability: mass ratio must be positive");
  }
}

struct BetaParts {
  double num, den;
};

BetaParts beta_parts(double u, double sqe, double M) {
  const double a = M + 1.0 - u;
  const double b = M * (M + 2.0);
  BetaParts parts;
  parts.num = a * (M + 2.0) * (1.0 - (1.0 + a / b) * sqe);
  parts.den = a * (1.0 - 2.0 * sqe) + b * (1.0 - sqe);
  return parts;
}

}  // namespace

double eps_ceiling(double M) {
  validate_m(M);
  const double b = M * (M + 2.0);
  const double s_num = b / (b + M + 1.0);  // numerator positivity, worst at u=0
  const double s = std::min(s_num, 0.5);
  return s * s;
}

double beta_u(double u, double eps, double M) {
  validate_m(M);
  if (!(u >= 0.0) || !(u <= 1.0)) throw DomainError("beta_u: u must lie in [0,1]");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw DomainError("beta_u: eps must be >= 0");
  const double sqe = std::sqrt(eps);
  const BetaParts parts = beta_parts(u, sqe, M);
  if (!(parts.num > 0.0)) {
    throw DomainError("beta_u: numerator nonpositive at eps=" + std::to_string(eps));
  }
  if (!(parts.den > 0.0)) {
    throw DomainError("beta_u: denominator nonpositive at eps=" + std::to_string(eps));
  }
  return std::min(1.0, parts.num / parts.den);
}

double alpha_M(double M, double eps, double quad_tol) {
  validate_m(M);
  if (!(eps >= 0.0) || eps >= eps_ceiling(M)) {
    throw DomainError("alpha_M: eps outside [0, eps_ceiling(M)) for M=" +
                      std::to_string(M));
  }
  if (!(quad_tol > 0.0)) throw DomainError("alpha_M: quad_tol must be positive");
  const double sqe = std::sqrt(eps);
  const double d0 = M * (1.0 - sqe) + 1.0;
  if (!(d0 - 1.0 > 0.0)) throw DomainError("alpha_M: M(1-sqrt(eps)) must be positive");

  auto integrand = [&](double u) { return 1.0 / (beta_u(u, eps, M) * (d0 - u)); };

  // beta's min{1, .} kink: locate where the ratio crosses 1 so each adaptive
  // pass sees a smooth piece.
  auto ratio_minus_one = [&](double u) {
    const BetaParts parts = beta_parts(u, sqe, M);
    return parts.num / parts.den - 1.0;
  };
  double split = -1.0;
  const double r0 = ratio_minus_one(0.0);
  const double r1 = ratio_minus_one(1.0);
  if ((r0 > 0.0) != (r1 > 0.0)) {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      if ((ratio_minus_one(mid) > 0.0) == (r0 > 0.0)) {
        lo = mid;
      } else {
        hi = mid;
      }
      if (hi - lo < 1e-15) break;
    }
    split = 0.5 * (lo + hi);
  }

  double integral;
  if (split > 0.0 && split < 1.0) {
    integral = quad::integrate(integrand, 0.0, split, 0.5 * quad_tol).value +
               quad::integrate(integrand, split, 1.0, 0.5 * quad_tol).value;
  } else {
    integral = quad::integrate(integrand, 0.0, 1.0, quad_tol).value;
  }
  return 0.5 * (1.0 / d0 + integral);
}

StabilityResult stability_margin(double M, double eps, double quad_tol) {
  StabilityResult out;
  out.M = M;
  out.eps = eps;
  out.alpha = alpha_M(M, eps, quad_tol);
  out.margin = (1.0 - std::cbrt(eps)) * M / (M + 1.0) - out.alpha / (1.0 - eps);
  out.condition_holds = out.margin >= 0.0;
  return out;
}

CriticalMass critical_mass(double eps, double tol, double quad_tol) {
  if (!(tol > 0.0)) throw DomainError("critical_mass: tol must be positive");
  auto margin_at = [&](double M) { return stability_margin(M, eps, quad_tol).margin; };

  double lo = 1.0, hi = 2.0;
  double f_lo = margin_at(lo), f_hi = margin_at(hi);
  if ((f_lo < 0.0) == (f_hi < 0.0)) {
    lo = 0.5;
    hi = 5.0;
    f_lo = margin_at(lo);
    f_hi = margin_at(hi);
    if ((f_lo < 0.0) == (f_hi < 0.0)) {
      throw BracketError("critical_mass: no sign change of the margin on [0.5, 5]");
    }
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = margin_at(mid);
    if ((fm < 0.0) == (f_lo < 0.0)) {
      lo = mid;
      f_lo = fm;
    } else {
      hi = mid;
      f_hi = fm;
    }
  }
  CriticalMass out;
  out.M_star = 0.5 * (lo + hi);
  out.bracket_lo = lo;
  out.bracket_hi = hi;
  return out;
}

double k_error(double eps, double mu_tilde) {
  if (!(eps > 0.0)) throw DomainError("k_error: eps must be > 0");
  if (!(mu_tilde > 1.0)) throw DomainError("k_error: mu_tilde must be > 1");
  const double s = 1.0 / std::sqrt(eps);
  const double lg = std::log(mu_tilde);
  return s * (s + std::sqrt(lg) + eps * lg);
}

}  // namespace polaron2d::stability
