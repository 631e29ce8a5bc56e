#pragma once

// Test-side oracles, deliberately independent of the library's evaluation
// paths: plain double-loop lattice sums (no shell tables, no tail closed
// forms), nested Gauss-Kronrod quadrature from boost for continuum integrals,
// and dense-scan bisection for the self-consistency roots.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <functional>
#include <numbers>

namespace oracles {

inline constexpr double kPi = std::numbers::pi;

// Raw truncated pair-function sum at cutoff k^2 <= cap, reduced-mass kernel.
inline double brute_g(double M, double E_B, double mu, double L, double qx,
                      double qy, double tau, double cap) {
  const double m = (M + 1.0) / M;
  const double eb = -E_B;
  const double kap = 2.0 * kPi / L;
  const double ks = kap * kap;
  const auto R = static_cast<long long>(std::floor(std::sqrt(cap / ks))) + 2;
  double acc = 0.0;
  for (long long ix = -R; ix <= R; ++ix) {
    for (long long iy = -R; iy <= R; ++iy) {
      const double k2 = ks * static_cast<double>(ix * ix + iy * iy);
      if (k2 > cap) continue;
      double term = 1.0 / (m * k2 + eb);
      if (k2 > mu) {
        const double dx = qx - kap * static_cast<double>(ix);
        const double dy = qy - kap * static_cast<double>(iy);
        term -= 1.0 / ((dx * dx + dy * dy) / M + k2 + tau);
      }
      acc += term;
    }
  }
  return acc / (L * L);
}

// Cutoff-extrapolated value: cutoffs Lambda and 10*Lambda, 1/Lambda Richardson.
inline double brute_g_extrapolated(double M, double E_B, double mu, double L,
                                   double qx, double qy, double tau,
                                   double cap_hi) {
  const double s1 = brute_g(M, E_B, mu, L, qx, qy, tau, cap_hi / 10.0);
  const double s2 = brute_g(M, E_B, mu, L, qx, qy, tau, cap_hi);
  return (10.0 * s2 - s1) / 9.0;
}

// 2D adaptive quadrature of the continuum integrand over R^2 in polar form,
// the angular integral done numerically (no closed forms shared with the
// implementation). Splits the radial axis at the Fermi edge.
inline double quad2d_continuum(double M, double E_B, double mu, double q2,
                               double tau, double tol = 1e-10) {
  using boost::math::quadrature::gauss_kronrod;
  const double m = (M + 1.0) / M;
  const double eb = -E_B;
  const double q = std::sqrt(q2);

  auto angular = [&](double t, bool with_hole) {
    // integral over theta in [0, 2pi] of the integrand at |k| = t
    auto f = [&](double th) {
      const double k2 = t * t;
      double val = 1.0 / (m * k2 + eb);
      if (with_hole && k2 > mu) {
        const double dot = q * t * std::cos(th);
        val -= 1.0 / ((q2 - 2.0 * dot + k2) / M + k2 + tau);
      }
      return val;
    };
    return gauss_kronrod<double, 61>::integrate(f, 0.0, 2.0 * kPi, 10, tol * 0.1);
  };

  auto radial = [&](double a, double b) {
    auto f = [&](double t) { return t * angular(t, true); };
    return gauss_kronrod<double, 61>::integrate(f, a, b, 12, tol * 0.1);
  };

  const double sq_mu = std::sqrt(mu);
  double acc = radial(0.0, sq_mu);
  // geometric panels outward until the difference integrand is negligible
  double a = sq_mu;
  double h = std::max(1.0, sq_mu);
  for (int i = 0; i < 200; ++i) {
    const double b = a + h;
    const double piece = radial(a, b);
    acc += piece;
    if (std::abs(piece) < 0.05 * tol && i > 2) break;
    a = b;
    h *= 2.0;
  }
  return acc / (4.0 * kPi * kPi);
}

// Dense-scan bisection for a scalar root of f on [lo, hi]: finds the most
// negative sign change on a fine grid and bisects to xtol.
inline double dense_scan_root(const std::function<double(double)>& f, double lo,
                              double hi, int grid, double xtol) {
  double a = lo, b = hi;
  double fa = f(a);
  bool found = false;
  for (int i = 1; i <= grid; ++i) {
    const double x = lo + (hi - lo) * i / grid;
    const double fx = f(x);
    if ((fa < 0.0) != (fx < 0.0)) {
      b = x;
      a = lo + (hi - lo) * (i - 1) / grid;
      found = true;
      break;
    }
    fa = fx;
  }
  if (!found) return std::nan("");
  fa = f(a);
  while (b - a > xtol) {
    const double mid = 0.5 * (a + b);
    const double fm = f(mid);
    if ((fm < 0.0) == (fa < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace oracles
