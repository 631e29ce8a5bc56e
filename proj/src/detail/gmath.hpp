#pragma once

// Closed forms shared by the pair-function evaluators and the solvers:
// continuum tail integrals of the G integrand, the monotone even majorant of
// the shell-symmetrized summand, and the tail certificate terms.
//
// With-mass integrand difference, after the angular integral at fixed s = k^2:
//   (2pi)^-1 int dtheta [ 1/(m s + |E_B|) - 1/((q-k)^2/M + k^2 + tau) ]
//     = 1/(m s + |E_B|) - 1/sqrt(P(s)),
//   P(s) = (m s + c)^2 - 4 q^2 s / M^2,  c = q^2/M + tau,
// and  (4 pi^2)^-1 int_{k^2>Lambda} [...] d^2k
//     = (4 pi m)^-1 log( (2m sqrt(P) + 2m^2 Lambda + b) / (4m (m Lambda + |E_B|)) ),
//   b = 2 m c - 4 q^2 / M^2,
// valid once Lambda clears the positivity floor below.

#include <algorithm>
#include <cmath>
#include <numbers>

namespace polaron2d::detail {

inline constexpr double kPi = std::numbers::pi;

struct TailGeometry {
  double A = 0.0;       // majorant coefficient: |symmetrized summand| <= A / s^2
  double floor = 0.0;   // smallest admissible cutoff
};

inline TailGeometry tail_geometry_with_mass(double M, double m, double mu,
                                            double abs_eb, double q2, double tau) {
  const double c = q2 / M + tau;
  TailGeometry g;
  g.A = 4.0 * std::abs(c - abs_eb) / (m * m) + 32.0 * q2 / (M * M * m * m * m);
  g.floor = std::max({2.0 * mu, 2.0 * std::abs(c) / m, 32.0 * q2 / (M * M * m * m),
                      4.0 * abs_eb / m, 2.0 * std::abs(tau)});
  return g;
}

inline TailGeometry tail_geometry_mass_free(double mu, double abs_eb, double tau) {
  TailGeometry g;
  g.A = 2.0 * std::abs(tau - abs_eb);
  g.floor = std::max({2.0 * mu, 4.0 * std::abs(tau), 4.0 * abs_eb});
  return g;
}

// q = 0 specialization: the tail closed form is log((m Lambda + tau)/(m Lambda
// + |E_B|))/(4 pi m), valid for any Lambda with m*Lambda + tau > 0, and the
// majorant needs only m*Lambda >= 2*mu to cover tau > -mu. tau may be
// arbitrarily large positive without inflating the floor.
inline TailGeometry tail_geometry_q0(double m, double mu, double abs_eb, double tau) {
  TailGeometry g;
  g.A = 4.0 * std::abs(tau - abs_eb) / (m * m);
  g.floor = std::max(2.0 * mu, 4.0 * abs_eb / m);
  return g;
}

inline double tail_closed_q0(double m, double abs_eb, double tau, double lambda) {
  return std::log((m * lambda + tau) / (m * lambda + abs_eb)) / (4.0 * kPi * m);
}

inline double tail_closed_with_mass(double M, double m, double abs_eb, double q2,
                                    double tau, double lambda) {
  const double c = q2 / M + tau;
  const double b = 2.0 * m * c - 4.0 * q2 / (M * M);
  const double P = (m * lambda + c) * (m * lambda + c) - 4.0 * q2 * lambda / (M * M);
  const double u = 2.0 * m * std::sqrt(P) + 2.0 * m * m * lambda + b;
  return std::log(u / (4.0 * m * (m * lambda + abs_eb))) / (4.0 * kPi * m);
}

inline double tail_closed_mass_free(double abs_eb, double tau, double lambda) {
  return std::log((lambda + tau) / (lambda + abs_eb)) / (4.0 * kPi);
}

// Certificate error terms for replacing the lattice tail sum over k^2 >= lambda
// by the continuum integral, with the monotone majorant A/s^2:
//   (2/(pi L)) int_sqrt(lambda)^inf A/t^4 dt
//     + (4 sqrt(lambda)/(pi L) + 6/L^2) * A/lambda^2.
inline double tail_err_terms(double A, double L, double lambda) {
  const double l32 = lambda * std::sqrt(lambda);
  return (2.0 * A) / (3.0 * kPi * L * l32) + (4.0 * A) / (kPi * L * l32) +
         6.0 * A / (L * L * lambda * lambda);
}

// Smallest cutoff (above `floor`) whose error terms meet tol; solved from the
// dominant term and nudged up, so callers do not overshoot their mode caps.
inline double cutoff_for_tol(double A, double L, double floor, double tol) {
  const double coef = (2.0 / 3.0 + 4.0) / (kPi * L);
  double lambda = std::max(floor, std::pow(coef * A / tol, 2.0 / 3.0));
  while (tail_err_terms(A, L, lambda) > tol) lambda *= 1.19;
  return lambda;
}

// Rigorous bound on |tail| (both the true lattice tail and the closed-form
// correction): (1/2pi) int_sqrt(lambda)^inf (A/t^4) t dt + error terms.
inline double tail_bound_value(double A, double L, double lambda) {
  return A / (4.0 * kPi * lambda) + tail_err_terms(A, L, lambda);
}

}  // namespace polaron2d::detail
