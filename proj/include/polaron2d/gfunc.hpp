#pragma once

// The lattice pair function G(q, tau) and its relatives:
//
//   G(q,tau) = L^-2 sum_k [ 1/(m k^2 + |E_B|)
//                           - chi(k^2 > mu) / ((q-k)^2/M + k^2 + tau) ],
//   m = (M+1)/M,  tau > -mu,
//
// evaluated as complete symmetric shells up to an energy cutoff plus a
// closed-form continuum tail with a certified bound; the finite truncation
// G^(n); the smoothed variant (cosine ramp replacing the sharp Fermi edge);
// the thermodynamic-limit closed form; and Poisson-summation residuals.

#include <cmath>
#include <vector>

#include "polaron2d/errors.hpp"
#include "polaron2d/lattice.hpp"

namespace polaron2d::gfunc {

inline constexpr double kDefaultAsymptoticC0 = 100.0;

// Kernel convention for the renormalized first sum (and, in the mass_free
// case, the particle-hole denominator as well: the infinite-mass-impurity
// convention uses 1/(k^2 - E_B) and 1/(k^2 + tau) with no reduced-mass
// factor). Never chosen silently; mass_free is the default only for
// g_truncated, whose defining display uses it.
enum class Kernel { with_mass, mass_free };

struct PhysParams {
  double mass_ratio;  // M > 0
  double binding;     // E_B < 0
  double mu;          // Fermi energy > 0
  lattice::LatticeSpec box;

  PhysParams(double M, double E_B, double mu_, lattice::LatticeSpec spec);

  double m() const { return (mass_ratio + 1.0) / mass_ratio; }
  double abs_binding() const { return -binding; }
  double mu_tilde() const { return mu / abs_binding(); }
  // L^2 |E_B| >= 1: binding at least the minimal kinetic excitation scale.
  bool well_coupled() const { return box.area() * abs_binding() >= 1.0; }
  bool asymptotic(double c0 = kDefaultAsymptoticC0) const { return mu_tilde() >= c0; }
};

struct GPolicy {
  // Cutoff selection: when tail_tol is NaN, Lambda = cutoff_factor * mu
  // (clamped up to the validity floor of the tail formulas). When tail_tol is
  // set, Lambda grows until the tail certificate's error terms fall below it;
  // failure to get there within mode_cap is a ConvergenceError.
  double cutoff_factor = 1e4;
  double tail_tol = std::nan("");
  std::int64_t mode_cap = lattice::kDefaultModeCap;
  Kernel kernel = Kernel::with_mass;
};

struct GEvaluation {
  double value = 0.0;
  double cutoff_k2 = 0.0;        // Lambda actually used (integer-shell aligned)
  double tail_correction = 0.0;  // closed-form continuum integral over k^2 > Lambda
  double tail_bound = 0.0;       // rigorous bound on |tail_correction| and on the true lattice tail
  double tail_error_estimate = 0.0;  // certificate error terms for sum-vs-integral of the tail
  std::int64_t modes_used = 0;
};

// G(q,tau) for q in R^2 (lattice q included). q is canonicalized by the
// dihedral symmetry of the lattice before summation, so symmetry-equivalent
// q give bitwise-identical results. Throws DomainError when tau <= -mu.
GEvaluation g_lattice(const PhysParams& p, double qx, double qy, double tau,
                      const GPolicy& policy = {});

// Finite truncation over k^2 <= n_cut at q = 0, no tail:
//   mass_free:  L^-2 sum [ 1/(k^2+|E_B|) - chi(k^2>mu)/(k^2+tau) ]
//   with_mass:  L^-2 sum [ 1/(m k^2+|E_B|) - chi(k^2>mu)/(m k^2+tau) ]
// Requires n_cut >= mu and tau > -mu.
double g_truncated(const PhysParams& p, double n_cut, double tau,
                   Kernel kernel = Kernel::mass_free);

// Smoothed Fermi-edge cutoff: 0 below mu, rising cosine ramp of width
// mu/log(mu_tilde), 1 above. Requires mu_tilde > 1.
double xi_mu(double s, double mu, double mu_tilde);

// G with chi(k^2>mu) replaced by xi_mu(k^2). Requires mu_tilde > 1.
GEvaluation g_smoothed(const PhysParams& p, double qx, double qy, double tau,
                       const GPolicy& policy = {});

// F(s,tau) entering the closed-form evaluation of the continuum integral;
// 0 <= F <= 1 + 1/M. Throws DomainError on a negative radicand.
double f_kernel(const PhysParams& p, double s, double tau);

// Thermodynamic-limit (L -> infinity) value of G:
//   (4 pi m)^-1 [ log((q^2/(M+1) + tau + m mu)/|E_B|) + log(1 - F(q^2,tau)/2) ].
// The log bound on the second term is certified only for M > 1
// (continuum_certified); smaller M is evaluated but uncertified.
double g_continuum(const PhysParams& p, double q2, double tau);
bool continuum_certified(const PhysParams& p);

// Closed-form continuum integral of the G integrand over k^2 > from_k2
// (with_mass kernel). Requires from_k2 at or above the tail-validity floor
// returned by tail_validity_floor.
double tail_integral(const PhysParams& p, double q2, double tau, double from_k2);
double tail_validity_floor(const PhysParams& p, double q2, double tau);

struct PoissonRow {
  double box_side = 0.0;
  double residual = 0.0;  // g_lattice - g_continuum
  double scaled = 0.0;    // residual * (L^2 |E_B|)^(3/2)
  bool regime_ok = false; // L^2 |E_B| >= 1
};

// Lattice-vs-continuum residual across box sizes at fixed (M, E_B, mu, q, tau).
std::vector<PoissonRow> poisson_residual(double M, double E_B, double mu,
                                         double qx, double qy, double tau,
                                         const std::vector<double>& box_sides,
                                         const GPolicy& policy = {});

}  // namespace polaron2d::gfunc
