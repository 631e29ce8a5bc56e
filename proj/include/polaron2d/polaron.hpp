#pragma once

// Polaron and perturbed-polaron self-consistency solvers.
//
// The polaron equation:  e = -L^-2 sum_{k^2<=mu} 1/G(k, -k^2-e), lowest
// negative root. The perturbed equation at q = 0 with subtraction r:
//   E0 - lambda = L^-2 sum_{k^2<=mu} 1/(G(0, E0-lambda-k^2) - r),
// solved in the cancellation-free variable delta = E0 - lambda on
// [|e_p|, infinity), i.e. lambda <= E0 + e_p by construction.
//
// FermiField provides the Fermi-sea G values both solvers and the trial-state
// identity share. Below a mode-count threshold every G(k,.) is the exact
// per-mode lattice evaluation; above it the field switches to the
// angular-averaged radial profile (exact shell multiplicities r2(n), closed
// angular average, blocked radial sums, Chebyshev interpolation in the shell
// variable), whose bias against the exact field is orders of magnitude below
// the asymptotic bands it feeds. Evaluations are deterministic and cached per
// energy, so a converged solve and a later identity check see bitwise
// identical sums.

#include <cmath>
#include <memory>

#include "polaron2d/gfunc.hpp"

namespace polaron2d::polaron {

struct FieldOptions {
  std::int64_t exact_max_modes = 20000;  // N(mu) above this -> radial field
  int force_mode = 0;                    // 0 auto, 1 exact, 2 radial
  double tail_tol = 1e-5;                // annulus tail certificate target
  std::int64_t mode_cap = lattice::kDefaultModeCap;
  double interp_tol_rel = 1e-9;          // radial-profile interpolation target
};

struct FieldEval {
  double sum_inv_g = 0.0;      // L^-2 sum_{k^2<=mu} 1/G(k, -k^2-e)
  double sum_abs_inv_g = 0.0;  // L^-2 sum |1/G|
  double min_g = 0.0;
  bool pole = false;           // G <= 0 somewhere in the Fermi sea
  std::int64_t evaluations = 0;
};

class FermiField {
 public:
  FermiField(const gfunc::PhysParams& p, const FieldOptions& opt = {});
  ~FermiField();
  FermiField(FermiField&&) noexcept;
  FermiField& operator=(FermiField&&) noexcept;

  const FieldEval& eval(double e);

  bool exact_path() const;
  double fermi_energy_sum() const;  // E0(mu)
  std::int64_t mode_count() const;  // N(mu)
  const gfunc::PhysParams& params() const;
  const FieldOptions& options() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct SolveOptions {
  double tol = std::nan("");  // default: 1e-10 * max(|e|, mu/log(mu_tilde))
  int scan_per_decade = 8;
  double scan_min_factor = 1e-6;
  double scan_max_factor = 10.0;
  int max_bisect = 240;
  FieldOptions field;
};

struct PolaronSolution {
  double e_p = 0.0;
  double residual = 0.0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
  std::int64_t evaluations = 0;
  bool regime_wellcoupled = false;
  bool regime_asymptotic = false;
};

PolaronSolution solve_polaron(FermiField& field, const SolveOptions& opts = {});
PolaronSolution solve_polaron(const gfunc::PhysParams& p, const SolveOptions& opts = {});

struct AsymptoticPolaron {
  double leading = 0.0;              // -(1+1/M) * mu / log(mu_tilde)
  double band_halfwidth_scale = 0.0; // mu / log(mu_tilde)^2
};
AsymptoticPolaron asymptotic_polaron(const gfunc::PhysParams& p);

struct TrialStateIdentity {
  double value = 0.0;       // sum_k G_k^-1 * [1 + (L^-2 sum_k G_k^-1)/e]
  double sum_abs = 0.0;     // sum_k |G_k^-1|
  double normalized = 0.0;  // value / sum_abs
};
TrialStateIdentity trial_state_identity(FermiField& field, double e);
TrialStateIdentity trial_state_identity(const gfunc::PhysParams& p, double e,
                                        const FieldOptions& opt = {});

// E0(mu) + e_p: the variational upper bound this artifact certifies.
double upper_bound_energy(const gfunc::PhysParams& p, const PolaronSolution& sol);

struct PerturbedOptions {
  double tol = std::nan("");
  int max_bisect = 240;
  double interp_tol_rel = 1e-10;
  FieldOptions field;  // for the embedded polaron solve
};

struct PerturbedSolution {
  double lambda = 0.0;
  double r = 0.0;
  double gap = 0.0;    // E0 + e_p - lambda >= 0
  double delta = 0.0;  // E0 - lambda
  double residual = 0.0;
  std::int64_t evaluations = 0;
};

PerturbedSolution solve_perturbed(const gfunc::PhysParams& p, double r,
                                  const PerturbedOptions& opts = {},
                                  const PolaronSolution* pol = nullptr);

struct TheoremBand {
  double center = 0.0;           // E0 + e_p
  double halfwidth_scale = 0.0;  // |e_p| / log(mu_tilde); NaN when mu_tilde <= 1
  bool regime_ok = false;
};
TheoremBand theorem_band(const gfunc::PhysParams& p, double e_p);

}  // namespace polaron2d::polaron
