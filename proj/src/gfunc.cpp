#include "polaron2d/gfunc.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "detail/gmath.hpp"
#include "detail/radial.hpp"

namespace polaron2d::gfunc {

namespace {

using detail::kPi;
using lattice::ShellTable;

struct CanonQ {
  double qa, qb, q2;
};

// The annulus sum is invariant under the dihedral symmetry of the lattice, so
// q is mapped to its first-octant representative before summation; symmetry-
// equivalent q then produce bitwise-identical sums.
CanonQ canonicalize(double qx, double qy) {
  double a = std::abs(qx), b = std::abs(qy);
  if (a < b) std::swap(a, b);
  return {a, b, a * a + b * b};
}

double kernel_mass_factor(const PhysParams& p, Kernel k) {
  return k == Kernel::with_mass ? p.m() : 1.0;
}

// (1/L^2) sum_{n <= n_top} r2(n) / (mf*ks*n + |E_B|), cached across calls that
// share a lattice and coupling (parameter grids hit this hard).
double renorm_sum(const PhysParams& p, Kernel kern, std::int64_t n_top) {
  struct Key {
    double ks, eb, mf;
    std::int64_t n;
    bool operator==(const Key&) const = default;
  };
  struct Entry {
    Key key;
    double value;
  };
  static std::mutex mtx;
  static std::vector<Entry> cache;

  const double ks = p.box.spacing_sq();
  const double eb = p.abs_binding();
  const double mf = kernel_mass_factor(p, kern);
  const Key key{ks, eb, mf, n_top};
  {
    std::lock_guard<std::mutex> lock(mtx);
    for (const auto& e : cache)
      if (e.key == key) return e.value;
  }
  const auto table = ShellTable::get(n_top);
  double acc = detail::renorm_radial_sum(*table, n_top, mf, ks, eb) / p.box.area();
  {
    std::lock_guard<std::mutex> lock(mtx);
    if (cache.size() >= 16) cache.erase(cache.begin());
    cache.push_back({key, acc});
  }
  return acc;
}

std::int64_t checked_mode_count(const lattice::LatticeSpec& spec, double lambda) {
  return lattice::disk_point_count(lattice::integer_cutoff(spec, lambda));
}

struct CutoffChoice {
  std::int64_t n_top = 0;
  double A_maj = 0.0;
};

CutoffChoice choose_cutoff(const PhysParams& p, double q2, double tau,
                           const GPolicy& policy, double extra_floor) {
  const detail::TailGeometry geo =
      policy.kernel == Kernel::with_mass
          ? detail::tail_geometry_with_mass(p.mass_ratio, p.m(), p.mu,
                                            p.abs_binding(), q2, tau)
          : detail::tail_geometry_mass_free(p.mu, p.abs_binding(), tau);
  const double L = p.box.box_side;
  const double ks = p.box.spacing_sq();
  double lambda = std::max({geo.floor, extra_floor, 4.0 * ks});

  CutoffChoice out;
  out.A_maj = geo.A;
  if (std::isnan(policy.tail_tol)) {
    lambda = std::max(policy.cutoff_factor * p.mu, lambda);
    if (checked_mode_count(p.box, lambda) > policy.mode_cap) {
      throw ResourceLimitError("g_lattice: fixed cutoff " + std::to_string(lambda) +
                               " exceeds the mode cap");
    }
  } else {
    lambda = detail::cutoff_for_tol(geo.A, L, lambda, policy.tail_tol);
    if (checked_mode_count(p.box, lambda) > policy.mode_cap) {
      throw ConvergenceError("g_lattice: cutoff policy cannot reach the requested "
                             "tail tolerance within the mode cap");
    }
  }
  out.n_top = lattice::integer_cutoff(p.box, lambda);
  return out;
}

GEvaluation eval_g(const PhysParams& p, double qx, double qy, double tau,
                   const GPolicy& policy, double extra_floor) {
  if (!std::isfinite(qx) || !std::isfinite(qy) || !std::isfinite(tau)) {
    throw DomainError("g_lattice: nonfinite argument");
  }
  if (!(tau > -p.mu)) {
    throw DomainError("g_lattice: tau must exceed -mu (tau=" + std::to_string(tau) +
                      ", mu=" + std::to_string(p.mu) + ")");
  }
  const CanonQ q = canonicalize(qx, qy);
  const double M = p.mass_ratio;
  const double m = p.m();
  const double eb = p.abs_binding();
  const double L = p.box.box_side;
  const double ks = p.box.spacing_sq();
  const double kap = p.box.spacing();

  const CutoffChoice cut = choose_cutoff(p, q.q2, tau, policy, extra_floor);
  const std::int64_t n_top = cut.n_top;
  const std::int64_t n_mu = lattice::integer_cutoff(p.box, p.mu);
  const double m_tail = ks * static_cast<double>(n_top + 1);

  const double s1 = renorm_sum(p, policy.kernel, n_top);

  double s2;
  if (policy.kernel == Kernel::mass_free) {
    const auto table = ShellTable::get(n_top);
    s2 = detail::exact_shell_sum(*table, n_mu + 1, n_top, [&](double n) {
      return 1.0 / (ks * n + tau);
    });
  } else if (q.q2 == 0.0) {
    const auto table = ShellTable::get(n_top);
    s2 = detail::exact_shell_sum(*table, n_mu + 1, n_top, [&](double n) {
      return 1.0 / (m * ks * n + tau);
    });
  } else {
    s2 = detail::annulus_sum_pointwise(n_mu + 1, n_top, q.q2 / M + tau, m * ks,
                                       2.0 * kap * q.qa / M, 2.0 * kap * q.qb / M);
  }
  s2 /= L * L;

  const double tail = policy.kernel == Kernel::with_mass
                          ? detail::tail_closed_with_mass(M, m, eb, q.q2, tau, m_tail)
                          : detail::tail_closed_mass_free(eb, tau, m_tail);

  GEvaluation out;
  out.value = s1 - s2 + tail;
  out.cutoff_k2 = ks * static_cast<double>(n_top);
  out.tail_correction = tail;
  out.tail_bound = detail::tail_bound_value(cut.A_maj, L, m_tail);
  out.tail_error_estimate = detail::tail_err_terms(cut.A_maj, L, m_tail);
  out.modes_used = lattice::disk_point_count(n_top);
  return out;
}

}  // namespace

PhysParams::PhysParams(double M, double E_B, double mu_, lattice::LatticeSpec spec)
    : mass_ratio(M), binding(E_B), mu(mu_), box(spec) {
  if (!(M > 0.0) || !std::isfinite(M)) {
    throw DomainError("PhysParams: mass ratio must be positive");
  }
  if (!(E_B < 0.0) || !std::isfinite(E_B)) {
    throw DomainError("PhysParams: binding energy must be negative");
  }
  if (!(mu_ > 0.0) || !std::isfinite(mu_)) {
    throw DomainError("PhysParams: mu must be positive");
  }
}

GEvaluation g_lattice(const PhysParams& p, double qx, double qy, double tau,
                      const GPolicy& policy) {
  return eval_g(p, qx, qy, tau, policy, 0.0);
}

double g_truncated(const PhysParams& p, double n_cut, double tau, Kernel kernel) {
  if (!(tau > -p.mu)) throw DomainError("g_truncated: tau must exceed -mu");
  if (!(n_cut >= p.mu)) throw DomainError("g_truncated: cutoff below mu");
  const double ks = p.box.spacing_sq();
  const double eb = p.abs_binding();
  const double mf = kernel_mass_factor(p, kernel);
  const std::int64_t n_top = lattice::integer_cutoff(p.box, n_cut);
  const std::int64_t n_mu = lattice::integer_cutoff(p.box, p.mu);
  if (lattice::disk_point_count(n_top) > lattice::kDefaultModeCap) {
    throw ResourceLimitError("g_truncated: mode count exceeds cap");
  }
  const auto table = ShellTable::get(n_top);
  double acc = 0.0;
  for (std::int64_t n = 0; n <= n_top; ++n) {
    const auto c = table->r2(n);
    if (c == 0) continue;
    const double s = ks * static_cast<double>(n);
    double term = 1.0 / (mf * s + eb);
    if (n > n_mu) term -= 1.0 / (mf * s + tau);
    acc += static_cast<double>(c) * term;
  }
  return acc / p.box.area();
}

double xi_mu(double s, double mu, double mu_tilde) {
  if (!(s >= 0.0)) throw DomainError("xi_mu: s must be >= 0");
  if (!(mu > 0.0)) throw DomainError("xi_mu: mu must be > 0");
  if (!(mu_tilde > 1.0)) throw DomainError("xi_mu: needs mu_tilde > 1");
  if (s <= mu) return 0.0;
  const double log_mt = std::log(mu_tilde);
  const double ramp_end = mu + mu / log_mt;
  if (s >= ramp_end) return 1.0;
  return 0.5 - 0.5 * std::cos(kPi * (s - mu) * log_mt / mu);
}

GEvaluation g_smoothed(const PhysParams& p, double qx, double qy, double tau,
                       const GPolicy& policy) {
  const double mt = p.mu_tilde();
  if (!(mt > 1.0)) {
    throw DomainError("g_smoothed: needs mu_tilde > 1 for the ramp width");
  }
  if (policy.kernel != Kernel::with_mass) {
    throw DomainError("g_smoothed: only the with_mass kernel is defined");
  }
  const double ramp_end = p.mu * (1.0 + 1.0 / std::log(mt));
  GEvaluation out = eval_g(p, qx, qy, tau, policy, ramp_end * 1.0000001);

  const CanonQ q = canonicalize(qx, qy);
  const double M = p.mass_ratio;
  const double m = p.m();
  const double ks = p.box.spacing_sq();
  const double kap = p.box.spacing();
  const std::int64_t n_mu = lattice::integer_cutoff(p.box, p.mu);
  const std::int64_t n_ramp = lattice::integer_cutoff(p.box, ramp_end);

  // The sharp edge keeps full weight on the ramp shells, the smooth edge only
  // xi of it; the difference is an explicit finite sum.
  double corr = 0.0;
  if (n_ramp > n_mu) {
    const std::int64_t R = detail::isqrt64(n_ramp);
    const double A0 = q.q2 / M + tau;
    const double B0 = m * ks;
    const double Cx = 2.0 * kap * q.qa / M;
    const double Cy = 2.0 * kap * q.qb / M;
    for (std::int64_t gx = -R; gx <= R; ++gx) {
      const std::int64_t g2 = gx * gx;
      const std::int64_t y_hi = detail::isqrt64(n_ramp - g2);
      const std::int64_t rem = n_mu + 1 - g2;
      const std::int64_t y_lo = (rem <= 0) ? 0 : detail::isqrt64(rem - 1) + 1;
      if (y_lo > y_hi) continue;
      const double base = A0 + B0 * static_cast<double>(g2) - Cx * static_cast<double>(gx);
      for (std::int64_t gy = y_lo; gy <= y_hi; ++gy) {
        const double w = 1.0 - xi_mu(ks * static_cast<double>(g2 + gy * gy), p.mu, mt);
        if (w == 0.0) continue;
        const double t = base + B0 * static_cast<double>(gy * gy);
        const double u = Cy * static_cast<double>(gy);
        corr += (gy == 0) ? w / t : w * (1.0 / (t - u) + 1.0 / (t + u));
      }
    }
  }
  out.value += corr / p.box.area();
  return out;
}

double f_kernel(const PhysParams& p, double s, double tau) {
  if (!(s >= 0.0)) throw DomainError("f_kernel: s must be >= 0");
  const double M = p.mass_ratio;
  const double m = p.m();
  const double den1 = s / M + tau + m * p.mu;
  const double den2 = s / (M + 1.0) + tau + m * p.mu;
  if (!(den1 > 0.0) || !(den2 > 0.0)) {
    throw DomainError("f_kernel: nonpositive denominator (tau too negative for s=" +
                      std::to_string(s) + ")");
  }
  const double x = 4.0 * s * p.mu / (M * M * den1 * den1);
  if (x > 1.0 + 1e-12) {
    throw DomainError("f_kernel: negative radicand (s=" + std::to_string(s) +
                      ", tau=" + std::to_string(tau) + ")");
  }
  const double rad = std::max(0.0, 1.0 - x);
  return (den1 / den2) * (x / (1.0 + std::sqrt(rad)));
}

bool continuum_certified(const PhysParams& p) { return p.mass_ratio > 1.0; }

double g_continuum(const PhysParams& p, double q2, double tau) {
  if (!(q2 >= 0.0)) throw DomainError("g_continuum: q2 must be >= 0");
  if (!(tau > -p.mu)) throw DomainError("g_continuum: tau must exceed -mu");
  const double m = p.m();
  const double arg = q2 / (p.mass_ratio + 1.0) + tau + m * p.mu;
  if (!(arg > 0.0)) throw DomainError("g_continuum: nonpositive log argument");
  const double F = f_kernel(p, q2, tau);
  const double one_minus = 1.0 - 0.5 * F;
  if (!(one_minus > 0.0)) {
    throw DomainError("g_continuum: log(1 - F/2) undefined (uncertified M <= 1 regime)");
  }
  return (std::log(arg / p.abs_binding()) + std::log1p(-0.5 * F)) / (4.0 * kPi * m);
}

double tail_validity_floor(const PhysParams& p, double q2, double tau) {
  return detail::tail_geometry_with_mass(p.mass_ratio, p.m(), p.mu,
                                         p.abs_binding(), q2, tau)
      .floor;
}

double tail_integral(const PhysParams& p, double q2, double tau, double from_k2) {
  if (!(from_k2 >= tail_validity_floor(p, q2, tau) * (1.0 - 1e-12))) {
    throw DomainError("tail_integral: from_k2 below the validity floor");
  }
  return detail::tail_closed_with_mass(p.mass_ratio, p.m(), p.abs_binding(), q2,
                                       tau, from_k2);
}

std::vector<PoissonRow> poisson_residual(double M, double E_B, double mu,
                                         double qx, double qy, double tau,
                                         const std::vector<double>& box_sides,
                                         const GPolicy& policy) {
  std::vector<PoissonRow> rows;
  rows.reserve(box_sides.size());
  for (double L : box_sides) {
    PhysParams p(M, E_B, mu, lattice::LatticeSpec(L));
    const GEvaluation ev = g_lattice(p, qx, qy, tau, policy);
    const double gc = g_continuum(p, qx * qx + qy * qy, tau);
    PoissonRow row;
    row.box_side = L;
    row.residual = ev.value - gc;
    const double reg = L * L * std::abs(E_B);
    row.scaled = row.residual * reg * std::sqrt(reg);
    row.regime_ok = reg >= 1.0;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace polaron2d::gfunc
