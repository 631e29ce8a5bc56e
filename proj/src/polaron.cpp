#include "polaron2d/polaron.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <vector>

#include "polaron2d/chebyshev.hpp"
#include "detail/gmath.hpp"
#include "detail/radial.hpp"

namespace polaron2d::polaron {

namespace {

using gfunc::PhysParams;
using lattice::ShellTable;

double scan_reference(const PhysParams& p) {
  const double mt = p.mu_tilde();
  return mt > std::numbers::e ? p.m() * p.mu / std::log(mt) : p.m() * p.mu;
}

double residual_scale(const PhysParams& p) {
  const double mt = p.mu_tilde();
  return mt > std::numbers::e ? p.mu / std::log(mt) : p.mu;
}

double quantize_cutoff(double lambda) {
  return std::exp2(0.5 * std::ceil(2.0 * std::log2(lambda)));
}

}  // namespace

// ---------------------------------------------------------------------------
// FermiField
// ---------------------------------------------------------------------------

struct FermiField::Impl {
  PhysParams p;
  FieldOptions opt;
  bool exact = true;
  std::int64_t n_mu = 0;
  std::int64_t n_modes = 0;
  double e0 = 0.0;

  struct OrbitRep {
    std::int64_t i, j, n;
    double weight;
  };
  std::vector<OrbitRep> orbits;  // exact path: first-octant representatives

  struct CutoffData {
    std::int64_t n_top = 0;
    double m_tail = 0.0;
    double s1 = 0.0;  // renormalization sum / L^2
    std::shared_ptr<const ShellTable> table;
    detail::BlockedRange inner;  // radial path
  };
  std::map<std::int64_t, CutoffData> cutoffs;
  detail::BlockedRange outer;
  bool outer_built = false;

  std::map<std::uint64_t, FieldEval> cache;

  Impl(const PhysParams& params, const FieldOptions& options)
      : p(params), opt(options) {
    n_mu = lattice::integer_cutoff(p.box, p.mu);
    n_modes = lattice::count_modes(p.box, p.mu, opt.mode_cap);
    e0 = lattice::fermi_sea_energy(p.box, p.mu, opt.mode_cap);
    exact = opt.force_mode == 1 ||
            (opt.force_mode == 0 && n_modes <= opt.exact_max_modes);
    if (exact) {
      const std::int64_t r = detail::isqrt64(n_mu);
      for (std::int64_t i = 0; i <= r; ++i) {
        const std::int64_t jmax =
            std::min<std::int64_t>(i, detail::isqrt64(n_mu - i * i));
        for (std::int64_t j = 0; j <= jmax; ++j) {
          double w;
          if (i == 0 && j == 0) {
            w = 1.0;
          } else if (j == 0 || j == i) {
            w = 4.0;
          } else {
            w = 8.0;
          }
          orbits.push_back({i, j, i * i + j * j, w});
        }
      }
    }
  }

  CutoffData& cutoff_for(double e) {
    const double M = p.mass_ratio;
    const double m = p.m();
    const double eb = p.abs_binding();
    const double mu = p.mu;
    const double L = p.box.box_side;
    const double abs_e = std::abs(e);

    // Worst case over the Fermi sweep q^2 in [0,mu], tau = -q^2 - e:
    // |c| = |q^2/M + tau| <= mu (M-1)/M + |e| for M >= 1 (plus mu/M slack for M<1).
    const double c_max = mu * std::max((M - 1.0) / M, 1.0 / M) + abs_e;
    const double tau_max = mu + abs_e;
    const double A = 4.0 * (c_max + eb) / (m * m) + 32.0 * mu / (M * M * m * m * m);
    const double floor =
        std::max({2.0 * mu, 2.0 * c_max / m, 32.0 * mu / (M * M * m * m),
                  4.0 * eb / m, 2.0 * tau_max, 4.0 * p.box.spacing_sq()});
    const double lambda =
        quantize_cutoff(detail::cutoff_for_tol(A, L, floor, opt.tail_tol));
    const std::int64_t n_top = lattice::integer_cutoff(p.box, lambda);
    auto it = cutoffs.find(n_top);
    if (it != cutoffs.end()) return it->second;
    if (lattice::disk_point_count(n_top) > opt.mode_cap) {
      throw ConvergenceError(
          "FermiField: cutoff cannot reach the tail tolerance within the mode cap");
    }
    CutoffData cd;
    cd.n_top = n_top;
    cd.m_tail = p.box.spacing_sq() * static_cast<double>(n_top + 1);
    cd.table = ShellTable::get(n_top);
    cd.s1 = detail::renorm_radial_sum(*cd.table, n_top, m, p.box.spacing_sq(), eb) /
            p.box.area();
    if (!exact) {
      cd.inner = detail::BlockedRange::build(*cd.table, n_mu + 1, n_top,
                                             /*feature_at_lo=*/true);
    }
    return cutoffs.emplace(n_top, std::move(cd)).first->second;
  }

  FieldEval compute_exact(double e, const CutoffData& cd) {
    const double M = p.mass_ratio;
    const double m = p.m();
    const double eb = p.abs_binding();
    const double ks = p.box.spacing_sq();
    const double L2 = p.box.area();

    FieldEval out;
    double acc = 0.0, acc_abs = 0.0;
    double gmin = std::numeric_limits<double>::infinity();
    for (const auto& orb : orbits) {
      const double q2 = ks * static_cast<double>(orb.n);
      const double tau = -q2 - e;
      const double s2 =
          detail::annulus_sum_pointwise(n_mu + 1, cd.n_top, q2 / M + tau, m * ks,
                                        2.0 * ks * static_cast<double>(orb.i) / M,
                                        2.0 * ks * static_cast<double>(orb.j) / M) /
          L2;
      const double tail = detail::tail_closed_with_mass(M, m, eb, q2, tau, cd.m_tail);
      const double g = cd.s1 - s2 + tail;
      gmin = std::min(gmin, g);
      if (g == 0.0) {
        out.pole = true;
        continue;
      }
      acc += orb.weight / g;
      acc_abs += orb.weight / std::abs(g);
    }
    out.min_g = gmin;
    if (gmin <= 0.0) out.pole = true;
    out.evaluations = static_cast<std::int64_t>(orbits.size());
    if (out.pole) {
      out.sum_inv_g = std::nan("");
      out.sum_abs_inv_g = std::nan("");
    } else {
      out.sum_inv_g = acc / L2;
      out.sum_abs_inv_g = acc_abs / L2;
    }
    return out;
  }

  FieldEval compute_radial(double e, const CutoffData& cd) {
    const double M = p.mass_ratio;
    const double m = p.m();
    const double eb = p.abs_binding();
    const double ks = p.box.spacing_sq();
    const double L2 = p.box.area();
    const double nmu_d = static_cast<double>(n_mu);

    // Angular-averaged annulus profile as a function of the outer shell nu:
    //   W(nu,n') = <1/D>_angle = 1/sqrt(A^2 - B^2),
    //   A^2-B^2 = (ks(n' + (sqrt n' - sqrt nu)^2/M) + tau)(ks(n' + (sqrt n' + sqrt nu)^2/M) + tau).
    auto inner_profile = [&](double nu) {
      const double sq_nu = std::sqrt(std::max(nu, 0.0));
      const double tau = -ks * nu - e;
      return cd.inner.sum([&](double np) {
               const double sq_np = std::sqrt(np);
               const double dm = sq_np - sq_nu;
               const double dp = sq_np + sq_nu;
               const double am = ks * (np + dm * dm / M) + tau;
               const double ap = ks * (np + dp * dp / M) + tau;
               return 1.0 / std::sqrt(am * ap);
             }) /
             L2;
    };

    const cheb::Interpolant probe = cheb::Interpolant::build(inner_profile, 0.0, nmu_d, 9);
    const double tol_abs =
        opt.interp_tol_rel * std::max(probe.max_abs_value(), 1e-300);
    bool interp_ok = false;
    const cheb::Interpolant s2i = cheb::Interpolant::build_adaptive(
        inner_profile, 0.0, nmu_d, 17, 513, tol_abs, &interp_ok);

    auto g_of = [&](double nu) {
      const double q2 = ks * nu;
      const double tau = -q2 - e;
      return cd.s1 - s2i.eval(nu) +
             detail::tail_closed_with_mass(M, m, eb, q2, tau, cd.m_tail);
    };

    FieldEval out;
    double gmin = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= 512; ++j) {
      gmin = std::min(gmin, g_of(nmu_d * j / 512.0));
    }
    out.min_g = gmin;
    out.pole = gmin <= 0.0;
    out.evaluations = s2i.size();
    if (out.pole) {
      out.sum_inv_g = std::nan("");
      out.sum_abs_inv_g = std::nan("");
      return out;
    }
    if (!outer_built) {
      outer = detail::BlockedRange::build(*cd.table, 0, n_mu, /*feature_at_lo=*/false);
      outer_built = true;
    }
    out.sum_inv_g = outer.sum([&](double nu) { return 1.0 / g_of(nu); }) / L2;
    out.sum_abs_inv_g = out.sum_inv_g;  // all G positive here
    return out;
  }

  const FieldEval& eval(double e) {
    if (!(e < 0.0)) throw DomainError("FermiField: energy shift must be negative");
    const auto key = std::bit_cast<std::uint64_t>(e);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const CutoffData& cd = cutoff_for(e);
    FieldEval fe = exact ? compute_exact(e, cd) : compute_radial(e, cd);
    return cache.emplace(key, fe).first->second;
  }
};

FermiField::FermiField(const gfunc::PhysParams& p, const FieldOptions& opt)
    : impl_(std::make_unique<Impl>(p, opt)) {}
FermiField::~FermiField() = default;
FermiField::FermiField(FermiField&&) noexcept = default;
FermiField& FermiField::operator=(FermiField&&) noexcept = default;

const FieldEval& FermiField::eval(double e) { return impl_->eval(e); }
bool FermiField::exact_path() const { return impl_->exact; }
double FermiField::fermi_energy_sum() const { return impl_->e0; }
std::int64_t FermiField::mode_count() const { return impl_->n_modes; }
const gfunc::PhysParams& FermiField::params() const { return impl_->p; }
const FieldOptions& FermiField::options() const { return impl_->opt; }

// ---------------------------------------------------------------------------
// Polaron equation
// ---------------------------------------------------------------------------

namespace {

struct ScanPoint {
  double e = 0.0;
  double h = 0.0;
  bool pole = false;
};

double residual_tol(const SolveOptions& opts, const PhysParams& p, double e) {
  if (!std::isnan(opts.tol)) return opts.tol;
  return 1e-10 * std::max(std::abs(e), residual_scale(p));
}

}  // namespace

PolaronSolution solve_polaron(FermiField& field, const SolveOptions& opts) {
  const PhysParams& p = field.params();
  const double e_ref = scan_reference(p);
  std::int64_t evals = 0;

  auto probe = [&](double e) {
    const FieldEval& fe = field.eval(e);
    ++evals;
    ScanPoint pt{e, e + fe.sum_inv_g, fe.pole};
    return pt;
  };

  // Logarithmic scan in |e| from scan_max_factor*e_ref down to
  // scan_min_factor*e_ref; points ascend in e (most negative first).
  std::vector<ScanPoint> pts;
  {
    const int per_dec = std::max(2, opts.scan_per_decade);
    const double step = std::pow(10.0, 1.0 / per_dec);
    for (double f = opts.scan_max_factor; f > opts.scan_min_factor * (1.0 + 1e-9);
         f /= step) {
      pts.push_back(probe(-e_ref * f));
    }
    pts.push_back(probe(-e_ref * opts.scan_min_factor));
  }

  // Subdivide around pole-crossings (G <= 0 regions make h discontinuous).
  for (int round = 0; round < 3; ++round) {
    bool any = false;
    std::vector<ScanPoint> next;
    next.reserve(pts.size() * 2);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      next.push_back(pts[i]);
      if (i + 1 < pts.size() && (pts[i].pole || pts[i + 1].pole)) {
        next.push_back(probe(0.5 * (pts[i].e + pts[i + 1].e)));
        any = true;
      }
    }
    std::sort(next.begin(), next.end(),
              [](const ScanPoint& a, const ScanPoint& b) { return a.e < b.e; });
    pts = std::move(next);
    if (!any) break;
  }

  // Most negative valid sign change.
  double lo = 0.0, hi = 0.0, h_lo = 0.0;
  bool found = false;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i].pole || pts[i + 1].pole) continue;
    if (pts[i].h == 0.0) {
      lo = hi = pts[i].e;
      found = true;
      break;
    }
    if ((pts[i].h < 0.0) != (pts[i + 1].h < 0.0)) {
      lo = pts[i].e;
      hi = pts[i + 1].e;
      h_lo = pts[i].h;
      found = true;
      break;
    }
  }
  if (!found) {
    std::string diag = "solve_polaron: no sign change on the scan grid; samples:";
    for (std::size_t i = 0; i < pts.size(); i += std::max<std::size_t>(1, pts.size() / 8)) {
      diag += " (e=" + std::to_string(pts[i].e) +
              (pts[i].pole ? ", pole)" : ", h=" + std::to_string(pts[i].h) + ")");
    }
    throw NoSolutionError(diag);
  }

  PolaronSolution sol;
  sol.regime_wellcoupled = p.well_coupled();
  sol.regime_asymptotic = p.asymptotic();

  if (lo == hi) {  // exact grid root
    sol.e_p = lo;
    sol.residual = 0.0;
    sol.bracket_lo = lo;
    sol.bracket_hi = hi;
    sol.evaluations = evals;
    return sol;
  }

  double best_e = 0.5 * (lo + hi);
  double best_h = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < opts.max_bisect; ++iter) {
    double mid = 0.5 * (lo + hi);
    ScanPoint pm = probe(mid);
    if (pm.pole) {
      mid = lo + 0.55 * (hi - lo);
      pm = probe(mid);
      if (pm.pole) {
        throw ConvergenceError("solve_polaron: pole crossing inside the refined bracket");
      }
    }
    if (std::abs(pm.h) < std::abs(best_h)) {
      best_e = mid;
      best_h = pm.h;
    }
    if (std::abs(pm.h) <= residual_tol(opts, p, mid)) {
      sol.e_p = mid;
      sol.residual = pm.h;
      sol.bracket_lo = lo;
      sol.bracket_hi = hi;
      sol.evaluations = evals;
      return sol;
    }
    if ((pm.h < 0.0) == (h_lo < 0.0)) {
      lo = mid;
      h_lo = pm.h;
    } else {
      hi = mid;
    }
    if (hi - lo <= 8.0 * std::numeric_limits<double>::epsilon() * std::abs(lo)) break;
  }
  // Bracket collapsed to the floating floor; report the best residual seen.
  sol.e_p = best_e;
  sol.residual = best_h;
  sol.bracket_lo = lo;
  sol.bracket_hi = hi;
  sol.evaluations = evals;
  return sol;
}

PolaronSolution solve_polaron(const gfunc::PhysParams& p, const SolveOptions& opts) {
  FermiField field(p, opts.field);
  return solve_polaron(field, opts);
}

AsymptoticPolaron asymptotic_polaron(const gfunc::PhysParams& p) {
  const double mt = p.mu_tilde();
  if (!(mt > 1.0)) {
    throw DomainError("asymptotic_polaron: needs mu_tilde > 1 (log would be nonpositive)");
  }
  const double lg = std::log(mt);
  return {-p.m() * p.mu / lg, p.mu / (lg * lg)};
}

TrialStateIdentity trial_state_identity(FermiField& field, double e) {
  if (!(e < 0.0)) throw DomainError("trial_state_identity: e must be negative");
  const FieldEval& fe = field.eval(e);
  if (fe.pole) {
    throw SingularError("trial_state_identity: G vanishes or turns negative in the Fermi sea");
  }
  const double area = field.params().box.area();
  const double sigma = fe.sum_inv_g;
  TrialStateIdentity out;
  out.value = area * sigma * (1.0 + sigma / e);
  out.sum_abs = area * fe.sum_abs_inv_g;
  out.normalized = out.value / out.sum_abs;
  return out;
}

TrialStateIdentity trial_state_identity(const gfunc::PhysParams& p, double e,
                                        const FieldOptions& opt) {
  FermiField field(p, opt);
  return trial_state_identity(field, e);
}

double upper_bound_energy(const gfunc::PhysParams& p, const PolaronSolution& sol) {
  return lattice::fermi_sea_energy(p.box, p.mu) + sol.e_p;
}

TheoremBand theorem_band(const gfunc::PhysParams& p, double e_p) {
  TheoremBand out;
  out.center = lattice::fermi_sea_energy(p.box, p.mu) + e_p;
  const double mt = p.mu_tilde();
  out.halfwidth_scale = mt > 1.0 ? std::abs(e_p) / std::log(mt) : std::nan("");
  out.regime_ok = p.well_coupled() && p.asymptotic();
  return out;
}

// ---------------------------------------------------------------------------
// Perturbed polaron equation
// ---------------------------------------------------------------------------

namespace {

// Piecewise-Chebyshev profile of G(0,t) over t in [t_lo, t_hi], built on
// geometric panels in w = t + mu. The annulus part is the exact radial shell
// sum (q = 0 needs no angular treatment), evaluated through blocked moments.
class G0Profile {
 public:
  G0Profile(const PhysParams& p, double t_lo, double t_hi, double tail_tol,
            double interp_tol_rel, std::int64_t mode_cap, std::int64_t* node_count) {
    const double m = p.m();
    const double eb = p.abs_binding();
    const double mu = p.mu;
    const double ks = p.box.spacing_sq();
    const double L = p.box.box_side;
    const double L2 = p.box.area();
    const std::int64_t n_mu = lattice::integer_cutoff(p.box, mu);

    // One cutoff for all panels: the tolerance is relaxed proportionally to
    // (|t|+mu) so the requirement is uniform in t.
    double lambda = detail::tail_geometry_q0(m, mu, eb, 0.0).floor;
    const double t_scale = std::max(std::abs(t_lo), mu);
    for (double t : {t_lo, t_scale, std::abs(t_hi)}) {
      const double A = detail::tail_geometry_q0(m, mu, eb, t).A;
      const double tol_t = tail_tol * std::max(1.0, (std::abs(t) + mu) / (t_scale + mu));
      lambda = std::max(lambda, detail::cutoff_for_tol(A, L, lambda, tol_t));
    }
    lambda = quantize_cutoff(lambda);
    const std::int64_t n_top = lattice::integer_cutoff(p.box, lambda);
    if (lattice::disk_point_count(n_top) > mode_cap) {
      throw ConvergenceError("solve_perturbed: G(0,.) cutoff exceeds the mode cap");
    }
    table_ = ShellTable::get(n_top);
    inner_ = detail::BlockedRange::build(*table_, n_mu + 1, n_top, true);
    const double s1 = detail::renorm_radial_sum(*table_, n_top, m, ks, eb) / L2;
    const double m_tail = ks * static_cast<double>(n_top + 1);

    auto g0 = [&, s1, m_tail](double t) {
      const double ann = inner_.sum([&](double np) {
                           return 1.0 / (m * ks * np + t);
                         }) /
                         L2;
      return s1 - ann + detail::tail_closed_q0(m, eb, t, m_tail);
    };

    mu_ = mu;
    w_lo_ = t_lo + mu;
    w_hi_ = t_hi + mu;
    const int n_panels =
        std::max(1, static_cast<int>(std::ceil(std::log2(w_hi_ / w_lo_))));
    panels_.reserve(n_panels);
    double wa = w_lo_;
    for (int i = 0; i < n_panels; ++i) {
      const double wb = (i + 1 == n_panels) ? w_hi_ : wa * 2.0;
      auto f = [&](double w) { return g0(w - mu_); };
      const cheb::Interpolant pr = cheb::Interpolant::build(f, wa, wb, 9);
      bool ok = false;
      panels_.push_back(cheb::Interpolant::build_adaptive(
          f, wa, wb, 17, 129, interp_tol_rel * std::max(pr.max_abs_value(), 1e-300),
          &ok));
      if (node_count) *node_count += panels_.back().size();
      wa = wb;
    }
  }

  double eval(double t) const {
    const double w = t + mu_;
    int idx = static_cast<int>(std::floor(std::log2(std::max(w / w_lo_, 1.0))));
    idx = std::clamp(idx, 0, static_cast<int>(panels_.size()) - 1);
    // Panel ends were clamped to w_hi; nudge the index for boundary values.
    while (idx > 0 && w < panels_[static_cast<std::size_t>(idx)].a()) --idx;
    while (idx + 1 < static_cast<int>(panels_.size()) &&
           w > panels_[static_cast<std::size_t>(idx)].b())
      ++idx;
    return panels_[static_cast<std::size_t>(idx)].eval(w);
  }

  const ShellTable& table() const { return *table_; }

 private:
  std::vector<cheb::Interpolant> panels_;
  std::shared_ptr<const ShellTable> table_;
  detail::BlockedRange inner_;
  double mu_ = 0.0, w_lo_ = 0.0, w_hi_ = 0.0;
};

}  // namespace

PerturbedSolution solve_perturbed(const gfunc::PhysParams& p, double r,
                                  const PerturbedOptions& opts,
                                  const PolaronSolution* pol) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw DomainError("solve_perturbed: r must be a finite number >= 0");
  }
  PolaronSolution ps;
  if (pol) {
    ps = *pol;
  } else {
    SolveOptions so;
    so.field = opts.field;
    ps = solve_polaron(p, so);
  }
  if (!(ps.e_p < 0.0)) throw NoSolutionError("solve_perturbed: invalid polaron input");
  const double zp = -ps.e_p;

  const double mu = p.mu;
  const double ks = p.box.spacing_sq();
  const double L2 = p.box.area();
  const double mt = p.mu_tilde();
  const std::int64_t n_mu = lattice::integer_cutoff(p.box, mu);
  const double e0 = lattice::fermi_sea_energy(p.box, mu);

  double delta_hi = (mt > std::numbers::e) ? 100.0 * p.m() * mu / std::log(mt)
                                           : 100.0 * p.m() * mu;
  delta_hi = std::max(delta_hi, 4.0 * zp);

  std::int64_t evals = 0;
  PerturbedSolution out;
  out.r = r;

  for (int widen = 0;; ++widen) {
    const double t_lo = zp - ks * static_cast<double>(n_mu);
    const double t_hi = delta_hi;
    G0Profile prof(p, t_lo, t_hi, opts.field.tail_tol, opts.interp_tol_rel,
                   opts.field.mode_cap, &evals);
    const auto outer =
        detail::BlockedRange::build(prof.table(), 0, n_mu, /*feature_at_lo=*/false);

    // Regime check: the smallest denominator over the whole search interval
    // sits at delta = zp, shell n = n_mu (G(0,t) is increasing in t).
    const double g_min = prof.eval(zp - ks * static_cast<double>(n_mu));
    if (!(g_min - r > 0.0)) {
      throw RegimeError(
          "solve_perturbed: G(0,.) - r <= 0 on the search interval (G_min = " +
          std::to_string(g_min) + ", r = " + std::to_string(r) +
          "); mu/|E_B| too small for this r");
    }

    auto residual = [&](double delta) {
      ++evals;
      return delta - outer.sum([&](double nu) {
               return 1.0 / (prof.eval(delta - ks * nu) - r);
             }) / L2;
    };

    auto tol_at = [&](double delta) {
      if (!std::isnan(opts.tol)) return opts.tol;
      return 1e-10 * std::max(std::abs(delta), residual_scale(p));
    };

    double lo = zp;
    double r_lo = residual(lo);
    if (std::abs(r_lo) <= tol_at(lo)) {
      out.delta = lo;
      out.residual = r_lo;
      break;
    }
    if (r_lo > 0.0) {
      throw NoSolutionError(
          "solve_perturbed: no root with lambda <= E0 + e_p (residual at the "
          "endpoint = " +
          std::to_string(r_lo) + ")");
    }
    double hi = delta_hi;
    double r_hi = residual(hi);
    if (r_hi < 0.0) {
      if (widen >= 3) {
        throw BracketError("solve_perturbed: no sign change after widening the interval");
      }
      delta_hi *= 4.0;
      continue;
    }

    bool converged = false;
    double best_d = 0.5 * (lo + hi), best_r = std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < opts.max_bisect; ++iter) {
      const double mid = 0.5 * (lo + hi);
      const double rm = residual(mid);
      if (std::abs(rm) < std::abs(best_r)) {
        best_d = mid;
        best_r = rm;
      }
      if (std::abs(rm) <= tol_at(mid)) {
        out.delta = mid;
        out.residual = rm;
        converged = true;
        break;
      }
      if (rm < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
      if (hi - lo <= 8.0 * std::numeric_limits<double>::epsilon() * hi) break;
    }
    if (!converged) {
      out.delta = best_d;
      out.residual = best_r;
    }
    break;
  }

  out.lambda = e0 - out.delta;
  out.gap = out.delta - zp;
  out.evaluations = evals;
  return out;
}

}  // namespace polaron2d::polaron
