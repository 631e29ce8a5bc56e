#include "polaron2d/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "polaron2d/quadrature.hpp"

namespace polaron2d::lattice {

namespace {

constexpr double kPi = std::numbers::pi;

std::int64_t isqrt(std::int64_t v) {
  if (v < 0) return -1;
  auto y = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
  while (y > 0 && y * y > v) --y;
  while ((y + 1) * (y + 1) <= v) ++y;
  return y;
}

}  // namespace

LatticeSpec::LatticeSpec(double L) : box_side(L) {
  if (!(L > 0.0) || !std::isfinite(L)) {
    throw DomainError("LatticeSpec: box side must be positive and finite");
  }
}

double LatticeSpec::spacing() const { return 2.0 * kPi / box_side; }
double LatticeSpec::spacing_sq() const {
  const double k = spacing();
  return k * k;
}

std::int64_t integer_cutoff(const LatticeSpec& spec, double cutoff) {
  if (std::isnan(cutoff)) throw DomainError("integer_cutoff: cutoff is NaN");
  if (cutoff < 0.0) return -1;
  const double ks = spec.spacing_sq();
  const double t = cutoff / ks;
  if (t >= 4.0e18) throw ResourceLimitError("integer_cutoff: cutoff out of integer range");
  auto n = static_cast<std::int64_t>(std::floor(t));
  while (ks * static_cast<double>(n + 1) <= cutoff) ++n;
  while (n >= 0 && ks * static_cast<double>(n) > cutoff) --n;
  return n;
}

std::int64_t disk_point_count(std::int64_t n_max) {
  if (n_max < 0) return 0;
  const std::int64_t r = isqrt(n_max);
  std::int64_t total = 0;
  for (std::int64_t gx = 0; gx <= r; ++gx) {
    const std::int64_t row = 2 * isqrt(n_max - gx * gx) + 1;
    total += (gx == 0) ? row : 2 * row;
  }
  return total;
}

std::int64_t disk_norm2_sum(std::int64_t n_max) {
  if (n_max < 0) return 0;
  const std::int64_t r = isqrt(n_max);
  std::int64_t total = 0;
  for (std::int64_t gx = 0; gx <= r; ++gx) {
    const std::int64_t yr = isqrt(n_max - gx * gx);
    const std::int64_t row =
        (2 * yr + 1) * gx * gx + yr * (yr + 1) * (2 * yr + 1) / 3;
    total += (gx == 0) ? row : 2 * row;
  }
  return total;
}

// ---------------------------------------------------------------------------
// ShellTable
// ---------------------------------------------------------------------------

ShellTable::ShellTable(std::int64_t n_max) : n_max_(n_max) {
  counts_.assign(static_cast<std::size_t>(n_max) + 1, 0);
  const std::int64_t r = isqrt(n_max);
  for (std::int64_t i = 0; i <= r; ++i) {
    const std::int64_t jmax = isqrt(n_max - i * i);
    const std::uint16_t wi = (i == 0) ? 1 : 2;
    for (std::int64_t j = 0; j <= jmax; ++j) {
      const std::uint16_t w = wi * ((j == 0) ? 1 : 2);
      counts_[static_cast<std::size_t>(i * i + j * j)] += w;
    }
  }
}

std::shared_ptr<const ShellTable> ShellTable::get(std::int64_t n_max) {
  static std::mutex mu;
  static std::shared_ptr<const ShellTable> cache;
  if (n_max < 0) n_max = 0;
  std::lock_guard<std::mutex> lock(mu);
  if (cache && cache->n_max() >= n_max) return cache;
  // Headroom so repeated slightly-larger requests do not re-sieve.
  const std::int64_t n_build = n_max + n_max / 4 + 1024;
  cache = std::shared_ptr<const ShellTable>(new ShellTable(n_build));
  return cache;
}

// ---------------------------------------------------------------------------
// Enumeration and Fermi-sea sums
// ---------------------------------------------------------------------------

std::vector<Mode> enumerate_modes(const LatticeSpec& spec, double cutoff,
                                  std::int64_t cap) {
  if (std::isnan(cutoff) || cutoff < 0.0) {
    throw DomainError("enumerate_modes: cutoff must be >= 0");
  }
  const std::int64_t n_max = integer_cutoff(spec, cutoff);
  const std::int64_t count = disk_point_count(n_max);
  if (count > cap) {
    throw ResourceLimitError("enumerate_modes: " + std::to_string(count) +
                             " modes exceed cap " + std::to_string(cap));
  }
  std::vector<Mode> modes;
  modes.reserve(static_cast<std::size_t>(count));
  const std::int64_t r = isqrt(n_max);
  for (std::int64_t gx = -r; gx <= r; ++gx) {
    const std::int64_t yr = isqrt(n_max - gx * gx);
    for (std::int64_t gy = -yr; gy <= yr; ++gy) {
      modes.push_back(Mode{gx, gy, gx * gx + gy * gy});
    }
  }
  std::sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) {
    if (a.norm2 != b.norm2) return a.norm2 < b.norm2;
    if (a.ix != b.ix) return a.ix < b.ix;
    return a.iy < b.iy;
  });
  return modes;
}

std::int64_t count_modes(const LatticeSpec& spec, double mu, std::int64_t cap) {
  if (!(mu > 0.0)) throw DomainError("count_modes: mu must be > 0");
  const std::int64_t n_max = integer_cutoff(spec, mu);
  const std::int64_t count = disk_point_count(n_max);
  if (count > cap) {
    throw ResourceLimitError("count_modes: mode count exceeds cap");
  }
  return count;
}

double fermi_sea_energy(const LatticeSpec& spec, double mu, std::int64_t cap) {
  if (!(mu > 0.0)) throw DomainError("fermi_sea_energy: mu must be > 0");
  const std::int64_t n_max = integer_cutoff(spec, mu);
  if (disk_point_count(n_max) > cap) {
    throw ResourceLimitError("fermi_sea_energy: mode count exceeds cap");
  }
  return spec.spacing_sq() * static_cast<double>(disk_norm2_sum(n_max));
}

ShellSum shell_sum(const LatticeSpec& spec, const std::function<double(double)>& f,
                   double a, double b, std::int64_t cap) {
  if (std::isnan(a) || std::isnan(b) || a < 0.0 || b < a) {
    throw DomainError("shell_sum: need 0 <= a <= b");
  }
  const double ks = spec.spacing_sq();
  const std::int64_t n_hi = integer_cutoff(spec, b);
  // Smallest n with ks*n >= a.
  std::int64_t n_lo = static_cast<std::int64_t>(std::floor(a / ks));
  while (n_lo > 0 && ks * static_cast<double>(n_lo) >= a) --n_lo;
  while (ks * static_cast<double>(n_lo) < a) ++n_lo;

  ShellSum out;
  out.lower = a;
  out.upper = b;
  if (n_hi < n_lo) return out;
  const std::int64_t count = disk_point_count(n_hi) - disk_point_count(n_lo - 1);
  if (count > cap) throw ResourceLimitError("shell_sum: mode count exceeds cap");

  const std::int64_t r = isqrt(n_hi);
  double acc = 0.0;
  std::int64_t cnt = 0;
  for (std::int64_t gx = -r; gx <= r; ++gx) {
    const std::int64_t g2 = gx * gx;
    const std::int64_t y_hi = isqrt(n_hi - g2);
    const std::int64_t rem = n_lo - g2;
    const std::int64_t y_lo = (rem <= 0) ? 0 : isqrt(rem - 1) + 1;  // smallest y with g2+y^2 >= n_lo
    for (std::int64_t gy = y_lo; gy <= y_hi; ++gy) {
      const double val = f(ks * static_cast<double>(g2 + gy * gy));
      const int w = (gy == 0) ? 1 : 2;
      acc += w * val;
      cnt += w;
    }
  }
  out.value = acc;
  out.mode_count = cnt;
  return out;
}

// ---------------------------------------------------------------------------
// Certificates
// ---------------------------------------------------------------------------

namespace {

void check_monotone_nonneg(const std::function<double(double)>& f, double m,
                           int samples) {
  const double scale = std::max(m, 1.0);
  double prev = f(m);
  if (std::isnan(prev) || prev < 0.0) {
    throw ContractViolationError("sum_integral_certificate: f(m) negative or NaN");
  }
  for (int j = 1; j <= samples; ++j) {
    const double u = m + scale * (std::exp2(16.0 * j / samples) - 1.0);
    const double v = f(u);
    if (std::isnan(v) || v < 0.0) {
      throw ContractViolationError("sum_integral_certificate: f negative or NaN at s=" +
                                   std::to_string(u));
    }
    if (v > prev * (1.0 + 1e-12) + 1e-300) {
      throw ContractViolationError("sum_integral_certificate: f not nonincreasing near s=" +
                                   std::to_string(u));
    }
    prev = v;
  }
}

}  // namespace

SumIntegralCertificate sum_integral_certificate(
    const std::function<double(double)>& f, double m, const LatticeSpec& spec,
    const CertificateOptions& opts) {
  if (std::isnan(m) || m < 0.0) {
    throw DomainError("sum_integral_certificate: m must be >= 0");
  }
  check_monotone_nonneg(f, m, opts.monotone_samples);

  const double L = spec.box_side;
  const double ks = spec.spacing_sq();
  const double sqrt_m = std::sqrt(m);

  // Integrals entering the target and the bound. Throws DivergenceError for
  // nonintegrable tails.
  const auto Iu = quad::integrate_to_inf(f, m, opts.quad_tol);           // int_m^inf f(u) du
  const auto It = quad::integrate_to_inf([&](double t) { return f(t * t); },
                                         sqrt_m, opts.quad_tol);          // int_sqrt(m)^inf f(t^2) dt
  const double integral = Iu.value / (4.0 * kPi);
  const double f_at_m = f(m);

  double bound;
  if (m == 0.0) {
    bound = (2.0 / (kPi * L)) * It.value + 3.0 * f_at_m / (L * L);
  } else {
    bound = (2.0 / (kPi * L)) * It.value +
            (4.0 * sqrt_m / (kPi * L) + 6.0 / (L * L)) * f_at_m;
  }

  // Lattice sum: exact shells up to an adaptive cutoff X, then the integral of
  // f over the remainder stands in for the remaining shells; the same style of
  // bound applied at X is the numeric slack for that replacement.
  std::int64_t n_lo = 0;
  if (m > 0.0) {
    n_lo = static_cast<std::int64_t>(std::floor(m / ks));
    while (n_lo > 0 && ks * static_cast<double>(n_lo) >= m) --n_lo;
    while (ks * static_cast<double>(n_lo) < m) ++n_lo;
  }

  const double slack_target = std::max(1e-6 * bound, 1e-300);
  double partial = 0.0;
  std::int64_t n_done = n_lo - 1;
  double tail_value = 0.0;
  double tail_err = 0.0;
  std::int64_t block = 4096;
  auto table = ShellTable::get(std::min<std::int64_t>(n_lo + block, 1 << 22));
  while (true) {
    const std::int64_t n_to = n_done + block;
    if (disk_point_count(n_to) > opts.mode_cap) {
      throw ResourceLimitError("sum_integral_certificate: shell cutoff exceeds mode cap");
    }
    if (table->n_max() < n_to) table = ShellTable::get(n_to);
    for (std::int64_t n = n_done + 1; n <= n_to; ++n) {
      const auto c = table->r2(n);
      if (c != 0) partial += static_cast<double>(c) * f(ks * static_cast<double>(n));
    }
    n_done = n_to;
    const double X = ks * static_cast<double>(n_done + 1);
    const double sqrt_X = std::sqrt(X);
    const auto IuX = quad::integrate_to_inf(f, X, opts.quad_tol);
    const auto ItX = quad::integrate_to_inf([&](double t) { return f(t * t); },
                                            sqrt_X, opts.quad_tol);
    tail_value = IuX.value / (4.0 * kPi);
    tail_err = (2.0 / (kPi * L)) * ItX.value +
               (4.0 * sqrt_X / (kPi * L) + 6.0 / (L * L)) * f(X);
    if (tail_err <= slack_target) break;
    block *= 2;
  }

  SumIntegralCertificate out;
  out.lattice_sum = partial / (L * L) + tail_value;
  out.integral = integral;
  out.bound = bound;
  out.numeric_slack = tail_err + Iu.error_estimate + It.error_estimate +
                      1e-13 * (std::abs(out.lattice_sum) + std::abs(integral) + f_at_m);
  out.holds = std::abs(out.lattice_sum - integral) <= bound + out.numeric_slack;
  return out;
}

ShellCountBound shell_count_bound(const LatticeSpec& spec, double a, double b,
                                  double mu, std::int64_t cap) {
  if (!(mu > 0.0)) throw DomainError("shell_count_bound: mu must be > 0");
  if (std::isnan(a) || std::isnan(b) || a < 0.0 || b <= a) {
    throw DomainError("shell_count_bound: need b > a >= 0");
  }
  const double ks = spec.spacing_sq();
  const double L = spec.box_side;

  // Largest n with ks*n < x (strict): the shell is half-open [a*mu, b*mu).
  auto strict_below = [&](double x) -> std::int64_t {
    if (x <= 0.0) return -1;
    auto n = static_cast<std::int64_t>(std::floor(x / ks));
    while (n >= 0 && ks * static_cast<double>(n) >= x) --n;
    while (ks * static_cast<double>(n + 1) < x) ++n;
    return n;
  };

  const std::int64_t hi = strict_below(b * mu);
  const std::int64_t lo = strict_below(a * mu);
  const std::int64_t count = disk_point_count(hi) - disk_point_count(lo);
  if (count > cap) throw ResourceLimitError("shell_count_bound: mode count exceeds cap");

  ShellCountBound out;
  out.mode_count = count;
  out.count_density = static_cast<double>(count) / (L * L);
  out.reference = (b - a) * mu / (4.0 * kPi);
  out.bound = (2.0 / (kPi * L)) * (std::sqrt(a * mu) + std::sqrt(b * mu)) + 6.0 / (L * L);
  const double slack = 1e-14 * (std::abs(out.count_density) + std::abs(out.reference) + 1.0);
  out.holds = std::abs(out.count_density - out.reference) <= out.bound + slack;
  return out;
}

}  // namespace polaron2d::lattice
