#pragma once

// Momentum lattice kappa*Z^2 for a periodic square box of side L:
// enumeration, shell counting, Fermi-sea sums, and the sum-vs-integral
// certificates used by every tail estimate in this library.
//
// Shell membership is decided on the integer norm n = i^2 + j^2 against an
// integer threshold derived from the energy cutoff (kappa^2 * n <= cutoff,
// with a directed fixup of the floating division), so boundary ties are
// handled identically everywhere.

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "polaron2d/errors.hpp"

namespace polaron2d::lattice {

inline constexpr std::int64_t kDefaultModeCap = 100'000'000;

struct LatticeSpec {
  double box_side = 0.0;  // L > 0

  explicit LatticeSpec(double L);

  double spacing() const;     // kappa = 2*pi/L
  double spacing_sq() const;  // kappa^2
  double area() const { return box_side * box_side; }
};

// One lattice mode k = kappa*(ix, iy), norm2 = ix^2 + iy^2 (so k^2 = kappa^2*norm2).
struct Mode {
  std::int64_t ix = 0;
  std::int64_t iy = 0;
  std::int64_t norm2 = 0;

  double kx(const LatticeSpec& spec) const { return spec.spacing() * static_cast<double>(ix); }
  double ky(const LatticeSpec& spec) const { return spec.spacing() * static_cast<double>(iy); }
};

// Largest integer n >= 0 with kappa^2 * n <= cutoff; -1 when even n = 0 fails
// (cutoff < 0). The closed boundary convention: ties at k^2 == cutoff are in.
std::int64_t integer_cutoff(const LatticeSpec& spec, double cutoff);

// Number of integer points with |g|^2 <= n_max (n_max < 0 -> 0). O(sqrt(n_max)).
std::int64_t disk_point_count(std::int64_t n_max);

// Sum of |g|^2 over integer points with |g|^2 <= n_max. O(sqrt(n_max)).
std::int64_t disk_norm2_sum(std::int64_t n_max);

// r2 table: r2(n) = #{(i,j) in Z^2 : i^2+j^2 = n} for 0 <= n <= n_max.
// Shared, grow-only cache; snapshots are immutable.
class ShellTable {
 public:
  static std::shared_ptr<const ShellTable> get(std::int64_t n_max);

  std::uint16_t r2(std::int64_t n) const { return counts_[static_cast<std::size_t>(n)]; }
  std::int64_t n_max() const { return n_max_; }
  const std::uint16_t* data() const { return counts_.data(); }

 private:
  explicit ShellTable(std::int64_t n_max);
  std::int64_t n_max_ = -1;
  std::vector<std::uint16_t> counts_;
};

// All modes with k^2 <= cutoff, ordered by (norm2, ix, iy). Throws
// ResourceLimitError when the count would exceed cap.
std::vector<Mode> enumerate_modes(const LatticeSpec& spec, double cutoff,
                                  std::int64_t cap = kDefaultModeCap);

// N(mu) = #{k : k^2 <= mu}. Requires mu > 0 (the origin is always counted).
std::int64_t count_modes(const LatticeSpec& spec, double mu,
                         std::int64_t cap = kDefaultModeCap);

// E0(mu) = sum_{k^2 <= mu} k^2.
double fermi_sea_energy(const LatticeSpec& spec, double mu,
                        std::int64_t cap = kDefaultModeCap);

struct ShellSum {
  double lower = 0.0;   // a
  double upper = 0.0;   // b
  double value = 0.0;   // sum of f(k^2) over a <= k^2 <= b
  std::int64_t mode_count = 0;
};

// Sum f(k^2) over the closed shell a <= k^2 <= b.
ShellSum shell_sum(const LatticeSpec& spec, const std::function<double(double)>& f,
                   double a, double b, std::int64_t cap = kDefaultModeCap);

struct SumIntegralCertificate {
  double lattice_sum = 0.0;  // L^-2 sum_{k^2 >= m} f(k^2)
  double integral = 0.0;     // (2*pi)^-1 int_sqrt(m)^inf f(t^2) t dt
  double bound = 0.0;        // certified bound on |lattice_sum - integral|
  bool holds = false;
  double numeric_slack = 0.0;  // truncation + quadrature allowance folded into `holds`
};

struct CertificateOptions {
  std::int64_t mode_cap = kDefaultModeCap;
  double quad_tol = 1e-12;
  int monotone_samples = 512;
};

// Certifies |L^-2 sum_{k^2>=m} f - (2pi)^-1 int f| against the closed-form
// bound for monotone nonincreasing f: for m = 0 the bound is
// (2/(pi L)) int_0^inf f(t^2) dt + 3 f(0)/L^2, for m > 0 it is
// (2/(pi L)) int_sqrt(m)^inf f(t^2) dt + (4 sqrt(m)/(pi L) + 6/L^2) f(m).
SumIntegralCertificate sum_integral_certificate(
    const std::function<double(double)>& f, double m, const LatticeSpec& spec,
    const CertificateOptions& opts = {});

struct ShellCountBound {
  double count_density = 0.0;  // L^-2 * #{a*mu <= k^2 < b*mu}
  double reference = 0.0;      // (b-a)*mu/(4*pi)
  double bound = 0.0;          // (2/(pi L))(sqrt(a*mu)+sqrt(b*mu)) + 6/L^2
  bool holds = false;
  std::int64_t mode_count = 0;
};

// Verifies the half-open shell count a*mu <= k^2 < b*mu against its density
// reference. Requires b > a >= 0 and mu > 0.
ShellCountBound shell_count_bound(const LatticeSpec& spec, double a, double b,
                                  double mu, std::int64_t cap = kDefaultModeCap);

}  // namespace polaron2d::lattice
