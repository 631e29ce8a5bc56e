#pragma once

// Internal helpers for radial (shell-indexed) lattice sums.
//
// BlockedRange partitions an integer shell interval [lo, hi] into blocks whose
// widths grow geometrically with the distance from the "feature end" (the end
// where the summed profile varies fastest: the Fermi edge for annulus sums,
// the origin for the renormalization sum). Each block stores the exact shell
// mass, centroid and variance, so sum(f) = sum_blocks mass*(f(c) + var/2 f''(c))
// is exact through the quadratic Taylor term. Widths are at most 2% of the
// distance to the feature end, which keeps them at most 2% of the local
// variation scale of every profile whose features sit at that end.

#include <cstdint>
#include <vector>

#include "polaron2d/lattice.hpp"

namespace polaron2d::detail {

inline std::int64_t isqrt64(std::int64_t v) {
  if (v < 0) return -1;
  auto y = static_cast<std::int64_t>(std::sqrt(static_cast<double>(v)));
  while (y > 0 && y * y > v) --y;
  while ((y + 1) * (y + 1) <= v) ++y;
  return y;
}

struct ShellBlock {
  double mass = 0.0;      // sum of r2(n) over the block
  double centroid = 0.0;  // mass-weighted mean of n
  double var = 0.0;       // mass-weighted variance of n
  double half_reach = 0.0;  // min(centroid - a, b - centroid)
};

class BlockedRange {
 public:
  static BlockedRange build(const lattice::ShellTable& table, std::int64_t lo,
                            std::int64_t hi, bool feature_at_lo,
                            std::int64_t exact_run = 64, double rel = 0.01) {
    BlockedRange out;
    if (hi < lo) return out;
    std::vector<std::pair<std::int64_t, std::int64_t>> spans;
    std::int64_t d = 0;
    std::int64_t pos = 0;
    const std::int64_t len = hi - lo + 1;
    while (pos < len) {
      std::int64_t w = (d < exact_run)
                           ? 1
                           : std::max<std::int64_t>(1, static_cast<std::int64_t>(rel * static_cast<double>(d)));
      w = std::min(w, len - pos);
      spans.emplace_back(pos, pos + w - 1);
      pos += w;
      d = pos;
    }
    out.blocks_.reserve(spans.size());
    for (const auto& [s, e] : spans) {
      std::int64_t a, b;
      if (feature_at_lo) {
        a = lo + s;
        b = lo + e;
      } else {
        a = hi - e;
        b = hi - s;
      }
      const double nc = 0.5 * static_cast<double>(a + b);
      double s0 = 0.0, s1 = 0.0, s2 = 0.0;
      for (std::int64_t n = a; n <= b; ++n) {
        const double c = static_cast<double>(table.r2(n));
        if (c == 0.0) continue;
        const double dx = static_cast<double>(n) - nc;
        s0 += c;
        s1 += c * dx;
        s2 += c * dx * dx;
      }
      if (s0 == 0.0) continue;
      ShellBlock blk;
      blk.mass = s0;
      const double mean_dx = s1 / s0;
      blk.centroid = nc + mean_dx;
      blk.var = std::max(0.0, s2 / s0 - mean_dx * mean_dx);
      blk.half_reach = std::min(blk.centroid - static_cast<double>(a),
                                static_cast<double>(b) - blk.centroid);
      out.blocks_.push_back(blk);
    }
    return out;
  }

  // sum over the range of r2(n) * f(n), f smooth away from the feature end.
  // The f'' stencil stays inside the block, so f is never evaluated outside
  // [lo, hi].
  template <class F>
  double sum(F&& f) const {
    double acc = 0.0;
    for (const auto& blk : blocks_) {
      const double fc = f(blk.centroid);
      if (blk.var > 0.0) {
        const double h = std::min(std::max(1.0, 0.25 * blk.half_reach), blk.half_reach);
        if (h >= 0.5) {
          const double fpp = (f(blk.centroid + h) - 2.0 * fc + f(blk.centroid - h)) / (h * h);
          acc += blk.mass * (fc + 0.5 * blk.var * fpp);
          continue;
        }
      }
      acc += blk.mass * fc;
    }
    return acc;
  }

  std::size_t block_count() const { return blocks_.size(); }

 private:
  std::vector<ShellBlock> blocks_;
};

// Exact reference: sum of r2(n)*f(n) over lo <= n <= hi by direct iteration.
template <class F>
double exact_shell_sum(const lattice::ShellTable& table, std::int64_t lo,
                       std::int64_t hi, F&& f) {
  double acc = 0.0;
  for (std::int64_t n = std::max<std::int64_t>(lo, 0); n <= hi; ++n) {
    const auto c = table.r2(n);
    if (c != 0) acc += static_cast<double>(c) * f(static_cast<double>(n));
  }
  return acc;
}

// sum over integer points n_lo <= |g|^2 <= n_hi of
//   1/(A0 + B0*|g|^2 - Cx*gx - Cy*gy),
// row-by-row in gx with exact integer shell bounds; the +-gy arcs are summed
// explicitly, so complete shells enter symmetrically.
inline double annulus_sum_pointwise(std::int64_t n_lo, std::int64_t n_hi,
                                    double A0, double B0, double Cx, double Cy) {
  if (n_hi < n_lo) return 0.0;
  const std::int64_t R = isqrt64(n_hi);
  double acc = 0.0;
  for (std::int64_t gx = -R; gx <= R; ++gx) {
    const std::int64_t g2 = gx * gx;
    const std::int64_t y_hi = isqrt64(n_hi - g2);
    const std::int64_t rem = n_lo - g2;
    const std::int64_t y_lo = (rem <= 0) ? 0 : isqrt64(rem - 1) + 1;
    if (y_lo > y_hi) continue;
    const double base = A0 + B0 * static_cast<double>(g2) - Cx * static_cast<double>(gx);
    std::int64_t gy = y_lo;
    if (gy == 0) {
      acc += 1.0 / base;
      gy = 1;
    }
    for (; gy <= y_hi; ++gy) {
      const double t = base + B0 * static_cast<double>(gy * gy);
      const double u = Cy * static_cast<double>(gy);
      acc += 1.0 / (t - u) + 1.0 / (t + u);
    }
  }
  return acc;
}

// sum_{n <= n_top} r2(n)/(mf*ks*n + eb), the renormalization sum (not yet
// divided by the box area).
inline double renorm_radial_sum(const lattice::ShellTable& table, std::int64_t n_top,
                                double mf, double ks, double eb) {
  double acc = 0.0;
  for (std::int64_t n = 0; n <= n_top; ++n) {
    const auto c = table.r2(n);
    if (c != 0) acc += static_cast<double>(c) / (mf * ks * static_cast<double>(n) + eb);
  }
  return acc;
}

}  // namespace polaron2d::detail
