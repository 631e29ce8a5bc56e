#pragma once

// Barycentric Chebyshev-Lobatto interpolation on [a, b]. Used to tabulate
// smooth radial profiles (annulus sums as a function of the outer shell,
// G(0, t) as a function of t) so solvers evaluate them in O(#nodes).

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace polaron2d::cheb {

class Interpolant {
 public:
  Interpolant() = default;

  // n_nodes >= 2 Lobatto nodes x_j = mid - half*cos(pi*j/(n-1)).
  static Interpolant build(const std::function<double(double)>& f, double a,
                           double b, int n_nodes) {
    Interpolant it;
    it.a_ = a;
    it.b_ = b;
    it.nodes_.resize(n_nodes);
    it.values_.resize(n_nodes);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (int j = 0; j < n_nodes; ++j) {
      const double x = mid - half * std::cos(std::numbers::pi * j / (n_nodes - 1));
      it.nodes_[j] = x;
      it.values_[j] = f(x);
    }
    it.init_weights();
    return it;
  }

  // Nested refinement: node count n -> 2n-1 (contains the old grid) until the
  // coarse interpolant matches the fine values to abs_tol, or max_nodes is
  // reached. Returns the finest interpolant; *ok=false when tolerance unmet.
  static Interpolant build_adaptive(const std::function<double(double)>& f,
                                    double a, double b, int start_nodes,
                                    int max_nodes, double abs_tol, bool* ok) {
    Interpolant coarse = build(f, a, b, start_nodes);
    while (true) {
      const int n_fine = 2 * coarse.size() - 1;
      Interpolant fine = build(f, a, b, n_fine);
      double err = 0.0;
      for (int j = 1; j < n_fine; j += 2) {
        err = std::max(err, std::abs(fine.values_[j] - coarse.eval(fine.nodes_[j])));
      }
      if (err <= abs_tol) {
        if (ok) *ok = true;
        return fine;
      }
      if (n_fine >= max_nodes) {
        if (ok) *ok = false;
        return fine;
      }
      coarse = std::move(fine);
    }
  }

  double eval(double x) const {
    double num = 0.0, den = 0.0;
    const int n = static_cast<int>(nodes_.size());
    for (int j = 0; j < n; ++j) {
      const double d = x - nodes_[j];
      if (d == 0.0) return values_[j];
      const double t = weights_[j] / d;
      num += t * values_[j];
      den += t;
    }
    return num / den;
  }

  double a() const { return a_; }
  double b() const { return b_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& values() const { return values_; }

  double max_abs_value() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  double min_value() const {
    double m = values_.empty() ? 0.0 : values_[0];
    for (double v : values_) m = std::min(m, v);
    return m;
  }

 private:
  double a_ = 0.0, b_ = 0.0;
  std::vector<double> nodes_;
  std::vector<double> values_;
  std::vector<double> weights_;

  void init_weights() {
    const int n = static_cast<int>(nodes_.size());
    weights_.assign(n, 1.0);
    for (int j = 0; j < n; ++j) {
      weights_[j] = (j % 2 == 0) ? 1.0 : -1.0;
      if (j == 0 || j == n - 1) weights_[j] *= 0.5;
    }
  }
};

}  // namespace polaron2d::cheb
