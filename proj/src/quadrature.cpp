#include "polaron2d/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace polaron2d::quad {

namespace {

// Gauss-Kronrod (7,15) nodes/weights on [-1,1].
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Interval {
  double a, b, value, err;
};

Interval gk15(const std::function<double(double)>& f, double a, double b,
              std::int64_t* evals) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double res_k = kWgk[7] * fc;
  double res_g = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double f1 = f(c - x);
    const double f2 = f(c + x);
    res_k += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) res_g += kWg[j / 2] * (f1 + f2);
  }
  *evals += 15;
  Interval out;
  out.a = a;
  out.b = b;
  out.value = res_k * h;
  const double diff = (res_k - res_g) * h;
  out.err = std::pow(200.0 * std::abs(diff), 1.5);
  out.err = std::min(std::abs(diff), out.err);
  if (!std::isfinite(out.err)) out.err = std::abs(diff);
  return out;
}

}  // namespace

Result integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, double rel_tol, int max_intervals) {
  Result res;
  if (a == b) return res;
  std::vector<Interval> ivs;
  ivs.push_back(gk15(f, a, b, &res.evaluations));
  while (true) {
    double total = 0.0, err = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < ivs.size(); ++i) {
      total += ivs[i].value;
      err += ivs[i].err;
      if (ivs[i].err > ivs[worst].err) worst = i;
    }
    const double tol = std::max(abs_tol, rel_tol * std::abs(total));
    if (err <= tol || ivs[worst].err == 0.0) {
      res.value = total;
      res.error_estimate = err;
      return res;
    }
    if (static_cast<int>(ivs.size()) >= max_intervals) {
      if (err > 100.0 * std::max(tol, 1e-300)) {
        throw ConvergenceError(
            "quad::integrate: interval budget exhausted, error estimate " +
            std::to_string(err));
      }
      res.value = total;
      res.error_estimate = err;
      return res;
    }
    const Interval w = ivs[worst];
    const double mid = 0.5 * (w.a + w.b);
    ivs[worst] = gk15(f, w.a, mid, &res.evaluations);
    ivs.push_back(gk15(f, mid, w.b, &res.evaluations));
  }
}

Result integrate_to_inf(const std::function<double(double)>& f, double a,
                        double abs_tol, double rel_tol, int max_panels) {
  Result res;
  double lo = a;
  double h = std::max(1.0, 0.5 * std::abs(a));
  double prev_abs = -1.0;
  int growing = 0;
  for (int panel = 0; panel < max_panels; ++panel) {
    const double hi = lo + h;
    const Result p = integrate(f, lo, hi, std::max(0.1 * abs_tol, 1e-300),
                               1e-14, 400);
    res.value += p.value;
    res.error_estimate += p.error_estimate;
    res.evaluations += p.evaluations;
    const double pa = std::abs(p.value);
    const double stop_tol =
        std::max({abs_tol, rel_tol * std::abs(res.value),
                  1e-14 * std::abs(res.value)});
    if (pa <= 0.25 * stop_tol && panel >= 1) {
      return res;
    }
    if (prev_abs >= 0.0 && pa > prev_abs * 1.02) {
      if (++growing >= 6) {
        throw DivergenceError("quad::integrate_to_inf: tail not decaying near s=" +
                              std::to_string(hi));
      }
    } else {
      growing = 0;
    }
    prev_abs = pa;
    lo = hi;
    h *= 2.0;
  }
  throw DivergenceError("quad::integrate_to_inf: panel budget exhausted");
}

}  // namespace polaron2d::quad
