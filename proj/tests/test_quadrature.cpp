#include <cmath>
#include <random>

#include "detail/radial.hpp"
#include "doctest.h"
#include "polaron2d/chebyshev.hpp"
#include "polaron2d/quadrature.hpp"

using namespace polaron2d;

TEST_SUITE_BEGIN("quadrature");

TEST_CASE("finite intervals") {
  auto sq = [](double x) { return x * x; };
  CHECK(quad::integrate(sq, 0.0, 1.0, 1e-12).value == doctest::Approx(1.0 / 3.0));
  auto osc = [](double x) { return std::sin(10.0 * x); };
  CHECK(quad::integrate(osc, 0.0, 3.0, 1e-12).value ==
        doctest::Approx((1.0 - std::cos(30.0)) / 10.0).epsilon(1e-10));
}

TEST_CASE("semi-infinite tails") {
  CHECK(quad::integrate_to_inf([](double x) { return std::exp(-x); }, 0.0, 1e-12)
            .value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(quad::integrate_to_inf([](double x) { return 1.0 / (x * x); }, 1.0, 1e-12)
            .value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(
      quad::integrate_to_inf([](double x) { return 1.0 / x; }, 1.0, 1e-10),
      DivergenceError);
}

TEST_CASE("chebyshev interpolation hits analytic targets") {
  const auto it = cheb::Interpolant::build([](double x) { return std::exp(x); },
                                           0.0, 3.0, 33);
  for (double x : {0.0, 0.31, 1.7, 2.9999, 3.0}) {
    CHECK(it.eval(x) == doctest::Approx(std::exp(x)).epsilon(1e-12));
  }
  bool ok = false;
  const auto ad = cheb::Interpolant::build_adaptive(
      [](double x) { return 1.0 / (1.0 + x * x); }, -4.0, 4.0, 9, 1025, 1e-11, &ok);
  CHECK(ok);
  for (double x : {-3.7, -0.5, 0.0, 1.3, 3.99}) {
    CHECK(ad.eval(x) == doctest::Approx(1.0 / (1.0 + x * x)).epsilon(1e-9));
  }
}

TEST_CASE("blocked shell sums match exact iteration across regimes") {
  const auto table = lattice::ShellTable::get(400000);
  struct Case {
    std::int64_t lo, hi;
    bool feature_at_lo;
    std::function<double(double)> f;
  };
  // profiles shaped like the solver's: sharp variation at the feature end
  std::vector<Case> cases;
  cases.push_back({2534, 400000, true,
                   [](double n) { return 1.0 / (0.6 * n - 1500.0); }});
  cases.push_back({2534, 400000, true,
                   [](double n) { return 1.0 / std::sqrt((0.6 * n - 1510.0) * (0.6 * n + 900.0)); }});
  cases.push_back({0, 2533, false,
                   [](double n) { return 1.0 / (2533.5 - n + 40.0); }});
  cases.push_back({0, 2533, false,
                   [](double n) { return std::log(2600.0 - n) / (2700.0 - n); }});
  cases.push_back({100, 350000, true,
                   [](double n) { return std::exp(-(n - 100.0) / 30000.0) / (n + 3.0); }});
  for (const auto& c : cases) {
    const auto blocks =
        detail::BlockedRange::build(*table, c.lo, c.hi, c.feature_at_lo);
    const double exact = detail::exact_shell_sum(*table, c.lo, c.hi, c.f);
    const double fast = blocks.sum(c.f);
    CHECK(fast == doctest::Approx(exact).epsilon(2e-7));
  }
}

TEST_CASE("blocked sums stay exact on short ranges") {
  const auto table = lattice::ShellTable::get(2000);
  auto f = [](double n) { return 1.0 / (n + 2.5); };
  for (auto [lo, hi] : {std::pair<std::int64_t, std::int64_t>{0, 40},
                        {5, 5}, {17, 120}}) {
    const auto blocks = detail::BlockedRange::build(*table, lo, hi, true);
    CHECK(blocks.sum(f) ==
          doctest::Approx(detail::exact_shell_sum(*table, lo, hi, f)).epsilon(1e-12));
  }
}

TEST_CASE("annulus point sums agree with a brute-force double loop") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int it = 0; it < 10; ++it) {
    const std::int64_t n_lo = 10 + static_cast<std::int64_t>(200.0 * unif(rng));
    const std::int64_t n_hi = n_lo + 50 + static_cast<std::int64_t>(4000.0 * unif(rng));
    const double A0 = 50.0 + 100.0 * unif(rng);
    const double B0 = 0.2 + unif(rng);
    const double Cx = 0.5 * unif(rng);
    const double Cy = 0.5 * unif(rng);
    double brute = 0.0;
    const auto R = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n_hi))) + 1;
    for (std::int64_t x = -R; x <= R; ++x)
      for (std::int64_t y = -R; y <= R; ++y) {
        const std::int64_t n = x * x + y * y;
        if (n < n_lo || n > n_hi) continue;
        brute += 1.0 / (A0 + B0 * static_cast<double>(n) -
                        Cx * static_cast<double>(x) - Cy * static_cast<double>(y));
      }
    const double fast = detail::annulus_sum_pointwise(n_lo, n_hi, A0, B0, Cx, Cy);
    CHECK(fast == doctest::Approx(brute).epsilon(1e-12));
  }
}

TEST_SUITE_END();
