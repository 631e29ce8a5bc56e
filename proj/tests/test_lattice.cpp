#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>

#include "doctest.h"
#include "polaron2d/lattice.hpp"

using namespace polaron2d;
using lattice::LatticeSpec;

namespace {
constexpr double kPi = 3.14159265358979323846;
const double kTwoPi = 2.0 * kPi;
}  // namespace

TEST_SUITE_BEGIN("lattice");

TEST_CASE("cutoff zero keeps only the origin") {
  LatticeSpec spec(kTwoPi);
  const auto modes = lattice::enumerate_modes(spec, 0.0);
  REQUIRE(modes.size() == 1);
  CHECK(modes[0].ix == 0);
  CHECK(modes[0].iy == 0);
}

TEST_CASE("cutoff 2 on the unit-spacing lattice gives 9 modes") {
  LatticeSpec spec(kTwoPi);  // kappa = 1
  const auto modes = lattice::enumerate_modes(spec, 2.0);
  REQUIRE(modes.size() == 9);
  CHECK(modes[0].norm2 == 0);
  int n1 = 0, n2 = 0;
  for (const auto& mo : modes) {
    if (mo.norm2 == 1) ++n1;
    if (mo.norm2 == 2) ++n2;
  }
  CHECK(n1 == 4);
  CHECK(n2 == 4);
  // boundary ties k^2 == cutoff are included
  CHECK(modes.back().norm2 == 2);
}

TEST_CASE("mode count matches an exhaustive scan at radius 5") {
  LatticeSpec spec(kTwoPi);
  long long brute = 0;
  for (int x = -5; x <= 5; ++x)
    for (int y = -5; y <= 5; ++y)
      if (x * x + y * y <= 25) ++brute;
  CHECK(lattice::count_modes(spec, 25.0) == brute);
  CHECK(static_cast<long long>(lattice::enumerate_modes(spec, 25.0).size()) == brute);
}

TEST_CASE("count_modes basics") {
  LatticeSpec spec(kTwoPi);
  CHECK(lattice::count_modes(spec, 0.5) == 1);
  CHECK(lattice::count_modes(spec, 1.0) == 5);
  CHECK_THROWS_AS(lattice::count_modes(spec, 0.0), DomainError);
}

TEST_CASE("count density obeys the shell bound at L=20, mu=50") {
  LatticeSpec spec(20.0);
  const double mu = 50.0;
  const double n_density =
      static_cast<double>(lattice::count_modes(spec, mu)) / (20.0 * 20.0);
  const double bound = 2.0 * std::sqrt(mu) / (kPi * 20.0) + 6.0 / (20.0 * 20.0);
  CHECK(std::abs(n_density - mu / (4.0 * kPi)) <= bound);
}

TEST_CASE("fermi sea energy on the unit lattice") {
  LatticeSpec spec(kTwoPi);
  CHECK(lattice::fermi_sea_energy(spec, 0.5) == doctest::Approx(0.0));
  CHECK(lattice::fermi_sea_energy(spec, 1.0) == doctest::Approx(4.0));
  CHECK(lattice::fermi_sea_energy(spec, 2.0) == doctest::Approx(12.0));
}

TEST_CASE("fermi sea energy is constant between shells") {
  LatticeSpec spec(kTwoPi);
  const double e1 = lattice::fermi_sea_energy(spec, 1.0);
  const double e2 = lattice::fermi_sea_energy(spec, 1.5);
  const double e3 = lattice::fermi_sea_energy(spec, 1.999);
  CHECK(e1 == e2);
  CHECK(e2 == e3);
  CHECK(lattice::fermi_sea_energy(spec, 2.0) > e3);
}

TEST_CASE("enumerate agrees with count across cutoffs and boxes") {
  for (double L : {1.0, kTwoPi, 10.0, 17.3}) {
    LatticeSpec spec(L);
    for (double cutoff : {0.1, 1.0, 3.7, 25.0, 400.0}) {
      const auto modes = lattice::enumerate_modes(spec, cutoff);
      CHECK(static_cast<std::int64_t>(modes.size()) ==
            lattice::count_modes(spec, cutoff));
    }
  }
}

TEST_CASE("mode ordering is by norm then lexicographic, without duplicates") {
  LatticeSpec spec(5.0);
  const auto modes = lattice::enumerate_modes(spec, 30.0);
  std::set<std::pair<std::int64_t, std::int64_t>> seen;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    CHECK(seen.insert({modes[i].ix, modes[i].iy}).second);
    if (i > 0) {
      const auto& a = modes[i - 1];
      const auto& b = modes[i];
      const bool ordered = a.norm2 < b.norm2 ||
                           (a.norm2 == b.norm2 &&
                            (a.ix < b.ix || (a.ix == b.ix && a.iy < b.iy)));
      CHECK(ordered);
    }
  }
}

TEST_CASE("every mode's dihedral orbit is fully present") {
  LatticeSpec spec(kTwoPi);
  const auto modes = lattice::enumerate_modes(spec, 40.0);
  std::set<std::pair<std::int64_t, std::int64_t>> seen;
  for (const auto& mo : modes) seen.insert({mo.ix, mo.iy});
  for (const auto& mo : modes) {
    const std::int64_t x = mo.ix, y = mo.iy;
    for (auto [a, b] : {std::pair<std::int64_t, std::int64_t>{x, y},
                        {-x, y}, {x, -y}, {-x, -y},
                        {y, x}, {-y, x}, {y, -x}, {-y, -x}}) {
      CHECK(seen.count({a, b}) == 1);
    }
  }
}

TEST_CASE("shell_sum counts agree with enumeration on random windows") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> box(2.0, 15.0);
  std::uniform_real_distribution<double> lim(0.0, 60.0);
  for (int it = 0; it < 25; ++it) {
    LatticeSpec spec(box(rng));
    double a = lim(rng), b = lim(rng);
    if (a > b) std::swap(a, b);
    const auto sum = lattice::shell_sum(spec, [](double) { return 1.0; }, a, b);
    long long brute = 0;
    for (const auto& mo : lattice::enumerate_modes(spec, b + 1.0)) {
      const double k2 = spec.spacing_sq() * static_cast<double>(mo.norm2);
      if (k2 >= a && k2 <= b) ++brute;
    }
    CHECK(sum.mode_count == brute);
    CHECK(sum.value == doctest::Approx(static_cast<double>(brute)));
  }
}

TEST_CASE("sum-integral certificate: rational profile at m=0") {
  LatticeSpec spec(kTwoPi);
  auto f = [](double s) { return 1.0 / ((s + 1.0) * (s + 1.0)); };
  const auto cert = lattice::sum_integral_certificate(f, 0.0, spec);
  CHECK(cert.holds);
  const double L = kTwoPi;
  // int_0^inf dt/(t^2+1)^2 = pi/4, so the m=0 bound is explicit here
  const double expected_bound = (2.0 / (kPi * L)) * (kPi / 4.0) + 3.0 / (L * L);
  CHECK(cert.bound == doctest::Approx(expected_bound).epsilon(1e-6));
  CHECK(cert.integral == doctest::Approx(1.0 / (4.0 * kPi)).epsilon(1e-10));
}

TEST_CASE("sum-integral certificate: zero function") {
  LatticeSpec spec(5.0);
  const auto cert =
      lattice::sum_integral_certificate([](double) { return 0.0; }, 0.0, spec);
  CHECK(cert.lattice_sum == 0.0);
  CHECK(cert.integral == 0.0);
  CHECK(cert.bound == 0.0);
  CHECK(cert.holds);
}

TEST_CASE("sum-integral certificate: exponential tail against brute force") {
  LatticeSpec spec(5.0);
  auto f = [](double s) { return std::exp(-s); };
  const auto cert = lattice::sum_integral_certificate(f, 1.0, spec);
  CHECK(cert.holds);
  const double ks = spec.spacing_sq();
  double brute = 0.0;
  for (int x = -60; x <= 60; ++x)
    for (int y = -60; y <= 60; ++y) {
      const double k2 = ks * (x * x + y * y);
      if (k2 >= 1.0) brute += std::exp(-k2);
    }
  brute /= 25.0;
  CHECK(cert.lattice_sum == doctest::Approx(brute).epsilon(1e-10));
}

TEST_CASE("sum-integral certificate rejects non-monotone and divergent input") {
  LatticeSpec spec(kTwoPi);
  CHECK_THROWS_AS(
      lattice::sum_integral_certificate(
          [](double s) { return std::abs(std::sin(s)) + 0.1; }, 0.0, spec),
      ContractViolationError);
  CHECK_THROWS_AS(
      lattice::sum_integral_certificate(
          [](double s) { return 1.0 / (1.0 + std::sqrt(s)); }, 0.0, spec),
      DivergenceError);
}

TEST_CASE("sum-integral certificate holds on a randomized monotone family") {
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  int passed = 0;
  for (int it = 0; it < 100; ++it) {
    const double L = 1.5 + 12.0 * unif(rng);
    const double m = (it % 3 == 0) ? 0.0 : 4.0 * unif(rng);
    const double A = 0.1 + 5.0 * unif(rng);
    const double a = 0.2 + 3.0 * unif(rng);
    const double pexp = 1.5 + 1.5 * unif(rng);
    const double b = 0.1 + 2.0 * unif(rng);
    std::function<double(double)> f;
    if (it % 3 == 0) {
      f = [=](double s) { return A / std::pow(s + a, pexp); };
    } else if (it % 3 == 1) {
      f = [=](double s) { return A * std::exp(-b * s); };
    } else {
      f = [=](double s) { return A * std::exp(-b * s) / (s + a); };
    }
    LatticeSpec spec(L);
    const auto cert = lattice::sum_integral_certificate(f, m, spec);
    CHECK(cert.holds);
    if (cert.holds) ++passed;
  }
  CHECK(passed == 100);
}

TEST_CASE("shell count bound: frozen small instance") {
  LatticeSpec spec(kTwoPi);
  const auto res = lattice::shell_count_bound(spec, 0.0, 1.0, 0.5);
  CHECK(res.mode_count == 1);
  CHECK(res.count_density == doctest::Approx(1.0 / (4.0 * kPi * kPi)));
  CHECK(res.reference == doctest::Approx(1.0 / (8.0 * kPi)));
  CHECK(res.holds);
}

TEST_CASE("shell count bound rejects an empty interval") {
  LatticeSpec spec(kTwoPi);
  CHECK_THROWS_AS(lattice::shell_count_bound(spec, 1.0, 1.0, 0.5), DomainError);
  CHECK_THROWS_AS(lattice::shell_count_bound(spec, 2.0, 1.0, 0.5), DomainError);
}

TEST_CASE("shell count bound holds on 100 random instances") {
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int it = 0; it < 100; ++it) {
    const double L = 2.0 + 20.0 * unif(rng);
    const double mu = 0.1 + 30.0 * unif(rng);
    double a = 3.0 * unif(rng);
    double b = a + 0.05 + 3.0 * unif(rng);
    // keep the instance under 1e5 modes
    if (b * mu * L * L / (4.0 * kPi) > 9e4) {
      b = 4.0 * kPi * 9e4 / (mu * L * L);
      if (b <= a) a = 0.25 * b;
    }
    const auto res = lattice::shell_count_bound(LatticeSpec(L), a, b, mu);
    CHECK(res.holds);
    CHECK(res.mode_count <= 100000);
  }
}

TEST_CASE("resource caps trigger resource errors") {
  LatticeSpec spec(kTwoPi);
  CHECK_THROWS_AS(lattice::enumerate_modes(spec, 100.0, 10), ResourceLimitError);
  CHECK_THROWS_AS(lattice::count_modes(spec, 100.0, 10), ResourceLimitError);
}

TEST_SUITE_END();
