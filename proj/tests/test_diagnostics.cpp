#include <doctest.h>

#include <cmath>
#include <random>

#include "arteria/diagnostics.hpp"
#include "arteria/errors.hpp"
#include "arteria/experiments.hpp"
#include "test_common.hpp"

using namespace arteria;
using testing::kPi;

TEST_CASE("lipschitz_diag oracles") {
  const GridSpec g(256);
  const auto s = testing::sample(g, [](double x) { return std::sin(x); });
  CHECK(lipschitz_diag(s).lip == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(lipschitz_diag(s).inv_lip * lipschitz_diag(s).lip == doctest::Approx(1.0));

  const auto zero = lipschitz_diag(SpectralField(g));
  CHECK(zero.lip == 0.0);
  CHECK(zero.inv_lip == kInvLipSentinel);

  // max |d/dx sech^2| = 4/(3 sqrt 3) at tanh^2 = 1/3
  const auto f = build_initial_data(0.1, GridSpec(1024));
  CHECK(lipschitz_diag(f).lip == doctest::Approx(0.1 * 4 / (3 * std::sqrt(3.0))).epsilon(1e-3));

  SpectralField bad(g);
  bad[2] = Complex(INFINITY, 0.0);
  CHECK_THROWS_AS(lipschitz_diag(bad), NonFiniteError);
}

TEST_CASE("accumulate_integral") {
  double I = 0.0;
  for (int i = 1; i <= 10; ++i) I = accumulate_integral(I, 2.0, (i - 1) * 0.3, 2.0, i * 0.3);
  CHECK(I == doctest::Approx(6.0));
  CHECK(accumulate_integral(0.0, 0.0, 0.0, 0.0, 5.0) == 0.0);
  const double half = accumulate_integral(0.0, 0.0, 0.0, 0.5, 0.5);
  CHECK(accumulate_integral(half, 0.5, 0.5, 1.0, 1.0) == 0.5);
  CHECK_THROWS_AS(accumulate_integral(0.0, 1.0, 1.0, 1.0, 0.5), ConfigError);
}

TEST_CASE("energies of single modes") {
  const GridSpec g(64);
  ModelParams params;
  params.kappa = 2.0;
  const auto table = build_table(params, g, 3.0);
  const auto c1 = testing::sample(g, [](double x) { return std::cos(x); });
  const auto r1 = energies(c1, table, params);
  CHECK(r1.l2 * r1.l2 == doctest::Approx(kPi));
  CHECK(r1.hs_energy == doctest::Approx(2 * kPi));
  CHECK(r1.e1 == doctest::Approx(kPi * (1 + 4 / 4.0)));
  CHECK(r1.d1 == doctest::Approx(kPi));
  CHECK(r1.d2 == doctest::Approx(kPi));
  CHECK(r1.e2 == doctest::Approx(kPi * (1 + 4 / 4.0)));

  const auto c2 = testing::sample(g, [](double x) { return std::cos(2 * x); });
  CHECK(energies(c2, table, params).hs_energy == doctest::Approx(kPi * 65));
}

TEST_CASE("energies match physical quadrature") {
  std::mt19937_64 rng(50);
  const GridSpec g(128);
  const ModelParams params;
  const auto table = build_table(params, g, 3.0);
  const auto f = testing::random_field(g, 40, rng, true);
  const auto row = energies(f, table, params);

  auto quad = [&](const SpectralField& h) {
    double s = 0.0;
    for (double v : to_physical(h)) s += v * v;
    return s * g.spacing();
  };
  // Lambda^3 has modulus |k|^3 = |(ik)^3|, so ||Lambda^3 f|| = ||f_xxx||.
  const double expected = quad(f) + quad(differentiate(f, 3));
  CHECK(std::abs(row.hs_energy - expected) <= 1e-10 * expected);
  CHECK(row.mean == f.mean());
  CHECK(row.d1 == doctest::Approx(quad(differentiate(f, 1))).epsilon(1e-12));
  CHECK(row.d2 == doctest::Approx(quad(differentiate(f, 2))).epsilon(1e-12));
}

TEST_CASE("tracker accumulates lip and keeps reciprocals") {
  const GridSpec g(64);
  const ModelParams params;
  const auto table = build_table(params, g);
  DiagnosticsTracker tracker(table);
  double prev_I = -1.0;
  for (int i = 0; i <= 10; ++i) {
    const double t = 0.1 * i;
    const auto f = (1.0 + t) * testing::sample(g, [](double x) { return std::sin(x); });
    const auto row = tracker.observe(t, f);
    CHECK(row.lip * row.inv_lip == doctest::Approx(1.0));
    CHECK(row.cum_integral >= prev_I);
    prev_I = row.cum_integral;
  }
  // lip = 1 + t is linear, so the trapezoid rule is exact: I(1) = 1.5.
  CHECK(prev_I == doctest::Approx(1.5).epsilon(1e-13));
}
