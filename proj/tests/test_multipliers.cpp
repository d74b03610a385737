#include <doctest.h>

#include <cmath>
#include <random>

#include "arteria/errors.hpp"
#include "arteria/multipliers.hpp"
#include "test_common.hpp"

using namespace arteria;

namespace {

ModelParams params_with(double kappa, double nu) {
  ModelParams p;
  p.kappa = kappa;
  p.nu = nu;
  return p;
}

// ||f||_{H^r}^2 = 2 pi sum (1 + k^2)^r |fhat|^2
double hr_norm(const SpectralField& f, double r) {
  const int n = f.grid().size();
  double sum = 0.0;
  for (int k = 0; k <= f.grid().max_wavenumber(); ++k) {
    sum += mode_weight(k, n) * std::pow(1.0 + double(k) * k, r) * std::norm(f[k]);
  }
  return std::sqrt(2.0 * testing::kPi * sum);
}

}  // namespace

TEST_CASE("build_table frozen values at kappa = nu = 1") {
  const auto t = build_table(ModelParams{}, GridSpec(16));
  CHECK(t.a[0] == 1.0);
  CHECK(t.p[0] == 1.0);
  CHECK(t.m[0] == Complex(1.0, 0.0));
  CHECK(t.s[0] == Complex(0.0, 0.0));
  CHECK(t.a[1] == doctest::Approx(1.5));
  CHECK(t.p[1] == doctest::Approx(2.0 / 3.0));
  CHECK(std::abs(t.m[1] - Complex(0.36, 0.48)) < 1e-15);
  CHECK(std::norm(t.m[1] - 1.0) == doctest::Approx(0.64).epsilon(1e-15));
  CHECK(std::norm(t.s[1]) == doctest::Approx(4.0 / 6.25).epsilon(1e-15));
  CHECK(t.lambda_s[2] == doctest::Approx(8.0));
}

TEST_CASE("build_table invariants") {
  for (auto [kappa, nu] : {std::pair{1.0, 1.0}, {1.0, 0.1}, {3.0, 2.0}, {0.5, 0.0}}) {
    const auto params = params_with(kappa, nu);
    const GridSpec g(256);
    const auto t = build_table(params, g);
    double sup = 0.0;
    for (int k = 0; k <= g.max_wavenumber(); ++k) {
      const double kk = k;
      CHECK(t.a[k] >= kappa);
      CHECK(t.p[k] * t.a[k] == doctest::Approx(1.0));
      const double expected = 4 * kk * kk / (t.a[k] * t.a[k] + 4 * kk * kk);
      CHECK(std::abs(std::norm(t.m[k] - 1.0) - expected) <= 1e-13);
      sup = std::max(sup, (1 + kk * kk) * std::norm(t.m[k] - 1.0));
      if (nu == 0.0) {
        CHECK(t.p[k] == 1.0 / kappa);
        const Complex remark = (1.0 + Complex(0, 2 * kk / kappa)) / (1.0 + 4 * kk * kk / (kappa * kappa));
        CHECK(std::abs(t.m[k] - remark) < 1e-15);
      }
    }
    if (nu > 0.0) CHECK(sup <= std::max(8 / (kappa * kappa), 32 / (nu * nu)));
  }
}

TEST_CASE("build_table rejects invalid parameters") {
  CHECK_THROWS_AS(build_table(params_with(0.0, 1.0), GridSpec(16)), ParameterError);
  CHECK_THROWS_AS(build_table(params_with(-1.0, 1.0), GridSpec(16)), ParameterError);
  CHECK_THROWS_AS(build_table(params_with(1.0, -0.5), GridSpec(16)), ParameterError);
  ModelParams bad_eps;
  bad_eps.eps = 0.0;
  CHECK_THROWS_AS(build_table(bad_eps, GridSpec(16)), ParameterError);
  try {
    build_table(params_with(0.0, 1.0), GridSpec(16));
  } catch (const ParameterError& e) {
    CHECK(std::string(e.what()).find("kappa") != std::string::npos);
  }
}

TEST_CASE("apply_p") {
  const GridSpec g(32);
  const auto t = build_table(params_with(2.0, 1.0), g);
  SpectralField c(g);
  c[0] = 3.0;
  CHECK(apply_p(t, c)[0].real() == doctest::Approx(1.5));

  const auto t1 = build_table(ModelParams{}, g);
  const auto cosx = testing::sample(g, [](double x) { return std::cos(x); });
  CHECK(testing::max_coeff_diff(apply_p(t1, cosx), (2.0 / 3.0) * cosx) < 1e-16);

  std::mt19937_64 rng(7);
  const auto f = testing::random_field(g, 15, rng, true);
  auto back = apply_symbol(apply_p(t, f), std::span<const double>(t.a));
  CHECK(testing::max_coeff_diff(back, f) <= 1e-12);
}

TEST_CASE("apply_m and apply_s") {
  const GridSpec g(64);
  const auto t = build_table(ModelParams{}, g);
  SpectralField c(g);
  c[0] = 2.0;
  CHECK(apply_m(t, c)[0] == Complex(2.0, 0.0));
  CHECK(apply_s(t, c)[0] == Complex(0.0, 0.0));

  SpectralField one(g);
  one[1] = Complex(0.25, -0.5);
  CHECK(std::abs(apply_m(t, one)[1] - Complex(0.36, 0.48) * Complex(0.25, -0.5)) < 1e-15);

  std::mt19937_64 rng(8);
  const auto f = testing::random_field(g, 31, rng, true);
  // M = Id + S; equality is up to one rounding of the symbol subtraction.
  CHECK(testing::max_coeff_diff(apply_m(t, f), f + apply_s(t, f)) <= 1e-15 * testing::max_coeff(f));
}

TEST_CASE("S is smoothing of degree -1") {
  std::mt19937_64 rng(9);
  const GridSpec g(256);
  for (auto [kappa, nu] : {std::pair{1.0, 1.0}, {1.0, 0.1}, {3.0, 2.0}}) {
    const auto t = build_table(params_with(kappa, nu), g);
    const double c = std::max(std::sqrt(8.0) / kappa, std::sqrt(32.0) / nu);
    for (double s : {0.0, 1.0, 2.5}) {
      const auto f = testing::random_field(g, 127, rng, true);
      CHECK(hr_norm(apply_s(t, f), s + 1) <= c * hr_norm(f, s));
    }
  }
}

TEST_CASE("apply_mollifier") {
  const GridSpec g(64);
  std::mt19937_64 rng(10);
  const auto f = testing::random_field(g, 31, rng, true);
  CHECK(testing::max_coeff_diff(apply_mollifier(f, 0.0), f) == 0.0);
  const auto c2 = testing::sample(g, [](double x) { return std::cos(2 * x); });
  CHECK(testing::max_coeff_diff(apply_mollifier(c2, 0.25), std::exp(-1.0) * c2) < 1e-16);
  for (double eps : {1e-4, 1e-2, 0.3}) {
    for (double r : {0.0, 1.0, 3.0}) CHECK(hr_norm(apply_mollifier(f, eps), r) <= hr_norm(f, r));
  }
  CHECK_THROWS_AS(apply_mollifier(f, -1e-3), ParameterError);
}

TEST_CASE("apply_lambda_s") {
  const GridSpec g(64);
  SpectralField c(g);
  c[0] = 5.0;
  const auto t2 = build_table(ModelParams{}, g, 2.0);
  CHECK(max_abs_physical(apply_lambda_s(t2, c)) == 0.0);
  const auto c2 = testing::sample(g, [](double x) { return std::cos(2 * x); });
  CHECK(testing::max_coeff_diff(apply_lambda_s(t2, c2), 4.0 * c2) < 1e-12);

  const auto t1 = build_table(ModelParams{}, g, 1.0);
  std::mt19937_64 rng(11);
  const auto f = testing::random_field(g, 31, rng);
  const double lhs = l2_norm(apply_lambda_s(t1, f));
  const double rhs = l2_norm(differentiate(f, 1));
  CHECK(std::abs(lhs - rhs) <= 1e-12 * rhs);
}

TEST_CASE("apply_inv_dx") {
  const GridSpec g(64);
  const auto cosx = testing::sample(g, [](double x) { return std::cos(x); });
  const auto sinx = testing::sample(g, [](double x) { return std::sin(x); });
  CHECK(testing::max_coeff_diff(apply_inv_dx(cosx), sinx) < 1e-16);
  SpectralField c(g);
  c[0] = 1.0;
  CHECK(testing::max_coeff(apply_inv_dx(c)) == 0.0);

  std::mt19937_64 rng(12);
  const auto f = testing::random_field(g, 31, rng, true);
  SpectralField centred = f;
  centred[0] = 0.0;
  CHECK(testing::max_coeff_diff(differentiate(apply_inv_dx(f), 1), centred) <= 1e-12);
  CHECK(apply_inv_dx(f)[0] == Complex(0.0, 0.0));
}

TEST_CASE("helmholtz identity") {
  const GridSpec g(256);
  const auto t = build_table(ModelParams{}, g);
  std::mt19937_64 rng(13);
  CHECK(check_helmholtz_identity(t, testing::random_field(g, 127, rng, true)) <= 1e-12);
  for (int k : {1, 7, 64, 127}) {
    SpectralField single(g);
    single[k] = 1.0;
    CHECK(check_helmholtz_identity(t, single) <= 1e-14);
  }
  const auto t0 = build_table(params_with(1.0, 0.0), g);
  CHECK_THROWS_AS(check_helmholtz_identity(t0, testing::random_field(g, 10, rng)), ParameterError);
}

TEST_CASE("operators commute and P, Lambda^s are self-adjoint") {
  const GridSpec g(128);
  const auto t = build_table(params_with(3.0, 2.0), g);
  std::mt19937_64 rng(14);
  const auto f = testing::random_field(g, 63, rng, true);
  const auto h = testing::random_field(g, 63, rng, true);
  // Diagonal operators commute up to the order of two roundings.
  const auto pm = apply_p(t, apply_m(t, f));
  CHECK(testing::max_coeff_diff(pm, apply_m(t, apply_p(t, f))) <= 4e-16 * testing::max_coeff(pm));
  const auto sl = apply_s(t, apply_lambda_s(t, f));
  CHECK(testing::max_coeff_diff(sl, apply_lambda_s(t, apply_s(t, f))) <=
        4e-16 * testing::max_coeff(sl));

  const double a = inner_product(apply_p(t, f), h), b = inner_product(f, apply_p(t, h));
  CHECK(std::abs(a - b) <= 1e-12 * std::abs(a));
  const double c = inner_product(apply_lambda_s(t, f), h), d = inner_product(f, apply_lambda_s(t, h));
  CHECK(std::abs(c - d) <= 1e-12 * std::abs(c));
}

TEST_CASE("apply_* reject a table from another grid") {
  const auto t = build_table(ModelParams{}, GridSpec(32));
  SpectralField f(GridSpec(64));
  CHECK_THROWS_AS(apply_p(t, f), ShapeError);
  CHECK_THROWS_AS(apply_m(t, f), ShapeError);
}
