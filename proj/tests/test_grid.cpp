#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "arteria/errors.hpp"
#include "arteria/grid.hpp"
#include "test_common.hpp"

using namespace arteria;
using testing::kPi;

TEST_CASE("make_grid builds uniform nodes") {
  const GridSpec g = make_grid(8);
  CHECK(g.size() == 8);
  CHECK(g.max_wavenumber() == 4);
  CHECK(g.spacing() == doctest::Approx(kPi / 4).epsilon(1e-15));
  for (int j = 0; j < 8; ++j) CHECK(g.node(j) == doctest::Approx(j * kPi / 4).epsilon(1e-15));

  const GridSpec big = make_grid(1 << 14);
  CHECK(big.size() == 16384);
  CHECK(big.max_wavenumber() == 8192);
  CHECK(big.nodes().size() == 16384);
}

TEST_CASE("make_grid rejects odd or small sizes") {
  CHECK_THROWS_AS(make_grid(7), ConfigError);
  CHECK_THROWS_AS(make_grid(6), ConfigError);
  CHECK_THROWS_AS(make_grid(0), ConfigError);
  CHECK_NOTHROW(make_grid(10));
}

TEST_CASE("transforms: constant and single harmonic") {
  const GridSpec g(16);
  const auto c = testing::sample(g, [](double) { return 2.5; });
  CHECK(c[0].real() == doctest::Approx(2.5));
  CHECK(testing::max_coeff_diff(c, [&] { SpectralField z(g); z[0] = 2.5; return z; }()) < 1e-15);

  const auto f = testing::sample(g, [](double x) { return std::cos(3 * x); });
  for (int k = 0; k <= 8; ++k) {
    if (k == 3) {
      CHECK(std::abs(f[k] - Complex(0.5, 0.0)) < 1e-15);
    } else {
      CHECK(std::abs(f[k]) < 1e-15);
    }
  }
  CHECK(std::abs(f.mode(-3) - Complex(0.5, 0.0)) < 1e-15);
}

TEST_CASE("transform round trip and length checks") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int n : {8, 64, 256, 1024}) {
    const GridSpec g(n);
    std::vector<double> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = u(rng);
    const auto back = to_physical(to_spectral(g, v));
    double err = 0.0, scale = 0.0;
    for (int j = 0; j < n; ++j) {
      err = std::max(err, std::abs(back[j] - v[j]));
      scale = std::max(scale, std::abs(v[j]));
    }
    CHECK(err / scale < 1e-12);
  }
  const GridSpec g(16);
  std::vector<double> wrong(15, 0.0);
  CHECK_THROWS_AS(to_spectral(g, wrong), ShapeError);
}

TEST_CASE("transforms are linear") {
  std::mt19937_64 rng(2);
  const GridSpec g(64);
  const auto f = testing::random_field(g, 20, rng, true);
  const auto h = testing::random_field(g, 20, rng, true);
  const auto pf = to_physical(f), ph = to_physical(h), psum = to_physical(2.0 * f + (-3.0) * h);
  for (int j = 0; j < 64; ++j) CHECK(psum[j] == doctest::Approx(2 * pf[j] - 3 * ph[j]).epsilon(1e-12));
}

TEST_CASE("parseval under f = sum fhat e^{ikx}") {
  std::mt19937_64 rng(3);
  for (int n : {16, 128}) {
    const GridSpec g(n);
    auto f = testing::random_field(g, n / 2 - 1, rng, true);
    f[n / 2] = 0.7;  // real Nyquist mode
    const auto v = to_physical(f);
    double quad = 0.0;
    for (double x : v) quad += x * x;
    quad *= g.spacing();
    CHECK(std::abs(l2_norm_squared(f) - quad) / quad < 1e-12);
  }
}

TEST_CASE("differentiate matches calculus") {
  const GridSpec g(32);
  const auto s = testing::sample(g, [](double x) { return std::sin(x); });
  const auto c = testing::sample(g, [](double x) { return std::cos(x); });
  CHECK(testing::max_coeff_diff(differentiate(s, 1), c) < 1e-15);

  const auto c2 = testing::sample(g, [](double x) { return std::cos(2 * x); });
  CHECK(testing::max_coeff_diff(differentiate(c2, 2), -4.0 * c2) < 1e-12);

  const auto d3 = differentiate(s, 3);
  // roundoff in the high modes is amplified by k^3
  CHECK(testing::max_coeff_diff(d3, -1.0 * c) < 1e-12);
  CHECK(differentiate(testing::sample(g, [](double x) { return 3 + std::sin(x); }), 1)[0] ==
        Complex(0.0, 0.0));

  CHECK_THROWS_AS(differentiate(s, 0), ConfigError);
  CHECK_THROWS_AS(differentiate(s, 4), ConfigError);
}

TEST_CASE("differentiate against centered finite differences on sech^2") {
  const int n = 1024;
  const GridSpec g(n);
  // sech^2(x - pi) itself has a derivative jump of about 0.03 across x = 0;
  // the narrower pulse is periodic-smooth to 1e-10.
  const auto f = testing::sample(g, [](double x) { return testing::sech2(4 * (x - kPi)); });
  const auto fx = to_physical(differentiate(f, 1));
  const auto v = to_physical(f);
  const double h = g.spacing();
  double err = 0.0, scale = 0.0;
  for (int j = 0; j < n; ++j) {
    // fourth-order centered stencil
    auto at = [&](int i) { return v[static_cast<std::size_t>((i + n) % n)]; };
    const double fd = (-at(j + 2) + 8 * at(j + 1) - 8 * at(j - 1) + at(j - 2)) / (12 * h);
    err = std::max(err, std::abs(fd - fx[j]));
    scale = std::max(scale, std::abs(fx[j]));
  }
  CHECK(err / scale < 1e-6);
}

TEST_CASE("differentiate is linear") {
  std::mt19937_64 rng(4);
  const GridSpec g(64);
  const auto f = testing::random_field(g, 30, rng, true);
  const auto h = testing::random_field(g, 30, rng, true);
  for (int order = 1; order <= 3; ++order) {
    const auto lhs = differentiate(0.5 * f + 2.0 * h, order);
    const auto rhs = 0.5 * differentiate(f, order) + 2.0 * differentiate(h, order);
    CHECK(testing::max_coeff_diff(lhs, rhs) <= 1e-12 * testing::max_coeff(lhs));
  }
}

TEST_CASE("dealias cutoff and projection") {
  std::mt19937_64 rng(5);
  const GridSpec g(64);
  CHECK(dealias_cutoff(g, 2.0 / 3.0) == 21);
  CHECK(dealias_cutoff(GridSpec(32), 2.0 / 3.0) == 10);
  auto f = testing::random_field(g, 31, rng, true);
  f[32] = 1.0;
  CHECK(testing::max_coeff_diff(dealias(f, 1.0), f) == 0.0);

  const auto d = dealias(f, 2.0 / 3.0);
  for (int k = 22; k <= 32; ++k) CHECK(d[k] == Complex(0.0, 0.0));
  for (int k = 0; k <= 21; ++k) CHECK(d[k] == f[k]);
  CHECK(testing::max_coeff_diff(dealias(d, 2.0 / 3.0), d) == 0.0);

  CHECK_THROWS_AS(dealias(f, 0.0), ConfigError);
  CHECK_THROWS_AS(dealias(f, 1.5), ConfigError);
}

TEST_CASE("dealiased product matches zero-padded exact product") {
  std::mt19937_64 rng(6);
  const int n = 64;
  const GridSpec g(n);
  const GridSpec padded(2 * n);
  const double frac = 2.0 / 3.0;
  const int cut = dealias_cutoff(g, frac);
  const auto u = dealias(testing::random_field(g, cut, rng, true), frac);
  const auto w = dealias(testing::random_field(g, cut, rng, true), frac);

  auto product = [](const GridSpec& grid, const SpectralField& a, const SpectralField& b) {
    SpectralField ap(grid), bp(grid);
    for (int k = 0; k < a.grid().max_wavenumber(); ++k) {
      ap[k] = a[k];
      bp[k] = b[k];
    }
    const auto pa = to_physical(ap), pb = to_physical(bp);
    std::vector<double> prod(pa.size());
    for (std::size_t j = 0; j < pa.size(); ++j) prod[j] = pa[j] * pb[j];
    return to_spectral(grid, prod);
  };

  const auto exact = product(padded, u, w);
  const auto aliased = dealias(product(g, u, w), frac);
  for (int k = 0; k <= cut; ++k) CHECK(std::abs(aliased[k] - exact[k]) < 1e-13);
}

TEST_CASE("fields on different grids do not mix") {
  SpectralField a(GridSpec(16)), b(GridSpec(32));
  CHECK_THROWS_AS(a += b, ShapeError);
  CHECK_THROWS_AS(inner_product(a, b), ShapeError);
}

TEST_CASE("max_abs_physical and mode access") {
  const GridSpec g(32);
  const auto f = testing::sample(g, [](double x) { return 1 + 2 * std::sin(3 * x); });
  CHECK(f.mean() == doctest::Approx(1.0));
  CHECK(max_abs_physical(f) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::abs(f.mode(-3) - std::conj(f[3])) == 0.0);
  CHECK(f.is_finite());
}
