#include "arteria/oracle.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "arteria/errors.hpp"

namespace arteria {

Complex linear_rate(const ModelParams& params, int k) {
  params.validate();
  const double kk = static_cast<double>(k);
  const double a = params.kappa + 0.5 * params.nu * kk * kk;
  const double p = 1.0 / a;
  const Complex m = (1.0 / (1.0 + 4.0 * kk * kk / (a * a))) * Complex(1.0, 2.0 * kk / a);
  const Complex bracket((1.0 - 0.5 * params.beta) * kk * kk,
                        params.kappa * kk + 0.5 * params.nu * kk * kk * kk);
  return m * p * bracket / params.eps;
}

SpectralField evolve_linear(const SpectralField& f0, const ModelParams& params, double t) {
  if (t < 0.0) throw ConfigError("evolve_linear: t must be >= 0");
  SpectralField out = f0;
  const int kmax = f0.grid().max_wavenumber();
  for (int k = 1; k <= kmax; ++k) {
    const Complex growth = std::exp(linear_rate(params, k) * t);
    out[k] = k == kmax ? growth.real() * f0[k] : growth * f0[k];
  }
  return out;
}

namespace {

// Full-spectrum coefficients for k = -K..K stored at index k + K.
struct Modes {
  int K;
  std::vector<Complex> c;
  Complex at(int k) const { return (k < -K || k > K) ? Complex(0.0) : c[static_cast<std::size_t>(k + K)]; }
};

Modes derivative(const Modes& u, int order) {
  Modes out{u.K, u.c};
  for (int k = -u.K; k <= u.K; ++k) {
    Complex factor(1.0, 0.0);
    for (int i = 0; i < order; ++i) factor *= Complex(0.0, static_cast<double>(k));
    out.c[static_cast<std::size_t>(k + u.K)] *= factor;
  }
  return out;
}

// (u v)^(k) = sum_{k1 + k2 = k} u(k1) v(k2), for k = 0..kmax.
std::vector<Complex> convolve(const Modes& u, const Modes& v, int kmax) {
  std::vector<Complex> out(static_cast<std::size_t>(kmax + 1));
  for (int k = 0; k <= kmax; ++k) {
    Complex sum(0.0);
    for (int k1 = -u.K; k1 <= u.K; ++k1) sum += u.at(k1) * v.at(k - k1);
    out[static_cast<std::size_t>(k)] = sum;
  }
  return out;
}

}  // namespace

SpectralField rhs_convolution(const ModelParams& params, const SpectralField& f,
                              RhsVariant variant) {
  params.validate();
  variant.validate(params);
  const int n = f.grid().size();
  if (n > kConvolutionOracleMaxN) {
    throw ConfigError("convolution oracle is limited to n <= " +
                      std::to_string(kConvolutionOracleMaxN) + ", got " + std::to_string(n));
  }
  const int kmax = n / 2;
  const double moll_eps = variant.kind == RhsKind::mollified ? variant.mollify_eps : 0.0;
  auto mollifier = [&](int k) { return std::exp(-moll_eps * static_cast<double>(k) * k); };

  // Modes strictly below Nyquist, mollified.
  const int K = kmax - 1;
  Modes g{K, std::vector<Complex>(static_cast<std::size_t>(2 * K + 1))};
  for (int k = -K; k <= K; ++k) g.c[static_cast<std::size_t>(k + K)] = mollifier(k) * f.mode(k);

  const Modes gx = derivative(g, 1);
  const Modes gxx = derivative(g, 2);
  const Modes gxxx = derivative(g, 3);
  const auto ffx = convolve(g, gx, kmax);
  const auto fxfxx = convolve(gx, gxx, kmax);
  const auto ffxxx = convolve(g, gxxx, kmax);

  const double nu = params.nu, eps = params.eps, kappa = params.kappa, beta = params.beta;
  SpectralField out(f.grid());
  for (int k = 1; k <= kmax; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    const double kk = static_cast<double>(k);
    const double a = kappa + 0.5 * nu * kk * kk;
    const Complex mp = Complex(a, 2.0 * kk) / (a * a + 4.0 * kk * kk);
    const Complex f_x = Complex(0.0, kk) * g.at(k);
    const Complex f_xx = -kk * kk * g.at(k);
    const Complex f_xxx = Complex(0.0, -kk * kk * kk) * g.at(k);
    const Complex bracket = -(1.0 / eps) * (1.0 - beta / 2.0) * f_xx + (kappa / eps) * f_x -
                            (nu / (2.0 * eps)) * f_xxx +
                            (2.0 + beta / 4.0) * Complex(0.0, kk) * ffx[idx] +
                            (nu / (4.0 * eps)) * fxfxx[idx] - (nu / 4.0) * ffxxx[idx] -
                            2.0 * kappa * ffx[idx];
    out[k] = mollifier(k) * mp * bracket;
  }
  out[kmax] = out[kmax].real();
  return out;
}

}  // namespace arteria
