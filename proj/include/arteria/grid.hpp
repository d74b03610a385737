#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace arteria {

using Complex = std::complex<double>;

namespace detail {
struct FftPlans;
}

/// Uniform periodic grid on [0, 2pi) with n_points nodes x_j = 2 pi j / n.
///
/// Real fields are stored in the half spectrum k = 0..n/2. The remaining
/// wavenumbers -n/2+1..-1 follow from conjugate symmetry. GridSpec is an
/// immutable value; copies share the same FFT plans.
class GridSpec {
 public:
  explicit GridSpec(int n_points);

  int size() const { return n_; }
  int max_wavenumber() const { return n_ / 2; }
  int spectral_size() const { return n_ / 2 + 1; }
  double spacing() const;
  double node(int j) const;
  std::vector<double> nodes() const;

  /// Unnormalised forward transform: out[k] = sum_j values[j] e^{-2 pi i jk/n}.
  void forward(std::span<const double> values, std::span<Complex> out) const;
  /// Inverse transform of a half spectrum: out[j] = sum_k c[k] e^{2 pi i jk/n}.
  void inverse(std::span<const Complex> coeffs, std::span<double> out) const;

  friend bool operator==(const GridSpec& a, const GridSpec& b) { return a.n_ == b.n_; }

 private:
  int n_;
  std::shared_ptr<const detail::FftPlans> plans_;
};

GridSpec make_grid(int n_points);

/// Real periodic field held as Fourier coefficients of
///   f(x) = sum_{k in Z} fhat(k) e^{ikx},
/// so fhat(0) is the spatial mean and the L2 norm over [0, 2pi) is
/// 2 pi sum_k |fhat(k)|^2. Only k = 0..n/2 is stored; the Nyquist
/// coefficient is kept real.
class SpectralField {
 public:
  explicit SpectralField(GridSpec grid);
  SpectralField(GridSpec grid, std::vector<Complex> coeffs);

  const GridSpec& grid() const { return grid_; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  std::span<Complex> coeffs() { return coeffs_; }
  Complex& operator[](int k) { return coeffs_[static_cast<std::size_t>(k)]; }
  const Complex& operator[](int k) const { return coeffs_[static_cast<std::size_t>(k)]; }

  /// Coefficient for any k in [-n/2, n/2], using conjugate symmetry for k < 0.
  Complex mode(int k) const;
  double mean() const { return coeffs_[0].real(); }
  bool is_finite() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double scale);
  /// this += alpha * x
  void axpy(double alpha, const SpectralField& x);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

 private:
  void require_same_grid(const SpectralField& other) const;

  GridSpec grid_;
  std::vector<Complex> coeffs_;
};

SpectralField to_spectral(const GridSpec& grid, std::span<const double> values);
std::vector<double> to_physical(const SpectralField& field);

/// Multiplies coefficient k by (ik)^order, order in {1, 2, 3}.
SpectralField differentiate(const SpectralField& field, int order);

/// Zeroes every mode with |k| > fraction * (n/2).
SpectralField dealias(const SpectralField& field, double fraction);
/// Largest wavenumber retained by dealias() for this grid and fraction.
int dealias_cutoff(const GridSpec& grid, double fraction);

/// Applies a per-wavenumber symbol. The Nyquist coefficient is multiplied by
/// the real part of its symbol so the result stays real.
SpectralField apply_symbol(const SpectralField& field, std::span<const Complex> symbol);
SpectralField apply_symbol(const SpectralField& field, std::span<const double> symbol);

/// Multiplicity of half-spectrum index k in the full spectrum (1 or 2).
inline double mode_weight(int k, int n) { return (k == 0 || 2 * k == n) ? 1.0 : 2.0; }

/// <f, g>_{L2} = integral over [0, 2pi) of f g.
double inner_product(const SpectralField& f, const SpectralField& g);
/// ||f||_{L2}^2 over [0, 2pi).
double l2_norm_squared(const SpectralField& f);
double l2_norm(const SpectralField& f);
/// Largest |f(x_j)| over grid nodes.
double max_abs_physical(const SpectralField& f);

}  // namespace arteria
