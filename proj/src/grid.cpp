#include "arteria/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "arteria/errors.hpp"

namespace arteria {

namespace detail {

// fftw planner calls are not thread-safe; execution with the new-array
// interface is. All plan creation and destruction goes through this mutex.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftPlans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;

  explicit FftPlans(int n) {
    std::vector<double> real(static_cast<std::size_t>(n));
    std::vector<Complex> spec(static_cast<std::size_t>(n / 2 + 1));
    auto* cplx = reinterpret_cast<fftw_complex*>(spec.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    std::lock_guard lock(planner_mutex());
    r2c = fftw_plan_dft_r2c_1d(n, real.data(), cplx, flags);
    c2r = fftw_plan_dft_c2r_1d(n, cplx, real.data(), flags | FFTW_PRESERVE_INPUT);
  }
  ~FftPlans() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(r2c);
    fftw_destroy_plan(c2r);
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;
};

namespace {

std::shared_ptr<const FftPlans> plans_for(int n) {
  static std::mutex cache_mutex;
  static std::map<int, std::weak_ptr<const FftPlans>> cache;
  std::lock_guard lock(cache_mutex);
  if (auto existing = cache[n].lock()) return existing;
  auto created = std::make_shared<const FftPlans>(n);
  cache[n] = created;
  return created;
}

}  // namespace
}  // namespace detail

GridSpec::GridSpec(int n_points) : n_(n_points) {
  if (n_points < 8 || n_points % 2 != 0) {
    throw ConfigError("grid size must be an even integer >= 8, got " + std::to_string(n_points));
  }
  plans_ = detail::plans_for(n_points);
}

double GridSpec::spacing() const { return 2.0 * std::numbers::pi / n_; }

double GridSpec::node(int j) const { return 2.0 * std::numbers::pi * j / n_; }

std::vector<double> GridSpec::nodes() const {
  std::vector<double> x(static_cast<std::size_t>(n_));
  for (int j = 0; j < n_; ++j) x[static_cast<std::size_t>(j)] = node(j);
  return x;
}

void GridSpec::forward(std::span<const double> values, std::span<Complex> out) const {
  if (values.size() != static_cast<std::size_t>(n_) ||
      out.size() != static_cast<std::size_t>(spectral_size())) {
    throw ShapeError("forward transform: length mismatch with grid of size " + std::to_string(n_));
  }
  fftw_execute_dft_r2c(plans_->r2c, const_cast<double*>(values.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void GridSpec::inverse(std::span<const Complex> coeffs, std::span<double> out) const {
  if (coeffs.size() != static_cast<std::size_t>(spectral_size()) ||
      out.size() != static_cast<std::size_t>(n_)) {
    throw ShapeError("inverse transform: length mismatch with grid of size " + std::to_string(n_));
  }
  // PRESERVE_INPUT plan: the input buffer is not written.
  fftw_execute_dft_c2r(plans_->c2r,
                       reinterpret_cast<fftw_complex*>(const_cast<Complex*>(coeffs.data())),
                       out.data());
}

GridSpec make_grid(int n_points) { return GridSpec(n_points); }

SpectralField::SpectralField(GridSpec grid)
    : grid_(std::move(grid)), coeffs_(static_cast<std::size_t>(grid_.spectral_size())) {}

SpectralField::SpectralField(GridSpec grid, std::vector<Complex> coeffs)
    : grid_(std::move(grid)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != static_cast<std::size_t>(grid_.spectral_size())) {
    throw ShapeError("spectral field needs " + std::to_string(grid_.spectral_size()) +
                     " coefficients, got " + std::to_string(coeffs_.size()));
  }
}

Complex SpectralField::mode(int k) const {
  const int kmax = grid_.max_wavenumber();
  if (k < -kmax || k > kmax) return {0.0, 0.0};
  return k >= 0 ? coeffs_[static_cast<std::size_t>(k)] : std::conj(coeffs_[static_cast<std::size_t>(-k)]);
}

bool SpectralField::is_finite() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Complex& c) {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
  });
}

void SpectralField::require_same_grid(const SpectralField& other) const {
  if (!(grid_ == other.grid_)) {
    throw ShapeError("fields live on different grids (" + std::to_string(grid_.size()) + " vs " +
                     std::to_string(other.grid_.size()) + ")");
  }
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double scale) {
  for (auto& c : coeffs_) c *= scale;
  return *this;
}

void SpectralField::axpy(double alpha, const SpectralField& x) {
  require_same_grid(x);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += alpha * x.coeffs_[i];
}

SpectralField to_spectral(const GridSpec& grid, std::span<const double> values) {
  SpectralField field(grid);
  grid.forward(values, field.coeffs());
  const double inv_n = 1.0 / grid.size();
  for (auto& c : field.coeffs()) c *= inv_n;
  return field;
}

std::vector<double> to_physical(const SpectralField& field) {
  std::vector<double> values(static_cast<std::size_t>(field.grid().size()));
  field.grid().inverse(field.coeffs(), values);
  return values;
}

SpectralField differentiate(const SpectralField& field, int order) {
  if (order < 1 || order > 3) {
    throw ConfigError("differentiate: order must be 1, 2 or 3, got " + std::to_string(order));
  }
  const int kmax = field.grid().max_wavenumber();
  SpectralField out(field.grid());
  for (int k = 0; k <= kmax; ++k) {
    const Complex ik(0.0, static_cast<double>(k));
    Complex factor = ik;
    for (int i = 1; i < order; ++i) factor *= ik;
    if (k == kmax) factor = factor.real();
    out[k] = factor * field[k];
  }
  return out;
}

int dealias_cutoff(const GridSpec& grid, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ConfigError("dealias fraction must lie in (0, 1]");
  }
  return static_cast<int>(std::floor(fraction * grid.max_wavenumber() + 1e-9));
}

SpectralField dealias(const SpectralField& field, double fraction) {
  const int cutoff = dealias_cutoff(field.grid(), fraction);
  SpectralField out = field;
  for (int k = cutoff + 1; k <= field.grid().max_wavenumber(); ++k) out[k] = 0.0;
  return out;
}

SpectralField apply_symbol(const SpectralField& field, std::span<const Complex> symbol) {
  const int kmax = field.grid().max_wavenumber();
  if (symbol.size() != static_cast<std::size_t>(kmax + 1)) {
    throw ShapeError("symbol length does not match the grid");
  }
  SpectralField out(field.grid());
  for (int k = 0; k < kmax; ++k) out[k] = symbol[static_cast<std::size_t>(k)] * field[k];
  out[kmax] = symbol[static_cast<std::size_t>(kmax)].real() * field[kmax];
  return out;
}

SpectralField apply_symbol(const SpectralField& field, std::span<const double> symbol) {
  const int kmax = field.grid().max_wavenumber();
  if (symbol.size() != static_cast<std::size_t>(kmax + 1)) {
    throw ShapeError("symbol length does not match the grid");
  }
  SpectralField out(field.grid());
  for (int k = 0; k <= kmax; ++k) out[k] = symbol[static_cast<std::size_t>(k)] * field[k];
  return out;
}

double inner_product(const SpectralField& f, const SpectralField& g) {
  if (!(f.grid() == g.grid())) throw ShapeError("inner_product: grid mismatch");
  const int n = f.grid().size();
  double sum = 0.0;
  for (int k = 0; k <= f.grid().max_wavenumber(); ++k) {
    sum += mode_weight(k, n) * (f[k] * std::conj(g[k])).real();
  }
  return 2.0 * std::numbers::pi * sum;
}

double l2_norm_squared(const SpectralField& f) { return inner_product(f, f); }

double l2_norm(const SpectralField& f) { return std::sqrt(l2_norm_squared(f)); }

double max_abs_physical(const SpectralField& f) {
  const auto values = to_physical(f);
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace arteria
