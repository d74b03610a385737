#include "arteria/multipliers.hpp"

#include <cmath>
#include <string>

#include "arteria/errors.hpp"

namespace arteria {

void ModelParams::validate() const {
  if (!std::isfinite(kappa) || kappa <= 0.0) {
    throw ParameterError("kappa must be > 0; the frictionless limit kappa = 0 is not supported");
  }
  if (!std::isfinite(nu) || nu < 0.0) throw ParameterError("nu must be >= 0");
  if (!std::isfinite(eps) || eps <= 0.0) throw ParameterError("eps must be > 0");
  if (!std::isfinite(beta)) throw ParameterError("beta must be finite");
}

MultiplierTable build_table(const ModelParams& params, const GridSpec& grid, double sobolev_index) {
  params.validate();
  if (!(sobolev_index > 0.0) || !std::isfinite(sobolev_index)) {
    throw ParameterError("sobolev index must be > 0");
  }
  const auto size = static_cast<std::size_t>(grid.spectral_size());
  MultiplierTable table{grid, params, sobolev_index, {}, {}, {}, {}, {}};
  table.a.resize(size);
  table.p.resize(size);
  table.m.resize(size);
  table.s.resize(size);
  table.lambda_s.resize(size);
  for (std::size_t i = 0; i < size; ++i) {
    const double k = static_cast<double>(i);
    const double a = params.kappa + 0.5 * params.nu * k * k;
    table.a[i] = a;
    table.p[i] = 1.0 / a;
    table.m[i] = (1.0 / (1.0 + 4.0 * k * k / (a * a))) * Complex(1.0, 2.0 * k / a);
    table.s[i] = table.m[i] - 1.0;
    table.lambda_s[i] = i == 0 ? 0.0 : std::pow(k, sobolev_index);
  }
  return table;
}

namespace {

void require_grid(const MultiplierTable& table, const SpectralField& field) {
  if (!(table.grid == field.grid())) {
    throw ShapeError("multiplier table built for n=" + std::to_string(table.grid.size()) +
                     " applied to field with n=" + std::to_string(field.grid().size()));
  }
}

}  // namespace

SpectralField apply_p(const MultiplierTable& table, const SpectralField& field) {
  require_grid(table, field);
  return apply_symbol(field, std::span<const double>(table.p));
}

SpectralField apply_m(const MultiplierTable& table, const SpectralField& field) {
  require_grid(table, field);
  return apply_symbol(field, std::span<const Complex>(table.m));
}

SpectralField apply_s(const MultiplierTable& table, const SpectralField& field) {
  require_grid(table, field);
  return apply_symbol(field, std::span<const Complex>(table.s));
}

SpectralField apply_lambda_s(const MultiplierTable& table, const SpectralField& field) {
  require_grid(table, field);
  return apply_symbol(field, std::span<const double>(table.lambda_s));
}

SpectralField apply_mollifier(const SpectralField& field, double epsilon) {
  if (!(epsilon >= 0.0)) throw ParameterError("mollifier epsilon must be >= 0");
  SpectralField out = field;
  if (epsilon == 0.0) return out;
  for (int k = 1; k <= field.grid().max_wavenumber(); ++k) {
    out[k] *= std::exp(-epsilon * static_cast<double>(k) * k);
  }
  return out;
}

SpectralField apply_inv_dx(const SpectralField& field) {
  const int kmax = field.grid().max_wavenumber();
  SpectralField out(field.grid());
  for (int k = 1; k < kmax; ++k) out[k] = field[k] / Complex(0.0, static_cast<double>(k));
  // 1/(ik) is purely imaginary, so the real Nyquist mode maps to zero.
  out[kmax] = 0.0;
  return out;
}

double check_helmholtz_identity(const MultiplierTable& table, const SpectralField& field) {
  const double nu = table.params.nu;
  if (nu <= 0.0) {
    throw ParameterError("Helmholtz identity requires nu > 0 (unavailable in the elastic case)");
  }
  const SpectralField pf = apply_p(table, field);
  SpectralField residual = differentiate(pf, 2);
  residual.axpy(2.0 / nu, field);
  residual.axpy(-2.0 * table.params.kappa / nu, pf);
  const double norm = l2_norm(field);
  return norm > 0.0 ? l2_norm(residual) / norm : l2_norm(residual);
}

}  // namespace arteria
