#include "arteria/model_rhs.hpp"

#include <algorithm>
#include <cmath>

#include "arteria/errors.hpp"

namespace arteria {

void RhsVariant::validate(const ModelParams& params) const {
  switch (kind) {
    case RhsKind::general:
      return;
    case RhsKind::mollified:
      if (!(mollify_eps > 0.0) || !std::isfinite(mollify_eps)) {
        throw ParameterError("mollified variant requires a mollifier epsilon > 0");
      }
      return;
    case RhsKind::bbm_local:
      if (params.nu != 0.0) throw ParameterError("bbm variant requires nu = 0");
      return;
  }
}

std::string RhsVariant::name() const {
  switch (kind) {
    case RhsKind::general: return "general";
    case RhsKind::mollified: return "mollified";
    case RhsKind::bbm_local: return "bbm";
  }
  return "general";
}

RhsKind parse_rhs_kind(const std::string& text) {
  if (text == "general") return RhsKind::general;
  if (text == "mollified") return RhsKind::mollified;
  if (text == "bbm" || text == "bbm_local") return RhsKind::bbm_local;
  throw ConfigError("unknown variant '" + text + "' (expected general, bbm or mollified)");
}

ModelRhs::ModelRhs(const ModelParams& params, const GridSpec& grid, RhsVariant variant,
                   RhsOptions options)
    : ModelRhs(build_table(params, grid), variant, options) {}

ModelRhs::ModelRhs(MultiplierTable table, RhsVariant variant, RhsOptions options)
    : params_(table.params),
      table_(std::move(table)),
      variant_(variant),
      options_(options),
      cutoff_(options.dealias ? dealias_cutoff(table_.grid, options.dealias_fraction)
                              : table_.grid.max_wavenumber()),
      viscous_products_(params_.nu != 0.0 && variant.kind != RhsKind::bbm_local) {
  variant_.validate(params_);
  const GridSpec& grid = table_.grid;
  const auto spec = static_cast<std::size_t>(grid.spectral_size());
  const auto phys = static_cast<std::size_t>(grid.size());
  mollifier_.assign(spec, 1.0);
  if (variant_.kind == RhsKind::mollified) {
    for (std::size_t k = 0; k < spec; ++k) {
      mollifier_[k] = std::exp(-variant_.mollify_eps * static_cast<double>(k * k));
    }
  }
  linear_.resize(spec);
  const ModelParams& p = params_;
  for (std::size_t k = 0; k < spec; ++k) {
    const double kk = static_cast<double>(k);
    const Complex ik(0.0, kk);
    if (variant_.kind == RhsKind::bbm_local) {
      // (1/kappa)(1 + 2ik/kappa)[(1 - beta/2)/eps k^2 + (kappa/eps) ik] / (1 + 4k^2/kappa^2)
      const Complex q = (1.0 - 0.5 * p.beta) / p.eps * kk * kk + p.kappa / p.eps * ik;
      linear_[k] = (1.0 / p.kappa) * (1.0 + 2.0 * ik / p.kappa) * q /
                   (1.0 + 4.0 * kk * kk / (p.kappa * p.kappa));
    } else {
      // -(1/eps)(1-beta/2) f_xx + (kappa/eps) f_x - (nu/2eps) f_xxx, with J on
      // the input and on the outer result.
      const Complex bracket = (1.0 - 0.5 * p.beta) / p.eps * kk * kk + p.kappa / p.eps * ik +
                              0.5 * p.nu / p.eps * Complex(0.0, kk * kk * kk);
      linear_[k] = mollifier_[k] * mollifier_[k] * table_.m[k] * table_.p[k] * bracket;
    }
  }
  linear_.back() = linear_.back().real();

  spec_scratch_.resize(spec);
  q_ffx_.resize(spec);
  q_fxfxx_.resize(spec);
  q_ffxxx_.resize(spec);
  g_.resize(phys);
  gx_.resize(phys);
  gxx_.resize(phys);
  gxxx_.resize(phys);
  prod_.resize(phys);
}

SpectralField ModelRhs::operator()(const SpectralField& f) const {
  SpectralField out(f.grid());
  evaluate(f, out);
  return out;
}

void ModelRhs::evaluate(const SpectralField& f, SpectralField& out) const {
  if (!(f.grid() == table_.grid) || !(out.grid() == table_.grid)) {
    throw ShapeError("rhs evaluated on a field from a different grid");
  }
  quadratic_terms(f);
  if (variant_.kind == RhsKind::bbm_local) {
    bbm_form(f, out);
  } else {
    general_form(f, out);
  }
  out[0] = 0.0;
  const int kmax = table_.grid.max_wavenumber();
  out[kmax] = out[kmax].real();
  if (!out.is_finite()) throw NonFiniteError("rhs evaluation produced non-finite coefficients");
}

void ModelRhs::quadratic_terms(const SpectralField& f) const {
  const GridSpec& grid = table_.grid;
  const int kmax = grid.max_wavenumber();
  const double inv_n = 1.0 / grid.size();

  // (ik)^order * mollifier * fhat on the retained band, inverse transformed.
  auto derivative_to_physical = [&](int order, std::vector<double>& dst) {
    for (int k = 0; k <= kmax; ++k) {
      const auto idx = static_cast<std::size_t>(k);
      if (k > cutoff_) {
        spec_scratch_[idx] = 0.0;
        continue;
      }
      Complex factor(1.0, 0.0);
      const Complex ik(0.0, static_cast<double>(k));
      for (int i = 0; i < order; ++i) factor *= ik;
      if (k == kmax && order % 2 == 1) factor = 0.0;
      spec_scratch_[idx] = factor * mollifier_[idx] * f[k];
    }
    grid.inverse(spec_scratch_, dst);
  };
  derivative_to_physical(0, g_);
  derivative_to_physical(1, gx_);
  if (viscous_products_) {
    derivative_to_physical(2, gxx_);
    derivative_to_physical(3, gxxx_);
  }

  auto product_to_spectral = [&](const std::vector<double>& u, const std::vector<double>& v,
                                 std::vector<Complex>& dst) {
    for (std::size_t j = 0; j < u.size(); ++j) prod_[j] = u[j] * v[j];
    grid.forward(prod_, dst);
    for (int k = 0; k <= kmax; ++k) {
      auto& c = dst[static_cast<std::size_t>(k)];
      c = k > cutoff_ ? Complex(0.0) : c * inv_n;
    }
  };
  product_to_spectral(g_, gx_, q_ffx_);
  if (viscous_products_) {
    product_to_spectral(gx_, gxx_, q_fxfxx_);
    product_to_spectral(g_, gxxx_, q_ffxxx_);
  } else {
    std::fill(q_fxfxx_.begin(), q_fxfxx_.end(), Complex(0.0));
    std::fill(q_ffxxx_.begin(), q_ffxxx_.end(), Complex(0.0));
  }
}

void ModelRhs::general_form(const SpectralField& f, SpectralField& out) const {
  const ModelParams& p = params_;
  const int kmax = table_.grid.max_wavenumber();
  const double c_conv = 2.0 + 0.25 * p.beta;      // (2 + beta/4)(f f_x)_x
  const double c_fxfxx = 0.25 * p.nu / p.eps;     // (1/eps)(nu/4) f_x f_xx
  const double c_ffxxx = 0.25 * p.nu;             // -(nu/4) f f_xxx
  const double c_fric = 2.0 * p.kappa;            // -2 kappa f f_x
  for (int k = 0; k <= kmax; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    const Complex ik(0.0, static_cast<double>(k));
    const Complex nonlinear = c_conv * ik * q_ffx_[idx] + c_fxfxx * q_fxfxx_[idx] -
                              c_ffxxx * q_ffxxx_[idx] - c_fric * q_ffx_[idx];
    out[k] = linear_[idx] * f[k] + mollifier_[idx] * table_.m[idx] * table_.p[idx] * nonlinear;
  }
}

void ModelRhs::bbm_form(const SpectralField& f, SpectralField& out) const {
  // (Id - (4/kappa^2) d_xx) f_t = P (Id + (2/kappa) d_x) Q,  P = 1/kappa,
  // Q = a f_xx + b f_x + c (f f_x)_x - d f f_x. The linear part of Q is in
  // linear_.
  const ModelParams& p = params_;
  const int kmax = table_.grid.max_wavenumber();
  const double c = 2.0 + 0.25 * p.beta;
  const double d = 2.0 * p.kappa;
  const double kappa = p.kappa;
  for (int k = 0; k <= kmax; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    const double kk = static_cast<double>(k);
    const Complex ik(0.0, kk);
    const Complex q = (c * ik - d) * q_ffx_[idx];
    const Complex lhs_symbol = 1.0 + 4.0 * kk * kk / (kappa * kappa);
    out[k] = linear_[idx] * f[k] + (1.0 / kappa) * (1.0 + 2.0 * ik / kappa) * q / lhs_symbol;
  }
}

namespace {

MultiplierTable checked_table(const ModelParams& params, const MultiplierTable& table,
                              const SpectralField& f) {
  if (!(table.grid == f.grid())) throw ShapeError("multiplier table and field grids differ");
  const ModelParams& tp = table.params;
  if (tp.nu != params.nu || tp.eps != params.eps || tp.kappa != params.kappa ||
      tp.beta != params.beta) {
    throw ParameterError("multiplier table was built for different model parameters");
  }
  return table;
}

}  // namespace

SpectralField rhs_general(const ModelParams& params, const MultiplierTable& table,
                          const SpectralField& f, const RhsOptions& options) {
  return ModelRhs(checked_table(params, table, f), RhsVariant::general(), options)(f);
}

SpectralField rhs_mollified(const ModelParams& params, const MultiplierTable& table,
                            const SpectralField& f, double mollify_eps,
                            const RhsOptions& options) {
  return ModelRhs(checked_table(params, table, f), RhsVariant::mollified(mollify_eps), options)(f);
}

SpectralField rhs_bbm_local(const ModelParams& params, const MultiplierTable& table,
                            const SpectralField& f, const RhsOptions& options) {
  return ModelRhs(checked_table(params, table, f), RhsVariant::bbm_local(), options)(f);
}

}  // namespace arteria
