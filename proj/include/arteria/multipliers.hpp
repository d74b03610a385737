#pragma once

#include <vector>

#include "arteria/grid.hpp"

namespace arteria {

/// Nondimensional model constants.
struct ModelParams {
  double nu = 1.0;     ///< viscoelastic coefficient, >= 0 (0 selects the BBM regime)
  double eps = 1.0;    ///< asymptotic parameter, > 0
  double kappa = 1.0;  ///< friction coefficient, > 0
  double beta = 1.0;   ///< wall elasticity

  /// Throws ParameterError naming the offending constant.
  void validate() const;
  bool bbm_regime() const { return nu == 0.0; }
};

/// Per-wavenumber symbols on the half spectrum k = 0..n/2.
///
///   a(k) = kappa + (nu/2) k^2          p(k) = 1 / a(k)
///   m(k) = (1 + 4k^2/a^2)^{-1} (1 + 2ik/a)
///   s(k) = m(k) - 1                    lambda_s(k) = |k|^s
struct MultiplierTable {
  GridSpec grid;
  ModelParams params;
  double sobolev_index = 3.0;
  std::vector<double> a;
  std::vector<double> p;
  std::vector<Complex> m;
  std::vector<Complex> s;
  std::vector<double> lambda_s;
};

MultiplierTable build_table(const ModelParams& params, const GridSpec& grid,
                            double sobolev_index = 3.0);

SpectralField apply_p(const MultiplierTable& table, const SpectralField& field);
SpectralField apply_m(const MultiplierTable& table, const SpectralField& field);
SpectralField apply_s(const MultiplierTable& table, const SpectralField& field);
SpectralField apply_lambda_s(const MultiplierTable& table, const SpectralField& field);

/// Heat-kernel mollifier, coefficient k scaled by exp(-epsilon k^2).
SpectralField apply_mollifier(const SpectralField& field, double epsilon);

/// Antiderivative with the zero mode set to 0: coefficient k divided by ik.
SpectralField apply_inv_dx(const SpectralField& field);

/// Relative L2 residual of d_xx P f + (2/nu) f - (2 kappa/nu) P f.
/// Requires nu > 0; throws ParameterError otherwise.
double check_helmholtz_identity(const MultiplierTable& table, const SpectralField& field);

}  // namespace arteria
