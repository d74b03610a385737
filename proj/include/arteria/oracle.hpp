#pragma once

#include "arteria/grid.hpp"
#include "arteria/model_rhs.hpp"
#include "arteria/multipliers.hpp"

namespace arteria {

/// Growth rate of mode k under the linearised model:
///   lambda(k) = m(k) p(k) (1/eps) [(1 - beta/2) k^2 + i kappa k + i (nu/2) k^3].
Complex linear_rate(const ModelParams& params, int k);

/// Exact solution of the linearised model: fhat(k, t) = e^{lambda(k) t} fhat(k, 0).
SpectralField evolve_linear(const SpectralField& f0, const ModelParams& params, double t);

/// Largest grid size accepted by rhs_convolution.
inline constexpr int kConvolutionOracleMaxN = 32;

/// Brute-force right-hand side: every quadratic term is an explicit double sum
/// over coefficient pairs (no grid products, hence no aliasing), followed by
/// the multiplier chain evaluated from the closed-form symbols. Modes beyond
/// n/2 produced by the products are discarded. Throws ConfigError for
/// n > kConvolutionOracleMaxN.
SpectralField rhs_convolution(const ModelParams& params, const SpectralField& f,
                              RhsVariant variant = RhsVariant::general());

}  // namespace arteria
