#pragma once

#include "arteria/grid.hpp"
#include "arteria/multipliers.hpp"

namespace arteria {

/// Stand-in for 1/lip when lip = 0; keeps CSV output numeric.
inline constexpr double kInvLipSentinel = 1e308;

/// One sampled instant of a run.
struct DiagnosticsRow {
  double t = 0.0;
  double mean = 0.0;         ///< fhat(0)
  double l2 = 0.0;           ///< ||f||_{L2}
  double hs_energy = 0.0;    ///< ||f||^2 + ||Lambda^s f||^2
  double lip = 0.0;          ///< ||f_x||_{Linf} on the grid
  double inv_lip = 0.0;      ///< 1/lip, kInvLipSentinel when lip = 0
  double cum_integral = 0.0; ///< trapezoidal integral of lip over [0, t]
  double e1 = 0.0;           ///< ||f||^2 + (4/kappa^2)||f_x||^2
  double e2 = 0.0;           ///< ||f_x||^2 + (4/kappa^2)||f_xx||^2
  double d1 = 0.0;           ///< ||f_x||^2
  double d2 = 0.0;           ///< ||f_xx||^2
};

struct LipschitzValue {
  double lip;
  double inv_lip;
};

/// Grid maximum of |f_x| from the spectral derivative. Throws NonFiniteError
/// on non-finite input.
LipschitzValue lipschitz_diag(const SpectralField& f);

/// prev_I + (t - prev_t)(lip + prev_lip)/2. Throws ConfigError if t < prev_t.
double accumulate_integral(double prev_I, double prev_lip, double prev_t, double lip, double t);

/// Fills mean, l2, hs_energy, e1, e2, d1 and d2 via Parseval. The Sobolev
/// index is the one the table was built with.
DiagnosticsRow energies(const SpectralField& f, const MultiplierTable& table,
                        const ModelParams& params);

/// Tracks the running Lipschitz integral across integrator steps and
/// produces complete rows.
class DiagnosticsTracker {
 public:
  DiagnosticsTracker(const MultiplierTable& table) : table_(table) {}

  /// Feed every accepted state in time order; returns the current row.
  DiagnosticsRow observe(double t, const SpectralField& f);

 private:
  const MultiplierTable& table_;
  bool started_ = false;
  double prev_t_ = 0.0;
  double prev_lip_ = 0.0;
  double integral_ = 0.0;
};

}  // namespace arteria
