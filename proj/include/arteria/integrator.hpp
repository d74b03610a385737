#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "arteria/grid.hpp"

namespace arteria {

struct SolverConfig {
  double rtol = 1e-8;
  double atol = 1e-8;
  double t_final = 10.0;
  std::optional<double> dt_init;  ///< heuristic estimate when empty
  double dt_min = 0.0;            ///< 0 selects 1e-12 * t_final
  double dt_max = 0.0;            ///< step cap; 0 means t_final
  long max_steps = 2'000'000;
  double sample_dt = 0.0;         ///< 0 selects t_final / 400
  /// Additional times the integrator lands on exactly (e.g. snapshots).
  std::vector<double> output_times;

  void validate() const;
  double effective_dt_min() const { return dt_min > 0.0 ? dt_min : 1e-12 * t_final; }
  double effective_dt_max() const { return dt_max > 0.0 ? dt_max : t_final; }
  double effective_sample_dt() const { return sample_dt > 0.0 ? sample_dt : t_final / 400.0; }
  /// Sample times 0, dt, 2dt, ... up to and including t_final.
  std::vector<double> sample_times() const;
};

enum class StopKind { reached_t_final, step_underflow, non_finite, step_budget };

struct StopReason {
  StopKind kind = StopKind::reached_t_final;
  double t_stop = 0.0;

  bool early() const { return kind != StopKind::reached_t_final; }
  std::string tag() const;
};

StopKind parse_stop_kind(const std::string& tag);

/// Called at t = 0 and after every accepted step.
struct StepEvent {
  double t;
  double dt;  ///< step that produced this state (0 at t = 0)
  long step;
  const SpectralField& state;
  bool on_sample;  ///< t is one of SolverConfig::sample_times()
  bool on_output;  ///< t is one of SolverConfig::output_times
};

/// out = f'(state). May throw NonFiniteError.
using RhsFunction = std::function<void(const SpectralField& state, SpectralField& out)>;
using Observer = std::function<void(const StepEvent&)>;

struct IntegratorStats {
  long accepted = 0;
  long rejected = 0;
  long rhs_evaluations = 0;
  double last_dt = 0.0;
  double dt_cap = 0.0;  ///< effective_dt_max() of the run
};

struct IntegrationResult {
  SpectralField final_state;
  StopReason reason;
  IntegratorStats stats;
};

/// Adaptive Dormand-Prince 5(4) integration with a PI step controller.
///
/// Failures never throw: a step that yields non-finite values is rejected and
/// retried with a smaller step. When the controller asks for a step at or
/// below dt_min on two consecutive attempts the run ends with step_underflow
/// (non_finite if those attempts failed on non-finite values), returning the
/// last accepted state.
IntegrationResult integrate(const RhsFunction& rhs, const SpectralField& f0,
                            const SolverConfig& config, const Observer& observer = {});

struct InitialStep {
  double dt;
  bool warning;  ///< rhs(f0) was not finite
};

InitialStep estimate_initial_step(const RhsFunction& rhs, const SpectralField& f0,
                                  const SolverConfig& config);

/// One Dormand-Prince step of size dt. Returns the 5th order solution and
/// stores the embedded error estimate in `error` when given.
SpectralField dopri_step(const RhsFunction& rhs, const SpectralField& y, double dt,
                         SpectralField* error = nullptr);

/// Stability function of the fifth-order Dormand-Prince solution:
/// y_{n+1} = R(h lambda) y_n for y' = lambda y.
Complex dopri_stability(Complex z);

/// Largest h with |R(h lambda)| <= 1 for every rate with Re lambda <= 0.
/// Growing rates are ignored. Returns +inf when nothing constrains h.
double stability_step_limit(std::span<const Complex> rates);

/// Fixed-step integration with n_steps steps of size dt.
SpectralField integrate_fixed(const RhsFunction& rhs, const SpectralField& f0, double dt,
                              int n_steps);

}  // namespace arteria
