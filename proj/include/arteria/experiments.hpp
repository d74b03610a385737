#pragma once

#include <optional>
#include <string>
#include <vector>

#include "arteria/diagnostics.hpp"
#include "arteria/grid.hpp"
#include "arteria/integrator.hpp"
#include "arteria/model_rhs.hpp"
#include "arteria/multipliers.hpp"

namespace arteria {

/// Fraction of the linear stability limit used as the step cap in runs.
inline constexpr double kStabilitySafety = 0.9;

enum class SweepAxis { nu, amplitude, beta };

std::string to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(const std::string& text);

struct SweepSpec {
  SweepAxis axis = SweepAxis::nu;
  std::vector<double> values;
};

struct ExperimentSpec {
  ModelParams params;
  double amplitude = 0.1;
  int grid_n = 1024;
  SolverConfig solver;
  RhsVariant variant;
  RhsOptions rhs_options;
  double sobolev_index = 3.0;
  int snapshot_count = 8;
  std::optional<SweepSpec> sweep;
  std::string label = "run";

  /// Throws ParameterError / ConfigError on inconsistent settings.
  void validate() const;
};

struct Snapshot {
  double t;
  std::vector<double> values;  ///< f at the grid nodes
};

/// What the run looked like just before an early stop.
struct EarlyStopSummary {
  double last_t = 0.0;
  double last_lip = 0.0;
  std::size_t tail_samples = 0;        ///< rows in the final 20% window
  bool inv_lip_strictly_decreasing = false;
  double inv_lip_decreasing_fraction = 0.0;
};

struct RunRecord {
  ExperimentSpec spec;
  std::vector<DiagnosticsRow> rows;
  /// Evenly spaced in time for completed runs; one per sample row (plus the
  /// last accepted state) after an early stop.
  std::vector<Snapshot> snapshots;
  StopReason stop;
  IntegratorStats stats;
  std::optional<EarlyStopSummary> early;
  std::optional<SpectralField> final_state;
  double wall_time = 0.0;
  std::string started_at;   ///< UTC, ISO 8601
  std::string finished_at;
};

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

/// f0(x) = A sech^2(x - pi) minus its discrete mean.
SpectralField build_initial_data(double amplitude, const GridSpec& grid);

/// Evenly spaced snapshot times 0..t_final.
std::vector<double> snapshot_times(const ExperimentSpec& spec);

RunRecord run_experiment(const ExperimentSpec& spec);

/// Spec for one sweep entry: the base spec with the swept quantity replaced.
ExperimentSpec sweep_entry(const ExperimentSpec& base, SweepAxis axis, double value);

/// One record per sweep value, in the order of spec.sweep->values. Runs
/// execute on up to `threads` workers (0 reads ARTERIA_THREADS, default 1).
std::vector<RunRecord> run_sweep(const ExperimentSpec& spec, int threads = 0);

/// Default sweep matrices.
std::vector<double> default_sweep_values(SweepAxis axis);
/// Base spec for a default sweep: nu sweep at A = 0.1, amplitude sweep at
/// nu = 1, beta sweep at nu = 0 and A = 0.1.
ExperimentSpec default_sweep_spec(SweepAxis axis);

/// Summary of the inv_lip tail used for early-termination reporting.
EarlyStopSummary summarize_tail(const std::vector<DiagnosticsRow>& rows, double fraction = 0.2);

}  // namespace arteria
