#include "arteria/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <numbers>
#include <sstream>
#include <thread>

#include "arteria/errors.hpp"

namespace arteria {

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::nu: return "nu";
    case SweepAxis::amplitude: return "amplitude";
    case SweepAxis::beta: return "beta";
  }
  return "nu";
}

SweepAxis parse_sweep_axis(const std::string& text) {
  if (text == "nu") return SweepAxis::nu;
  if (text == "amplitude" || text == "amp" || text == "A") return SweepAxis::amplitude;
  if (text == "beta") return SweepAxis::beta;
  throw ConfigError("unknown sweep axis '" + text + "' (expected nu, amplitude or beta)");
}

void ExperimentSpec::validate() const {
  params.validate();
  solver.validate();
  variant.validate(params);
  GridSpec check(grid_n);
  (void)check;
  if (!std::isfinite(amplitude)) throw ParameterError("amplitude must be finite");
  if (!(sobolev_index > 0.0)) throw ParameterError("s_index must be > 0");
  if (snapshot_count < 0) throw ConfigError("snapshots must be >= 0");
  if (rhs_options.dealias) dealias_cutoff(check, rhs_options.dealias_fraction);
  if (sweep && sweep->values.empty()) throw ConfigError("sweep values must not be empty");
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

SpectralField build_initial_data(double amplitude, const GridSpec& grid) {
  std::vector<double> values(static_cast<std::size_t>(grid.size()));
  double sum = 0.0;
  for (int j = 0; j < grid.size(); ++j) {
    const double c = std::cosh(grid.node(j) - std::numbers::pi);
    const double v = amplitude / (c * c);
    values[static_cast<std::size_t>(j)] = v;
    sum += v;
  }
  const double mean = sum / grid.size();
  for (auto& v : values) v -= mean;
  SpectralField f = to_spectral(grid, values);
  f[0] = 0.0;
  return f;
}

std::vector<double> snapshot_times(const ExperimentSpec& spec) {
  std::vector<double> times;
  const int count = spec.snapshot_count;
  if (count <= 0) return times;
  if (count == 1) return {spec.solver.t_final};
  for (int i = 0; i < count; ++i) {
    times.push_back(spec.solver.t_final * static_cast<double>(i) / (count - 1));
  }
  return times;
}

EarlyStopSummary summarize_tail(const std::vector<DiagnosticsRow>& rows, double fraction) {
  EarlyStopSummary s;
  if (rows.empty()) return s;
  s.last_t = rows.back().t;
  s.last_lip = rows.back().lip;
  const auto n = rows.size();
  std::size_t tail = static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n)));
  tail = std::clamp<std::size_t>(tail, 1, n);
  s.tail_samples = tail;
  const std::size_t start = n - tail;
  std::size_t decreasing = 0, pairs = 0;
  for (std::size_t i = start + 1; i < n; ++i) {
    ++pairs;
    if (rows[i].inv_lip < rows[i - 1].inv_lip) ++decreasing;
  }
  s.inv_lip_strictly_decreasing = pairs > 0 && decreasing == pairs;
  s.inv_lip_decreasing_fraction = pairs > 0 ? static_cast<double>(decreasing) / pairs : 0.0;
  return s;
}

RunRecord run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  const auto started = std::chrono::steady_clock::now();
  const GridSpec grid(spec.grid_n);
  const ModelRhs rhs(build_table(spec.params, grid, spec.sobolev_index), spec.variant,
                     spec.rhs_options);
  const SpectralField f0 = build_initial_data(spec.amplitude, grid);

  SolverConfig solver = spec.solver;
  // Keep every linear mode inside the integrator's stability region; without
  // this the controller settles on the stability boundary and the high modes
  // fill up with tolerance-level noise.
  const double stable = kStabilitySafety * stability_step_limit(rhs.linear_symbol());
  if (std::isfinite(stable)) {
    solver.dt_max = solver.dt_max > 0.0 ? std::min(solver.dt_max, stable) : stable;
  }
  const auto snaps = snapshot_times(spec);
  solver.output_times.insert(solver.output_times.end(), snaps.begin(), snaps.end());

  RunRecord record;
  record.spec = spec;
  record.started_at = utc_timestamp();
  DiagnosticsTracker tracker(rhs.table());
  DiagnosticsRow last_row;
  bool last_is_sample = false;
  // Every sampled state is kept until the run ends: an early stop reports
  // snapshots at all samples instead of the evenly spaced subset.
  std::vector<Snapshot> sampled;

  auto observer = [&](const StepEvent& ev) {
    last_row = tracker.observe(ev.t, ev.state);
    last_is_sample = ev.on_sample;
    if (ev.on_sample) {
      record.rows.push_back(last_row);
      sampled.push_back({ev.t, to_physical(ev.state)});
    }
    if (ev.on_output) record.snapshots.push_back({ev.t, to_physical(ev.state)});
  };
  auto rhs_fn = [&rhs](const SpectralField& s, SpectralField& out) { rhs.evaluate(s, out); };
  IntegrationResult result = integrate(rhs_fn, f0, solver, observer);

  record.stop = result.reason;
  record.stats = result.stats;
  if (result.reason.early()) {
    if (!last_is_sample && result.final_state.is_finite()) {
      record.rows.push_back(last_row);
      sampled.push_back({last_row.t, to_physical(result.final_state)});
    }
    record.snapshots = std::move(sampled);
    record.early = summarize_tail(record.rows);
  }
  record.final_state = std::move(result.final_state);
  record.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  record.finished_at = utc_timestamp();
  return record;
}

namespace {

std::string format_value(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

int threads_from_env() {
  if (const char* env = std::getenv("ARTERIA_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

}  // namespace

ExperimentSpec sweep_entry(const ExperimentSpec& base, SweepAxis axis, double value) {
  ExperimentSpec spec = base;
  spec.sweep.reset();
  switch (axis) {
    case SweepAxis::nu: spec.params.nu = value; break;
    case SweepAxis::amplitude: spec.amplitude = value; break;
    case SweepAxis::beta: spec.params.beta = value; break;
  }
  // The local form only exists for nu = 0.
  if (spec.variant.kind == RhsKind::bbm_local && spec.params.nu != 0.0) {
    spec.variant = RhsVariant::general();
  }
  spec.label = base.label + "_" + to_string(axis) + "_" + format_value(value);
  return spec;
}


std::vector<RunRecord> run_sweep(const ExperimentSpec& spec, int threads) {
  if (!spec.sweep) throw ConfigError("run_sweep: spec has no sweep");
  spec.validate();
  const auto& values = spec.sweep->values;
  std::vector<ExperimentSpec> entries;
  for (double v : values) entries.push_back(sweep_entry(spec, spec.sweep->axis, v));
  for (const auto& e : entries) e.validate();

  std::vector<std::optional<RunRecord>> results(entries.size());
  const int workers =
      std::clamp(threads > 0 ? threads : threads_from_env(), 1, static_cast<int>(entries.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      results[i] = run_experiment(entries[i]);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  std::vector<RunRecord> records;
  records.reserve(results.size());
  for (auto& r : results) records.push_back(std::move(*r));
  return records;
}

std::vector<double> default_sweep_values(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::nu: return {0.0, 0.1, 0.5, 1.0, 1.5, 2.0, 3.0};
    case SweepAxis::amplitude: return {0.5, 1.0, 5.0, 10.0, 20.0};
    case SweepAxis::beta: return {2.0, 0.0, -1.0};
  }
  return {};
}

ExperimentSpec default_sweep_spec(SweepAxis axis) {
  ExperimentSpec spec;
  spec.label = to_string(axis) + "_sweep";
  switch (axis) {
    case SweepAxis::nu: spec.amplitude = 0.1; break;
    case SweepAxis::amplitude: spec.params.nu = 1.0; break;
    case SweepAxis::beta:
      spec.params.nu = 0.0;
      spec.amplitude = 0.1;
      break;
  }
  spec.sweep = SweepSpec{axis, default_sweep_values(axis)};
  return spec;
}

}  // namespace arteria
