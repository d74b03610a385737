#include "arteria/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "arteria/errors.hpp"

namespace arteria {

void SolverConfig::validate() const {
  if (!(rtol > 0.0) || !(atol > 0.0)) throw ConfigError("rtol and atol must be > 0");
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw ConfigError("t_final must be > 0");
  if (dt_min < 0.0) throw ConfigError("dt_min must be > 0");
  if (sample_dt < 0.0 || !std::isfinite(sample_dt)) throw ConfigError("sample_dt must be > 0");
  if (max_steps <= 0) throw ConfigError("max_steps must be positive");
  if (dt_init && !(*dt_init > 0.0)) throw ConfigError("dt_init must be > 0");
  if (dt_max < 0.0 || !std::isfinite(dt_max)) throw ConfigError("dt_max must be > 0");
}

std::vector<double> SolverConfig::sample_times() const {
  const double h = effective_sample_dt();
  const auto count = static_cast<long>(std::floor(t_final / h + 1e-9));
  std::vector<double> times;
  times.reserve(static_cast<std::size_t>(count + 2));
  for (long i = 0; i <= count; ++i) times.push_back(std::min(t_final, static_cast<double>(i) * h));
  if (t_final - times.back() > 1e-12 * t_final) {
    times.push_back(t_final);
  } else {
    times.back() = t_final;
  }
  return times;
}

std::string StopReason::tag() const {
  switch (kind) {
    case StopKind::reached_t_final: return "reached_t_final";
    case StopKind::step_underflow: return "step_underflow";
    case StopKind::non_finite: return "non_finite";
    case StopKind::step_budget: return "step_budget";
  }
  return "reached_t_final";
}

StopKind parse_stop_kind(const std::string& tag) {
  if (tag == "reached_t_final") return StopKind::reached_t_final;
  if (tag == "step_underflow") return StopKind::step_underflow;
  if (tag == "non_finite") return StopKind::non_finite;
  if (tag == "step_budget") return StopKind::step_budget;
  throw ConfigError("unknown stop reason '" + tag + "'");
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// b - bhat, where bhat is the embedded 4th order solution.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

// PI controller (Hairer & Wanner's DOPRI5 defaults).
constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 10.0;
constexpr double kBeta = 0.04;
constexpr double kAlpha = 0.2 - 0.75 * kBeta;

using Stages = std::array<SpectralField, 7>;

Stages make_stages(const SpectralField& y) {
  return {y, y, y, y, y, y, y};
}

// out = y + dt * sum_i w_i k_i
void combine(SpectralField& out, const SpectralField& y, double dt,
             std::initializer_list<std::pair<double, const SpectralField*>> terms) {
  auto dst = out.coeffs();
  auto base = y.coeffs();
  std::copy(base.begin(), base.end(), dst.begin());
  for (const auto& [w, k] : terms) {
    if (w == 0.0) continue;
    const double s = dt * w;
    auto src = k->coeffs();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += s * src[i];
  }
}

// Computes stages 2..7 given k[0] = f(y). Returns the 5th order solution in y5.
void dopri_stages(const RhsFunction& rhs, const SpectralField& y, double dt, Stages& k,
                  SpectralField& tmp, SpectralField& y5) {
  combine(tmp, y, dt, {{a21, &k[0]}});
  rhs(tmp, k[1]);
  combine(tmp, y, dt, {{a31, &k[0]}, {a32, &k[1]}});
  rhs(tmp, k[2]);
  combine(tmp, y, dt, {{a41, &k[0]}, {a42, &k[1]}, {a43, &k[2]}});
  rhs(tmp, k[3]);
  combine(tmp, y, dt, {{a51, &k[0]}, {a52, &k[1]}, {a53, &k[2]}, {a54, &k[3]}});
  rhs(tmp, k[4]);
  combine(tmp, y, dt, {{a61, &k[0]}, {a62, &k[1]}, {a63, &k[2]}, {a64, &k[3]}, {a65, &k[4]}});
  rhs(tmp, k[5]);
  combine(y5, y, dt, {{b1, &k[0]}, {b3, &k[2]}, {b4, &k[3]}, {b5, &k[4]}, {b6, &k[5]}});
  rhs(y5, k[6]);
}

void error_estimate(const Stages& k, double dt, SpectralField& err) {
  auto dst = err.coeffs();
  std::fill(dst.begin(), dst.end(), Complex(0.0));
  const std::array<std::pair<double, int>, 6> terms{
      {{e1, 0}, {e3, 2}, {e4, 3}, {e5, 4}, {e6, 5}, {e7, 6}}};
  for (const auto& [w, idx] : terms) {
    const double s = dt * w;
    auto src = k[static_cast<std::size_t>(idx)].coeffs();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += s * src[i];
  }
}

// Scaled RMS over the n real degrees of freedom of the half spectrum (the
// imaginary parts of the mean and Nyquist modes are identically zero).
double error_norm(const SpectralField& err, const SpectralField& y0, const SpectralField& y1,
                  double rtol, double atol) {
  const auto e = err.coeffs();
  const auto a = y0.coeffs();
  const auto b = y1.coeffs();
  const std::size_t last = e.size() - 1;
  double sum = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double sr = atol + rtol * std::max(std::abs(a[i].real()), std::abs(b[i].real()));
    const double re = e[i].real() / sr;
    sum += re * re;
    if (i != 0 && i != last) {
      const double si = atol + rtol * std::max(std::abs(a[i].imag()), std::abs(b[i].imag()));
      const double im = e[i].imag() / si;
      sum += im * im;
    }
  }
  const double dof = static_cast<double>(2 * e.size() - 2);
  return std::sqrt(sum / dof);
}

double scaled_rms(const SpectralField& v, const SpectralField& scale_ref, double rtol, double atol) {
  const auto x = v.coeffs();
  const auto r = scale_ref.coeffs();
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double sr = atol + rtol * std::abs(r[i].real());
    const double si = atol + rtol * std::abs(r[i].imag());
    sum += (x[i].real() / sr) * (x[i].real() / sr) + (x[i].imag() / si) * (x[i].imag() / si);
  }
  return std::sqrt(sum / static_cast<double>(2 * x.size() - 2));
}

struct Checkpoint {
  double t;
  bool sample;
  bool output;
};

std::vector<Checkpoint> build_checkpoints(const SolverConfig& config) {
  std::vector<Checkpoint> points;
  for (double t : config.sample_times()) points.push_back({t, true, false});
  for (double t : config.output_times) {
    if (t >= 0.0 && t <= config.t_final) points.push_back({t, false, true});
  }
  std::sort(points.begin(), points.end(),
            [](const Checkpoint& a, const Checkpoint& b) { return a.t < b.t; });
  std::vector<Checkpoint> merged;
  const double tol = 1e-12 * config.t_final;
  for (const auto& p : points) {
    if (!merged.empty() && std::abs(merged.back().t - p.t) <= tol) {
      merged.back().sample = merged.back().sample || p.sample;
      merged.back().output = merged.back().output || p.output;
    } else {
      merged.push_back(p);
    }
  }
  return merged;
}

}  // namespace

InitialStep estimate_initial_step(const RhsFunction& rhs, const SpectralField& f0,
                                  const SolverConfig& config) {
  const double t_final = config.t_final;
  const double dt_min = config.effective_dt_min();
  SpectralField f0_dot(f0.grid());
  try {
    rhs(f0, f0_dot);
  } catch (const NonFiniteError&) {
    return {dt_min, true};
  }
  if (!f0_dot.is_finite()) return {dt_min, true};

  const double d0 = scaled_rms(f0, f0, config.rtol, config.atol);
  const double d1 = scaled_rms(f0_dot, f0, config.rtol, config.atol);
  if (d1 == 0.0) return {t_final, false};

  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, t_final);
  SpectralField y1 = f0;
  y1.axpy(h0, f0_dot);
  SpectralField f1(f0.grid());
  try {
    rhs(y1, f1);
  } catch (const NonFiniteError&) {
    return {std::max(dt_min, h0), true};
  }
  f1 -= f0_dot;
  const double d2 = scaled_rms(f1, f0, config.rtol, config.atol) / h0;
  const double dmax = std::max(d1, d2);
  const double h1 = dmax <= 1e-15 ? std::max(1e-6, 1e-3 * h0) : std::pow(0.01 / dmax, 0.2);
  const double dt = std::min({100.0 * h0, h1, t_final});
  return {std::max(dt, dt_min), false};
}

SpectralField dopri_step(const RhsFunction& rhs, const SpectralField& y, double dt,
                         SpectralField* error) {
  Stages k = make_stages(y);
  SpectralField tmp = y;
  SpectralField y5 = y;
  rhs(y, k[0]);
  dopri_stages(rhs, y, dt, k, tmp, y5);
  if (error != nullptr) {
    *error = y;
    error_estimate(k, dt, *error);
  }
  return y5;
}

Complex dopri_stability(Complex z) {
  return 1.0 + z * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z * (1.0 / 120.0 + z / 600.0)))));
}

double stability_step_limit(std::span<const Complex> rates) {
  constexpr double kScan = 0.01;   // radial resolution along each ray
  constexpr double kReach = 8.0;   // the stability region lies inside |z| < 4
  constexpr double kSlack = 1e-12;
  double limit = std::numeric_limits<double>::infinity();
  for (const Complex lambda : rates) {
    const double mag = std::abs(lambda);
    if (mag == 0.0 || lambda.real() > 0.0) continue;
    const Complex dir = lambda / mag;
    auto unstable = [&](double r) { return std::abs(dopri_stability(r * dir)) > 1.0 + kSlack; };
    double lo = 0.0, hi = 0.0;
    for (double r = kScan; r <= kReach; r += kScan) {
      if (unstable(r)) {
        hi = r;
        break;
      }
      lo = r;
    }
    if (hi == 0.0) continue;
    for (int i = 0; i < 40; ++i) {
      const double mid = 0.5 * (lo + hi);
      (unstable(mid) ? hi : lo) = mid;
    }
    limit = std::min(limit, lo / mag);
  }
  return limit;
}

SpectralField integrate_fixed(const RhsFunction& rhs, const SpectralField& f0, double dt,
                              int n_steps) {
  SpectralField y = f0;
  for (int i = 0; i < n_steps; ++i) y = dopri_step(rhs, y, dt);
  return y;
}

IntegrationResult integrate(const RhsFunction& rhs, const SpectralField& f0,
                            const SolverConfig& config, const Observer& observer) {
  config.validate();
  const double t_final = config.t_final;
  const double dt_min = config.effective_dt_min();
  const auto checkpoints = build_checkpoints(config);

  IntegrationResult result{f0, {StopKind::reached_t_final, 0.0}, {}};
  IntegratorStats& stats = result.stats;
  SpectralField& y = result.final_state;

  auto counted_rhs = [&](const SpectralField& state, SpectralField& out) {
    ++stats.rhs_evaluations;
    rhs(state, out);
  };

  std::size_t next = 0;
  if (!checkpoints.empty() && checkpoints.front().t <= 0.0) {
    if (observer) observer({0.0, 0.0, 0, y, checkpoints.front().sample, checkpoints.front().output});
    next = 1;
  } else if (observer) {
    observer({0.0, 0.0, 0, y, false, false});
  }

  if (!f0.is_finite()) {
    result.reason = {StopKind::non_finite, 0.0};
    return result;
  }

  Stages k = make_stages(y);
  SpectralField tmp = y, y5 = y, err = y;
  try {
    counted_rhs(y, k[0]);
  } catch (const NonFiniteError&) {
    result.reason = {StopKind::non_finite, 0.0};
    return result;
  }

  const double dt_max = config.effective_dt_max();
  stats.dt_cap = dt_max;
  double dt = config.dt_init ? *config.dt_init : estimate_initial_step(rhs, f0, config).dt;
  dt = std::min(dt, dt_max);
  double t = 0.0;
  double err_prev = 1e-4;
  bool last_rejected = false;
  bool last_failure_non_finite = false;
  int min_step_hits = 0;

  while (t < t_final) {
    if (stats.accepted >= config.max_steps) {
      result.reason = {StopKind::step_budget, t};
      return result;
    }
    if (dt <= dt_min) {
      if (++min_step_hits >= 2) {
        result.reason = {last_failure_non_finite ? StopKind::non_finite : StopKind::step_underflow, t};
        return result;
      }
      dt = dt_min;
    } else {
      min_step_hits = 0;
    }

    const double target = next < checkpoints.size() ? checkpoints[next].t : t_final;
    double h = dt;
    bool landing = false;
    if (t + h >= target - 1e-14 * std::max(1.0, std::abs(target))) {
      h = target - t;
      landing = true;
    }

    double err_norm = 0.0;
    bool non_finite = false;
    try {
      dopri_stages(counted_rhs, y, h, k, tmp, y5);
      error_estimate(k, h, err);
      err_norm = error_norm(err, y, y5, config.rtol, config.atol);
      non_finite = !std::isfinite(err_norm) || !y5.is_finite();
    } catch (const NonFiniteError&) {
      non_finite = true;
    }

    if (!non_finite && err_norm <= 1.0) {
      t = landing ? target : t + h;
      std::swap(y, y5);
      std::swap(k[0], k[6]);
      ++stats.accepted;
      stats.last_dt = h;
      last_failure_non_finite = false;

      bool on_sample = false, on_output = false;
      if (landing && next < checkpoints.size()) {
        on_sample = checkpoints[next].sample;
        on_output = checkpoints[next].output;
        ++next;
      }
      if (observer) observer({t, h, stats.accepted, y, on_sample, on_output});

      double factor = err_norm == 0.0
                          ? kMaxFactor
                          : kSafety * std::pow(err_norm, -kAlpha) * std::pow(err_prev, kBeta);
      factor = std::clamp(factor, kMinFactor, kMaxFactor);
      if (last_rejected) factor = std::min(factor, 1.0);
      const double proposal = h * factor;
      // A step shortened to hit a checkpoint says little about the step size
      // the solution tolerates; keep the earlier proposal if it was larger.
      dt = std::min(landing && h < dt ? std::max(proposal, dt) : proposal, dt_max);
      err_prev = std::max(err_norm, 1e-4);
      last_rejected = false;
    } else {
      ++stats.rejected;
      last_rejected = true;
      last_failure_non_finite = non_finite;
      const double factor =
          non_finite ? kMinFactor
                     : std::max(kMinFactor, kSafety * std::pow(err_norm, -1.0 / 5.0));
      dt = h * factor;
    }
  }
  result.reason = {StopKind::reached_t_final, t_final};
  return result;
}

}  // namespace arteria
