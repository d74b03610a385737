#include "arteria/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "arteria/diagnostics.hpp"
#include "arteria/experiments.hpp"
#include "arteria/integrator.hpp"
#include "arteria/model_rhs.hpp"
#include "arteria/oracle.hpp"

namespace arteria {

namespace {

SpectralField random_field(const GridSpec& grid, int max_mode, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  SpectralField f(grid);
  for (int k = 1; k <= std::min(max_mode, grid.max_wavenumber() - 1); ++k) {
    f[k] = Complex(normal(rng), normal(rng)) / (1.0 + k * k);
  }
  return f;
}

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

CheckResult check(std::string name, bool ok, std::string detail) {
  return {std::move(name), ok ? CheckStatus::pass : CheckStatus::fail, std::move(detail)};
}

MultiplierTable hooked_table(const SelftestOptions& opt, const GridSpec& grid) {
  MultiplierTable table = build_table(opt.params, grid);
  if (opt.table_hook) opt.table_hook(table);
  return table;
}

}  // namespace

std::vector<CheckResult> run_selftest(const SelftestOptions& opt) {
  std::vector<CheckResult> results;
  std::mt19937_64 rng(20240611);
  const ModelParams& params = opt.params;
  params.validate();

  {
    const GridSpec grid(64);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    std::vector<double> v(64);
    for (auto& x : v) x = uni(rng);
    const auto back = to_physical(to_spectral(grid, v));
    double err = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) err = std::max(err, std::abs(back[i] - v[i]));
    results.push_back(check("transform round trip", err < 1e-12, "max error " + sci(err)));

    double quad = 0.0;
    for (double x : v) quad += x * x;
    quad *= grid.spacing();
    const double parseval = l2_norm_squared(to_spectral(grid, v));
    const double rel = std::abs(quad - parseval) / quad;
    results.push_back(check("parseval", rel < 1e-12, "relative gap " + sci(rel)));
  }

  const GridSpec grid(256);
  const MultiplierTable table = hooked_table(opt, grid);

  if (params.nu > 0.0) {
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      worst = std::max(worst, check_helmholtz_identity(table, random_field(grid, 100, rng)));
    }
    results.push_back(check("helmholtz identity", worst <= 1e-12, "max residual " + sci(worst)));
  } else {
    results.push_back({"helmholtz identity", CheckStatus::skip, "not defined for nu = 0"});
  }

  {
    double worst = 0.0, worst_decomp = 0.0;
    for (int k = 0; k <= grid.max_wavenumber(); ++k) {
      const auto i = static_cast<std::size_t>(k);
      const double a = params.kappa + 0.5 * params.nu * k * k;
      const double expected = 4.0 * k * k / (a * a + 4.0 * k * k);
      worst = std::max(worst, std::abs(std::norm(table.m[i] - 1.0) - expected));
      worst_decomp = std::max(worst_decomp, std::abs(table.m[i] - (1.0 + table.s[i])));
    }
    results.push_back(check("|m-1|^2 identity", worst <= 1e-13, "max gap " + sci(worst)));
    results.push_back(check("M = Id + S", worst_decomp <= 1e-15, "max gap " + sci(worst_decomp)));
  }

  {
    double worst = 0.0;
    for (int k = 0; k <= 64; ++k) {
      const double kk = k;
      const double a = params.kappa + 0.5 * params.nu * kk * kk;
      const double re = -(1.0 + 0.5 * params.beta) * a * kk * kk /
                        (params.eps * (a * a + 4.0 * kk * kk));
      worst = std::max(worst, std::abs(linear_rate(params, k).real() - re));
    }
    results.push_back(check("linear rate closed form", worst <= 1e-13, "max gap " + sci(worst)));
  }

  {
    const GridSpec small(32);
    std::vector<RhsVariant> variants{RhsVariant::general(), RhsVariant::mollified(1e-2)};
    if (params.nu == 0.0) variants.push_back(RhsVariant::bbm_local());
    double worst = 0.0;
    for (const auto& variant : variants) {
      const ModelRhs rhs(hooked_table(opt, small), variant);
      for (int trial = 0; trial < 5; ++trial) {
        const SpectralField f = 0.3 * random_field(small, 5, rng);
        const SpectralField a = rhs(f);
        const SpectralField b = rhs_convolution(params, f, variant);
        for (int k = 0; k <= 10; ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
      }
    }
    results.push_back(check("convolution oracle", worst <= 1e-12, "max gap " + sci(worst)));
  }

  {
    const ModelRhs rhs(table, RhsVariant::general());
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      SpectralField f = random_field(grid, 80, rng);
      f[0] = 0.7;
      worst = std::max(worst, std::abs(rhs(f)[0]));
    }
    results.push_back(check("rhs mean mode", worst <= 1e-14, "max |rhs(0)| " + sci(worst)));
  }

  {
    ExperimentSpec spec;
    spec.params = params;
    spec.params.nu = 0.0;
    spec.params.beta = std::max(params.beta, 0.0);
    spec.amplitude = 0.01;
    spec.grid_n = 128;
    spec.solver.t_final = 2.0;
    spec.snapshot_count = 0;
    const RunRecord rec = run_experiment(spec);
    bool monotone = rec.stop.kind == StopKind::reached_t_final;
    const double f0 = rec.rows.front().e1 + rec.rows.front().e2;
    for (std::size_t i = 1; i < rec.rows.size(); ++i) {
      const double prev = rec.rows[i - 1].e1 + rec.rows[i - 1].e2;
      const double cur = rec.rows[i].e1 + rec.rows[i].e2;
      if (cur > prev + 10.0 * spec.solver.rtol * f0) monotone = false;
    }
    const double drift = std::abs(rec.rows.back().mean - rec.rows.front().mean);
    results.push_back(check("bbm energy decay", monotone,
                            "F(T)/F(0) = " + sci((rec.rows.back().e1 + rec.rows.back().e2) / f0)));
    results.push_back(check("mean conservation", drift <= 1e-10, "drift " + sci(drift)));
  }

  {
    const GridSpec g8(8);
    SpectralField y0(g8);
    y0[0] = 1.0;
    SolverConfig cfg;
    cfg.t_final = 1.0;
    auto decay = [](const SpectralField& s, SpectralField& out) {
      out = s;
      out *= -1.0;
    };
    const auto res = integrate(decay, y0, cfg);
    const double err = std::abs(res.final_state[0].real() - std::exp(-1.0));
    results.push_back(check("integrator exponential", err < 1e-7, "error " + sci(err)));
  }

  return results;
}

bool selftest_passed(const std::vector<CheckResult>& results) {
  return std::none_of(results.begin(), results.end(),
                      [](const CheckResult& r) { return r.status == CheckStatus::fail; });
}

std::string format_report(const std::vector<CheckResult>& results) {
  std::ostringstream os;
  for (const auto& r : results) {
    const char* status = r.status == CheckStatus::pass ? "PASS"
                         : r.status == CheckStatus::fail ? "FAIL"
                                                         : "SKIP";
    os << status << "  " << r.name;
    for (std::size_t pad = r.name.size(); pad < 28; ++pad) os << ' ';
    os << r.detail << '\n';
  }
  return os.str();
}

}  // namespace arteria
