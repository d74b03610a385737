// arteria: command-line driver for single runs, parameter sweeps, the
// built-in self test and gnuplot script generation.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "arteria/errors.hpp"
#include "arteria/experiments.hpp"
#include "arteria/io.hpp"
#include "arteria/selftest.hpp"

namespace {

using arteria::ConfigMap;

struct CommonFlags {
  ConfigMap values;
  std::string config_path;
  std::string out_dir = "arteria_out";
};

// Registers every model/solver flag as a string so that parsing, defaults and
// error messages all go through spec_from_config.
void add_model_flags(CLI::App* cmd, CommonFlags& flags) {
  struct Flag {
    const char* name;
    const char* key;
    const char* help;
  };
  static const Flag table[] = {
      {"--nu", "nu", "viscoelastic coefficient (>= 0)"},
      {"--eps", "eps", "asymptotic parameter (> 0)"},
      {"--kappa", "kappa", "friction coefficient (> 0)"},
      {"--beta", "beta", "wall elasticity"},
      {"--amp", "amp", "initial amplitude A"},
      {"--n", "n", "grid points (even, >= 8)"},
      {"--t-final", "t_final", "final time"},
      {"--rtol", "rtol", "relative tolerance"},
      {"--atol", "atol", "absolute tolerance"},
      {"--s-index", "s_index", "Sobolev index of the energy diagnostic"},
      {"--dealias", "dealias", "2/3-rule dealiasing {on,off}"},
      {"--mollify", "mollify", "heat-kernel mollifier epsilon"},
      {"--variant", "variant", "right-hand side {general,bbm,mollified}"},
      {"--sample-dt", "sample_dt", "diagnostic sampling interval"},
      {"--dt-min", "dt_min", "smallest admissible step"},
      {"--dt-max", "dt_max", "largest admissible step (capped by linear stability)"},
      {"--max-steps", "max_steps", "accepted step budget"},
      {"--snapshots", "snapshots", "number of evenly spaced snapshots"},
      {"--label", "label", "run label"},
  };
  for (const auto& f : table) {
    const std::string key = f.key;
    cmd->add_option_function<std::string>(
        f.name, [&flags, key](const std::string& v) { flags.values[key] = v; }, f.help);
  }
  cmd->add_option("--config", flags.config_path, "flat key = value config file");
}

arteria::ExperimentSpec resolve_spec(const CommonFlags& flags) {
  ConfigMap file_values;
  if (!flags.config_path.empty()) file_values = arteria::read_config_file(flags.config_path);
  return arteria::parse_config(file_values, flags.values);
}

void print_summary(const arteria::RunRecord& rec, std::ostream& os) {
  os << rec.spec.label << ": " << rec.stop.tag() << " at t = " << rec.stop.t_stop << " ("
     << rec.stats.accepted << " steps, " << rec.stats.rejected << " rejected, " << rec.wall_time
     << " s)\n";
  if (rec.early) {
    os << "  last lip = " << rec.early->last_lip << ", inv_lip strictly decreasing over last "
       << rec.early->tail_samples << " samples: "
       << (rec.early->inv_lip_strictly_decreasing ? "yes" : "no") << '\n';
  }
}

// Snapshot files listed in a run's manifest; 8 when there is no manifest.
int snapshot_count(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) return 8;
  const auto manifest = arteria::manifest_from_json(nlohmann::json::parse(in));
  int count = 0;
  for (const auto& name : manifest.output_files) count += name.starts_with("snapshot_");
  return count;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral solver for a unidirectional viscoelastic blood flow model"};
  app.require_subcommand(1);

  CommonFlags run_flags, sweep_flags, selftest_flags;
  auto* run = app.add_subcommand("run", "integrate one configuration and write outputs");
  add_model_flags(run, run_flags);
  run->add_option("--out", run_flags.out_dir, "output directory");

  auto* sweep = app.add_subcommand("sweep", "run a parameter sweep");
  add_model_flags(sweep, sweep_flags);
  sweep->add_option("--out", sweep_flags.out_dir, "output directory");
  std::string axis;
  std::string values;
  sweep->add_option("--axis", axis, "swept quantity {nu,amplitude,beta}")->required();
  sweep->add_option("--values", values, "comma-separated values (default: standard matrix)");

  auto* selftest = app.add_subcommand("selftest", "run built-in invariant checks");
  add_model_flags(selftest, selftest_flags);

  std::string plot_dir;
  std::optional<int> plot_snapshots;
  auto* plot = app.add_subcommand("plot-script", "emit a gnuplot script for a run directory");
  plot->add_option("dir", plot_dir, "run output directory")->required();
  plot->add_option("--snapshots", plot_snapshots,
                   "number of snapshot files (default: read from manifest.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return arteria::kExitConfigError;
  }

  try {
    if (*run) {
      const auto spec = resolve_spec(run_flags);
      const auto record = arteria::run_experiment(spec);
      arteria::write_outputs(record, run_flags.out_dir);
      print_summary(record, std::cout);
      return arteria::exit_code_for(record.stop);
    }
    if (*sweep) {
      sweep_flags.values["axis"] = axis;
      if (!values.empty()) sweep_flags.values["values"] = values;
      const auto spec = resolve_spec(sweep_flags);
      const auto records = arteria::run_sweep(spec);
      arteria::write_sweep_outputs(spec, records, sweep_flags.out_dir);
      bool any_early = false;
      for (const auto& rec : records) {
        print_summary(rec, std::cout);
        any_early = any_early || rec.stop.early();
      }
      return any_early ? arteria::kExitEarlyStop : arteria::kExitOk;
    }
    if (*selftest) {
      const auto spec = resolve_spec(selftest_flags);
      const auto results = arteria::run_selftest({spec.params, {}});
      std::cout << arteria::format_report(results);
      if (!arteria::selftest_passed(results)) {
        for (const auto& r : results) {
          if (r.status == arteria::CheckStatus::fail) std::cerr << "failed: " << r.name << '\n';
        }
        return arteria::kExitSelftestFailed;
      }
      return arteria::kExitOk;
    }
    if (*plot) {
      std::cout << arteria::plot_script(plot_dir, plot_snapshots.value_or(snapshot_count(plot_dir)));
      return arteria::kExitOk;
    }
  } catch (const arteria::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return arteria::kExitConfigError;
  } catch (const arteria::ParameterError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return arteria::kExitConfigError;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return arteria::kExitIoError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "i/o error: unreadable manifest: " << e.what() << '\n';
    return arteria::kExitIoError;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return arteria::kExitIoError;
  }
  return arteria::kExitOk;
}
