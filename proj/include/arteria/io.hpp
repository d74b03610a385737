#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "arteria/experiments.hpp"

namespace arteria {

/// Flat key -> value settings. Keys use underscores (t_final, s_index).
using ConfigMap = std::map<std::string, std::string>;

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitSelftestFailed = 2;
inline constexpr int kExitEarlyStop = 3;
inline constexpr int kExitIoError = 4;

inline constexpr int kManifestSchemaVersion = 1;

/// Reads `key = value` lines; `#` starts a comment. Dashes in keys are
/// normalised to underscores. Throws ConfigError on malformed lines or a
/// missing file.
ConfigMap read_config_file(const std::filesystem::path& path);
ConfigMap parse_config_text(const std::string& text);

/// Builds a spec from defaults overlaid with `config`. Unknown keys,
/// non-numeric values and invalid parameters raise ConfigError naming the key.
ExperimentSpec spec_from_config(const ConfigMap& config);

/// File settings first, then flag overrides.
ExperimentSpec parse_config(const ConfigMap& file_values, const ConfigMap& flag_values);

/// Shortest text that parses back to exactly `v` (17 significant digits at most).
std::string format_double(double v);

inline constexpr const char* kDiagnosticsHeader =
    "t,mean,l2,hs_energy,lip,inv_lip,cum_integral,e1,e2,d1,d2";

void write_diagnostics_csv(std::ostream& os, const std::vector<DiagnosticsRow>& rows);
std::vector<DiagnosticsRow> read_diagnostics_csv(std::istream& is);
void write_snapshot_csv(std::ostream& os, const GridSpec& grid, const Snapshot& snapshot);

nlohmann::json spec_to_json(const ExperimentSpec& spec);
ExperimentSpec spec_from_json(const nlohmann::json& j);

struct RunManifest {
  int schema_version = kManifestSchemaVersion;
  ExperimentSpec spec;
  std::string artifact_version;
  std::string started;
  std::string finished;
  StopReason stop;
  std::vector<std::string> output_files;
  IntegratorStats stats;
  double wall_time = 0.0;
  std::optional<EarlyStopSummary> early;
};

nlohmann::json manifest_to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::json& j);

/// Writes diagnostics.csv, snapshot_<i>.csv and manifest.json into out_dir
/// (created if needed). Throws std::filesystem::filesystem_error or
/// std::ios_base::failure on I/O problems.
RunManifest write_outputs(const RunRecord& record, const std::filesystem::path& out_dir);

/// Writes one subdirectory per record plus sweep_summary.csv.
std::vector<RunManifest> write_sweep_outputs(const ExperimentSpec& spec,
                                             const std::vector<RunRecord>& records,
                                             const std::filesystem::path& out_dir);

/// 0 for reached_t_final, 3 for any early stop.
int exit_code_for(const StopReason& stop);

/// gnuplot script plotting inv_lip, cum_integral and the snapshots in `run_dir`.
std::string plot_script(const std::filesystem::path& run_dir, int snapshot_count);

}  // namespace arteria
