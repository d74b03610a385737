#include "arteria/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "arteria/errors.hpp"

namespace arteria {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

double parse_number(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto* begin = t.data();
  const auto* end = t.data() + t.size();
  // from_chars rejects a leading '+'.
  if (begin != end && *begin == '+') ++begin;
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (t.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError("key '" + key + "': expected a number, got '" + text + "'");
  }
  return value;
}

long parse_integer(const std::string& key, const std::string& text) {
  const double v = parse_number(key, text);
  if (v != std::floor(v)) throw ConfigError("key '" + key + "': expected an integer, got '" + text + "'");
  return static_cast<long>(v);
}

bool parse_switch(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "on" || t == "true" || t == "1" || t == "yes") return true;
  if (t == "off" || t == "false" || t == "0" || t == "no") return false;
  throw ConfigError("key '" + key + "': expected on/off, got '" + text + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    values.push_back(parse_number(key, item));
  }
  if (values.empty()) throw ConfigError("key '" + key + "': empty list");
  return values;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys{
      "nu",     "eps",        "kappa",     "beta",    "amp",      "n",
      "t_final", "rtol",      "atol",      "s_index", "dealias",  "dealias_fraction",
      "mollify", "variant",   "sample_dt", "dt_min",  "dt_init",  "max_steps",
      "snapshots", "label",   "axis",      "values",  "dt_max"};
  return keys;
}

}  // namespace

ConfigMap parse_config_text(const std::string& text) {
  ConfigMap config;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = normalize_key(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
    config[key] = trim(line.substr(eq + 1));
  }
  return config;
}

ConfigMap read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

ExperimentSpec spec_from_config(const ConfigMap& config) {
  for (const auto& [key, value] : config) {
    if (!known_keys().contains(key)) throw ConfigError("unknown key '" + key + "'");
  }
  auto get = [&](const std::string& key) -> const std::string* {
    const auto it = config.find(key);
    return it == config.end() ? nullptr : &it->second;
  };

  // A sweep axis starts from the standard base for that axis; explicit keys
  // still override it.
  std::optional<SweepAxis> axis;
  if (auto v = get("axis")) axis = parse_sweep_axis(trim(*v));
  ExperimentSpec spec = axis ? default_sweep_spec(*axis) : ExperimentSpec{};
  if (auto v = get("nu")) spec.params.nu = parse_number("nu", *v);
  if (auto v = get("eps")) spec.params.eps = parse_number("eps", *v);
  if (auto v = get("kappa")) spec.params.kappa = parse_number("kappa", *v);
  if (auto v = get("beta")) spec.params.beta = parse_number("beta", *v);
  if (auto v = get("amp")) spec.amplitude = parse_number("amp", *v);
  if (auto v = get("n")) spec.grid_n = static_cast<int>(parse_integer("n", *v));
  if (auto v = get("t_final")) spec.solver.t_final = parse_number("t_final", *v);
  if (auto v = get("rtol")) spec.solver.rtol = parse_number("rtol", *v);
  if (auto v = get("atol")) spec.solver.atol = parse_number("atol", *v);
  if (auto v = get("sample_dt")) spec.solver.sample_dt = parse_number("sample_dt", *v);
  if (auto v = get("dt_min")) spec.solver.dt_min = parse_number("dt_min", *v);
  if (auto v = get("dt_max")) spec.solver.dt_max = parse_number("dt_max", *v);
  if (auto v = get("dt_init")) spec.solver.dt_init = parse_number("dt_init", *v);
  if (auto v = get("max_steps")) spec.solver.max_steps = parse_integer("max_steps", *v);
  if (auto v = get("s_index")) spec.sobolev_index = parse_number("s_index", *v);
  if (auto v = get("dealias")) spec.rhs_options.dealias = parse_switch("dealias", *v);
  if (auto v = get("dealias_fraction")) {
    spec.rhs_options.dealias_fraction = parse_number("dealias_fraction", *v);
  }
  if (auto v = get("snapshots")) spec.snapshot_count = static_cast<int>(parse_integer("snapshots", *v));
  if (auto v = get("label")) spec.label = *v;

  double mollify = 0.0;
  if (auto v = get("mollify")) mollify = parse_number("mollify", *v);
  if (auto v = get("variant")) {
    spec.variant.kind = parse_rhs_kind(trim(*v));
  } else if (mollify > 0.0) {
    spec.variant.kind = RhsKind::mollified;
  }
  if (spec.variant.kind == RhsKind::mollified) spec.variant.mollify_eps = mollify;

  if (axis) {
    if (auto list = get("values")) spec.sweep->values = parse_list("values", *list);
  } else if (get("values")) {
    throw ConfigError("key 'values' requires 'axis'");
  }

  try {
    spec.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

ExperimentSpec parse_config(const ConfigMap& file_values, const ConfigMap& flag_values) {
  ConfigMap merged = file_values;
  for (const auto& [key, value] : flag_values) merged[normalize_key(key)] = value;
  return spec_from_config(merged);
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

void write_diagnostics_csv(std::ostream& os, const std::vector<DiagnosticsRow>& rows) {
  os << kDiagnosticsHeader << '\n';
  for (const auto& r : rows) {
    os << format_double(r.t) << ',' << format_double(r.mean) << ',' << format_double(r.l2) << ','
       << format_double(r.hs_energy) << ',' << format_double(r.lip) << ','
       << format_double(r.inv_lip) << ',' << format_double(r.cum_integral) << ','
       << format_double(r.e1) << ',' << format_double(r.e2) << ',' << format_double(r.d1) << ','
       << format_double(r.d2) << '\n';
  }
}

std::vector<DiagnosticsRow> read_diagnostics_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || trim(line) != kDiagnosticsHeader) {
    throw ConfigError("diagnostics csv: unexpected header");
  }
  std::vector<DiagnosticsRow> rows;
  while (std::getline(is, line)) {
    if (trim(line).empty()) continue;
    std::vector<double> v;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) v.push_back(parse_number("csv", cell));
    if (v.size() != 11) throw ConfigError("diagnostics csv: expected 11 columns");
    rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9], v[10]});
  }
  return rows;
}

void write_snapshot_csv(std::ostream& os, const GridSpec& grid, const Snapshot& snapshot) {
  os << "x,f\n";
  for (int j = 0; j < grid.size(); ++j) {
    os << format_double(grid.node(j)) << ','
       << format_double(snapshot.values[static_cast<std::size_t>(j)]) << '\n';
  }
}

nlohmann::json spec_to_json(const ExperimentSpec& spec) {
  using nlohmann::json;
  json j;
  j["label"] = spec.label;
  j["params"] = {{"nu", spec.params.nu},
                 {"eps", spec.params.eps},
                 {"kappa", spec.params.kappa},
                 {"beta", spec.params.beta}};
  j["amplitude"] = spec.amplitude;
  j["grid_n"] = spec.grid_n;
  j["solver"] = {{"rtol", spec.solver.rtol},
                 {"atol", spec.solver.atol},
                 {"t_final", spec.solver.t_final},
                 {"dt_init", spec.solver.dt_init ? json(*spec.solver.dt_init) : json(nullptr)},
                 {"dt_min", spec.solver.effective_dt_min()},
                 {"dt_max", spec.solver.dt_max},
                 {"max_steps", spec.solver.max_steps},
                 {"sample_dt", spec.solver.effective_sample_dt()},
                 {"output_times", spec.solver.output_times}};
  j["variant"] = {{"kind", spec.variant.name()}, {"mollify_eps", spec.variant.mollify_eps}};
  j["dealias"] = {{"enabled", spec.rhs_options.dealias},
                  {"fraction", spec.rhs_options.dealias_fraction}};
  j["sobolev_index"] = spec.sobolev_index;
  j["snapshot_count"] = spec.snapshot_count;
  if (spec.sweep) {
    j["sweep"] = {{"axis", to_string(spec.sweep->axis)}, {"values", spec.sweep->values}};
  } else {
    j["sweep"] = nullptr;
  }
  return j;
}

ExperimentSpec spec_from_json(const nlohmann::json& j) {
  ExperimentSpec spec;
  spec.label = j.at("label").get<std::string>();
  const auto& p = j.at("params");
  spec.params = {p.at("nu").get<double>(), p.at("eps").get<double>(), p.at("kappa").get<double>(),
                 p.at("beta").get<double>()};
  spec.amplitude = j.at("amplitude").get<double>();
  spec.grid_n = j.at("grid_n").get<int>();
  const auto& s = j.at("solver");
  spec.solver.rtol = s.at("rtol").get<double>();
  spec.solver.atol = s.at("atol").get<double>();
  spec.solver.t_final = s.at("t_final").get<double>();
  if (!s.at("dt_init").is_null()) spec.solver.dt_init = s.at("dt_init").get<double>();
  spec.solver.dt_min = s.at("dt_min").get<double>();
  spec.solver.dt_max = s.at("dt_max").get<double>();
  spec.solver.max_steps = s.at("max_steps").get<long>();
  spec.solver.sample_dt = s.at("sample_dt").get<double>();
  spec.solver.output_times = s.at("output_times").get<std::vector<double>>();
  spec.variant.kind = parse_rhs_kind(j.at("variant").at("kind").get<std::string>());
  spec.variant.mollify_eps = j.at("variant").at("mollify_eps").get<double>();
  spec.rhs_options.dealias = j.at("dealias").at("enabled").get<bool>();
  spec.rhs_options.dealias_fraction = j.at("dealias").at("fraction").get<double>();
  spec.sobolev_index = j.at("sobolev_index").get<double>();
  spec.snapshot_count = j.at("snapshot_count").get<int>();
  if (!j.at("sweep").is_null()) {
    spec.sweep = SweepSpec{parse_sweep_axis(j.at("sweep").at("axis").get<std::string>()),
                           j.at("sweep").at("values").get<std::vector<double>>()};
  }
  return spec;
}

nlohmann::json manifest_to_json(const RunManifest& m) {
  using nlohmann::json;
  json j;
  j["schema_version"] = m.schema_version;
  j["artifact_version"] = m.artifact_version;
  j["spec"] = spec_to_json(m.spec);
  j["started"] = m.started;
  j["finished"] = m.finished;
  j["stop"] = {{"tag", m.stop.tag()}, {"t_stop", m.stop.t_stop}};
  j["output_files"] = m.output_files;
  j["stats"] = {{"accepted", m.stats.accepted},
                {"rejected", m.stats.rejected},
                {"rhs_evaluations", m.stats.rhs_evaluations},
                {"last_dt", m.stats.last_dt},
                {"dt_cap", m.stats.dt_cap}};
  j["wall_time"] = m.wall_time;
  j["inv_lip_sentinel"] = kInvLipSentinel;
  if (m.early) {
    j["early_stop"] = {{"last_t", m.early->last_t},
                       {"last_lip", m.early->last_lip},
                       {"tail_samples", m.early->tail_samples},
                       {"inv_lip_strictly_decreasing", m.early->inv_lip_strictly_decreasing},
                       {"inv_lip_decreasing_fraction", m.early->inv_lip_decreasing_fraction}};
  } else {
    j["early_stop"] = nullptr;
  }
  return j;
}

RunManifest manifest_from_json(const nlohmann::json& j) {
  RunManifest m;
  m.schema_version = j.at("schema_version").get<int>();
  if (m.schema_version != kManifestSchemaVersion) {
    throw ConfigError("unsupported manifest schema version " + std::to_string(m.schema_version));
  }
  m.artifact_version = j.at("artifact_version").get<std::string>();
  m.spec = spec_from_json(j.at("spec"));
  m.started = j.at("started").get<std::string>();
  m.finished = j.at("finished").get<std::string>();
  m.stop = {parse_stop_kind(j.at("stop").at("tag").get<std::string>()),
            j.at("stop").at("t_stop").get<double>()};
  m.output_files = j.at("output_files").get<std::vector<std::string>>();
  const auto& st = j.at("stats");
  m.stats = {st.at("accepted").get<long>(), st.at("rejected").get<long>(),
             st.at("rhs_evaluations").get<long>(), st.at("last_dt").get<double>(),
             st.at("dt_cap").get<double>()};
  m.wall_time = j.at("wall_time").get<double>();
  if (!j.at("early_stop").is_null()) {
    const auto& e = j.at("early_stop");
    m.early = EarlyStopSummary{e.at("last_t").get<double>(), e.at("last_lip").get<double>(),
                               e.at("tail_samples").get<std::size_t>(),
                               e.at("inv_lip_strictly_decreasing").get<bool>(),
                               e.at("inv_lip_decreasing_fraction").get<double>()};
  }
  return m;
}

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::filesystem::filesystem_error("cannot open output file", path,
                                            std::make_error_code(std::errc::io_error));
  }
  out.exceptions(std::ios::failbit | std::ios::badbit);
  return out;
}

}  // namespace

RunManifest write_outputs(const RunRecord& record, const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  RunManifest manifest;
  manifest.spec = record.spec;
  manifest.artifact_version = ARTERIA_VERSION;
  manifest.started = record.started_at;
  manifest.finished = record.finished_at;
  manifest.stop = record.stop;
  manifest.stats = record.stats;
  manifest.wall_time = record.wall_time;
  manifest.early = record.early;

  {
    auto out = open_output(out_dir / "diagnostics.csv");
    write_diagnostics_csv(out, record.rows);
  }
  manifest.output_files.push_back("diagnostics.csv");
  const GridSpec grid(record.spec.grid_n);
  for (std::size_t i = 0; i < record.snapshots.size(); ++i) {
    const std::string name = "snapshot_" + std::to_string(i) + ".csv";
    auto out = open_output(out_dir / name);
    write_snapshot_csv(out, grid, record.snapshots[i]);
    manifest.output_files.push_back(name);
  }
  manifest.output_files.push_back("manifest.json");
  auto out = open_output(out_dir / "manifest.json");
  out << manifest_to_json(manifest).dump(2) << '\n';
  return manifest;
}

std::vector<RunManifest> write_sweep_outputs(const ExperimentSpec& spec,
                                             const std::vector<RunRecord>& records,
                                             const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::vector<RunManifest> manifests;
  auto summary = open_output(out_dir / "sweep_summary.csv");
  summary << "index," << (spec.sweep ? to_string(spec.sweep->axis) : "value")
          << ",stop,t_stop,final_l2,final_lip,directory\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    const std::string dir = "run_" + std::to_string(i);
    manifests.push_back(write_outputs(rec, out_dir / dir));
    const double value = spec.sweep ? spec.sweep->values[i] : 0.0;
    const double l2 = rec.rows.empty() ? 0.0 : rec.rows.back().l2;
    const double lip = rec.rows.empty() ? 0.0 : rec.rows.back().lip;
    summary << i << ',' << format_double(value) << ',' << rec.stop.tag() << ','
            << format_double(rec.stop.t_stop) << ',' << format_double(l2) << ','
            << format_double(lip) << ',' << dir << '\n';
  }
  return manifests;
}

int exit_code_for(const StopReason& stop) { return stop.early() ? kExitEarlyStop : kExitOk; }

std::string plot_script(const std::filesystem::path& run_dir, int snapshot_count) {
  const std::string dir = run_dir.string();
  std::ostringstream os;
  os << "# gnuplot script generated by arteria\n"
     << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set terminal pngcairo size 1200,400\n"
     << "set output '" << dir << "/diagnostics.png'\n"
     << "set multiplot layout 1,2\n"
     << "set xlabel 't'\n"
     << "set title '1/||f_x||_inf'\n"
     << "plot '" << dir << "/diagnostics.csv' using 1:6 with lines\n"
     << "set title 'I(t)'\n"
     << "plot '" << dir << "/diagnostics.csv' using 1:7 with lines\n"
     << "unset multiplot\n";
  if (snapshot_count > 0) {
    os << "set terminal pngcairo size 900,500\n"
       << "set output '" << dir << "/snapshots.png'\n"
       << "set xlabel 'x'\n"
       << "set title 'f(x,t)'\n"
       << "plot ";
    for (int i = 0; i < snapshot_count; ++i) {
      os << (i ? ", \\\n     " : "") << "'" << dir << "/snapshot_" << i
         << ".csv' using 1:2 with lines title 'snapshot " << i << "'";
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace arteria
