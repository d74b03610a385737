#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args, const fs::path& capture = {}) {
  std::string cmd = std::string(ARTERIA_CLI_PATH) + " " + args;
  cmd += capture.empty() ? " >/dev/null 2>&1" : " >" + capture.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("arteria_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("selftest exits 0") { CHECK(run_cli("selftest") == 0); }

TEST_CASE("selftest with nu = 0 reports a skip") {
  const auto log = scratch("skip.txt");
  CHECK(run_cli("selftest --nu 0", log) == 0);
  CHECK(slurp(log).find("SKIP  helmholtz identity") != std::string::npos);
  fs::remove(log);
}

TEST_CASE("configuration errors exit 1 with a message naming the key") {
  const auto log = scratch("kappa.txt");
  CHECK(run_cli("run --kappa 0", log) == 1);
  CHECK(slurp(log).find("kappa") != std::string::npos);
  CHECK(run_cli("run --nu fast") == 1);
  CHECK(run_cli("run --no-such-flag 1") == 1);
  CHECK(run_cli("run --dealias sometimes") == 1);
  CHECK(run_cli("run --config /nonexistent/arteria.cfg") == 1);
  CHECK(run_cli("") == 1);
  fs::remove(log);
}

TEST_CASE("completed run exits 0 and writes outputs") {
  const auto out = scratch("run");
  CHECK(run_cli("run --n 64 --t-final 0.5 --out " + out.string()) == 0);
  CHECK(fs::exists(out / "diagnostics.csv"));
  CHECK(fs::exists(out / "snapshot_7.csv"));
  const auto j = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(j.at("stop").at("tag") == "reached_t_final");
  CHECK(j.at("spec").at("grid_n") == 64);
  fs::remove_all(out);
}

TEST_CASE("config file with flag override") {
  const auto cfg = scratch("cfg.txt");
  std::ofstream(cfg) << "# bbm extended run\nnu = 0\nbeta = -1\nt_final = 20\nn = 32\n";
  const auto out = scratch("cfgrun");
  CHECK(run_cli("run --config " + cfg.string() + " --t-final 0.25 --variant bbm --out " + out.string()) == 0);
  const auto j = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(j.at("spec").at("params").at("beta") == -1.0);
  CHECK(j.at("spec").at("solver").at("t_final") == 0.25);
  CHECK(j.at("spec").at("variant").at("kind") == "bbm");
  fs::remove_all(out);
  fs::remove(cfg);
}

TEST_CASE("large amplitude run exits 3 with step_underflow") {
  const auto out = scratch("blowup");
  CHECK(run_cli("run --amp 5 --n 256 --t-final 3 --out " + out.string()) == 3);
  const auto j = nlohmann::json::parse(slurp(out / "manifest.json"));
  CHECK(j.at("stop").at("tag") == "step_underflow");
  CHECK(!j.at("early_stop").is_null());
  fs::remove_all(out);
}

TEST_CASE("unwritable output directory exits 4") {
  const auto blocker = scratch("blocker");
  std::ofstream(blocker) << "file";
  CHECK(run_cli("run --n 32 --t-final 0.1 --out " + (blocker / "sub").string()) == 4);
  fs::remove(blocker);
}

TEST_CASE("sweep and plot-script") {
  const auto out = scratch("sweep");
  CHECK(run_cli("sweep --axis nu --values 0,1 --n 32 --t-final 0.2 --out " + out.string()) == 0);
  CHECK(fs::exists(out / "sweep_summary.csv"));
  CHECK(fs::exists(out / "run_1" / "manifest.json"));
  CHECK(run_cli("sweep --n 32") == 1);

  const auto script = scratch("plot.gp");
  CHECK(run_cli("plot-script " + (out / "run_0").string(), script) == 0);
  CHECK(slurp(script).find("diagnostics.csv") != std::string::npos);
  fs::remove_all(out);
  fs::remove(script);
}
