#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "doctest.h"
#include "hypwave/commands.hpp"
#include "json.hpp"

using namespace hypwave;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() / ("hypwave_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const fs::path p = dir / "run.cfg";
  std::ofstream(p) << text;
  return p;
}

struct Result {
  int code;
  std::string out, err;
};

Result run(const std::string& cmd, const fs::path& dir, const std::string& cfg, fs::path out, int jobs = 1) {
  CommandOptions o;
  if (!cfg.empty()) o.config = write_config(dir, cfg);
  o.out = std::move(out);
  o.jobs = jobs;
  std::ostringstream os, es;
  const int code = run_command(cmd, o, os, es);
  return {code, os.str(), es.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> v;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

const char* kSmallSolve = "dt = 0.01\nt_final = 0.5\nn = 512\n";
const char* kSmallTrunc = "rmax = 16\nn = 512\ndt = 0.01\nt_final = 0.5\ndata.modes = 256\n";

}  // namespace

TEST_CASE("solve: minimal config, schema and determinism") {
  TempDir t;
  const auto r = run("solve", t.path, kSmallSolve, t.path / "a");
  CHECK(r.code == kExitOk);
  const auto csv = lines(slurp(t.path / "a" / "solve.csv"));
  REQUIRE(csv.size() > 2);
  CHECK(csv[0] == "# manifest=manifest.json");
  CHECK(csv[1].rfind("t,E,M1,M2,M3,Mtilde,Emod", 0) == 0);
  const auto m = nlohmann::json::parse(slurp(t.path / "a" / "manifest.json"));
  CHECK(m["command"] == "solve");
  CHECK(m["outputs"][0] == "solve.csv");
  CHECK(m["config"]["dt"] == 0.01);
  CHECK(m.contains("version"));
  CHECK(m.contains("started"));

  run("solve", t.path, kSmallSolve, t.path / "b");
  CHECK(slurp(t.path / "a" / "solve.csv") == slurp(t.path / "b" / "solve.csv"));
}

TEST_CASE("solve: errors") {
  TempDir t;
  auto r = run("solve", t.path, "dt = 0\n", t.path / "o");
  CHECK(r.code == kExitConfig);
  CHECK(r.err.find("dt") != std::string::npos);
  r = run("solve", t.path, "dt = 0.01\nbogus = 3\n", t.path / "o");
  CHECK(r.code == kExitConfig);
  CHECK(r.err.find("bogus") != std::string::npos);
  r = run("solve", t.path, "nonlinearity = focusing\ndata.amplitude = 20\nn = 512\n", t.path / "o");
  CHECK(r.code == kExitBlowUp);
  CHECK(run("nonsense", t.path, "", t.path / "o").code == kExitConfig);
}

TEST_CASE("truncation: zero data, report schema, sweep") {
  TempDir t;
  auto r = run("truncation", t.path, std::string(kSmallTrunc) + "data.kind = zero\n", t.path / "z");
  CHECK(r.code == kExitOk);
  const auto csv = lines(slurp(t.path / "z" / "ledger.csv"));
  CHECK(csv[1].rfind("t,E,M1,M2,M3,Mtilde,Emod,dEmod_dt,B,", 0) == 0);
  for (std::size_t i = 2; i < csv.size(); ++i) {
    const auto rest = csv[i].substr(csv[i].find(','));
    CHECK(rest.find_first_not_of(",0") == std::string::npos);
  }

  r = run("truncation", t.path, kSmallTrunc, t.path / "d");
  CHECK(r.code == kExitOk);
  const auto rep = nlohmann::json::parse(slurp(t.path / "d" / "report.json"));
  for (const char* k : {"gronwall_max_ratio", "energy_equivalence_max", "cor35_ratio", "cor46_ratio"}) CHECK(rep.contains(k));
  CHECK(rep["manifest"] == "manifest.json");

  r = run("truncation", t.path, std::string(kSmallTrunc) + "s = 0.1, 0.01, 0.001\n", t.path / "s", 3);
  CHECK(r.code == kExitOk);
  const auto m = nlohmann::json::parse(slurp(t.path / "s" / "manifest.json"));
  CHECK(m["outputs"].size() == 6);
  for (const auto& f : m["outputs"]) CHECK(fs::exists(t.path / "s" / f.get<std::string>()));
  CHECK(fs::exists(t.path / "s" / "ledger_s1.000e-02.csv"));

  // the worker count does not change the bytes
  run("truncation", t.path, std::string(kSmallTrunc) + "s = 0.1, 0.01, 0.001\n", t.path / "s1", 1);
  CHECK(slurp(t.path / "s" / "ledger_s1.000e-03.csv") == slurp(t.path / "s1" / "ledger_s1.000e-03.csv"));
  CHECK(slurp(t.path / "s" / "report_s1.000e-01.json") == slurp(t.path / "s1" / "report_s1.000e-01.json"));
}

TEST_CASE("weights") {
  TempDir t;
  auto r = run("weights", t.path, "family = A1\nrmax = 8\nn = 256\n", t.path / "a1");
  CHECK(r.code == kExitOk);
  const auto csv = lines(slurp(t.path / "a1" / "weights.csv"));
  CHECK(csv[1] == "r,a,a_prime,a_double_prime,lap_a,bilap_a");
  CHECK(std::count(csv[2].begin(), csv[2].end(), ',') == 5);
  auto rep = nlohmann::json::parse(slurp(t.path / "a1" / "weights_report.json"));
  CHECK(rep["all_pass"] == true);

  r = run("weights", t.path, "family = A3\nparam = 1.5\n", t.path / "bad");
  CHECK(r.code == kExitConfig);
  CHECK(r.err.find("(0, 1)") != std::string::npos);

  r = run("weights", t.path, "family = A2\n", t.path / "a2");
  CHECK(r.code == kExitOk);
  rep = nlohmann::json::parse(slurp(t.path / "a2" / "weights_report.json"));
  CHECK(rep["all_pass"] == false);
  for (const auto& c : rep["conditions"]) {
    if (c["name"] == "hessian_radial_positive") {
      CHECK(c["pass"] == false);
      CHECK(c["failing_ranges"][0][0].get<double>() < 0.05);
      CHECK(c["failing_ranges"][0][1].get<double>() < 1.3);
    } else {
      CHECK(c["pass"] == true);
    }
  }
}

TEST_CASE("inequalities and strichartz") {
  TempDir t;
  const std::string small =
      "count = 5\nn = 256\nstrichartz.count = 2\nstrichartz.n = 512\nstrichartz.dt = 0.1\n";
  auto r = run("inequalities", t.path, small, t.path / "ok", 2);
  CHECK(r.code == kExitOk);
  const auto rep = nlohmann::json::parse(slurp(t.path / "ok" / "inequalities.json"));
  CHECK(rep["pass"] == true);
  for (const auto& c : rep["checks"])
    for (const char* k : {"name", "parameters", "max_ratio", "stability_deltas", "pass"}) CHECK(c.contains(k));

  r = run("inequalities", t.path, small + "tolerance = 0\nsobolev_tolerance = 0\n", t.path / "fail");
  CHECK(r.code == kExitSuiteFailure);

  r = run("strichartz", t.path, "p = 3\nq = 3\ngamma = 0.16666666666666667\n", t.path / "n");
  CHECK(r.code == kExitOk);
  CHECK(nlohmann::json::parse(slurp(t.path / "n" / "strichartz.json"))["admissibility"] == "Neither");
  CHECK(r.out.find("Neither") != std::string::npos);

  r = run("strichartz", t.path, "horizons = 5, 10\nrmax = 16\nn = 256\ncount = 3\ndt = 0.05\n", t.path / "p");
  CHECK(r.code == kExitOk);
  CHECK(lines(slurp(t.path / "p" / "strichartz.csv")).size() == 4);
}

#ifdef HYPWAVE_EXE
TEST_CASE("executable: exit codes and HYPWAVE_OUT") {
  TempDir t;
  const std::string exe = HYPWAVE_EXE;
  write_config(t.path, "dt = 0\n");
  CHECK(WEXITSTATUS(std::system((exe + " solve --config " + (t.path / "run.cfg").string() + " 2>/dev/null").c_str())) == 2);
  write_config(t.path, kSmallSolve);
  const std::string env = "HYPWAVE_OUT=" + (t.path / "env").string() + " ";
  CHECK(std::system((env + exe + " solve --config " + (t.path / "run.cfg").string() + " >/dev/null").c_str()) == 0);
  CHECK(fs::exists(t.path / "env" / "solve.csv"));
  CHECK(std::system((exe + " weights --family A1 --out " + (t.path / "w").string() + " --seed 3 >/dev/null").c_str()) == 0);
  CHECK(WEXITSTATUS(std::system((exe + " weights --family A3 --param 1.5 --out " + (t.path / "w2").string() + " 2>/dev/null").c_str())) == 2);
}
#endif
