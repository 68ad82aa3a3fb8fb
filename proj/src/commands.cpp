#include "hypwave/commands.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <fstream>
#include <ostream>
#include <thread>

#include "hypwave/config.hpp"
#include "hypwave/errors.hpp"

#ifndef HYPWAVE_VERSION
#define HYPWAVE_VERSION "unknown"
#endif

namespace hypwave {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifest = "manifest.json";

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fmt17(double x) {
  if (x == 0.0) x = 0.0;  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(const fs::path& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream os(path);
  os << "# manifest=" << kManifest << "\n";
  for (std::size_t j = 0; j < columns.size(); ++j) os << (j ? "," : "") << columns[j];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << fmt17(row[j]);
    os << "\n";
  }
  if (!os) throw std::runtime_error("failed writing " + path.string());
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream os(path);
  os << j.dump(2) << "\n";
  if (!os) throw std::runtime_error("failed writing " + path.string());
}

// One run's bookkeeping; outputs are paths relative to the output directory.
struct Run {
  std::string command;
  fs::path dir;
  std::string started = utc_now();
  json config = json::object();
  std::vector<std::string> outputs;

  Run(std::string name, const CommandOptions& opt) : command(std::move(name)), dir(opt.out) {
    fs::create_directories(dir);
  }
  fs::path file(const std::string& name) {
    outputs.push_back(name);
    return dir / name;
  }
  void finish(std::optional<std::uint64_t> seed) const {
    json m;
    m["command"] = command;
    m["config"] = config;
    m["version"] = HYPWAVE_VERSION;
    m["seed"] = seed ? json(*seed) : json(nullptr);
    m["started"] = started;
    m["finished"] = utc_now();
    m["outputs"] = outputs;
    write_json(dir / kManifest, m);
  }
};

ConfigReader make_reader(const CommandOptions& opt, bool takes_seed) {
  ConfigMap m = opt.config ? read_config_file(*opt.config) : ConfigMap{};
  if (takes_seed && opt.seed) m["seed"] = std::to_string(*opt.seed);
  return ConfigReader(std::move(m));
}

json report_json(const Report& rep) {
  json j = json::object();
  j["manifest"] = kManifest;
  for (const auto& [k, v] : rep) j[k] = json_number(v);
  return j;
}

// Runs f(i) for i < count on up to `jobs` threads; rethrows the first failure.
template <class F>
void parallel_for(std::size_t count, int jobs, F&& f) {
  const std::size_t nthreads = std::max<std::size_t>(1, std::min<std::size_t>(count, jobs > 0 ? jobs : 1));
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::string s_label(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", s);
  return buf;
}

template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ParameterError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const BlowUp& e) {
    err << "runtime error: " << e.what() << "\n";
    return kExitBlowUp;
  }
}

}  // namespace

fs::path default_output_root() {
  const char* env = std::getenv("HYPWAVE_OUT");
  return env && *env ? fs::path(env) : fs::path("hypwave_out");
}

int cmd_solve(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ConfigReader reader = make_reader(opt, true);
    const SolveConfig c = load_solve(reader);
    Run run("solve", opt);
    run.config = reader.resolved();

    const RadialGrid grid(c.rmax, c.n);
    const WaveState st = make_initial_data(grid, c.data, c.delta, c.seed);
    const auto w = TruncationWeights::build(grid, c.alpha, c.alpha_tilde);
    const Nonlinearity nl = c.integrator.nonlinearity;
    Observer obs{{"E", "M1", "M2", "M3", "Mtilde", "Emod", "L4"}, [&](const WaveState& s) {
                   const double E = energy(s, nl);
                   const double m1 = morawetz_potential(s, w.a1), m2 = morawetz_potential(s, w.a2);
                   const double m3 = morawetz_potential(s, w.a3), mt = modified_potential(s, w.a4);
                   const double em = E - c.c1 * m1 - c.c2 * m2 - c.c3 * m3 - c.c4 * mt;
                   return std::vector<double>{E, m1, m2, m3, mt, em, l4_norm4(s.u)};
                 }};
    const TimeSeries ts = evolve(st, c.integrator, {obs});
    write_csv(run.file("solve.csv"), ts.columns, ts.rows);
    run.finish(c.seed);
    const auto E = ts.column("E");
    out << "solve: " << ts.rows.size() << " snapshots, E(0) = " << fmt17(E.front())
        << ", relative drift = " << fmt17(E.front() != 0.0 ? (E.back() - E.front()) / E.front() : 0.0) << "\n";
    return kExitOk;
  });
}

int cmd_truncation(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ConfigReader reader = make_reader(opt, true);
    const TruncationJob job = load_truncation(reader);
    Run run("truncation", opt);
    run.config = reader.resolved();

    const std::size_t m = job.s_values.size();
    std::vector<ExperimentResult> results(m);
    parallel_for(m, opt.jobs, [&](std::size_t i) {
      TruncationConfig c = job.base;
      c.s = job.s_values[i];
      results[i] = run_experiment(c);
    });

    bool ok = true;
    for (std::size_t i = 0; i < m; ++i) {
      const std::string tag = m == 1 ? "" : "_s" + s_label(job.s_values[i]);
      write_csv(run.file("ledger" + tag + ".csv"), ledger_columns(), results[i].ledger.rows);
      write_json(run.file("report" + tag + ".json"), report_json(results[i].report));
      const auto& rep = results[i].report;
      const bool flagged = rep.at("energy_equivalence_ok") == 0.0;
      ok = ok && !flagged;
      out << "s = " << fmt17(job.s_values[i]) << ": gronwall_max_ratio = " << fmt17(rep.at("gronwall_max_ratio"))
          << ", closure = " << fmt17(rep.at("gronwall_closure_constant"))
          << ", Emod/E in [" << fmt17(rep.at("energy_equivalence_min_ratio")) << ", "
          << fmt17(rep.at("energy_equivalence_max_ratio")) << "]" << (flagged ? "  FLAGGED" : "") << "\n";
    }
    run.finish(job.base.seed);
    return ok ? kExitOk : kExitSuiteFailure;
  });
}

int cmd_weights(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ConfigMap m = opt.config ? read_config_file(*opt.config) : ConfigMap{};
    if (opt.family) m["family"] = *opt.family;
    if (opt.param) m["param"] = fmt17(*opt.param);
    ConfigReader reader(std::move(m));
    const WeightsConfig c = load_weights(reader);
    Run run("weights", opt);
    run.config = reader.resolved();

    const RadialGrid grid(c.rmax, c.n);
    const MorawetzWeight w = build_weight(c.family, grid, c.param);
    {
      std::ofstream os(run.file("weights.csv"));
      os << "# manifest=" << kManifest << "\n";
      write_weight_csv(os, w);
    }
    const ConditionReport rep = validate_conditions(w);
    json j;
    j["manifest"] = kManifest;
    j["family"] = to_string(c.family);
    j["param"] = c.param;
    j["all_pass"] = rep.all_pass();
    j["conditions"] = json::array();
    for (const auto& cond : rep.conditions) {
      json ranges = json::array();
      for (const auto& [lo, hi] : cond.failing_ranges) ranges.push_back({lo, hi});
      j["conditions"].push_back({{"name", cond.name},
                                 {"pass", cond.pass},
                                 {"failing_nodes", cond.failing_nodes},
                                 {"failing_ranges", ranges},
                                 {"worst_margin", json_number(cond.worst_margin)}});
      out << cond.name << ": " << (cond.pass ? "pass" : "FAIL");
      for (const auto& [lo, hi] : cond.failing_ranges) out << " [" << fmt17(lo) << ", " << fmt17(hi) << "]";
      out << "\n";
    }
    write_json(run.file("weights_report.json"), j);
    run.finish(std::nullopt);
    return kExitOk;
  });
}

int cmd_inequalities(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ConfigReader reader = make_reader(opt, true);
    SuiteConfig c = load_suite(reader);
    c.jobs = opt.jobs;
    Run run("inequalities", opt);
    run.config = reader.resolved();

    const auto checks = run_inequality_suite(c);
    bool ok = true;
    json j;
    j["manifest"] = kManifest;
    j["checks"] = json::array();
    for (const auto& ch : checks) {
      json params = json::object();
      for (const auto& [k, v] : ch.parameters) params[k] = json_number(v);
      json deltas = json::array();
      for (double d : ch.stability_deltas) deltas.push_back(json_number(d));
      j["checks"].push_back({{"name", ch.name},
                             {"parameters", params},
                             {"max_ratio", json_number(ch.max_ratio)},
                             {"stability_deltas", deltas},
                             {"pass", ch.pass}});
      ok = ok && ch.pass;
      out << ch.name << ": " << (ch.pass ? "pass" : "FAIL") << " (max ratio " << fmt17(ch.max_ratio) << ")\n";
    }
    j["strichartz_cases"] = json::array();
    for (const auto& cs : strichartz_boundary_cases())
      j["strichartz_cases"].push_back({{"p", json_number(cs.t.p)},
                                       {"q", json_number(cs.t.q)},
                                       {"gamma", cs.t.gamma},
                                       {"classified", to_string(strichartz_admissible(cs.t))}});
    j["pass"] = ok;
    write_json(run.file("inequalities.json"), j);
    run.finish(c.seed);
    return ok ? kExitOk : kExitSuiteFailure;
  });
}

int cmd_strichartz(const CommandOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ConfigReader reader = make_reader(opt, true);
    const StrichartzConfig c = load_strichartz(reader);
    Run run("strichartz", opt);
    run.config = reader.resolved();

    const Admissibility adm = strichartz_admissible(c.triple);
    json j;
    j["manifest"] = kManifest;
    j["triple"] = {json_number(c.triple.p), json_number(c.triple.q), c.triple.gamma};
    j["admissibility"] = to_string(adm);
    const std::string label =
        "triple (" + fmt17(c.triple.p) + ", " + fmt17(c.triple.q) + ", " + fmt17(c.triple.gamma) + "): " + to_string(adm);
    if (adm == Admissibility::Neither) {
      // no estimate is claimed, so there is nothing to probe
      write_json(run.file("strichartz.json"), j);
      run.finish(c.ensemble.seed);
      out << label << ", not probed\n";
      return kExitOk;
    }
    const RadialGrid grid(c.rmax, c.n);
    const auto consts = strichartz_probe({c.triple}, c.ensemble, c.horizons, grid, c.dt, opt.jobs).front();

    std::vector<std::vector<double>> rows;
    json deltas = json::array();
    bool stable = true;
    for (std::size_t i = 0; i < consts.size(); ++i) {
      rows.push_back({c.horizons[i], consts[i]});
      if (i > 0) {
        const double d = consts[i - 1] != 0.0 ? std::abs(consts[i] / consts[i - 1] - 1.0) : 0.0;
        deltas.push_back(json_number(d));
        stable = stable && d <= c.tolerance;
      }
    }
    write_csv(run.file("strichartz.csv"), {"T", "constant"}, rows);
    j["stability_deltas"] = deltas;
    j["stable"] = stable;
    write_json(run.file("strichartz.json"), j);
    run.finish(c.ensemble.seed);
    out << label << ", " << (stable ? "stable" : "UNSTABLE") << "\n";
    return stable ? kExitOk : kExitSuiteFailure;
  });
}

int run_command(const std::string& name, const CommandOptions& opt, std::ostream& out, std::ostream& err) {
  if (name == "solve") return cmd_solve(opt, out, err);
  if (name == "truncation") return cmd_truncation(opt, out, err);
  if (name == "weights") return cmd_weights(opt, out, err);
  if (name == "inequalities") return cmd_inequalities(opt, out, err);
  if (name == "strichartz") return cmd_strichartz(opt, out, err);
  err << "unknown command '" << name << "'\n";
  return kExitConfig;
}

}  // namespace hypwave
