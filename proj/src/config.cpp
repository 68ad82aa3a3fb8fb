#include "hypwave/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include "hypwave/errors.hpp"

namespace hypwave {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto c = s.find(',', pos);
    out.push_back(trim(s.substr(pos, c == std::string::npos ? std::string::npos : c - pos)));
    if (c == std::string::npos) break;
    pos = c + 1;
  }
  return out;
}

}  // namespace

nlohmann::json json_number(double x) {
  if (std::isfinite(x)) return x;
  return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

ConfigMap parse_config(std::istream& in) {
  ConfigMap m;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno), "expected `key = value`");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno), "empty key");
    if (value.empty()) throw ConfigError(key, "missing value");
    if (!m.emplace(key, value).second) throw ConfigError(key, "given more than once");
  }
  return m;
}

ConfigMap read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  return parse_config(in);
}

double parse_number(const std::string& key, const std::string& text) {
  double x = 0.0;
  const char* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, x);
  if (ec != std::errc() || p != end) throw ConfigError(key, "not a number: '" + text + "'");
  return x;
}

const std::string* ConfigReader::raw(const std::string& key) {
  used_.insert(key);
  const auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

double ConfigReader::get(const std::string& key, double fallback) {
  const auto* s = raw(key);
  const double x = s ? parse_number(key, *s) : fallback;
  resolved_[key] = json_number(x);
  return x;
}

int ConfigReader::get(const std::string& key, int fallback) {
  const auto* s = raw(key);
  int x = fallback;
  if (s) {
    const char* end = s->data() + s->size();
    auto [p, ec] = std::from_chars(s->data(), end, x);
    if (ec != std::errc() || p != end) throw ConfigError(key, "not an integer: '" + *s + "'");
  }
  resolved_[key] = x;
  return x;
}

std::uint64_t ConfigReader::get(const std::string& key, std::uint64_t fallback) {
  const auto* s = raw(key);
  std::uint64_t x = fallback;
  if (s) {
    const char* end = s->data() + s->size();
    auto [p, ec] = std::from_chars(s->data(), end, x);
    if (ec != std::errc() || p != end) throw ConfigError(key, "not an unsigned integer: '" + *s + "'");
  }
  resolved_[key] = x;
  return x;
}

std::string ConfigReader::get(const std::string& key, const std::string& fallback) {
  const auto* s = raw(key);
  std::string x = s ? *s : fallback;
  resolved_[key] = x;
  return x;
}

std::vector<double> ConfigReader::get_list(const std::string& key, const std::vector<double>& fallback) {
  const auto* s = raw(key);
  std::vector<double> x = fallback;
  if (s) {
    x.clear();
    for (const auto& item : split_list(*s)) x.push_back(parse_number(key, item));
  }
  auto arr = nlohmann::json::array();
  for (double v : x) arr.push_back(json_number(v));
  resolved_[key] = arr.size() == 1 ? arr[0] : arr;
  return x;
}

void ConfigReader::finish() const {
  std::string unknown;
  for (const auto& [k, v] : entries_)
    if (!used_.count(k)) unknown += (unknown.empty() ? "" : ", ") + k;
  if (!unknown.empty()) throw ConfigError(unknown, "unknown key");
}

DataSpec read_data_spec(ConfigReader& r, const DataSpec& d0) {
  DataSpec d = d0;
  const std::string kind = r.get("data.kind", to_string(d0.kind));
  try {
    d.kind = parse_data_kind(kind);
  } catch (const std::exception& e) {
    throw ConfigError("data.kind", e.what());
  }
  d.amplitude = r.get("data.amplitude", d0.amplitude);
  d.velocity = r.get("data.velocity", d0.velocity);
  d.radius = r.get("data.radius", d0.radius);
  d.center = r.get("data.center", d0.center);
  d.norm = r.get("data.norm", d0.norm);
  d.velocity_norm = r.get("data.velocity_norm", d0.velocity_norm);
  d.modes = r.get("data.modes", d0.modes);
  d.decay = r.get("data.decay", d0.decay);
  if (d.kind != DataKind::Zero && !(d.radius > 0.0)) throw ConfigError("data.radius", "must be positive");
  if (d.kind == DataKind::Rough && d.modes < 1) throw ConfigError("data.modes", "must be at least 1");
  return d;
}

SolveConfig load_solve(ConfigReader& r) {
  SolveConfig c;
  c.rmax = r.get("rmax", c.rmax);
  c.n = r.get("n", c.n);
  c.delta = r.get("delta", c.delta);
  c.seed = r.get("seed", c.seed);
  auto& ic = c.integrator;
  ic.dt = r.get("dt", ic.dt);
  ic.t_final = r.get("t_final", ic.t_final);
  ic.observer_stride = r.get("stride", ic.observer_stride);
  ic.blowup_ceiling = r.get("blowup_ceiling", ic.blowup_ceiling);
  const std::string nl = r.get("nonlinearity", std::string("defocusing"));
  if (nl == "defocusing") ic.nonlinearity = Nonlinearity::Defocusing;
  else if (nl == "focusing") ic.nonlinearity = Nonlinearity::Focusing;
  else if (nl == "none") ic.nonlinearity = Nonlinearity::None;
  else throw ConfigError("nonlinearity", "expected defocusing, focusing or none");
  c.alpha = r.get("alpha", c.alpha);
  c.alpha_tilde = r.get("alpha_tilde", c.alpha_tilde);
  c.c1 = r.get("c1", c.c1);
  c.c2 = r.get("c2", c.c2);
  c.c3 = r.get("c3", c.c3);
  c.c4 = r.get("c4", c.c4);
  c.data = read_data_spec(r, c.data);
  r.finish();

  if (!(c.rmax > 0.0)) throw ConfigError("rmax", "must be positive");
  if (c.n < 8) throw ConfigError("n", "must be at least 8");
  if (!(c.delta > 0.0)) throw ConfigError("delta", "must be positive");
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) throw ConfigError("alpha", "must lie in (0, 1)");
  if (!(c.alpha_tilde > 0.0 && c.alpha_tilde < c.alpha)) throw ConfigError("alpha_tilde", "must lie in (0, alpha)");
  ic.support_radius = c.data.kind == DataKind::Zero ? 0.0 : c.data.support_radius();
  ic.validate();
  check_boundary_guard(RadialGrid(c.rmax, c.n), ic.support_radius, ic.t_final);
  return c;
}

TruncationJob load_truncation(ConfigReader& r) {
  TruncationJob j;
  auto& c = j.base;
  c.delta = r.get("delta", c.delta);
  c.delta1 = r.get("delta1", c.delta1);
  j.s_values = r.get_list("s", {c.s});
  c.c1 = r.get("c1", c.c1);
  c.c2 = r.get("c2", c.c2);
  c.c3 = r.get("c3", c.c3);
  c.c4 = r.get("c4", c.c4);
  c.alpha = r.get("alpha", c.alpha);
  c.alpha_tilde = r.get("alpha_tilde", c.alpha_tilde);
  c.rmax = r.get("rmax", c.rmax);
  c.n = r.get("n", c.n);
  c.dt = r.get("dt", c.dt);
  c.t_final = r.get("t_final", c.t_final);
  c.seed = r.get("seed", c.seed);
  c.stride = r.get("stride", c.stride);
  c.data = read_data_spec(r, c.data);
  r.finish();
  if (j.s_values.empty()) throw ConfigError("s", "needs at least one value");
  for (double s : j.s_values) {
    TruncationConfig t = c;
    t.s = s;
    t.validate();
  }
  c.s = j.s_values.front();
  return j;
}

WeightsConfig load_weights(ConfigReader& r) {
  WeightsConfig c;
  const std::string fam = r.get("family", to_string(c.family));
  try {
    c.family = parse_weight_family(fam);
  } catch (const std::exception& e) {
    throw ConfigError("family", e.what());
  }
  const bool has_param = r.has("param");
  c.param = r.get("param", c.param);
  c.rmax = r.get("rmax", c.rmax);
  c.n = r.get("n", c.n);
  r.finish();
  const bool exponent = c.family == WeightFamily::A3 || c.family == WeightFamily::A4;
  if (exponent && !(c.param > 0.0 && c.param < 1.0))
    throw ConfigError("param", to_string(c.family) + " exponent must lie in (0, 1), got " + std::to_string(c.param));
  if (!exponent && has_param) throw ConfigError("param", to_string(c.family) + " takes no exponent");
  if (!(c.rmax > 0.0)) throw ConfigError("rmax", "must be positive");
  if (c.n < 8) throw ConfigError("n", "must be at least 8");
  return c;
}

SuiteConfig load_suite(ConfigReader& r) {
  SuiteConfig c;
  c.seed = r.get("seed", c.seed);
  c.count = r.get("count", c.count);
  c.rmax = r.get("rmax", c.rmax);
  c.n = r.get("n", c.n);
  c.delta = r.get("delta", c.delta);
  c.alpha = r.get("alpha", c.alpha);
  c.tolerance = r.get("tolerance", c.tolerance);
  c.sobolev_tolerance = r.get("sobolev_tolerance", c.sobolev_tolerance);
  c.strichartz_count = r.get("strichartz.count", c.strichartz_count);
  c.strichartz_rmax = r.get("strichartz.rmax", c.strichartz_rmax);
  c.strichartz_n = r.get("strichartz.n", c.strichartz_n);
  c.strichartz_dt = r.get("strichartz.dt", c.strichartz_dt);
  r.finish();
  c.validate();
  return c;
}

StrichartzConfig load_strichartz(ConfigReader& r) {
  StrichartzConfig c;
  c.triple.p = r.get("p", c.triple.p);
  c.triple.q = r.get("q", c.triple.q);
  c.triple.gamma = r.get("gamma", c.triple.gamma);
  c.horizons = r.get_list("horizons", c.horizons);
  c.ensemble.seed = r.get("seed", c.ensemble.seed);
  c.ensemble.count = r.get("count", c.ensemble.count);
  c.rmax = r.get("rmax", c.rmax);
  c.n = r.get("n", c.n);
  c.dt = r.get("dt", c.dt);
  c.tolerance = r.get("tolerance", c.tolerance);
  r.finish();
  if (c.horizons.empty()) throw ConfigError("horizons", "needs at least one value");
  double tmax = 0.0;
  for (double T : c.horizons) {
    if (!(T > 0.0)) throw ConfigError("horizons", "must be positive");
    tmax = std::max(tmax, T);
  }
  if (!(c.dt > 0.0)) throw ConfigError("dt", "must be positive");
  if (c.n < 8) throw ConfigError("n", "must be at least 8");
  if (!(c.tolerance >= 0.0)) throw ConfigError("tolerance", "must be nonnegative");
  // bumps live in r < 4
  if (!(c.rmax >= 4.0 + tmax + 1.0)) throw ConfigError("rmax", "must be at least 5 + largest horizon");
  c.ensemble.validate();
  return c;
}

}  // namespace hypwave
