#include "hypwave/inequality_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <span>
#include <thread>

#include "hypwave/data.hpp"
#include "hypwave/solver.hpp"
#include "hypwave/spectral.hpp"

namespace hypwave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double recip(double x) { return std::isinf(x) ? 0.0 : 1.0 / x; }

bool close(double a, double b) { return std::abs(a - b) <= 1e-12; }

// Runs f(i) for i in [0, count) on up to `jobs` threads.
template <typename F>
void parallel_for(int count, int jobs, F&& f) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs == 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j)
    pool.emplace_back([&, j] {
      for (int i = j; i < count; i += jobs) f(i);
    });
  for (auto& t : pool) t.join();
}

double inner_gradient_norm(const RadialField& f) {
  const RadialField fr = spectral_radial_derivative(f);
  const auto& g = f.grid();
  std::vector<double> F(f.size(), 0.0);
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double r = g.node(i);
    if (r >= 1.0 - 1e-12) break;
    const double sh = std::sinh(r);
    F[i] = fr[i] * fr[i] * sh * sh;
  }
  return std::sqrt(kFourPi * integrate_samples(g, F, Region::Inner));
}

// ||f||_{L^q} from samples, with integer q handled by repeated products.
double lq_norm(const RadialGrid& g, std::span<const double> f, std::span<const double> sh2, double q,
               std::vector<double>& F) {
  if (std::isinf(q)) {
    double m = 0.0;
    for (double x : f) m = std::max(m, std::abs(x));
    return m;
  }
  const int iq = static_cast<int>(q);
  const bool integer = static_cast<double>(iq) == q;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = std::abs(f[i]);
    double v = 1.0;
    if (integer)
      for (int k = 0; k < iq; ++k) v *= a;
    else
      v = std::pow(a, q);
    F[i] = v * sh2[i];
  }
  return std::pow(kFourPi * integrate_samples(g, F, Region::All), 1.0 / q);
}

double relative_change(double a, double b) { return a != 0.0 ? std::abs(b / a - 1.0) : (b == 0.0 ? 0.0 : kInf); }

}  // namespace

std::string to_string(Admissibility a) {
  switch (a) {
    case Admissibility::InR: return "InR";
    case Admissibility::InE: return "InE";
    case Admissibility::Neither: return "Neither";
  }
  return "?";
}

bool exponents_in_range(const StrichartzTriple& t) { return t.p >= 2.0 && t.q >= 2.0; }

bool in_region_r(const StrichartzTriple& t) {
  if (!exponents_in_range(t)) return false;
  const double ip = recip(t.p), iq = recip(t.q);
  return ip + iq <= 0.5 + 1e-15 && close(t.gamma, 1.5 - ip - 3.0 * iq);
}

bool in_region_e(const StrichartzTriple& t) {
  if (!exponents_in_range(t)) return false;
  const double ip = recip(t.p), iq = recip(t.q);
  if (!close(t.gamma, 1.0 - 2.0 * iq)) return false;
  if (t.p == 2.0) return iq > 0.0 && iq < 1.0 / 3.0;
  return 0.5 - ip <= iq + 1e-15 && iq <= 0.5 - ip / 3.0 + 1e-15;
}

Admissibility strichartz_admissible(const StrichartzTriple& t) {
  if (in_region_r(t)) return Admissibility::InR;
  if (in_region_e(t)) return Admissibility::InE;
  return Admissibility::Neither;
}

const std::vector<ClassifierCase>& strichartz_boundary_cases() {
  static const std::vector<ClassifierCase> cases{
      {{4.0, 4.0, 0.5}, true, true},              // 1/4 + 1/4 = 1/2
      {{kInf, 2.0, 0.0}, true, true},             // energy endpoint
      {{2.0, 4.0, 0.5}, false, true},             // p = 2 branch, 1/q = 1/4 < 1/3
      {{3.0, 3.0, 1.0 / 6.0}, false, false},      // 2/3 > 1/2, and gamma != 1/3
      {{3.0, 3.0, 1.0 / 3.0}, false, true},       // 1/6 <= 1/3 <= 7/18
      {{6.0, 3.0, 1.0 / 3.0}, true, true},        // 1/6 + 1/3 = 1/2, both gammas 1/3
      {{kInf, 6.0, 1.0}, true, false},            // p = inf forces q = 2 in E
      {{2.0, kInf, 1.0}, true, false},            // 1/q = 0 excluded from the p = 2 branch
      {{2.0, 3.0, 1.0 / 3.0}, false, false},      // 1/q = 1/3 not < 1/3
      {{2.0, 6.0, 1.0 / 3.0}, false, false},      // E needs gamma = 2/3
      {{4.0, 4.0, 0.4}, false, false},            // wrong gamma
      {{1.5, 4.0, 0.5}, false, false},            // p < 2
  };
  return cases;
}

void EnsembleSpec::validate() const {
  if (count < 1) throw ConfigError("count", "ensemble needs at least one member");
  if (kind == EnsembleKind::Spectral && modes < 1) throw ConfigError("modes", "must be at least 1");
  if (!(radius > 0.0)) throw ConfigError("radius", "must be positive");
}

RadialField ensemble_member(const RadialGrid& grid, const EnsembleSpec& e, int i) {
  std::seed_seq seq{static_cast<std::uint64_t>(e.seed), static_cast<std::uint64_t>(i), std::uint64_t{0x9e3779b9}};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  RadialField f(grid);
  if (e.kind == EnsembleKind::Bumps) {
    const double center = 2.0 * U(rng);
    const double radius = 0.5 + 1.5 * U(rng);
    const double amp = (0.5 + U(rng)) * (U(rng) < 0.5 ? -1.0 : 1.0);
    f = RadialField::from_function(grid, [&](double r) { return bump_profile(r, amp, center, radius); });
  } else {
    std::normal_distribution<double> gauss(0.0, 1.0);
    SpectralField c(grid);
    const auto modes = static_cast<std::size_t>(e.modes);
    for (std::size_t k = 1; k <= modes; ++k) {
      const double g = gauss(rng);
      if (k <= grid.size()) c.coeffs[k - 1] = std::pow(eigenvalue(grid, k), e.decay) * g;
    }
    f = inverse(c);
    for (std::size_t j = 0; j < f.size(); ++j) f[j] *= smooth_cutoff(grid.node(j) / e.radius);
  }
  const double n = sobolev_norm(f, 0.0);
  if (n > 0.0) f *= e.norm / n;
  return f;
}

std::vector<std::vector<double>> strichartz_probe(const std::vector<StrichartzTriple>& triples, const EnsembleSpec& e,
                                                  const std::vector<double>& horizons, const RadialGrid& grid,
                                                  double dt_sample, int jobs) {
  e.validate();
  for (const auto& t : triples)
    if (strichartz_admissible(t) == Admissibility::Neither)
      throw ParameterError("triple is not Strichartz admissible");
  if (horizons.empty()) throw ParameterError("need at least one horizon");
  for (double T : horizons)
    if (!(T > 0.0)) throw ParameterError("horizon must be positive");
  if (!(dt_sample > 0.0)) throw ParameterError("time sampling step must be positive");
  const double Tmax = *std::max_element(horizons.begin(), horizons.end());
  const long N = static_cast<long>(std::ceil(Tmax / dt_sample - 1e-9));
  const double dt = Tmax / static_cast<double>(N);
  std::vector<long> at(horizons.size());
  for (std::size_t h = 0; h < horizons.size(); ++h) at[h] = std::lround(horizons[h] / dt);

  const auto basis = SineBasis::get(grid);
  const auto L = basis->eigenvalues();
  const std::size_t m = grid.size();
  const std::size_t nt = triples.size(), nh = horizons.size();
  std::vector<double> sh2(m);
  for (std::size_t k = 0; k < m; ++k) sh2[k] = basis->sinh_r()[k] * basis->sinh_r()[k];

  // per[member][triple][horizon]
  std::vector<std::vector<std::vector<double>>> per(static_cast<std::size_t>(e.count),
                                                   std::vector<std::vector<double>>(nt, std::vector<double>(nh, 0.0)));
  parallel_for(e.count, jobs, [&](int i) {
    const RadialField f = ensemble_member(grid, e, i);
    std::vector<double> c(m), cc(m), sc(m), C(m), S(m);
    basis->forward(f.values(), c);
    std::vector<double> acc(nt, 0.0), prev(nt, 0.0), amp(m), work(m), rc(m), rs(m);
    for (std::size_t k = 0; k < m; ++k) {
      rc[k] = std::cos(std::sqrt(L[k]) * dt);
      rs[k] = std::sin(std::sqrt(L[k]) * dt);
    }
    for (long j = 0; j <= N; ++j) {
      if (j % 256 == 0) {
        // Exact phases now and then; a rotation per step in between.
        const double t = static_cast<double>(j) * dt;
        for (std::size_t k = 0; k < m; ++k) {
          const double om = std::sqrt(L[k]);
          cc[k] = std::cos(om * t) * c[k];
          sc[k] = std::sin(om * t) * c[k];
        }
      } else {
        for (std::size_t k = 0; k < m; ++k) {
          const double x = cc[k], y = sc[k];
          cc[k] = rc[k] * x - rs[k] * y;
          sc[k] = rs[k] * x + rc[k] * y;
        }
      }
      basis->inverse(cc, C);
      basis->inverse(sc, S);
      for (std::size_t k = 0; k < m; ++k) amp[k] = std::sqrt(C[k] * C[k] + S[k] * S[k]);
      for (std::size_t a = 0; a < nt; ++a) {
        const auto& tr = triples[a];
        const double nq = lq_norm(grid, amp, sh2, tr.q, work);
        if (std::isinf(tr.p)) {
          acc[a] = std::max(acc[a], nq);
        } else {
          const double cur = std::pow(nq, tr.p);  // p need not be an integer
          if (j > 0) acc[a] += 0.5 * dt * (prev[a] + cur);
          prev[a] = cur;
        }
      }
      for (std::size_t h = 0; h < nh; ++h) {
        if (at[h] != j) continue;
        for (std::size_t a = 0; a < nt; ++a) {
          const auto& tr = triples[a];
          const double num = std::isinf(tr.p) ? acc[a] : std::pow(acc[a], 1.0 / tr.p);
          per[static_cast<std::size_t>(i)][a][h] = num / sobolev_norm(f, tr.gamma);
        }
      }
    }
  });

  std::vector<std::vector<double>> out(nt, std::vector<double>(nh, 0.0));
  for (const auto& member : per)
    for (std::size_t a = 0; a < nt; ++a)
      for (std::size_t h = 0; h < nh; ++h) out[a][h] = std::max(out[a][h], member[a][h]);
  return out;
}

double strichartz_probe(const StrichartzTriple& t, const EnsembleSpec& e, double T, const RadialGrid& grid,
                        double dt_sample) {
  return strichartz_probe(std::vector<StrichartzTriple>{t}, e, {T}, grid, dt_sample)[0][0];
}

RadialSobolevResult radial_sobolev_check(double alpha, const EnsembleSpec& e, const RadialGrid& grid) {
  if (!(alpha > 0.5 && alpha < 2.0)) throw ParameterError("radial Sobolev exponent must lie in (1/2, 2)");
  e.validate();
  RadialSobolevResult res{0.0, 0.0};
  for (int i = 0; i < e.count; ++i) {
    const RadialField f = ensemble_member(grid, e, i);
    double sup = 0.0, sup2 = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j) {
      const double w = std::sinh(grid.node(j)) * f[j];
      sup = std::max(sup, std::abs(w));
      sup2 = std::max(sup2, w * w);
    }
    res.max_ratio = std::max(res.max_ratio, sup / sobolev_norm(f, alpha));
    res.max_pointwise = std::max(res.max_pointwise, sup2 / (sobolev_norm(f, 0.0) * sobolev_norm(f, 1.0)));
  }
  return res;
}

InterpolationResult interpolation_check(const EnsembleSpec& e, const RadialGrid& grid, double delta, double alpha) {
  e.validate();
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
  const double d2 = delta / (2.0 * (2.0 - delta));
  const double sig = 0.5 + 0.5 * delta;
  InterpolationResult res;
  std::vector<double> lhs, A, B;
  for (int i = 0; i < e.count; ++i) {
    const RadialField f = ensemble_member(grid, e, i);
    const double hs = sobolev_norm(f, sig);
    res.weighted_l6 = std::max(res.weighted_l6, weighted_norm(f, WeightedRegionNorm::power(0.5 - d2, Region::Inner, 6.0)) / hs);
    res.weighted_linf = std::max(res.weighted_linf, weighted_norm(f, WeightedRegionNorm::power(0.5 + 0.5 * alpha, Region::Inner, kInf)) / hs);

    RadialField g = f;
    for (std::size_t j = 0; j < g.size(); ++j) {
      const double th = std::tanh(grid.node(j));
      g[j] *= th * th;
    }
    res.hardy = std::max(res.hardy, weighted_norm(g, WeightedRegionNorm::power(-1.0, Region::Inner, 2.0)) /
                                        std::sqrt(gradient_energy(g)));

    lhs.push_back(weighted_norm(f, WeightedRegionNorm::power(-0.5 + d2, Region::Inner, 6.0)));
    A.push_back(weighted_norm(f, WeightedRegionNorm::power(-1.0 - 0.5 * alpha, Region::Inner, 2.0)));
    B.push_back(inner_gradient_norm(f));
  }
  // log(lhs/B) = c + theta log(A/B)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(lhs.size());
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    const double x = std::log(A[i] / B[i]), y = std::log(lhs[i] / B[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  double theta = den > 0.0 ? (n * sxy - sx * sy) / den : 0.5;
  theta = std::clamp(theta, 0.0, 1.0);
  res.theta = theta;
  for (std::size_t i = 0; i < lhs.size(); ++i)
    res.interpolated_l6 = std::max(res.interpolated_l6, lhs[i] / (std::pow(A[i], theta) * std::pow(B[i], 1.0 - theta)));
  return res;
}

void SuiteConfig::validate() const {
  if (count < 1) throw ConfigError("count", "must be at least 1");
  if (!(rmax > 0.0)) throw ConfigError("rmax", "must be positive");
  if (n < 8) throw ConfigError("n", "must be at least 8");
  if (!(delta > 0.0 && delta < 1.0)) throw ConfigError("delta", "must lie in (0, 1)");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha", "must lie in (0, 1)");
  if (!(tolerance >= 0.0)) throw ConfigError("tolerance", "must be nonnegative");
  if (!(sobolev_tolerance >= 0.0)) throw ConfigError("sobolev_tolerance", "must be nonnegative");
  if (strichartz_count < 1) throw ConfigError("strichartz.count", "must be at least 1");
  if (!(strichartz_dt > 0.0)) throw ConfigError("strichartz.dt", "must be positive");
  if (strichartz_n < 8) throw ConfigError("strichartz.n", "must be at least 8");
  // Bumps reach r = 4; the longest horizon is 40.
  if (strichartz_rmax < 4.0 + 40.0 + 1.0) throw ConfigError("strichartz.rmax", "must be at least 45 for horizon 40");
}

std::vector<CheckResult> run_inequality_suite(const SuiteConfig& cfg) {
  cfg.validate();
  std::vector<CheckResult> out;
  const RadialGrid grid(cfg.rmax, cfg.n);
  const RadialGrid fine(cfg.rmax, 2 * cfg.n);

  EnsembleSpec rough;
  rough.kind = EnsembleKind::Spectral;
  rough.count = cfg.count;
  rough.seed = cfg.seed;
  rough.decay = -1.0;
  rough.modes = std::min(256, cfg.n - 1);
  EnsembleSpec bumps;
  bumps.kind = EnsembleKind::Bumps;
  bumps.count = cfg.count;
  bumps.seed = cfg.seed;

  {
    CheckResult c{"poincare", {{"count", 100.0}}, 0.0, {}, false};
    EnsembleSpec e = rough;
    e.count = 100;
    const double sig[] = {-1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0};
    for (int i = 0; i < e.count; ++i) {
      const RadialField f = ensemble_member(grid, e, i);
      for (double a : sig)
        for (double b : sig)
          if (a <= b) c.max_ratio = std::max(c.max_ratio, sobolev_norm(f, a) / sobolev_norm(f, b));
    }
    c.pass = c.max_ratio <= 1.0 + 1e-12;
    out.push_back(c);
  }
  {
    CheckResult lo{"bernstein_low", {{"draws", 1000.0}}, 0.0, {}, false};
    CheckResult hi{"bernstein_high", {{"draws", 1000.0}}, 0.0, {}, false};
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    EnsembleSpec e = rough;
    e.count = 1000;
    for (int i = 0; i < 1000; ++i) {
      e.decay = -0.5 - 1.5 * U(rng);
      const RadialField f = ensemble_member(grid, e, i);
      const double s = std::pow(10.0, -4.0 + 5.0 * U(rng));
      const double beta = 1.5 * U(rng);
      const double alpha = beta + (0.01 + 0.98 * U(rng));
      lo.max_ratio = std::max(lo.max_ratio, bernstein_ratio(beta, alpha, s, f));
      hi.max_ratio = std::max(hi.max_ratio, bernstein_ratio_high(beta, alpha, s, f) / bernstein_high_envelope(alpha - beta));
    }
    lo.pass = lo.max_ratio <= 1.0 + 1e-12;
    hi.pass = hi.max_ratio <= 1.0 + 1e-12;
    out.push_back(lo);
    out.push_back(hi);
  }
  {
    const auto a = radial_sobolev_check(0.6, bumps, grid);
    const auto b = radial_sobolev_check(0.6, bumps, fine);
    CheckResult c{"radial_sobolev", {{"alpha", 0.6}}, a.max_ratio, {relative_change(a.max_ratio, b.max_ratio)}, false};
    c.pass = std::isfinite(a.max_ratio) && c.stability_deltas[0] <= cfg.sobolev_tolerance;
    out.push_back(c);
    CheckResult p{"radial_sobolev_pointwise", {}, std::max(a.max_pointwise, b.max_pointwise),
                  {relative_change(a.max_pointwise, b.max_pointwise)}, false};
    p.pass = p.max_ratio <= 2.0;
    out.push_back(p);
  }
  {
    const auto a = interpolation_check(rough, grid, cfg.delta, cfg.alpha);
    const auto b = interpolation_check(rough, fine, cfg.delta, cfg.alpha);
    auto add = [&](const std::string& name, double x, double y, std::map<std::string, double> params) {
      CheckResult c{name, std::move(params), x, {relative_change(x, y)}, false};
      c.pass = std::isfinite(x) && c.stability_deltas[0] <= cfg.tolerance;
      out.push_back(c);
    };
    add("interp_wL6", a.weighted_l6, b.weighted_l6, {{"delta", cfg.delta}});
    add("interp_rinf", a.weighted_linf, b.weighted_linf, {{"delta", cfg.delta}, {"alpha", cfg.alpha}});
    add("hardy", a.hardy, b.hardy, {});
    add("interp_vL6", a.interpolated_l6, b.interpolated_l6, {{"delta", cfg.delta}, {"alpha", cfg.alpha}, {"theta", a.theta}});
  }
  {
    CheckResult c{"strichartz_classifier", {}, 0.0, {}, false};
    int bad = 0;
    for (const auto& k : strichartz_boundary_cases())
      if (in_region_r(k.t) != k.in_r || in_region_e(k.t) != k.in_e) ++bad;
    c.max_ratio = bad;
    c.parameters["cases"] = static_cast<double>(strichartz_boundary_cases().size());
    c.pass = bad == 0;
    out.push_back(c);
  }
  {
    const RadialGrid sg(cfg.strichartz_rmax, cfg.strichartz_n);
    EnsembleSpec e = bumps;
    e.count = cfg.strichartz_count;
    const std::vector<StrichartzTriple> tr{{kInf, 2.0, 0.0}, {4.0, 4.0, 0.5}, {2.0, 6.0, 2.0 / 3.0}};
    const std::vector<double> T{10.0, 20.0, 40.0};
    const auto r = strichartz_probe(tr, e, T, sg, cfg.strichartz_dt, cfg.jobs);
    const char* names[] = {"strichartz_inf_2_0", "strichartz_4_4_1/2", "strichartz_2_6_2/3"};
    for (std::size_t a = 0; a < tr.size(); ++a) {
      CheckResult c{names[a], {{"p", std::isinf(tr[a].p) ? -1.0 : tr[a].p}, {"q", tr[a].q}, {"gamma", tr[a].gamma}},
                    *std::max_element(r[a].begin(), r[a].end()),
                    {relative_change(r[a][0], r[a][1]), relative_change(r[a][1], r[a][2])}, false};
      c.pass = std::isfinite(c.max_ratio) &&
               *std::max_element(c.stability_deltas.begin(), c.stability_deltas.end()) <= cfg.tolerance;
      if (a == 0) c.pass = c.pass && std::abs(c.max_ratio - 1.0) <= 1e-10;
      out.push_back(c);
    }
  }
  {
    CheckResult c{"half_wave_norms", {}, 0.0, {}, false};
    const auto basis = SineBasis::get(grid);
    const auto L = basis->eigenvalues();
    for (int i = 0; i < 10; ++i) {
      const SpectralField f = forward(ensemble_member(grid, rough, i));
      for (double t : {0.37, 5.0, 23.0}) {
        for (double sig : {-0.5, 0.0, 0.5, 1.0}) {
          double a = 0.0, b = 0.0;
          for (std::size_t k = 0; k < L.size(); ++k) {
            const double om = std::sqrt(L[k]);
            const double cc = std::cos(om * t) * f.coeffs[k], ss = std::sin(om * t) * f.coeffs[k];
            a += std::pow(L[k], sig) * (cc * cc + ss * ss);
            b += std::pow(L[k], sig) * f.coeffs[k] * f.coeffs[k];
          }
          c.max_ratio = std::max(c.max_ratio, std::abs(std::sqrt(a / b) - 1.0));
        }
      }
    }
    c.pass = c.max_ratio <= 1e-12;
    out.push_back(c);
  }
  return out;
}

}  // namespace hypwave
