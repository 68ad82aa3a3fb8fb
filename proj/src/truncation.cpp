#include "hypwave/truncation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hypwave/spectral.hpp"

namespace hypwave {

DataSpec TruncationConfig::default_data() {
  DataSpec d;
  d.kind = DataKind::Rough;
  d.norm = 1.0;
  d.velocity_norm = 1.0;
  d.radius = 4.0;
  d.modes = 2048;
  return d;
}

void TruncationConfig::validate() const {
  auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
  if (!positive(delta)) throw ConfigError("delta", "must be positive");
  if (!(delta1 > 0.0 && delta1 < 0.5 * delta)) throw ConfigError("delta1", "must lie in (0, delta/2)");
  if (!positive(s)) throw ConfigError("s", "must be positive");
  if (!positive(c1)) throw ConfigError("c1", "must be positive");
  if (!positive(c2)) throw ConfigError("c2", "must be positive");
  if (!positive(c3)) throw ConfigError("c3", "must be positive");
  if (!positive(c4)) throw ConfigError("c4", "must be positive");
  if (c2 > 0.5 * c1) throw ConfigError("c2", "must satisfy c2 <= c1/2");
  if (c4 > 0.5 * std::min({c1, c2, c3})) throw ConfigError("c4", "must satisfy c4 <= min(c1, c2, c3)/2");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha", "must lie in (0, 1)");
  if (!(alpha_tilde > 0.0 && alpha_tilde < alpha)) throw ConfigError("alpha_tilde", "must lie in (0, alpha)");
  if (!positive(rmax)) throw ConfigError("rmax", "must be positive");
  if (n < 8) throw ConfigError("n", "must be at least 8");
  if (!positive(dt)) throw ConfigError("dt", "must be positive");
  if (!(t_final >= 0.0)) throw ConfigError("t_final", "must be nonnegative");
  if (stride < 1) throw ConfigError("stride", "must be at least 1");
  if (data.kind != DataKind::Zero) {
    if (!positive(data.radius)) throw ConfigError("data.radius", "must be positive");
    if (data.kind == DataKind::Rough && data.modes < 1) throw ConfigError("data.modes", "must be at least 1");
  }
  check_boundary_guard(grid(), data.support_radius(), t_final);
}

SplitData split_data(const RadialField& u0, const RadialField& u1, double s) {
  require_same_grid(u0.grid(), u1.grid());
  RadialField v0 = heat_project(u0, s, HeatMode::Geq);
  RadialField v1 = heat_project(u1, s, HeatMode::Geq);
  RadialField w0 = u0 - v0;
  RadialField w1 = u1 - v1;
  return {std::move(w0), std::move(w1), std::move(v0), std::move(v1)};
}

SplitNorms split_norms(const SplitData& d, double delta1) {
  const double a = sobolev_norm(d.omega0, 0.5 + delta1);
  const double b = sobolev_norm(d.omega1, -0.5 + delta1);
  const double c = sobolev_norm(d.v0, 1.0);
  const double e = sobolev_norm(d.v1, 0.0);
  return {std::hypot(a, b), std::hypot(c, e)};
}

RadialField perturbation_source(const RadialField& v, const RadialField& omega) {
  require_same_grid(v.grid(), omega.grid());
  RadialField out(v.grid());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = -3.0 * (v[i] * v[i] * omega[i] + v[i] * omega[i] * omega[i]);
  return out;
}

TruncationWeights TruncationWeights::build(const RadialGrid& grid, double alpha, double alpha_tilde) {
  return {build_weight(WeightFamily::A1, grid), build_weight(WeightFamily::A2, grid),
          build_weight(WeightFamily::A3, grid, alpha), build_weight(WeightFamily::A4, grid, alpha_tilde)};
}

ModifiedEnergyParts modified_energy_parts(const WaveState& st_v, const TruncationConfig& cfg, const TruncationWeights& w) {
  ModifiedEnergyParts p{};
  p.E = energy(st_v);
  p.M1 = morawetz_potential(st_v, w.a1);
  p.M2 = morawetz_potential(st_v, w.a2);
  p.M3 = morawetz_potential(st_v, w.a3);
  p.Mtilde = modified_potential(st_v, w.a4);
  p.Emod = p.E - cfg.c1 * p.M1 - cfg.c2 * p.M2 - cfg.c3 * p.M3 - cfg.c4 * p.Mtilde;
  return p;
}

double modified_energy(const WaveState& st_v, const TruncationConfig& cfg, const TruncationWeights& w) {
  return modified_energy_parts(st_v, cfg, w).Emod;
}

const std::vector<std::string>& ledger_columns() {
  static const std::vector<std::string> cols{
      "t",           "E",           "M1",           "M2",           "M3",
      "Mtilde",      "Emod",        "dEmod_dt",     "B",            "neg_a1_grad",
      "neg_v4",      "neg_bilap_a2", "neg_bilap_a3", "neg_grad_inner", "neg_v_r14",
      "neg_ra_grad", "neg_r2a_v",   "neg_vt_log",   "gronwall_ratio", "dEmod_dt_claimed",
      "omega_rinf2", "omega_l4",    "omega_hnorm_product", "emod_over_E"};
  return cols;
}

std::vector<double> GrowthLedger::column(const std::string& name) const {
  const auto& cols = ledger_columns();
  const auto it = std::find(cols.begin(), cols.end(), name);
  if (it == cols.end()) throw std::out_of_range("no ledger column named " + name);
  const auto j = static_cast<std::size_t>(it - cols.begin());
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r[j]);
  return out;
}

namespace {

enum Col {
  kT, kE, kM1, kM2, kM3, kMt, kEmod, kDEmod, kB, kNegA1, kNegV4, kNegB2, kNegB3, kNegGradIn, kNegVr14,
  kNegRaGrad, kNegR2aV, kNegVtLog, kRatio, kDEmodClaimed, kOmRinf2, kOmL4, kOmH, kEmodOverE, kCols
};

// int_region f sinh^2 with an origin singularity of order sigma.
double region_integral(const RadialGrid& g, Region region, double sigma, auto&& f) {
  std::vector<double> F(g.size(), 0.0);
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double r = g.node(i);
    if (region == Region::Inner && r >= 1.0 - 1e-12) break;
    const double sh = std::sinh(r);
    F[i] = f(i, r) * sh * sh;
  }
  return kFourPi * integrate_samples(g, F, region, sigma);
}

double safe_ratio(double a, double b) { return b != 0.0 ? a / b : 0.0; }

}  // namespace

ExperimentResult run_experiment(const TruncationConfig& cfg) {
  cfg.validate();
  const RadialGrid grid = cfg.grid();
  const WaveState u_init = make_initial_data(grid, cfg.data, cfg.delta, cfg.seed);
  const SplitData split = split_data(u_init.u, u_init.ut, cfg.s);
  const WaveState w_init(split.omega0, split.omega1, 0.0);
  const TruncationWeights w = TruncationWeights::build(grid, cfg.alpha, cfg.alpha_tilde);

  const long steps = cfg.t_final > 0.0 ? static_cast<long>(std::ceil(cfg.t_final / cfg.dt - 1e-9)) : 0;
  const double dt = steps > 0 ? cfg.t_final / static_cast<double>(steps) : cfg.dt;

  const auto basis = SineBasis::get(grid);
  const double sig_hi = 0.5 + cfg.delta, sig_lo = -0.5 + cfg.delta;

  GrowthLedger ledger;
  auto snapshot = [&](const WaveState& su, const WaveState& sw) {
    const WaveState sv(su.u - sw.u, su.ut - sw.ut, su.t);
    std::vector<double> row(kCols, 0.0);
    row[kT] = su.t;
    const auto parts = modified_energy_parts(sv, cfg, w);
    row[kE] = parts.E;
    row[kM1] = parts.M1;
    row[kM2] = parts.M2;
    row[kM3] = parts.M3;
    row[kMt] = parts.Mtilde;
    row[kEmod] = parts.Emod;

    std::vector<double> c(grid.size()), v(grid.size()), vr(grid.size());
    basis->forward(sv.u.values(), c);
    basis->gradient(c, v, vr);
    const auto& vt = sv.ut;
    row[kNegA1] = region_integral(grid, Region::All, 0.0, [&](std::size_t i, double) { return w.a1.a_double_prime[i] * vr[i] * vr[i]; });
    row[kNegV4] = l4_norm4(sv.u);
    row[kNegB2] = region_integral(grid, Region::All, w.a2.bilap_singular_order(),
                                  [&](std::size_t i, double) { return -w.a2.bilap_a[i] * v[i] * v[i]; });
    row[kNegB3] = region_integral(grid, Region::All, w.a3.bilap_singular_order(),
                                  [&](std::size_t i, double) { return -w.a3.bilap_a[i] * v[i] * v[i]; });
    row[kNegGradIn] = region_integral(grid, Region::Inner, 0.0, [&](std::size_t i, double) { return vr[i] * vr[i]; });
    row[kNegVr14] = region_integral(grid, Region::Inner, 0.0, [&](std::size_t i, double r) { return std::pow(v[i], 4) / r; });
    row[kNegRaGrad] = region_integral(grid, Region::Inner, 0.0,
                                      [&](std::size_t i, double r) { return std::pow(r, -cfg.alpha) * vr[i] * vr[i]; });
    row[kNegR2aV] = region_integral(grid, Region::Inner, cfg.alpha,
                                    [&](std::size_t i, double r) { return std::pow(r, -2.0 - cfg.alpha) * v[i] * v[i]; });
    row[kNegVtLog] = region_integral(grid, Region::Inner, 0.0, [&](std::size_t i, double r) {
      return std::pow(r, -cfg.alpha_tilde) * std::abs(std::log(r)) * vt[i] * vt[i];
    });

    const RadialField nl = perturbation_source(sv.u, sw.u);
    const double nv = integrate_measure(nl * vt);
    row[kDEmodClaimed] = nv - cfg.c1 * morawetz_derivative_claimed(sv, w.a1, nl) -
                         cfg.c2 * morawetz_derivative_claimed(sv, w.a2, nl) -
                         cfg.c3 * morawetz_derivative_claimed(sv, w.a3, nl) -
                         cfg.c4 * modified_derivative_claimed(sv, w.a4, nl);

    const double rinf = weighted_norm(sw.u, WeightedRegionNorm::power(0.5, Region::Outer, INFINITY));
    row[kOmRinf2] = rinf * rinf;
    row[kOmL4] = l4_norm4(sw.u);
    row[kOmH] = sobolev_norm(sw.u, sig_hi) * sobolev_norm(sw.ut, sig_lo);
    row[kEmodOverE] = parts.E != 0.0 ? parts.Emod / parts.E : 0.0;
    ledger.rows.push_back(std::move(row));
  };

  Stepper su(u_init, Nonlinearity::Defocusing);
  Stepper sw(w_init, Nonlinearity::Defocusing);
  snapshot(u_init, w_init);
  for (long k = 1; k <= steps; ++k) {
    su.step(dt);
    sw.step(dt);
    const double t = static_cast<double>(k) * dt;
    su.set_time(t);
    sw.set_time(t);
    if (k % cfg.stride == 0 || k == steps) snapshot(su.state(), sw.state());
  }

  // Centered differences of Emod; one-sided at the ends.
  auto& rows = ledger.rows;
  const std::size_t N = rows.size();
  for (std::size_t i = 0; i < N; ++i) {
    double d = 0.0;
    if (N > 1) {
      const std::size_t a = i == 0 ? 0 : i - 1;
      const std::size_t b = i + 1 == N ? N - 1 : i + 1;
      d = (rows[b][kEmod] - rows[a][kEmod]) / (rows[b][kT] - rows[a][kT]);
    }
    rows[i][kDEmod] = d;
    rows[i][kB] = rows[i][kOmRinf2] * rows[i][kEmod] + rows[i][kOmL4];
    rows[i][kRatio] = safe_ratio(d, rows[i][kB]);
  }
  for (const auto& r : rows)
    for (double x : r)
      if (!std::isfinite(x)) throw std::runtime_error("growth ledger holds a non-finite entry");

  // Report.
  const auto t = ledger.column("t");
  const auto emod = ledger.column("Emod");
  const auto rinf2 = ledger.column("omega_rinf2");
  const auto oml4 = ledger.column("omega_l4");
  const auto vl4 = ledger.column("neg_v4");
  Report rep;
  double ratio_max = -std::numeric_limits<double>::infinity();
  double eq_dev = 0.0, eq_min = std::numeric_limits<double>::infinity(), eq_max = -eq_min;
  double msum_sup = 0.0, hprod_sup = 0.0;
  for (const auto& r : rows) {
    ratio_max = std::max(ratio_max, r[kRatio]);
    if (r[kE] != 0.0) {  // the ratio means nothing for the zero state
      eq_dev = std::max(eq_dev, std::abs(r[kEmodOverE] - 1.0));
      eq_min = std::min(eq_min, r[kEmodOverE]);
      eq_max = std::max(eq_max, r[kEmodOverE]);
    }
    msum_sup = std::max(msum_sup, std::abs(r[kM1]) + std::abs(r[kM2]) + std::abs(r[kM3]));
    hprod_sup = std::max(hprod_sup, r[kOmH]);
  }
  // Gronwall closure: Emod(t) <= C (Emod(0) exp(int_0^t A) + int_0^t ||omega||_4^4).
  double closure = 0.0, A = 0.0, W = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    if (i > 0) {
      A += 0.5 * (t[i] - t[i - 1]) * (rinf2[i] + rinf2[i - 1]);
      W += 0.5 * (t[i] - t[i - 1]) * (oml4[i] + oml4[i - 1]);
    }
    closure = std::max(closure, safe_ratio(emod[i], emod[0] * std::exp(A) + W));
  }
  if (eq_min > eq_max) eq_min = eq_max = 1.0;
  const double v4_int = trapezoid(t, vl4);
  const double om4_int = W;
  const double rinf2_int = A;
  const SplitNorms sn = split_norms(split, cfg.delta1);

  rep["gronwall_max_ratio"] = N > 0 ? ratio_max : 0.0;
  rep["gronwall_closure_constant"] = closure;
  rep["energy_equivalence_max"] = eq_dev;
  rep["energy_equivalence_min_ratio"] = eq_min;
  rep["energy_equivalence_max_ratio"] = eq_max;
  rep["energy_equivalence_ok"] = (eq_min >= 0.5 && eq_max <= 2.0) ? 1.0 : 0.0;
  rep["cor35_lhs"] = rinf2_int;
  rep["cor35_rhs"] = hprod_sup;
  rep["cor35_ratio"] = safe_ratio(rinf2_int, hprod_sup);
  rep["cor46_lhs"] = v4_int;
  rep["cor46_rhs"] = msum_sup + rinf2_int + om4_int;
  rep["cor46_ratio"] = safe_ratio(v4_int, msum_sup + rinf2_int + om4_int);
  rep["omega_l4_integral"] = om4_int;
  rep["omega_l4_over_Emod0"] = safe_ratio(om4_int, emod.empty() ? 0.0 : emod[0]);
  rep["Emod0"] = emod.empty() ? 0.0 : emod[0];
  rep["absorption_threshold_a2"] = absorption_threshold(w.a1, w.a2);
  rep["absorption_threshold_a3"] = absorption_threshold(w.a1, w.a3);
  rep["split_omega_norm"] = sn.omega;
  rep["split_v_norm"] = sn.v;
  rep["split_ratio"] = sn.omega / std::pow(cfg.s, 0.5 * (cfg.delta - cfg.delta1));
  rep["s"] = cfg.s;
  rep["steps"] = static_cast<double>(steps);
  return {std::move(ledger), std::move(rep)};
}

}  // namespace hypwave
