#include "hypwave/solver.hpp"

#include <algorithm>
#include <cmath>

#include "hypwave/spectral.hpp"

namespace hypwave {

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt", "must be positive");
  if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw ConfigError("t_final", "must be nonnegative");
  if (observer_stride < 1) throw ConfigError("stride", "must be at least 1");
  if (!(blowup_ceiling > 0.0)) throw ConfigError("blowup_ceiling", "must be positive");
}

void check_boundary_guard(const RadialGrid& grid, double support_radius, double t_final) {
  const double need = support_radius + t_final + 1.0;
  if (grid.rmax() < need)
    throw ConfigError("rmax", "must be at least support + t_final + 1 = " + std::to_string(need));
}

double gradient_energy(const RadialField& u) {
  const auto c = forward(u);
  const auto L = SineBasis::get(u.grid())->eigenvalues();
  double sum = 0.0;
  for (std::size_t k = 0; k < L.size(); ++k) sum += L[k] * c.coeffs[k] * c.coeffs[k];
  return kFourPi * sum;
}

double l4_norm4(const RadialField& u) {
  return integrate_measure(map(u, [](double x) { return x * x * x * x; }));
}

double energy(const WaveState& st, Nonlinearity nl) {
  const double kin = sobolev_norm(st.ut, 0.0);
  double e = 0.5 * gradient_energy(st.u) + 0.5 * kin * kin;
  if (nl == Nonlinearity::Defocusing) e += 0.25 * l4_norm4(st.u);
  if (nl == Nonlinearity::Focusing) e -= 0.25 * l4_norm4(st.u);
  return e;
}

Stepper::Stepper(const WaveState& st, Nonlinearity nl, double ceiling)
    : grid_(st.grid()), nl_(nl), ceiling_(ceiling), t_(st.t) {
  const auto basis = SineBasis::get(grid_);
  const std::size_t m = grid_.size();
  u_hat_.resize(m);
  p_hat_.resize(m);
  work_.resize(m);
  work2_.resize(m);
  basis->forward(st.u.values(), u_hat_);
  basis->forward(st.ut.values(), p_hat_);
  u_.assign(st.u.values().begin(), st.u.values().end());
}

void Stepper::kick(double tau) {
  if (nl_ == Nonlinearity::None) return;
  const double sign = nl_ == Nonlinearity::Defocusing ? 1.0 : -1.0;
  for (std::size_t i = 0; i < u_.size(); ++i) work_[i] = u_[i] * u_[i] * u_[i];
  SineBasis::get(grid_)->forward(work_, work2_);
  for (std::size_t k = 0; k < p_hat_.size(); ++k) p_hat_[k] -= sign * tau * work2_[k];
}

void Stepper::check(double t) const {
  for (std::size_t i = 0; i < u_.size(); ++i)
    if (!std::isfinite(u_[i]) || std::abs(u_[i]) > ceiling_) throw BlowUp(t);
  for (double p : p_hat_)
    if (!std::isfinite(p)) throw BlowUp(t);
}

void Stepper::step(double dt) {
  const auto basis = SineBasis::get(grid_);
  const auto L = basis->eigenvalues();
  kick(0.5 * dt);
  for (std::size_t k = 0; k < L.size(); ++k) {
    const double om = std::sqrt(L[k]);
    const double c = std::cos(om * dt), s = std::sin(om * dt);
    const double a = u_hat_[k], b = p_hat_[k];
    u_hat_[k] = c * a + s / om * b;
    p_hat_[k] = -om * s * a + c * b;
  }
  basis->inverse(u_hat_, u_);
  kick(0.5 * dt);
  t_ += dt;
  check(t_);
}

WaveState Stepper::state() const {
  WaveState st = WaveState::zero(grid_);
  const auto basis = SineBasis::get(grid_);
  std::copy(u_.begin(), u_.end(), st.u.values().begin());
  basis->inverse(p_hat_, st.ut.values());
  st.t = t_;
  return st;
}

WaveState step(const WaveState& st, double dt, Nonlinearity nl) {
  if (!(dt > 0.0)) throw ParameterError("dt must be positive");
  Stepper s(st, nl);
  s.step(dt);
  return s.state();
}

Observer energy_observer(Nonlinearity nl) {
  return {{"E"}, [nl](const WaveState& st) { return std::vector<double>{energy(st, nl)}; }};
}

Observer l4_observer() {
  return {{"L4"}, [](const WaveState& st) { return std::vector<double>{l4_norm4(st.u)}; }};
}

std::vector<double> TimeSeries::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("no column named " + name);
  const auto j = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row[j]);
  return out;
}

TimeSeries evolve(const WaveState& st, const IntegratorConfig& cfg, const std::vector<Observer>& observers,
                  WaveState* final_state) {
  cfg.validate();
  check_boundary_guard(st.grid(), cfg.support_radius, cfg.t_final);

  TimeSeries ts;
  ts.columns.push_back("t");
  for (const auto& o : observers) ts.columns.insert(ts.columns.end(), o.names.begin(), o.names.end());

  const long steps = cfg.t_final > 0.0 ? static_cast<long>(std::ceil(cfg.t_final / cfg.dt - 1e-9)) : 0;
  const double dt = steps > 0 ? cfg.t_final / static_cast<double>(steps) : cfg.dt;

  auto record = [&](const WaveState& s) {
    std::vector<double> row{s.t};
    for (const auto& o : observers) {
      auto v = o.eval(s);
      row.insert(row.end(), v.begin(), v.end());
    }
    ts.rows.push_back(std::move(row));
  };

  Stepper stepper(st, cfg.nonlinearity, cfg.blowup_ceiling);
  record(st);
  for (long k = 1; k <= steps; ++k) {
    stepper.step(dt);
    stepper.set_time(st.t + static_cast<double>(k) * dt);
    if (k % cfg.observer_stride == 0 || k == steps) record(stepper.state());
  }
  if (final_state) *final_state = stepper.state();
  return ts;
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

}  // namespace hypwave
