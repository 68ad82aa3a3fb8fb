#pragma once

// Split-step integrator for u_tt - Delta u + u^3 = 0 on H^3.

#include <functional>
#include <string>
#include <vector>

#include "hypwave/core.hpp"

namespace hypwave {

enum class Nonlinearity { Defocusing, Focusing, None };

struct IntegratorConfig {
  double dt = 1e-3;
  double t_final = 0.0;
  int observer_stride = 1;
  Nonlinearity nonlinearity = Nonlinearity::Defocusing;
  double blowup_ceiling = 1e8;
  double support_radius = 0.0;  // for the boundary guard

  void validate() const;  // throws ConfigError
};

// rmax >= support + t_final + 1; throws ConfigError("rmax", ...).
void check_boundary_guard(const RadialGrid& grid, double support_radius, double t_final);

// 4pi int |u_r|^2 sinh^2 r dr, computed spectrally as 4pi sum L_k c_k^2.
double gradient_energy(const RadialField& u);
// 4pi int u^4 sinh^2 r dr
double l4_norm4(const RadialField& u);
// 1/2 gradient + 1/2 ||u_t||^2 + 1/4 ||u||_4^4 (the quartic term dropped for Nonlinearity::None,
// sign flipped for Focusing).
double energy(const WaveState& st, Nonlinearity nl = Nonlinearity::Defocusing);

// Keeps (u, u_t) as sine coefficients between steps; one step is kick(dt/2),
// exact linear drift(dt), kick(dt/2).
class Stepper {
 public:
  Stepper(const WaveState& st, Nonlinearity nl = Nonlinearity::Defocusing, double ceiling = 1e8);

  void step(double dt);
  double time() const noexcept { return t_; }
  void set_time(double t) noexcept { t_ = t; }
  WaveState state() const;

 private:
  void kick(double tau);
  void check(double t) const;

  RadialGrid grid_;
  Nonlinearity nl_;
  double ceiling_;
  double t_ = 0.0;
  std::vector<double> u_hat_, p_hat_;
  std::vector<double> u_;  // physical u, kept in sync with u_hat_
  std::vector<double> work_, work2_;
};

WaveState step(const WaveState& st, double dt, Nonlinearity nl = Nonlinearity::Defocusing);

struct Observer {
  std::vector<std::string> names;
  std::function<std::vector<double>(const WaveState&)> eval;
};

Observer energy_observer(Nonlinearity nl = Nonlinearity::Defocusing);
Observer l4_observer();

struct TimeSeries {
  std::vector<std::string> columns;  // "t" first
  std::vector<std::vector<double>> rows;

  std::vector<double> column(const std::string& name) const;
};

// Snapshots at step 0, every observer_stride steps, and at the final step. The
// step count is ceil(t_final/dt) with dt shrunk to land on t_final exactly.
TimeSeries evolve(const WaveState& st, const IntegratorConfig& cfg, const std::vector<Observer>& observers,
                  WaveState* final_state = nullptr);

// Integral of the sampled y(t) by the trapezoid rule.
double trapezoid(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace hypwave
