#include "hypwave/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

namespace hypwave {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

// FFTW's planner is not thread-safe; plan creation and destruction happen under
// planner_mutex(). Execution through fftw_execute_r2r on fresh arrays is safe
// from any thread.
SineBasis::SineBasis(const RadialGrid& grid) : grid_(grid), scale_(std::sqrt(2.0 / grid.rmax())) {
  const std::size_t m = grid.size();
  sinh_.resize(m);
  coth_.resize(m);
  eig_.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double r = grid.node(i);
    sinh_[i] = std::sinh(r);
    coth_[i] = 1.0 / std::tanh(r);
    const double kk = static_cast<double>(i + 1) * std::numbers::pi / grid.rmax();
    eig_[i] = 1.0 + kk * kk;
  }
  std::vector<double> a(m + 2), b(m + 2);
  const int n = grid.intervals();
  dst_plan_ = fftw_plan_r2r_1d(n - 1, a.data(), b.data(), FFTW_RODFT00, FFTW_ESTIMATE | FFTW_UNALIGNED);
  dct_plan_ = fftw_plan_r2r_1d(n + 1, a.data(), b.data(), FFTW_REDFT00, FFTW_ESTIMATE | FFTW_UNALIGNED);
}

SineBasis::~SineBasis() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(dst_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(dct_plan_));
}

std::shared_ptr<const SineBasis> SineBasis::get(const RadialGrid& grid) {
  static std::map<std::pair<double, int>, std::shared_ptr<const SineBasis>> cache;
  std::lock_guard lock(planner_mutex());
  auto key = std::make_pair(grid.rmax(), grid.intervals());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::shared_ptr<const SineBasis> basis(new SineBasis(grid));
  cache.emplace(key, basis);
  return basis;
}

void SineBasis::forward(std::span<const double> u, std::span<double> coeffs) const {
  const std::size_t m = size();
  std::vector<double> w(m);
  for (std::size_t i = 0; i < m; ++i) w[i] = sinh_[i] * u[i];
  fftw_execute_r2r(static_cast<fftw_plan>(dst_plan_), w.data(), coeffs.data());
  // RODFT00 returns 2 * sum_j w_j sin(pi j k / n).
  const double f = 0.5 * scale_ * grid_.h();
  for (std::size_t k = 0; k < m; ++k) coeffs[k] *= f;
}

void SineBasis::inverse(std::span<const double> coeffs, std::span<double> u) const {
  const std::size_t m = size();
  std::vector<double> c(coeffs.begin(), coeffs.end());
  fftw_execute_r2r(static_cast<fftw_plan>(dst_plan_), c.data(), u.data());
  const double f = 0.5 * scale_;
  for (std::size_t i = 0; i < m; ++i) u[i] *= f / sinh_[i];
}

void SineBasis::gradient(std::span<const double> coeffs, std::span<double> u, std::span<double> ur) const {
  const std::size_t m = size();
  const double dk = std::numbers::pi / grid_.rmax();
  std::vector<double> x(m + 2, 0.0), y(m + 2);
  for (std::size_t k = 1; k <= m; ++k) x[k] = coeffs[k - 1] * dk * static_cast<double>(k);
  fftw_execute_r2r(static_cast<fftw_plan>(dct_plan_), x.data(), y.data());
  std::vector<double> w(m), c(coeffs.begin(), coeffs.end());
  fftw_execute_r2r(static_cast<fftw_plan>(dst_plan_), c.data(), w.data());
  const double f = 0.5 * scale_;
  for (std::size_t i = 0; i < m; ++i) {
    const double wi = f * w[i];
    const double dwi = f * y[i + 1];
    u[i] = wi / sinh_[i];
    ur[i] = (dwi - coth_[i] * wi) / sinh_[i];
  }
}

SpectralField::SpectralField(const RadialGrid& g, std::vector<double> c) : grid(g), coeffs(std::move(c)) {
  if (coeffs.size() != grid.size()) throw GridMismatch("coefficient count does not match grid");
}

double SpectralField::eigenvalue(std::size_t k) const { return hypwave::eigenvalue(grid, k); }

double eigenvalue(const RadialGrid& grid, std::size_t k) {
  const double kk = static_cast<double>(k) * std::numbers::pi / grid.rmax();
  return 1.0 + kk * kk;
}

SpectralField forward(const RadialField& u) {
  SpectralField c(u.grid());
  SineBasis::get(u.grid())->forward(u.values(), c.coeffs);
  return c;
}

RadialField inverse(const SpectralField& c) {
  RadialField u(c.grid);
  SineBasis::get(c.grid)->inverse(c.coeffs, u.values());
  return u;
}

RadialField sine_mode(const RadialGrid& grid, std::size_t k) {
  const double kk = static_cast<double>(k) * std::numbers::pi / grid.rmax();
  return RadialField::from_function(grid, [kk](double r) { return std::sin(kk * r) / std::sinh(r); });
}

SpectralField apply_multiplier(const SpectralField& c, const SymbolMultiplier& m) {
  const auto basis = SineBasis::get(c.grid);
  const auto L = basis->eigenvalues();
  SpectralField out(c.grid);
  for (std::size_t k = 0; k < L.size(); ++k) {
    const double sym = m.symbol(L[k]);
    if (!std::isfinite(sym)) throw ParameterError("multiplier symbol is not finite on the grid spectrum");
    out.coeffs[k] = sym * c.coeffs[k];
  }
  return out;
}

RadialField apply_multiplier(const RadialField& u, const SymbolMultiplier& m) {
  return inverse(apply_multiplier(forward(u), m));
}

double sobolev_norm(const SpectralField& c, double sigma) {
  const auto L = SineBasis::get(c.grid)->eigenvalues();
  double sum = 0.0;
  for (std::size_t k = 0; k < L.size(); ++k) sum += std::pow(L[k], sigma) * c.coeffs[k] * c.coeffs[k];
  return std::sqrt(kFourPi * sum);
}

double sobolev_norm(const RadialField& u, double sigma) { return sobolev_norm(forward(u), sigma); }

double heat_symbol(double s, double L, HeatMode mode) {
  const double x = s * L;
  switch (mode) {
    case HeatMode::Geq: return std::exp(-x);
    case HeatMode::Band: return x * std::exp(-x);
    case HeatMode::Lt: return -std::expm1(-x);
  }
  return 0.0;
}

SpectralField heat_project(const SpectralField& c, double s, HeatMode mode) {
  if (!(s > 0.0)) throw ParameterError("heat-flow time s must be positive");
  return apply_multiplier(c, {[s, mode](double L) { return heat_symbol(s, L, mode); }});
}

RadialField heat_project(const RadialField& u, double s, HeatMode mode) {
  return inverse(heat_project(forward(u), s, mode));
}

namespace {

void check_bernstein_args(double beta, double alpha, double s) {
  if (!(beta >= 0.0 && beta < alpha && alpha < beta + 1.0))
    throw ParameterError("Bernstein exponents need 0 <= beta < alpha < beta + 1");
  if (!(s > 0.0)) throw ParameterError("heat-flow time s must be positive");
}

}  // namespace

double bernstein_ratio(double beta, double alpha, double s, const RadialField& u) {
  check_bernstein_args(beta, alpha, s);
  const auto c = forward(u);
  const auto L = SineBasis::get(u.grid())->eigenvalues();
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < L.size(); ++k) {
    const double c2 = c.coeffs[k] * c.coeffs[k];
    const double p = heat_symbol(s, L[k], HeatMode::Lt);
    num += std::pow(L[k], 2.0 * beta) * p * p * c2;
    den += std::pow(L[k], 2.0 * alpha) * c2;
  }
  if (!(den > 0.0)) throw ParameterError("Bernstein ratio needs a nonzero field");
  return std::sqrt(num / den) / std::pow(s, alpha - beta);
}

double bernstein_ratio_high(double beta, double alpha, double s, const RadialField& u) {
  check_bernstein_args(beta, alpha, s);
  const auto c = forward(u);
  const auto L = SineBasis::get(u.grid())->eigenvalues();
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < L.size(); ++k) {
    const double c2 = c.coeffs[k] * c.coeffs[k];
    const double p = heat_symbol(s, L[k], HeatMode::Geq);
    num += std::pow(L[k], 2.0 * alpha) * p * p * c2;
    den += std::pow(L[k], 2.0 * beta) * c2;
  }
  if (!(den > 0.0)) throw ParameterError("Bernstein ratio needs a nonzero field");
  return std::sqrt(num / den) / std::pow(s, beta - alpha);
}

double bernstein_high_envelope(double theta) { return std::pow(theta / std::numbers::e, theta); }

WaveState wave_propagate_linear(const WaveState& st, double dt) {
  const auto basis = SineBasis::get(st.grid());
  const auto L = basis->eigenvalues();
  const std::size_t m = L.size();
  std::vector<double> a(m), b(m);
  basis->forward(st.u.values(), a);
  basis->forward(st.ut.values(), b);
  for (std::size_t k = 0; k < m; ++k) {
    const double om = std::sqrt(L[k]);
    const double c = std::cos(om * dt), s = std::sin(om * dt);
    const double ak = a[k], bk = b[k];
    a[k] = c * ak + s / om * bk;
    b[k] = -om * s * ak + c * bk;
  }
  WaveState out = WaveState::zero(st.grid());
  basis->inverse(a, out.u.values());
  basis->inverse(b, out.ut.values());
  out.t = st.t + dt;
  return out;
}

RadialField spectral_radial_derivative(const RadialField& u) {
  const auto basis = SineBasis::get(u.grid());
  std::vector<double> c(u.size()), tmp(u.size());
  basis->forward(u.values(), c);
  RadialField ur(u.grid());
  basis->gradient(c, tmp, ur.values());
  return ur;
}

}  // namespace hypwave
