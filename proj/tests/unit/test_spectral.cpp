#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hypwave/spectral.hpp"
#include "oracle_values.hpp"

using namespace hypwave;

namespace {

RadialField random_field(const RadialGrid& g, std::mt19937_64& rng) {
  std::normal_distribution<double> N;
  std::vector<double> c(g.size(), 0.0);
  for (std::size_t k = 0; k < std::min<std::size_t>(64, c.size()); ++k) c[k] = N(rng) / (1.0 + k);
  return inverse(SpectralField(g, c));
}

double max_diff(const RadialField& a, const RadialField& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

}  // namespace

TEST_CASE("eigenvalues") {
  RadialGrid g(10.0, 128);
  for (std::size_t k : {1u, 5u, 127u}) CHECK(eigenvalue(g, k) == doctest::Approx(1.0 + std::pow(k * std::numbers::pi / 10.0, 2)));
  for (double L : SineBasis::get(g)->eigenvalues()) CHECK(L >= 1.0);
}

TEST_CASE("roundtrip and Parseval") {
  std::mt19937_64 rng(11);
  for (int n : {256, 1024, 4096}) {
    RadialGrid g(16.0, n);
    const auto u = random_field(g, rng);
    const auto c = forward(u);
    CHECK(max_diff(inverse(c), u) <= 1e-12 * u.max_abs());
    double s1 = 0.0, s2 = 0.0;
    for (double x : c.coeffs) s1 += x * x;
    for (std::size_t i = 0; i < u.size(); ++i) s2 += g.h() * std::pow(std::sinh(g.node(i)) * u[i], 2);
    CHECK(std::abs(s1 - s2) <= 1e-12 * s2);

    std::normal_distribution<double> N;
    std::vector<double> cc(g.size());
    for (auto& x : cc) x = N(rng);
    const auto back = forward(inverse(SpectralField(g, cc)));
    double e = 0.0;
    for (std::size_t k = 0; k < cc.size(); ++k) e = std::max(e, std::abs(back.coeffs[k] - cc[k]));
    CHECK(e <= 1e-12);
  }
}

TEST_CASE("zero and single modes") {
  RadialGrid g(8.0, 256);
  for (double x : forward(RadialField(g)).coeffs) CHECK(x == 0.0);
  CHECK(inverse(SpectralField(g)).max_abs() == 0.0);
  const auto c = forward(sine_mode(g, 3));
  for (std::size_t k = 0; k < c.coeffs.size(); ++k) {
    if (k == 2) CHECK(c.coeffs[k] == doctest::Approx(std::sqrt(8.0 / 2.0)).epsilon(1e-12));
    else CHECK(std::abs(c.coeffs[k]) <= 1e-12);
  }
  // rmax = pi, k = 1: unit coefficient gives sqrt(2/pi) sin(r)/sinh(r)
  RadialGrid gp(std::numbers::pi, 64);
  SpectralField e1(gp);
  e1.coeffs[0] = 1.0;
  const auto u = inverse(e1);
  for (std::size_t i = 0; i < gp.size(); ++i) {
    const double r = gp.node(i);
    CHECK(u[i] == doctest::Approx(std::sqrt(2.0 / std::numbers::pi) * std::sin(r) / std::sinh(r)).epsilon(1e-13));
  }
}

TEST_CASE("multipliers") {
  std::mt19937_64 rng(5);
  RadialGrid g(16.0, 512);
  const auto u = random_field(g, rng);
  CHECK(max_diff(apply_multiplier(u, {[](double) { return 1.0; }}), u) <= 1e-12 * u.max_abs());
  SymbolMultiplier m1{[](double L) { return 1.0 / L; }}, m2{[](double L) { return std::exp(-0.1 * L); }};
  SymbolMultiplier m12{[](double L) { return std::exp(-0.1 * L) / L; }};
  const auto a = apply_multiplier(apply_multiplier(u, m1), m2);
  const auto b = apply_multiplier(apply_multiplier(u, m2), m1);
  CHECK(max_diff(a, b) <= 1e-14 * u.max_abs());
  CHECK(max_diff(a, apply_multiplier(u, m12)) <= 1e-14 * u.max_abs());
  CHECK_THROWS_AS(apply_multiplier(u, {[](double L) { return L > 50.0 ? INFINITY : 1.0; }}), ParameterError);
  CHECK(max_diff(apply_multiplier(u, {[](double L) { return std::exp(-0.0 * L); }}), u) <= 1e-12 * u.max_abs());
}

TEST_CASE("multiplier L on a mode matches the finite-difference Laplacian") {
  auto err = [](int n) {
    RadialGrid g(8.0, n);
    const std::size_t k = 4;
    const auto u = sine_mode(g, k);
    const auto Lu = apply_multiplier(u, {[](double L) { return L; }});
    const double h = g.h();
    double e = 0.0;
    for (std::size_t i = 1; i + 1 < g.size(); ++i) {
      const double r = g.node(i);
      const double lap = (u[i + 1] - 2 * u[i] + u[i - 1]) / (h * h) + 2.0 / std::tanh(r) * (u[i + 1] - u[i - 1]) / (2 * h);
      e = std::max(e, std::abs(Lu[i] + lap));
    }
    return e;
  };
  CHECK(err(512) / err(1024) == doctest::Approx(4.0).epsilon(0.075));
}

TEST_CASE("sobolev_norm") {
  RadialGrid g(8.0, 256);
  CHECK(sobolev_norm(RadialField(g), 1.0) == 0.0);
  SpectralField c(g);
  c.coeffs[4] = 1.0;
  CHECK(sobolev_norm(c, 1.0) == doctest::Approx(std::sqrt(kFourPi * (1.0 + std::pow(5 * std::numbers::pi / 8.0, 2)))));
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const auto u = random_field(g, rng);
    const double a = sobolev_norm(u, -0.5), b = sobolev_norm(u, 0.0), d = sobolev_norm(u, 0.75);
    CHECK(a <= b * (1 + 1e-12));
    CHECK(b <= d * (1 + 1e-12));
  }
  // sigma = 0 is the L^2 norm; the two quadratures differ only in the last cell
  const auto u = random_field(g, rng);
  CHECK(sobolev_norm(u, 0.0) == doctest::Approx(std::sqrt(integrate_measure(u * u))).epsilon(1e-4));
}

TEST_CASE("heat projections") {
  std::mt19937_64 rng(4);
  RadialGrid g(16.0, 512);
  const auto u = random_field(g, rng);
  for (double s : {0.01, 0.1, 1.0}) {
    const auto sum = heat_project(u, s, HeatMode::Lt) + heat_project(u, s, HeatMode::Geq);
    CHECK(max_diff(sum, u) <= 1e-14 * std::max(1.0, u.max_abs()) * 10);
    CHECK(sobolev_norm(heat_project(u, s, HeatMode::Band), 0.0) <= std::exp(-1.0) * sobolev_norm(u, 0.0));
  }
  const auto un = (1.0 / sobolev_norm(u, 0.0)) * u;
  CHECK(max_diff(heat_project(un, 1e-12, HeatMode::Geq), un) <= 1e-9);
  CHECK_THROWS_AS(heat_project(u, 0.0, HeatMode::Geq), ParameterError);

  const auto m = sine_mode(g, 7);
  const double L = eigenvalue(g, 7), s = 0.3;
  const auto pm = heat_project(m, s, HeatMode::Band);
  CHECK(max_diff(pm, (s * L * std::exp(-s * L)) * m) <= 1e-13);
}

TEST_CASE("Bernstein ratios") {
  RadialGrid g(16.0, 512);
  // single mode with sL = 1, alpha - beta = 1/2
  const std::size_t k = 10;
  const double s = 1.0 / eigenvalue(g, k);
  CHECK(bernstein_ratio(0.25, 0.75, s, sine_mode(g, k)) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
  std::mt19937_64 rng(9);
  const auto u = random_field(g, rng);
  CHECK(bernstein_ratio(0.5 - 1e-9, 0.5, 0.1, u) <= 1.0);
  CHECK(bernstein_high_envelope(0.5) == doctest::Approx(oracle::kBernsteinEnvelope_0p5).epsilon(1e-14));
  CHECK(bernstein_ratio_high(0.0, 0.5, 0.1, u) <= bernstein_high_envelope(0.5));
  CHECK_THROWS_AS(bernstein_ratio(0.5, 0.25, 0.1, u), ParameterError);
  CHECK_THROWS_AS(bernstein_ratio(0.0, 1.5, 0.1, u), ParameterError);
  CHECK_THROWS_AS(bernstein_ratio(0.0, 0.5, -1.0, u), ParameterError);
}

TEST_CASE("linear propagator") {
  std::mt19937_64 rng(8);
  RadialGrid g(16.0, 512);
  const WaveState st(random_field(g, rng), random_field(g, rng));
  const auto same = wave_propagate_linear(st, 0.0);
  CHECK(max_diff(same.u, st.u) <= 1e-13);

  const std::size_t k = 3;
  const WaveState mode(sine_mode(g, k), RadialField(g));
  const auto back = wave_propagate_linear(mode, 2.0 * std::numbers::pi / std::sqrt(eigenvalue(g, k)));
  CHECK(max_diff(back.u, mode.u) <= 1e-11);
  CHECK(back.ut.max_abs() <= 1e-11);

  const auto there = wave_propagate_linear(wave_propagate_linear(st, 0.7), -0.7);
  CHECK(max_diff(there.u, st.u) <= 1e-12 * st.u.max_abs() * 10);

  auto lin_energy = [](const WaveState& s) {
    const auto a = forward(s.u), b = forward(s.ut);
    double e = 0.0;
    for (std::size_t k = 0; k < a.coeffs.size(); ++k) e += a.eigenvalue(k + 1) * a.coeffs[k] * a.coeffs[k] + b.coeffs[k] * b.coeffs[k];
    return e;
  };
  const double e0 = lin_energy(st);
  WaveState cur = st;
  for (int i = 0; i < 1000; ++i) cur = wave_propagate_linear(cur, 0.01);
  CHECK(std::abs(lin_energy(cur) - e0) <= 1e-12 * e0);
}

TEST_CASE("spectral derivative") {
  RadialGrid g(16.0, 1024);
  const auto u = RadialField::from_function(g, [](double r) { return std::exp(-r * r); });
  const auto du = spectral_radial_derivative(u);
  double e = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) e = std::max(e, std::abs(du[i] + 2 * g.node(i) * std::exp(-g.node(i) * g.node(i))));
  CHECK(e <= 1e-6);
}
