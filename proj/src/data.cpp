#include "hypwave/data.hpp"

#include <cmath>
#include <random>

#include "hypwave/spectral.hpp"

namespace hypwave {

std::string to_string(DataKind k) {
  switch (k) {
    case DataKind::Zero: return "zero";
    case DataKind::Bump: return "bump";
    case DataKind::Rough: return "rough";
  }
  return "?";
}

DataKind parse_data_kind(const std::string& s) {
  if (s == "zero") return DataKind::Zero;
  if (s == "bump") return DataKind::Bump;
  if (s == "rough") return DataKind::Rough;
  throw ParameterError("unknown data kind '" + s + "'");
}

double DataSpec::support_radius() const {
  switch (kind) {
    case DataKind::Zero: return 0.0;
    case DataKind::Bump: return center + radius;
    case DataKind::Rough: return radius;
  }
  return 0.0;
}

double bump_profile(double r, double amplitude, double center, double radius) {
  const double x = (r - center) / radius;
  if (std::abs(x) >= 1.0) return 0.0;
  return amplitude * std::exp(1.0 - 1.0 / (1.0 - x * x));
}

double smooth_cutoff(double x) {
  if (x <= 0.5) return 1.0;
  if (x >= 1.0) return 0.0;
  // Glued exp(-1/t) transition on (1/2, 1).
  auto psi = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
  const double t = 2.0 * (1.0 - x);
  return psi(t) / (psi(t) + psi(1.0 - t));
}

namespace {

RadialField rough_field(const RadialGrid& grid, const DataSpec& spec, double exponent, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  SpectralField c(grid);
  const std::size_t modes = std::min<std::size_t>(static_cast<std::size_t>(spec.modes), grid.size());
  for (std::size_t k = 1; k <= modes; ++k) c.coeffs[k - 1] = std::pow(eigenvalue(grid, k), exponent) * gauss(rng);
  // Draws past the grid's mode count are still consumed so u1 does not depend on n.
  for (std::size_t k = modes; k < static_cast<std::size_t>(spec.modes); ++k) gauss(rng);
  RadialField u = inverse(c);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] *= smooth_cutoff(grid.node(i) / spec.radius);
  return u;
}

void rescale(RadialField& u, double sigma, double target) {
  const double n = sobolev_norm(u, sigma);
  if (n > 0.0) u *= target / n;
}

}  // namespace

WaveState make_initial_data(const RadialGrid& grid, const DataSpec& spec, double delta, std::uint64_t seed) {
  switch (spec.kind) {
    case DataKind::Zero:
      return WaveState::zero(grid);
    case DataKind::Bump: {
      if (!(spec.radius > 0.0)) throw ParameterError("bump radius must be positive");
      auto u0 = RadialField::from_function(grid, [&](double r) { return bump_profile(r, spec.amplitude, spec.center, spec.radius); });
      auto u1 = RadialField::from_function(grid, [&](double r) { return bump_profile(r, spec.velocity, spec.center, spec.radius); });
      return {std::move(u0), std::move(u1), 0.0};
    }
    case DataKind::Rough: {
      if (!(spec.radius > 0.0)) throw ParameterError("cutoff radius must be positive");
      if (spec.modes < 1) throw ParameterError("rough data needs at least one mode");
      const double e0 = std::isnan(spec.decay) ? -(0.5 + delta) / 2.0 - 0.25 : spec.decay;
      std::mt19937_64 rng(seed);
      RadialField u0 = rough_field(grid, spec, e0, rng);
      RadialField u1 = rough_field(grid, spec, e0 + 0.5, rng);
      rescale(u0, 0.5 + delta, spec.norm);
      rescale(u1, -0.5 + delta, spec.velocity_norm);
      return {std::move(u0), std::move(u1), 0.0};
    }
  }
  return WaveState::zero(grid);
}

}  // namespace hypwave
