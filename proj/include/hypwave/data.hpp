#pragma once

// Initial data: smooth bumps and random rough profiles.

#include <cstdint>
#include <limits>
#include <string>

#include "hypwave/core.hpp"

namespace hypwave {

enum class DataKind { Zero, Bump, Rough };

std::string to_string(DataKind k);
DataKind parse_data_kind(const std::string& s);

struct DataSpec {
  DataKind kind = DataKind::Bump;
  double amplitude = 1.0;   // bump: peak of u0
  double velocity = 0.0;    // bump: peak of u1
  double radius = 2.0;      // bump half-width; rough: cutoff radius R0
  double center = 0.0;      // bump center
  // rough: u0 rescaled to this H^(1/2+delta) norm, u1 to velocity_norm in H^(-1/2+delta)
  double norm = 1.0;
  double velocity_norm = 1.0;
  int modes = 2048;
  // rough: spectral decay exponent e in c_k ~ L_k^e g_k for u0; NaN picks the
  // marginal value -(1/2+delta)/2 - 1/4. u1 uses e + 1/2.
  double decay = std::numeric_limits<double>::quiet_NaN();

  // Largest r where the data can be nonzero.
  double support_radius() const;
};

// Smooth compactly supported bump A exp(1 - 1/(1 - x^2)), x = (r - center)/radius.
double bump_profile(double r, double amplitude, double center, double radius);

// Smooth cutoff: 1 on [0, 1/2], 0 on [1, inf).
double smooth_cutoff(double x);

// delta is the regularity surplus (used by rough data), seed drives the Gaussian draws.
WaveState make_initial_data(const RadialGrid& grid, const DataSpec& spec, double delta, std::uint64_t seed);

}  // namespace hypwave
