#pragma once

// Randomized checks of the functional inequalities and Strichartz bounds.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hypwave/core.hpp"

namespace hypwave {

struct StrichartzTriple {
  double p, q, gamma;  // p, q may be infinity
};

enum class Admissibility { InR, InE, Neither };

std::string to_string(Admissibility a);

// Membership of the two sets; `range_ok` is false when p or q < 2.
bool in_region_r(const StrichartzTriple& t);
bool in_region_e(const StrichartzTriple& t);
bool exponents_in_range(const StrichartzTriple& t);
// InR when the triple lies in R (whether or not it also lies in E), else InE or Neither.
Admissibility strichartz_admissible(const StrichartzTriple& t);

enum class EnsembleKind { Bumps, Spectral };

struct EnsembleSpec {
  int count = 50;
  std::uint64_t seed = 1;
  EnsembleKind kind = EnsembleKind::Bumps;
  double decay = -1.0;  // spectral: c_k ~ L_k^decay g_k
  int modes = 256;      // spectral
  double radius = 4.0;  // spectral: cutoff radius; bumps: centers + radii stay below 4
  double norm = 1.0;    // L^2 norm after rescaling

  void validate() const;
};

// Member i of the ensemble on `grid`; identical functions on any grid with the same rmax.
RadialField ensemble_member(const RadialGrid& grid, const EnsembleSpec& e, int i);

// max over the ensemble of ||e^{it sqrt(-Delta)} f||_{L^p_t L^q_x([0,T])} / ||f||_{H^gamma}
// for every triple and horizon. Time samples are spaced by about dt_sample.
std::vector<std::vector<double>> strichartz_probe(const std::vector<StrichartzTriple>& triples, const EnsembleSpec& e,
                                                  const std::vector<double>& horizons, const RadialGrid& grid,
                                                  double dt_sample = 0.02, int jobs = 1);
double strichartz_probe(const StrichartzTriple& t, const EnsembleSpec& e, double T, const RadialGrid& grid,
                        double dt_sample = 0.02);

struct RadialSobolevResult {
  double max_ratio;      // ||sinh(r) f||_inf / ||f||_{H^alpha}
  double max_pointwise;  // max sinh^2 |f|^2 / (||f||_2 ||(-Delta)^(1/2) f||_2)
};

RadialSobolevResult radial_sobolev_check(double alpha, const EnsembleSpec& e, const RadialGrid& grid);

struct InterpolationResult {
  double weighted_l6 = 0.0;  // ||r^(1/2 - delta2) w||_{L^6(r<=1)} / ||w||_{H^(1/2+delta/2)}
  double weighted_linf = 0.0;  // ||r^(1/2+alpha/2) w||_{L^inf(r<=1)} / ||w||_{H^(1/2+delta/2)}
  double hardy = 0.0;      // ||v/r||_{L^2(r<=1)} / ||v_r||_{L^2}
  double interpolated_l6 = 0.0;  // ||r^(-1/2+delta2) v||_{L^6(r<=1)} / (A^theta B^(1-theta))
  double theta = 0.0;
};

InterpolationResult interpolation_check(const EnsembleSpec& e, const RadialGrid& grid, double delta, double alpha);

struct CheckResult {
  std::string name;
  std::map<std::string, double> parameters;
  double max_ratio = 0.0;
  std::vector<double> stability_deltas;
  bool pass = false;
};

struct SuiteConfig {
  std::uint64_t seed = 1;
  int count = 50;
  double rmax = 16.0;
  int n = 1024;
  double delta = 0.25;
  double alpha = 0.9;
  double tolerance = 0.10;          // relative stability tolerance
  double sobolev_tolerance = 0.05;  // radial Sobolev refinement tolerance
  int strichartz_count = 50;
  double strichartz_rmax = 48.0;
  int strichartz_n = 2048;
  double strichartz_dt = 0.02;
  int jobs = 1;

  void validate() const;  // throws ConfigError
};

std::vector<CheckResult> run_inequality_suite(const SuiteConfig& cfg);

// Fixed table of boundary triples with their hand-computed memberships.
struct ClassifierCase {
  StrichartzTriple t;
  bool in_r, in_e;
};
const std::vector<ClassifierCase>& strichartz_boundary_cases();

}  // namespace hypwave
