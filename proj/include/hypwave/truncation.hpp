#pragma once

// Fourier truncation experiment: u = omega + v, with omega the rough
// high-frequency piece and v the smooth remainder.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hypwave/core.hpp"
#include "hypwave/data.hpp"
#include "hypwave/morawetz.hpp"
#include "hypwave/solver.hpp"

namespace hypwave {

struct TruncationConfig {
  double delta = 0.25;
  double delta1 = 0.1;
  double s = 0.01;
  double c1 = 1e-2, c2 = 1e-3, c3 = 1e-3, c4 = 1e-4;
  double alpha = 0.9;
  double alpha_tilde = 0.5;
  double rmax = 32.0;
  int n = 4096;
  double dt = 1e-3;
  double t_final = 5.0;
  int stride = 10;
  std::uint64_t seed = 1;
  DataSpec data = default_data();

  static DataSpec default_data();
  void validate() const;  // throws ConfigError naming the key
  RadialGrid grid() const { return RadialGrid(rmax, n); }
};

struct SplitData {
  RadialField omega0, omega1, v0, v1;
};

// omega = P_{<s} u, v = P_{>=s} u; omega is formed as u - v so the sum is exact.
SplitData split_data(const RadialField& u0, const RadialField& u1, double s);

struct SplitNorms {
  double omega;  // ||(omega0, omega1)||_{H^(1/2+delta1) x H^(-1/2+delta1)}
  double v;      // ||(v0, v1)||_{H^1 x L^2}
};

SplitNorms split_norms(const SplitData& d, double delta1);

// -3 (v^2 omega + v omega^2)
RadialField perturbation_source(const RadialField& v, const RadialField& omega);

struct TruncationWeights {
  MorawetzWeight a1, a2, a3, a4;
  static TruncationWeights build(const RadialGrid& grid, double alpha, double alpha_tilde);
};

struct ModifiedEnergyParts {
  double E, M1, M2, M3, Mtilde, Emod;
};

ModifiedEnergyParts modified_energy_parts(const WaveState& st_v, const TruncationConfig& cfg, const TruncationWeights& w);
double modified_energy(const WaveState& st_v, const TruncationConfig& cfg, const TruncationWeights& w);

// Column order of the growth ledger CSV.
const std::vector<std::string>& ledger_columns();

struct GrowthLedger {
  std::vector<std::vector<double>> rows;
  std::vector<double> column(const std::string& name) const;
};

using Report = std::map<std::string, double>;

struct ExperimentResult {
  GrowthLedger ledger;
  Report report;
};

ExperimentResult run_experiment(const TruncationConfig& cfg);

}  // namespace hypwave
