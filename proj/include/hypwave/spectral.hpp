#pragma once

// Sine-spectral calculus for the radial Laplacian on H^3.
//
// With w = sinh(r) u the radial Laplacian becomes d^2/dr^2 - 1, so on [0, rmax]
// with Dirichlet ends the functions sin(k pi r / rmax) / sinh(r) are exact
// eigenfunctions of -Delta with eigenvalues L_k = 1 + (k pi / rmax)^2 >= 1.
// Coefficients are normalized so that sum_k c_k^2 = int_0^rmax w^2 dr (trapezoid
// on the interior nodes), i.e. ||u||_{L^2(H^3)}^2 = 4 pi sum_k c_k^2.

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "hypwave/core.hpp"

namespace hypwave {

// Per-grid tables and transform plans. Instances are immutable and shared.
class SineBasis {
 public:
  static std::shared_ptr<const SineBasis> get(const RadialGrid& grid);

  const RadialGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return grid_.size(); }
  std::span<const double> sinh_r() const noexcept { return sinh_; }
  std::span<const double> coth_r() const noexcept { return coth_; }
  // L_k for k = 1..n-1, stored at index k-1.
  std::span<const double> eigenvalues() const noexcept { return eig_; }

  void forward(std::span<const double> u, std::span<double> coeffs) const;
  void inverse(std::span<const double> coeffs, std::span<double> u) const;
  // u and du/dr at the nodes, using the exact derivative of the sine series of w.
  void gradient(std::span<const double> coeffs, std::span<double> u, std::span<double> ur) const;

  ~SineBasis();
  SineBasis(const SineBasis&) = delete;
  SineBasis& operator=(const SineBasis&) = delete;

 private:
  explicit SineBasis(const RadialGrid& grid);

  RadialGrid grid_;
  std::vector<double> sinh_;
  std::vector<double> coth_;
  std::vector<double> eig_;
  double scale_;  // sqrt(2 / rmax)
  void* dst_plan_ = nullptr;
  void* dct_plan_ = nullptr;
};

struct SpectralField {
  RadialGrid grid;
  std::vector<double> coeffs;  // c_k at index k-1

  explicit SpectralField(const RadialGrid& g) : grid(g), coeffs(g.size(), 0.0) {}
  SpectralField(const RadialGrid& g, std::vector<double> c);

  double eigenvalue(std::size_t k) const;  // 1-based mode number
};

double eigenvalue(const RadialGrid& grid, std::size_t k);

SpectralField forward(const RadialField& u);
RadialField inverse(const SpectralField& c);

// u = sin(k pi r / rmax) / sinh(r) sampled on the grid.
RadialField sine_mode(const RadialGrid& grid, std::size_t k);

struct SymbolMultiplier {
  std::function<double(double)> symbol;
};

SpectralField apply_multiplier(const SpectralField& c, const SymbolMultiplier& m);
RadialField apply_multiplier(const RadialField& u, const SymbolMultiplier& m);

// ||(-Delta)^(sigma/2) u||_2, the H^sigma norm.
double sobolev_norm(const SpectralField& c, double sigma);
double sobolev_norm(const RadialField& u, double sigma);

enum class HeatMode { Geq, Band, Lt };

// Heat-flow frequency projections: symbols exp(-sL), sL exp(-sL), 1 - exp(-sL).
double heat_symbol(double s, double L, HeatMode mode);
RadialField heat_project(const RadialField& u, double s, HeatMode mode);
SpectralField heat_project(const SpectralField& c, double s, HeatMode mode);

// ||(-Delta)^beta P_{<s} u||_2 / (s^(alpha-beta) ||(-Delta)^alpha u||_2).
double bernstein_ratio(double beta, double alpha, double s, const RadialField& u);
// ||(-Delta)^alpha P_{>=s} u||_2 / (s^(beta-alpha) ||(-Delta)^beta u||_2).
double bernstein_ratio_high(double beta, double alpha, double s, const RadialField& u);
// sup_{x>0} x^theta exp(-x) = (theta/e)^theta, the envelope of the second form.
double bernstein_high_envelope(double theta);

// Exact free flow of u_tt - Delta u = 0 over dt.
WaveState wave_propagate_linear(const WaveState& st, double dt);

// du/dr via the spectral derivative of w = sinh(r) u.
RadialField spectral_radial_derivative(const RadialField& u);

}  // namespace hypwave
