#pragma once

// Radial grids on H^3, the hyperbolic volume measure and weighted norms.
//
// Points are described by the geodesic distance r from a fixed origin; the
// volume element of a radial integrand is 4*pi*sinh(r)^2 dr. The computational
// domain is [0, rmax] with uniform mesh width h = rmax/n. Only the n-1 interior
// nodes r_j = j*h (j = 1..n-1) carry data: w = sinh(r)*u vanishes at r = 0 and
// is held at zero at r = rmax.

#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "hypwave/errors.hpp"

namespace hypwave {

inline constexpr double kFourPi = 4.0 * std::numbers::pi;

class RadialGrid {
 public:
  RadialGrid(double rmax, int intervals);

  double rmax() const noexcept { return rmax_; }
  int intervals() const noexcept { return n_; }
  double h() const noexcept { return h_; }
  // Number of interior nodes, n - 1.
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_ - 1); }
  // Node i (0-based) sits at r = (i+1)*h.
  double node(std::size_t i) const noexcept { return static_cast<double>(i + 1) * h_; }
  std::vector<double> nodes() const;

  bool operator==(const RadialGrid& o) const noexcept { return rmax_ == o.rmax_ && n_ == o.n_; }

 private:
  double rmax_;
  int n_;
  double h_;
};

// Samples u(r_j) of a radial function at the interior nodes.
class RadialField {
 public:
  explicit RadialField(const RadialGrid& grid);  // zero field
  RadialField(const RadialGrid& grid, std::vector<double> values);

  template <typename F>
  static RadialField from_function(const RadialGrid& grid, F&& f) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid.node(i));
    return RadialField(grid, std::move(v));
  }

  const RadialGrid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }

  double max_abs() const noexcept;
  bool all_finite() const noexcept;

  RadialField& operator+=(const RadialField& o);
  RadialField& operator-=(const RadialField& o);
  RadialField& operator*=(double a) noexcept;

 private:
  RadialGrid grid_;
  std::vector<double> values_;
};

RadialField operator+(RadialField a, const RadialField& b);
RadialField operator-(RadialField a, const RadialField& b);
RadialField operator*(double a, RadialField f);
// Pointwise product.
RadialField operator*(const RadialField& a, const RadialField& b);

// Applies g to every sample.
template <typename G>
RadialField map(const RadialField& f, G&& g) {
  RadialField out(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = g(f[i]);
  return out;
}

void require_same_grid(const RadialGrid& a, const RadialGrid& b);

struct WaveState {
  RadialField u;
  RadialField ut;
  double t = 0.0;

  WaveState(RadialField u_, RadialField ut_, double t_ = 0.0);
  static WaveState zero(const RadialGrid& grid) { return {RadialField(grid), RadialField(grid), 0.0}; }
  const RadialGrid& grid() const noexcept { return u.grid(); }
};

enum class Region { Inner, Outer, All };  // r <= 1, r > 1, whole domain

// ||weight * f||_{L^p(region)} under the hyperbolic measure. `origin_power` is
// the exponent e of the weight's leading behavior r^e at r = 0; it lets the
// quadrature treat integrable singularities at the origin exactly.
struct WeightedRegionNorm {
  std::function<double(double)> weight = [](double) { return 1.0; };
  double origin_power = 0.0;
  Region region = Region::All;
  double exponent = 2.0;  // p in [1, inf]

  static WeightedRegionNorm power(double e, Region region, double p);
};

// 4*pi * int_0^rmax f(r) sinh(r)^2 dr.
double integrate_measure(const RadialField& f);

// 4*pi * int_{region} f(r) sinh(r)^2 dr. When `singular_order` sigma > 0 the
// integrand f*sinh^2 is taken to behave like r^(-sigma) at the origin
// (0 < sigma < 1) and is integrated against r^(-sigma) with exact moments.
double integrate_measure(const RadialField& f, Region region, double singular_order = 0.0);

// Same as above for raw samples on `grid` (integrand already includes sinh^2,
// no 4*pi factor).
double integrate_samples(const RadialGrid& grid, std::span<const double> integrand, Region region,
                         double singular_order = 0.0);

double weighted_norm(const RadialField& f, const WeightedRegionNorm& d);

// Second-order finite differences: centered inside, one-sided at the first and
// last interior nodes.
RadialField radial_derivative(const RadialField& f);

}  // namespace hypwave
