#include "hypwave/core.hpp"

#include <algorithm>
#include <cmath>

#include "hypwave/gauss_legendre.hpp"

namespace hypwave {

namespace {

constexpr double kRegionEps = 1e-12;

bool in_inner(double r) { return r < 1.0 - kRegionEps; }
bool in_outer(double r) { return r > 1.0 + kRegionEps; }

// Linear extrapolation of the line through (x0, y0), (x1, y1) to x.
double extrapolate(double x0, double y0, double x1, double y1, double x) {
  return y0 + (x - x0) * (y1 - y0) / (x1 - x0);
}

// int_a^b x^(-sigma) g(x) dx for g linear between (a, ga) and (b, gb), a > 0.
double product_cell(double a, double b, double ga, double gb, double sigma, double h) {
  if (a < 8.0 * h) {
    const double p = 1.0 - sigma;
    const double m0 = (std::pow(b, p) - std::pow(a, p)) / p;
    const double m1 = (std::pow(b, p + 1.0) - std::pow(a, p + 1.0)) / (p + 1.0);
    return ga * m0 + (gb - ga) * (m1 - a * m0) / (b - a);
  }
  static const GaussLegendreRule rule(4);
  return rule.integrate(
      [&](double x) { return std::pow(x, -sigma) * (ga + (gb - ga) * (x - a) / (b - a)); }, a, b);
}

}  // namespace

RadialGrid::RadialGrid(double rmax, int intervals) : rmax_(rmax), n_(intervals), h_(rmax / intervals) {
  if (!(rmax > 0.0) || !std::isfinite(rmax)) throw ParameterError("rmax must be positive and finite");
  if (intervals < 8) throw ParameterError("grid needs at least 8 subintervals");
}

std::vector<double> RadialGrid::nodes() const {
  std::vector<double> r(size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = node(i);
  return r;
}

RadialField::RadialField(const RadialGrid& grid) : grid_(grid), values_(grid.size(), 0.0) {}

RadialField::RadialField(const RadialGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw GridMismatch("field length does not match grid");
  if (!all_finite()) throw ParameterError("field values must be finite");
}

double RadialField::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool RadialField::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

RadialField& RadialField::operator+=(const RadialField& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
  return *this;
}

RadialField& RadialField::operator-=(const RadialField& o) {
  require_same_grid(grid_, o.grid_);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
  return *this;
}

RadialField& RadialField::operator*=(double a) noexcept {
  for (double& v : values_) v *= a;
  return *this;
}

RadialField operator+(RadialField a, const RadialField& b) { return a += b; }
RadialField operator-(RadialField a, const RadialField& b) { return a -= b; }
RadialField operator*(double a, RadialField f) { return f *= a; }

RadialField operator*(const RadialField& a, const RadialField& b) {
  require_same_grid(a.grid(), b.grid());
  RadialField out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

void require_same_grid(const RadialGrid& a, const RadialGrid& b) {
  if (!(a == b)) throw GridMismatch();
}

WaveState::WaveState(RadialField u_, RadialField ut_, double t_) : u(std::move(u_)), ut(std::move(ut_)), t(t_) {
  require_same_grid(u.grid(), ut.grid());
}

WeightedRegionNorm WeightedRegionNorm::power(double e, Region region, double p) {
  WeightedRegionNorm d;
  d.weight = [e](double r) { return std::pow(r, e); };
  d.origin_power = e;
  d.region = region;
  d.exponent = p;
  return d;
}

double integrate_samples(const RadialGrid& grid, std::span<const double> F, Region region,
                         double sigma) {
  if (F.size() != grid.size()) throw GridMismatch("sample length does not match grid");
  if (sigma < 0.0 || sigma >= 1.0) throw ParameterError("singular order must lie in [0, 1)");
  const double h = grid.h();

  std::size_t first = 0;
  std::size_t last = grid.size();  // one past
  double lo = 0.0;
  double hi = grid.rmax();
  if (region == Region::Inner) {
    while (last > 0 && !in_inner(grid.node(last - 1))) --last;
    hi = std::min(1.0, grid.rmax());
  } else if (region == Region::Outer) {
    while (first < last && !in_outer(grid.node(first))) ++first;
    lo = 1.0;
    sigma = 0.0;
  }
  if (first >= last) throw EmptyRegion("region holds no grid nodes");

  auto r = [&](std::size_t i) { return grid.node(i); };
  auto cell = [&](double a, double b, double Fa, double Fb) {
    if (sigma > 0.0 && a > 0.0 && a < 1.0)
      return product_cell(a, b, Fa * std::pow(a, sigma), Fb * std::pow(b, sigma), sigma, h);
    return 0.5 * (b - a) * (Fa + Fb);
  };

  double sum = 0.0;
  // Left end.
  if (lo == 0.0) {
    const double x0 = r(first);
    if (sigma > 0.0) {
      // g = F r^sigma frozen at its first-node value: int_0^x0 r^-sigma g dr.
      sum += F[first] * x0 / (1.0 - sigma);
    } else {
      sum += 0.5 * x0 * F[first];  // the sinh^2 factor makes the integrand vanish at r = 0
    }
  } else {
    const double x0 = r(first);
    const double F_lo = (last - first >= 2) ? extrapolate(x0, F[first], r(first + 1), F[first + 1], lo) : F[first];
    sum += 0.5 * (x0 - lo) * (F_lo + F[first]);
  }
  for (std::size_t i = first; i + 1 < last; ++i) sum += cell(r(i), r(i + 1), F[i], F[i + 1]);
  // Right end.
  const double xl = r(last - 1);
  if (hi > xl) {
    const double F_hi = (last - first >= 2) ? extrapolate(r(last - 2), F[last - 2], xl, F[last - 1], hi) : F[last - 1];
    sum += cell(xl, hi, F[last - 1], F_hi);
  }
  return sum;
}

double integrate_measure(const RadialField& f, Region region, double singular_order) {
  const auto& g = f.grid();
  std::vector<double> F(f.size());
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double s = std::sinh(g.node(i));
    F[i] = f[i] * s * s;
  }
  return kFourPi * integrate_samples(g, F, region, singular_order);
}

double integrate_measure(const RadialField& f) { return integrate_measure(f, Region::All, 0.0); }

double weighted_norm(const RadialField& f, const WeightedRegionNorm& d) {
  const double p = d.exponent;
  if (!(p >= 1.0)) throw ParameterError("norm exponent must be >= 1");
  const auto& g = f.grid();
  auto selected = [&](double r) {
    switch (d.region) {
      case Region::Inner: return r <= 1.0 + kRegionEps;
      case Region::Outer: return in_outer(r);
      case Region::All: return true;
    }
    return true;
  };

  if (std::isinf(p)) {
    bool any = false;
    double m = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double r = g.node(i);
      if (!selected(r)) continue;
      any = true;
      m = std::max(m, std::abs(d.weight(r) * f[i]));
    }
    if (!any) throw EmptyRegion("region holds no grid nodes");
    return m;
  }

  // |weight f|^p sinh^2 ~ r^(p e + 2) at the origin.
  double sigma = 0.0;
  if (d.region != Region::Outer && p * d.origin_power + 2.0 < 0.0) {
    sigma = -(p * d.origin_power + 2.0);
    if (sigma >= 1.0) throw ParameterError("weighted integrand is not integrable at r = 0");
  }
  std::vector<double> F(f.size());
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double r = g.node(i);
    const double s = std::sinh(r);
    F[i] = std::pow(std::abs(d.weight(r) * f[i]), p) * s * s;
  }
  const double integral = kFourPi * integrate_samples(g, F, d.region, sigma);
  return std::pow(integral, 1.0 / p);
}

RadialField radial_derivative(const RadialField& f) {
  const std::size_t m = f.size();
  const double inv2h = 0.5 / f.grid().h();
  RadialField d(f.grid());
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2h;
  for (std::size_t i = 1; i + 1 < m; ++i) d[i] = (f[i + 1] - f[i - 1]) * inv2h;
  d[m - 1] = (3.0 * f[m - 1] - 4.0 * f[m - 2] + f[m - 3]) * inv2h;
  return d;
}

}  // namespace hypwave
