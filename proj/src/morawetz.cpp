#include "hypwave/morawetz.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "hypwave/gauss_legendre.hpp"
#include "hypwave/spectral.hpp"

namespace hypwave {

namespace {

constexpr double kEps = 1e-12;

bool inner(double r) { return r < 1.0 - kEps; }

// (sinh r cosh r - r) / 2 = int_0^r sinh^2
double J(double r) { return 0.5 * (std::sinh(r) * std::cosh(r) - r); }

// r cosh r - sinh r, with the series where it cancels.
double rcosh_minus_sinh(double r) {
  if (r < 0.1) {
    const double r2 = r * r;
    return r * r2 * (1.0 / 3.0 + r2 * (1.0 / 30.0 + r2 * (1.0 / 840.0 + r2 * (1.0 / 45360.0 + r2 / 3991680.0))));
  }
  return r * std::cosh(r) - std::sinh(r);
}

// r coth r - 1
double rcoth_minus_one(double r) {
  if (r < 0.1) {
    const double x2 = r * r;
    return x2 * (1.0 / 3.0 + x2 * (-1.0 / 45.0 + x2 * (2.0 / 945.0 + x2 * (-1.0 / 4725.0 + x2 * 2.0 / 93555.0))));
  }
  return r / std::tanh(r) - 1.0;
}

// int_0^b s^(-sigma) sinh^2(s) ds for 0 < b <= 1, from the series of sinh^2.
double origin_cell(double b, double sigma) {
  double sum = 0.0;
  double fact = 2.0;  // (2m)!
  for (int m = 1; m <= 30; ++m) {
    if (m > 1) fact *= (2.0 * m - 1.0) * (2.0 * m);
    const double coef = std::pow(2.0, 2 * m - 1) / fact;
    const double e = 2.0 * m + 1.0 - sigma;
    const double term = coef * std::pow(b, e) / e;
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

void check_param(WeightFamily family, double param) {
  if (family == WeightFamily::A3 || family == WeightFamily::A4) {
    if (!(param > 0.0 && param < 1.0))
      throw ParameterError(to_string(family) + " exponent must lie in (0, 1), got " + std::to_string(param));
  } else if (param != 0.0) {
    throw ParameterError(to_string(family) + " takes no exponent");
  }
}

// Spectral u and u_r of a field.
struct Gradient {
  std::vector<double> u, ur;
};

Gradient gradient_of(const RadialField& f) {
  const auto basis = SineBasis::get(f.grid());
  Gradient g{std::vector<double>(f.size()), std::vector<double>(f.size())};
  std::vector<double> c(f.size());
  basis->forward(f.values(), c);
  basis->gradient(c, g.u, g.ur);
  return g;
}

void require_weight_grid(const WaveState& st, const MorawetzWeight& w) {
  require_same_grid(st.grid(), w.grid);
}

}  // namespace

std::string to_string(WeightFamily f) {
  switch (f) {
    case WeightFamily::A1: return "A1";
    case WeightFamily::A2: return "A2";
    case WeightFamily::A3: return "A3";
    case WeightFamily::A4: return "A4";
  }
  return "?";
}

WeightFamily parse_weight_family(const std::string& s) {
  if (s == "A1" || s == "a1") return WeightFamily::A1;
  if (s == "A2" || s == "a2") return WeightFamily::A2;
  if (s == "A3" || s == "a3") return WeightFamily::A3;
  if (s == "A4" || s == "a4") return WeightFamily::A4;
  throw ParameterError("unknown weight family '" + s + "'");
}

double MorawetzWeight::sigma() const {
  switch (family) {
    case WeightFamily::A1: return 0.0;
    case WeightFamily::A2: return 1.0;
    default: return param;
  }
}

MorawetzWeight build_weight(WeightFamily family, const RadialGrid& grid, double param) {
  check_param(family, param);
  MorawetzWeight w{family, param, grid, {}, {}, {}, {}, {}, {}};
  const double sigma = w.sigma();
  const std::size_t m = grid.size();
  w.a.resize(m);
  w.a_prime.resize(m);
  w.a_double_prime.resize(m);
  w.lap_a.resize(m);
  w.lap_a_prime.resize(m);
  w.bilap_a.resize(m);

  static const GaussLegendreRule gl(8);
  auto integrand = [sigma](double s) {
    const double sh = std::sinh(s);
    return sh * sh * std::pow(s, -sigma);
  };

  // I(r) = int_0^r sinh^2 Delta a, accumulated cell by cell inside the unit ball.
  double I = 0.0;
  double prev = 0.0;
  double I1 = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < m; ++i) {
    const double r = grid.node(i);
    if (inner(r)) {
      I += prev == 0.0 ? origin_cell(r, sigma) : gl.integrate(integrand, prev, r);
      prev = r;
      const double sh = std::sinh(r);
      w.a_prime[i] = I / (sh * sh);
      w.lap_a[i] = std::pow(r, -sigma);
      w.lap_a_prime[i] = sigma == 0.0 ? 0.0 : -sigma * std::pow(r, -sigma - 1.0);
      w.bilap_a[i] = sigma == 0.0 ? 0.0 : sigma * std::pow(r, -sigma - 2.0) * ((sigma - 1.0) - 2.0 * rcoth_minus_one(r));
      w.a_double_prime[i] = w.lap_a[i] - 2.0 / std::tanh(r) * w.a_prime[i];
      continue;
    }
    if (std::isnan(I1)) I1 = I + (prev == 0.0 ? origin_cell(1.0, sigma) : gl.integrate(integrand, prev, 1.0));
    const double C = I1 - J(1.0);
    const double sh = std::sinh(r);
    w.a_prime[i] = (J(r) + C) / (sh * sh);
    w.lap_a[i] = 1.0;
    w.lap_a_prime[i] = 0.0;
    w.bilap_a[i] = 0.0;
    w.a_double_prime[i] = (rcosh_minus_sinh(r) - 2.0 * C * std::cosh(r)) / (sh * sh * sh);
  }

  // a(0) = 0 and a'(0) = 0.
  double acc = 0.5 * grid.h() * w.a_prime[0];
  w.a[0] = acc;
  for (std::size_t i = 1; i < m; ++i) {
    acc += 0.5 * grid.h() * (w.a_prime[i - 1] + w.a_prime[i]);
    w.a[i] = acc;
  }
  return w;
}

double a1_prime_exact(double r) {
  const double sh = std::sinh(r);
  return J(r) / (sh * sh);
}

double a1_double_prime_exact(double r) {
  const double sh = std::sinh(r);
  return rcosh_minus_sinh(r) / (sh * sh * sh);
}

bool ConditionReport::all_pass() const {
  for (const auto& c : conditions)
    if (!c.pass) return false;
  return true;
}

const ConditionResult& ConditionReport::at(const std::string& name) const {
  for (const auto& c : conditions)
    if (c.name == name) return c;
  throw std::out_of_range("no condition named " + name);
}

ConditionReport validate_conditions(const MorawetzWeight& w) {
  const auto& g = w.grid;
  const std::size_t m = g.size();
  auto check = [&](const std::string& name, auto margin, bool strict = false) {
    ConditionResult res;
    res.name = name;
    res.worst_margin = std::numeric_limits<double>::infinity();
    bool open = false;
    for (std::size_t i = 0; i < m; ++i) {
      const double v = margin(i);
      res.worst_margin = std::min(res.worst_margin, v);
      const bool bad = strict ? !(v > 0.0) : !(v >= 0.0);
      if (bad) {
        ++res.failing_nodes;
        if (!open) res.failing_ranges.push_back({g.node(i), g.node(i)});
        res.failing_ranges.back().second = g.node(i);
      }
      open = bad;
    }
    res.pass = res.failing_nodes == 0;
    return res;
  };

  ConditionReport rep;
  // Boundedness of a' on a finite grid: report sup |a'|, fail only on non-finite values.
  ConditionResult grad = check("gradient_bounded", [&](std::size_t i) {
    return std::isfinite(w.a_prime[i]) ? 0.0 : -1.0;
  });
  grad.worst_margin = 0.0;
  for (double v : w.a_prime) grad.worst_margin = std::max(grad.worst_margin, std::abs(v));
  rep.conditions.push_back(grad);
  rep.conditions.push_back(check("laplacian_nonnegative", [&](std::size_t i) { return w.lap_a[i]; }));
  rep.conditions.push_back(check("bilaplacian_nonpositive", [&](std::size_t i) { return -w.bilap_a[i]; }));
  rep.conditions.push_back(check("hessian_radial_positive", [&](std::size_t i) { return w.a_double_prime[i]; }, true));
  rep.conditions.push_back(check("hessian_angular_positive", [&](std::size_t i) { return w.a_prime[i]; }, true));
  return rep;
}

double absorption_threshold(const MorawetzWeight& w1, const MorawetzWeight& w2) {
  require_same_grid(w1.grid, w2.grid);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < w1.a_double_prime.size(); ++i) {
    if (w2.a_double_prime[i] < 0.0) best = std::min(best, w1.a_double_prime[i] / -w2.a_double_prime[i]);
  }
  return best;
}

double morawetz_potential(const WaveState& st, const MorawetzWeight& w) {
  require_weight_grid(st, w);
  const auto g = gradient_of(st.u);
  const auto& grid = st.grid();
  std::vector<double> F(st.u.size());
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double sh = std::sinh(grid.node(i));
    F[i] = st.ut[i] * (w.a_prime[i] * g.ur[i] + 0.5 * g.u[i] * w.lap_a[i]) * sh * sh;
  }
  return -kFourPi * integrate_samples(grid, F, Region::All);
}

double morawetz_derivative_claimed(const WaveState& st, const MorawetzWeight& w, const RadialField& nl,
                                   SignConvention conv) {
  require_weight_grid(st, w);
  require_same_grid(st.grid(), nl.grid());
  const auto g = gradient_of(st.u);
  const auto& grid = st.grid();
  const std::size_t m = st.u.size();
  std::vector<double> F(m);
  // u^2 Delta^2 a = -2 u u_r (Delta a)' after integration by parts.
  const double mass_sign = conv == SignConvention::FlowConsistent ? 0.5 : -0.5;
  for (std::size_t i = 0; i < m; ++i) {
    const double sh = std::sinh(grid.node(i));
    const double u = g.u[i], ur = g.ur[i];
    double f = w.a_double_prime[i] * ur * ur + 0.25 * u * u * u * u * w.lap_a[i] +
               mass_sign * u * ur * w.lap_a_prime[i];
    if (conv == SignConvention::FlowConsistent)
      f -= nl[i] * (w.a_prime[i] * ur + 0.5 * u * w.lap_a[i]);
    else
      f += nl[i] * w.a_prime[i] * ur;
    F[i] = f * sh * sh;
  }
  double total = integrate_samples(grid, F, Region::All);
  if (conv == SignConvention::AsStated) {
    // 1/2 nl u Delta^2 a, pointwise; r^(-sigma) singular at the origin.
    std::vector<double> G(m);
    for (std::size_t i = 0; i < m; ++i) {
      const double sh = std::sinh(grid.node(i));
      G[i] = 0.5 * nl[i] * g.u[i] * w.bilap_a[i] * sh * sh;
    }
    total += integrate_samples(grid, G, Region::All, w.bilap_singular_order());
  }
  return kFourPi * total;
}

double modified_potential(const WaveState& st, const MorawetzWeight& a4) {
  require_weight_grid(st, a4);
  const auto g = gradient_of(st.u);
  const auto& grid = st.grid();
  std::vector<double> F(st.u.size(), 0.0);
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double r = grid.node(i);
    if (!inner(r)) break;
    const double sh = std::sinh(r);
    F[i] = std::log(r) * st.ut[i] * (a4.a_prime[i] * g.ur[i] + 0.5 * g.u[i] * a4.lap_a[i]) * sh * sh;
  }
  return -kFourPi * integrate_samples(grid, F, Region::Inner);
}

double modified_potential(const WaveState& st, double alpha_tilde) {
  return modified_potential(st, build_weight(WeightFamily::A4, st.grid(), alpha_tilde));
}

ModifiedDerivativeTerms modified_derivative_terms(const WaveState& st, const MorawetzWeight& a4, const RadialField& nl) {
  require_weight_grid(st, a4);
  require_same_grid(st.grid(), nl.grid());
  const auto g = gradient_of(st.u);
  const auto& grid = st.grid();
  const std::size_t m = st.u.size();
  std::vector<double> f1(m, 0.0), f2(m, 0.0), f3(m, 0.0), f4(m, 0.0), f5(m, 0.0), f6(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double r = grid.node(i);
    if (!inner(r)) break;
    const double sh2 = std::sinh(r) * std::sinh(r);
    const double lr = std::log(r);
    const double v = g.u[i], vr = g.ur[i], vt = st.ut[i];
    const double ap_r = a4.a_prime[i] / r;
    const double dg = a4.lap_a[i] / r + lr * a4.lap_a_prime[i];  // (phi Delta a)'
    f1[i] = 0.5 * ap_r * vt * vt * sh2;
    f2[i] = 0.5 * ap_r * vr * vr * sh2;
    f3[i] = lr * a4.a_double_prime[i] * vr * vr * sh2;
    f4[i] = -0.25 * (ap_r - lr * a4.lap_a[i]) * v * v * v * v * sh2;
    f5[i] = 0.5 * v * vr * dg * sh2;
    f6[i] = -lr * nl[i] * (a4.a_prime[i] * vr + 0.5 * v * a4.lap_a[i]) * sh2;
  }
  auto I = [&](const std::vector<double>& f) { return kFourPi * integrate_samples(grid, f, Region::Inner); };
  ModifiedDerivativeTerms t;
  t.vt2 = I(f1);
  t.grad2 = I(f2);
  t.hessian = I(f3);
  t.quartic = I(f4);
  t.mass = I(f5);
  t.source = I(f6);
  return t;
}

double modified_derivative_claimed(const WaveState& st, const MorawetzWeight& a4, const RadialField& nl) {
  return modified_derivative_terms(st, a4, nl).total();
}

double modified_derivative_claimed(const WaveState& st, double alpha_tilde, const RadialField& nl) {
  return modified_derivative_claimed(st, build_weight(WeightFamily::A4, st.grid(), alpha_tilde), nl);
}

void write_weight_csv(std::ostream& os, const MorawetzWeight& w) {
  os << "r,a,a_prime,a_double_prime,lap_a,bilap_a\n";
  char buf[512];
  for (std::size_t i = 0; i < w.a.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", w.grid.node(i), w.a[i], w.a_prime[i],
                  w.a_double_prime[i], w.lap_a[i], w.bilap_a[i]);
    os << buf;
  }
}

}  // namespace hypwave
