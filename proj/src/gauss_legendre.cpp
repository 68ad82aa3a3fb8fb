#include "hypwave/gauss_legendre.hpp"

#include <cmath>
#include <numbers>

#include "hypwave/errors.hpp"

namespace hypwave {

GaussLegendreRule::GaussLegendreRule(int points) {
  if (points < 1) throw ParameterError("Gauss-Legendre rule needs at least one point");
  const auto n = static_cast<std::size_t>(points);
  nodes.resize(n);
  weights.resize(n);
  // Newton iteration on P_n from the Chebyshev-like initial guess; the rule is
  // symmetric so only half the roots are computed.
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= points; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = points * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[i] = -x;
    nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
  if (points == 1) {
    nodes[0] = 0.0;
    weights[0] = 2.0;
  }
}

}  // namespace hypwave
