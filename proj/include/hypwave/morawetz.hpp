#pragma once

// Morawetz weights a1..a4 on H^3 and the potentials built from them.
//
// Every weight is radial and fixed by its Laplacian: Delta a = r^(-sigma) on
// r < 1 and 1 on r >= 1 (sigma = 0 for A1, 1 for A2, alpha for A3, alpha~ for
// A4). Then a' = (1/sinh^2 r) int_0^r sinh^2(s) Delta a(s) ds.

#include <iosfwd>
#include <string>
#include <vector>

#include "hypwave/core.hpp"

namespace hypwave {

enum class WeightFamily { A1, A2, A3, A4 };

std::string to_string(WeightFamily f);
WeightFamily parse_weight_family(const std::string& s);

struct MorawetzWeight {
  WeightFamily family = WeightFamily::A1;
  double param = 0.0;  // alpha (A3) or alpha~ (A4); unused otherwise
  RadialGrid grid;
  std::vector<double> a;
  std::vector<double> a_prime;
  std::vector<double> a_double_prime;
  std::vector<double> lap_a;
  std::vector<double> lap_a_prime;  // d/dr of Delta a, used by the integrated-by-parts forms
  std::vector<double> bilap_a;

  // Exponent of Delta a = r^(-sigma) inside the unit ball.
  double sigma() const;
  // Order of the origin singularity of Delta^2 a * sinh^2 r (A2's leading term cancels).
  double bilap_singular_order() const { return sigma() < 1.0 ? sigma() : 0.0; }
};

MorawetzWeight build_weight(WeightFamily family, const RadialGrid& grid, double param = 0.0);

// Closed forms for A1 (Delta a = 1 everywhere).
double a1_prime_exact(double r);
double a1_double_prime_exact(double r);

struct ConditionResult {
  std::string name;
  bool pass = true;
  std::size_t failing_nodes = 0;
  std::vector<std::pair<double, double>> failing_ranges;  // [r_lo, r_hi] of consecutive failing nodes
  double worst_margin = 0.0;  // most negative margin; for the gradient bound, sup |a'|
};

struct ConditionReport {
  std::vector<ConditionResult> conditions;
  bool all_pass() const;
  const ConditionResult& at(const std::string& name) const;
};

// |a'| bounded, Delta a >= 0, Delta^2 a <= 0, a'' > 0 and a' > 0 (Hessian
// eigenvalues a'' radially and coth(r) a' on the sphere).
ConditionReport validate_conditions(const MorawetzWeight& w);

// Largest c2/c1 with c1 a1'' + c2 a2'' > 0 at every node; infinity when a2'' >= 0.
double absorption_threshold(const MorawetzWeight& w1, const MorawetzWeight& w2);

enum class SignConvention { AsStated, FlowConsistent };

// -4pi int (u_t a' u_r + u_t u Delta a / 2) sinh^2 r dr
double morawetz_potential(const WaveState& st, const MorawetzWeight& w);

// Right-hand side of the derivative identity for u_tt - Delta u + u^3 = nl.
// FlowConsistent: int a'' u_r^2 + 1/4 u^4 Delta a - 1/4 u^2 Delta^2 a - nl (a' u_r + u Delta a / 2).
// AsStated:       int a'' u_r^2 + 1/4 u^4 Delta a + 1/4 u^2 Delta^2 a + nl a' u_r + 1/2 nl u Delta^2 a.
// The u^2 Delta^2 a term is integrated by parts in both.
double morawetz_derivative_claimed(const WaveState& st, const MorawetzWeight& w, const RadialField& nl,
                                   SignConvention conv = SignConvention::FlowConsistent);

// With phi = log(r) on r <= 1:
// -4pi int_{r<=1} log(r) (v_t a' v_r + v_t v Delta a / 2) sinh^2 r dr, a = a4.
double modified_potential(const WaveState& st, const MorawetzWeight& a4);
double modified_potential(const WaveState& st, double alpha_tilde);

struct ModifiedDerivativeTerms {
  double vt2 = 0.0;       // 1/2 int (a'/r) v_t^2
  double grad2 = 0.0;     // 1/2 int (a'/r) v_r^2
  double hessian = 0.0;   // int log(r) a'' v_r^2
  double quartic = 0.0;   // -1/4 int (a'/r - log(r) Delta a) v^4
  double mass = 0.0;      // -1/4 int v^2 Delta(phi Delta a), as 1/2 int v v_r (phi Delta a)'
  double source = 0.0;    // -int log(r) nl (a' v_r + v Delta a / 2)
  double total() const { return vt2 + grad2 + hessian + quartic + mass + source; }
};

ModifiedDerivativeTerms modified_derivative_terms(const WaveState& st, const MorawetzWeight& a4, const RadialField& nl);
double modified_derivative_claimed(const WaveState& st, const MorawetzWeight& a4, const RadialField& nl);
double modified_derivative_claimed(const WaveState& st, double alpha_tilde, const RadialField& nl);

// Columns r, a, a', a'', Delta a, Delta^2 a.
void write_weight_csv(std::ostream& os, const MorawetzWeight& w);

}  // namespace hypwave
