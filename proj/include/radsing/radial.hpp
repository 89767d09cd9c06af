#pragma once
// Positive radial solutions of (r^{N-1+theta} L_A |v'|^{p-2} v')' = r^{N-1+sigma} L_b h(v).
//
// Integration runs inward in x = ln(1/r) on the state (U, omega, I):
//   U = ln v,  omega = |g|^{p-2} g with g = dU/dx = -r v'/v,  I = int r^{N+sigma} L_b h(v) dx,
// so that w = -r^{N+theta-p} L_A v^{p-1} omega and
//   dU/dx = sign(omega) |omega|^{1/(p-1)},
//   domega/dx = Q + omega ((p-1) m2 - eps_A - (p-1) g),  Q = r^{p+sigma-theta} L_b h(v) / (L_A v^{p-1}).
// Q is the a priori quantity; U and omega stay moderate while v spans hundreds of decades.
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "radsing/asymptotics.hpp"
#include "radsing/fundamental.hpp"
#include "radsing/problem.hpp"

namespace radsing {

struct RadialOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  bool zero_source = false;  // integrate the homogeneous equation (h = 0)
  double max_step = 0.5;     // in x; steps up to 0.1 x are always allowed
  // singular_solution: levels ln n = ln(16/r_min) growth^j stop when the geometric tail of the
  // Cauchy differences at the probe radii drops below these.
  double stab_tol = 1e-6;
  double stab_tol_strong = 1e-3;
  // accepted when shooting runs out of resolution before stab_tol_strong is met
  double stab_tol_fallback = 1e-2;
  double max_ln_n = 1e5;
  double level_growth = 1.25;
};

struct RadialMeta {
  double lambda = 0, g0 = 0, n = 0, ln_n = 0;
  double mismatch = 0;  // |v(1/n)/target - 1|
  int shots = 0;
};

struct RadialSolution {
  std::shared_ptr<const Problem> pb;
  std::vector<double> x, U, omega, I;  // x increasing, so r = e^{-x} decreasing
  std::vector<double> dU, domega;      // d/dx at the nodes
  RadialMeta meta;
  bool truncated = false;
  std::string truncation;

  size_t size() const { return x.size(); }
  double r(size_t i) const;
  double v(size_t i) const;
  double w(size_t i) const;
  double Q(size_t i) const;
  // Hermite interpolation in x; throws DomainError outside [x.front(), x.back()].
  double ln_v_at(double xq) const;
  double w_at(double xq) const;
  double x_min() const { return x.front(); }
  double x_max() const { return x.back(); }
};

// v(r_start) = v0, w(r_start) = w0, integrated down to r_end. Stops early (truncated) if v
// reaches 0 or blows up.
RadialSolution integrate_inward(const Problem& pb, double r_start, double v0, double w0, double r_end,
                                const RadialOptions& opt = {});

// v = lambda Phi + g0 at r = 1/n, v = g0 at r = 1, by monotone shooting on the outer flux.
// n may exceed the int range. Throws NumericalError with the bracket trace on failure.
RadialSolution solve_annulus(const Problem& pb, double n, double lambda, double g0, const RadialOptions& opt = {});
// Same with ln n and ln lambda (-inf for lambda = 0), for inner radii below the double range.
RadialSolution solve_annulus_log(const Problem& pb, double ln_n, double ln_lambda, double g0,
                                 const RadialOptions& opt = {});

struct SingularResult {
  RadialSolution sol;
  std::vector<double> n_levels;  // ln n of every annulus solved
  std::vector<double> lambda_levels;
  std::vector<double> cauchy;      // max relative change at the probe radii, level to level
  std::vector<double> saturation;  // lambda = inf: change when the inner data grow by e^5
  std::vector<double> probes;      // ln(1/r)
  double tail_estimate = 0;
  double unresolved_ln_n = 0;  // first level where shooting lost the inner boundary value
};
// lambda finite: limit of solve_annulus as n -> inf, truncated to [r_min, 1].
// lambda = inf: inner data e^d u~(1/n) (d raised until the interior no longer moves), then n -> inf.
// The convergence in n is algebraic in ln n at q = q*, hence levels doubling ln n.
SingularResult singular_solution(const Problem& pb, double lambda, double g0, double r_min = 1e-6,
                                 const RadialOptions& opt = {});

enum class VerdictKind { Removable, Weak, Strong, Unknown };
const char* to_string(VerdictKind k);

struct SingularityVerdict {
  VerdictKind kind = VerdictKind::Unknown;
  double lambda_hat = 0;
  std::vector<std::pair<double, double>> evidence;  // (r, v/Phi)
  std::optional<double> flux_limit;
  std::string reason;
};
SingularityVerdict classify(const RadialSolution& sol, const PhiTable& table);

// N w_N (-w(r)); lambda Phi carries lambda^{p-1}.
double flux(const RadialSolution& sol, double r);
double apriori_check(const RadialSolution& sol);
std::vector<double> apriori_profile(const RadialSolution& sol);

struct SSample {
  double s, y, s_dy_over_y;
};
std::vector<SSample> to_s_space(const RadialSolution& sol, const PhiTable& table);

// Radial profile given by its jet on the grid (no ODE); the flux follows from the jet.
RadialSolution synthetic_solution(const Problem& pb, const std::function<Jet(double)>& jet,
                                  const std::vector<double>& x_grid);

}  // namespace radsing
