#pragma once
// Adaptive Gauss-Kronrod quadrature on finite panels, and logarithms of integrals of
// exponentials that would overflow if formed directly.
#include <functional>
#include <vector>

namespace radsing::quad {

using Fn = std::function<double(double)>;

struct Options {
  double rel_tol = 1e-13;
  unsigned max_depth = 15;
  double first_panel = 1.0;  // length of the panel touching the anchor
  int max_panels = 1100;
};

double integrate(const Fn& f, double a, double b, const Options& opt = {});

double log_sum_exp(double a, double b);

// ln int_a^b exp(psi(u)) du for psi largest near b (growing integrand). Requires a < b.
double log_integral_upper(const Fn& psi, double a, double b, const Options& opt = {});

// ln int_a^b exp(psi(u)) du for psi largest near a. b may be +inf; in that case panels double
// in length and a geometric tail is summed once the panel contributions settle into a fixed
// ratio. Throws DivergenceError when the contributions stop decreasing.
double log_integral_lower(const Fn& psi, double a, double b, const Options& opt = {});

// The same, split at `cuts` (kinks of psi) so that no panel straddles one.
double log_integral_upper_cut(const Fn& psi, double a, double b, const std::vector<double>& cuts,
                              const Options& opt = {});
double log_integral_lower_cut(const Fn& psi, double a, double b, const std::vector<double>& cuts,
                              const Options& opt = {});

}  // namespace radsing::quad
