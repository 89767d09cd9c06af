#include "radsing/quad.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

#include "radsing/errors.hpp"

namespace radsing::quad {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kNegligible = 46.0;  // e^-46 ~ 1e-20

double finite_or_neg_inf(double v) { return std::isnan(v) ? kNegInf : v; }

// ln int_lo^hi exp(psi): the reference level is the largest of a few samples.
double log_panel(const Fn& psi, double lo, double hi, const Options& opt) {
  double m = kNegInf;
  for (int i = 0; i <= 4; ++i) m = std::max(m, finite_or_neg_inf(psi(lo + (hi - lo) * i / 4.0)));
  if (!(m > kNegInf)) return kNegInf;
  if (std::isinf(m)) return m;
  auto g = [&](double u) {
    double v = psi(u) - m;
    return v < -740.0 ? 0.0 : std::exp(v);
  };
  // psi(u) - m carries rounding noise of order eps (|m| + |u|); asking for more than that
  // only drives the adaptive scheme to full depth.
  Options o = opt;
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() *
                       (std::abs(m) + std::max(std::abs(lo), std::abs(hi)));
  o.rel_tol = std::max(opt.rel_tol, noise);
  double I = integrate(g, lo, hi, o);
  return I > 0.0 ? m + std::log(I) : kNegInf;
}

}  // namespace

double integrate(const Fn& f, double a, double b, const Options& opt) {
  if (a == b) return 0.0;
  // Boost compares the unscaled local error against the scaled estimate, so short intervals
  // recurse to full depth. Integrating over [-1, 1] keeps both on the same scale.
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  auto g = [&](double s) { return f(mid + half * s); };
  double err = 0.0;
  return half * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, -1.0, 1.0, opt.max_depth, opt.rel_tol,
                                                                                &err);
}

double log_sum_exp(double a, double b) {
  if (a < b) std::swap(a, b);
  if (!(a > kNegInf)) return a;
  if (std::isinf(a)) return a;
  return a + std::log1p(std::exp(b - a));
}

double log_integral_upper(const Fn& psi, double a, double b, const Options& opt) {
  if (!(a < b)) return kNegInf;
  const double L = b - a;
  double total = kNegInf;
  double s0 = 0.0, h = opt.first_panel;
  for (int k = 0; k < opt.max_panels; ++k) {
    double s1 = std::min(s0 + h, L);
    if (L - s1 < 0.5 * h) s1 = L;  // no slivers
    double lnI = log_panel(psi, b - s1, b - s0, opt);
    total = log_sum_exp(total, lnI);
    if (s1 >= L) return total;
    double far = finite_or_neg_inf(psi(b - s1)) + std::log(L - s1);
    if (lnI < total - kNegligible && far < total - kNegligible) return total;
    s0 = s1;
    h *= 2.0;
  }
  throw NumericalError("log_integral_upper: panel budget exhausted");
}

double log_integral_lower(const Fn& psi, double a, double b, const Options& opt) {
  if (!(a < b)) return kNegInf;
  const bool infinite = std::isinf(b);
  const double L = b - a;
  double total = kNegInf;
  double s0 = 0.0, h = opt.first_panel;
  double prev = kNegInf;
  double ratios[3] = {0, 0, 0};
  int nratio = 0;
  const double scale = std::max(std::abs(a), opt.first_panel);
  for (int k = 0; k < opt.max_panels; ++k) {
    double s1 = infinite ? s0 + h : std::min(s0 + h, L);
    if (!infinite && L - s1 < 0.5 * h) s1 = L;
    double lnI = log_panel(psi, a + s0, a + s1, opt);
    total = log_sum_exp(total, lnI);
    if (!infinite && s1 >= L) return total;
    double far = finite_or_neg_inf(psi(a + s1)) + std::log(infinite ? s1 : L - s1);
    if (lnI < total - kNegligible && far < total - kNegligible) return total;
    if (infinite && prev > kNegInf && lnI > kNegInf) {
      ratios[0] = ratios[1];
      ratios[1] = ratios[2];
      ratios[2] = std::exp(lnI - prev);
      ++nratio;
      if (nratio >= 3 && s0 >= 64.0 * scale) {
        // For power-law tails the ratio approaches its limit with errors halving per panel.
        double rho = ratios[2] + (ratios[2] - ratios[1]);
        bool settled = std::abs(ratios[2] - ratios[1]) <= 1e-7 * std::abs(1.0 - rho) &&
                       std::abs(ratios[1] - ratios[0]) <= 4e-7 * std::abs(1.0 - rho);
        // Stretched exponentials exp(-u^nu) grow per doubling until u ~ (ln 2/(2^nu - 1))^{1/nu},
        // so growth alone is only conclusive far out.
        if (ratios[2] >= 1.0 - 1e-9 && ratios[1] >= 1.0 - 1e-9 && s0 >= 1e40 * scale)
          throw DivergenceError("tail integral diverges");
        if (settled && rho < 1.0) return log_sum_exp(total, lnI + std::log(rho / (1.0 - rho)));
      }
    }
    prev = lnI;
    s0 = s1;
    h *= 2.0;
    if (!std::isfinite(a + s0 + h)) break;
  }
  if (infinite) throw DivergenceError("tail integral: contributions did not settle");
  throw NumericalError("log_integral_lower: panel budget exhausted");
}

double log_integral_upper_cut(const Fn& psi, double a, double b, const std::vector<double>& cuts,
                              const Options& opt) {
  double total = kNegInf, lo = a;
  for (double c : cuts) {
    if (c <= lo || c >= b) continue;
    total = log_sum_exp(total, log_integral_upper(psi, lo, c, opt));
    lo = c;
  }
  return log_sum_exp(total, log_integral_upper(psi, lo, b, opt));
}

double log_integral_lower_cut(const Fn& psi, double a, double b, const std::vector<double>& cuts,
                              const Options& opt) {
  double total = kNegInf, lo = a;
  for (double c : cuts) {
    if (c <= lo || c >= b) continue;
    total = log_sum_exp(total, log_integral_lower(psi, lo, c, opt));
    lo = c;
  }
  return log_sum_exp(total, log_integral_lower(psi, lo, b, opt));
}

}  // namespace radsing::quad
