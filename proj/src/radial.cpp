#include "radsing/radial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/numeric/odeint.hpp>

#include "radsing/errors.hpp"

namespace radsing {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kULow = -700.0;  // v below e^-700 counts as having reached 0

using State = std::array<double, 3>;  // U, omega, I

struct System {
  const Problem& pb;
  bool zero_source;
  double p, pm1, m2pm1, N_theta_p, N_sigma, p_sigma_theta;

  System(const Problem& pb_, bool zs)
      : pb(pb_),
        zero_source(zs),
        p(pb_.spec.p),
        pm1(pb_.spec.p - 1.0),
        m2pm1((pb_.spec.N + pb_.spec.theta - pb_.spec.p)),
        N_theta_p(pb_.spec.N + pb_.spec.theta - pb_.spec.p),
        N_sigma(pb_.spec.N + pb_.spec.sigma),
        p_sigma_theta(pb_.spec.p + pb_.spec.sigma - pb_.spec.theta) {}

  double g_of(double om) const { return std::copysign(std::pow(std::abs(om), 1.0 / pm1), om); }
  double ln_q(double x, double U) const {
    return -p_sigma_theta * x + pb.L_b.log_x(x) - pb.op.L_A.log_x(x) + pb.ln_h(U) - pm1 * U;
  }
  double ln_source_x(double x, double U) const { return -N_sigma * x + pb.L_b.log_x(x) + pb.ln_h(U); }

  void operator()(const State& y, State& dy, double x) const {
    if (!std::isfinite(y[0]) || !std::isfinite(y[1])) {
      dy.fill(std::numeric_limits<double>::quiet_NaN());
      return;
    }
    const double g = g_of(y[1]);
    const double Q = zero_source ? 0.0 : std::exp(ln_q(x, y[0]));
    dy[0] = g;
    dy[1] = Q + y[1] * (m2pm1 - pb.op.L_A.eps_x(x) - pm1 * g);
    dy[2] = zero_source ? 0.0 : std::exp(ln_source_x(x, y[0]));
  }
  // -w = r^{N+theta-p} L_A v^{p-1} omega
  double ln_w_scale(double x, double U) const { return -N_theta_p * x + pb.op.L_A.log_x(x) + pm1 * U; }
};

enum class Stop { None, Over, Under };

struct Runner {
  const Problem& pb;
  RadialOptions opt;
  System sys;
  std::vector<double> cuts;

  Runner(const Problem& pb_, const RadialOptions& o) : pb(pb_), opt(o), sys(pb_, o.zero_source) {
    for (double c : {pb.op.L_A.x_join(), pb.L_b.x_join()})
      if (std::isfinite(c) && c > 0.0) cuts.push_back(c);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  }

  // Integrates from x0 to x1. `stop` inspects each accepted state. Returns the stop reason.
  template <class StopRule>
  Stop run(double x0, State y, double x1, RadialSolution& out, StopRule stop, bool record = true,
           double dt0 = 0.0) const {
    namespace ode = boost::numeric::odeint;
    auto stepper = ode::make_controlled<ode::runge_kutta_dopri5<State>>(opt.atol, opt.rtol);
    auto push = [&](double x, const State& s) {
      if (!record) return;
      State d;
      sys(s, d, x);
      out.x.push_back(x);
      out.U.push_back(s[0]);
      out.omega.push_back(s[1]);
      out.I.push_back(s[2]);
      out.dU.push_back(d[0]);
      out.domega.push_back(d[1]);
    };
    push(x0, y);
    double x = x0, dt = dt0 > 0 ? dt0 : std::min(opt.max_step, 1e-3 * std::max(1.0, x1 - x0));
    size_t ci = 0;
    while (ci < cuts.size() && cuts[ci] <= x0) ++ci;
    long guard = 0;
    while (x < x1) {
      while (ci < cuts.size() && cuts[ci] <= x) ++ci;
      double target = x1;
      if (ci < cuts.size() && cuts[ci] < x1) target = cuts[ci];
      double h = std::min({dt, std::max(opt.max_step, 0.1 * x), target - x});
      const double xs = x;
      const State ys = y;
      const double hs = h;
      auto res = stepper.try_step(sys, y, x, h);
      // A non-finite trial state can pass the error test; retry with a quarter step.
      if (!std::isfinite(y[0]) || !std::isfinite(y[1]) || !std::isfinite(y[2]) || !(h > 0)) {
        y = ys;
        x = xs;
        h = 0.25 * hs;
        res = ode::fail;
      }
      if (++guard > 2000000) throw NumericalError("radial integration: step budget exhausted");
      if (res == ode::success) {
        if (target - x <= 1e-12 * std::max(1.0, std::abs(target))) {
          x = target;
        }
        dt = h;
        push(x, y);
        Stop s = stop(x, y);
        if (s != Stop::None) return s;
      } else {
        dt = h;
        if (dt < 1e-14 * std::max(1.0, xs)) {
          // singular behaviour: v -> 0 or v -> inf at finite x
          return y[1] < 0 ? Stop::Under : Stop::Over;
        }
      }
    }
    return Stop::None;
  }
};

std::shared_ptr<const Problem> share(const Problem& pb) { return std::make_shared<const Problem>(pb); }

}  // namespace

// ---------------------------------------------------------------------------------------------
double RadialSolution::r(size_t i) const { return std::exp(-x[i]); }
double RadialSolution::v(size_t i) const { return std::exp(U[i]); }

double RadialSolution::w(size_t i) const {
  System s(*pb, false);
  return -std::exp(s.ln_w_scale(x[i], U[i])) * omega[i];
}

double RadialSolution::Q(size_t i) const {
  System s(*pb, false);
  return std::exp(s.ln_q(x[i], U[i]));
}

namespace {
size_t locate(const std::vector<double>& xs, double xq) {
  if (xs.size() < 2 || xq < xs.front() - 1e-12 * std::max(1.0, std::abs(xs.front())) ||
      xq > xs.back() + 1e-12 * std::max(1.0, xs.back()))
    throw DomainError("radial solution: r outside the computed range");
  auto it = std::upper_bound(xs.begin(), xs.end(), xq);
  size_t i = it == xs.begin() ? 0 : static_cast<size_t>(it - xs.begin()) - 1;
  return std::min(i, xs.size() - 2);
}
double hermite(const std::vector<double>& xs, const std::vector<double>& f, const std::vector<double>& df, size_t i,
               double xq) {
  const double h = xs[i + 1] - xs[i];
  if (h <= 0) return f[i];
  const double t = std::clamp((xq - xs[i]) / h, 0.0, 1.0), t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * f[i] + (t3 - 2 * t2 + t) * h * df[i] + (-2 * t3 + 3 * t2) * f[i + 1] +
         (t3 - t2) * h * df[i + 1];
}
}  // namespace

double RadialSolution::ln_v_at(double xq) const {
  const size_t i = locate(x, xq);
  return hermite(x, U, dU, i, xq);
}

double RadialSolution::w_at(double xq) const {
  const size_t i = locate(x, xq);
  System s(*pb, false);
  // w = -e^S omega, dw/dx = -e^S (omega dS/dx + domega/dx), S = ln of the flux scale
  double wv[2], dw[2];
  for (int k = 0; k < 2; ++k) {
    const size_t j = i + k;
    const double eS = std::exp(s.ln_w_scale(x[j], U[j]));
    const double dS = -s.N_theta_p + pb->op.L_A.eps_x(x[j]) + s.pm1 * dU[j];
    wv[k] = -eS * omega[j];
    dw[k] = -eS * (omega[j] * dS + domega[j]);
  }
  const double h = x[i + 1] - x[i];
  if (h <= 0) return wv[0];
  const double t = std::clamp((xq - x[i]) / h, 0.0, 1.0), t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * wv[0] + (t3 - 2 * t2 + t) * h * dw[0] + (-2 * t3 + 3 * t2) * wv[1] +
         (t3 - t2) * h * dw[1];
}

// ---------------------------------------------------------------------------------------------
RadialSolution integrate_inward(const Problem& pb, double r_start, double v0, double w0, double r_end,
                                const RadialOptions& opt) {
  if (!(r_start <= 1.0) || !(r_end > 0.0) || !(r_end < r_start))
    throw DomainError("integrate_inward requires 0 < r_end < r_start <= 1");
  if (!(v0 > 0.0)) throw DomainError("integrate_inward requires v0 > 0");
  Runner run(pb, opt);
  RadialSolution sol;
  sol.pb = share(pb);
  const double x0 = -std::log(r_start), x1 = -std::log(r_end), U0 = std::log(v0);
  const double om0 = -w0 / std::exp(run.sys.ln_w_scale(x0, U0));
  Stop s = run.run(x0, State{U0, om0, 0.0}, x1, sol, [](double, const State& y) {
    if (y[0] < kULow) return Stop::Under;
    if (y[0] > 700.0 * 1e3) return Stop::Over;
    return Stop::None;
  });
  if (s != Stop::None) {
    sol.truncated = true;
    sol.truncation = s == Stop::Under ? "v reached 0" : "v blew up";
  }
  return sol;
}

// ---------------------------------------------------------------------------------------------
namespace {
double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}
}  // namespace

RadialSolution solve_annulus(const Problem& pb, double n, double lambda, double g0, const RadialOptions& opt) {
  if (!(n >= 2.0)) throw DomainError("solve_annulus requires n >= 2");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw DomainError("solve_annulus requires finite lambda >= 0");
  return solve_annulus_log(pb, std::log(n), lambda > 0 ? std::log(lambda) : -kInf, g0, opt);
}

RadialSolution solve_annulus_log(const Problem& pb, double ln_n, double ln_lambda, double g0, const RadialOptions& opt) {
  if (!(ln_n >= std::log(2.0) * (1 - 1e-15))) throw DomainError("solve_annulus requires n >= 2");
  if (std::isnan(ln_lambda) || ln_lambda == kInf || !(g0 >= 0.0) || (ln_lambda == -kInf && g0 == 0.0))
    throw DomainError("solve_annulus requires finite lambda >= 0, g0 >= 0, not both 0");
  Runner run(pb, opt);
  const double x1 = ln_n;
  const double UT = log_add(ln_lambda > -kInf ? ln_lambda + ln_phi(pb.op, -x1) : -kInf, g0 > 0 ? std::log(g0) : -kInf);

  // zeta increasing <=> more negative outer flux <=> larger v inside.
  const double x0s = g0 > 0 ? 0.0 : 1e-9;
  auto initial = [&](double zeta) -> State {
    if (g0 > 0) return State{std::log(g0), zeta, 0.0};
    return State{zeta + std::log(x0s), std::pow(x0s, 1.0 - pb.spec.p), 0.0};
  };
  struct Shot {
    double f;
    RadialSolution sol;
  };
  int shots = 0;
  auto shoot = [&](double zeta, bool record) -> Shot {
    ++shots;
    Shot out{0.0, {}};
    Stop s = run.run(x0s, initial(zeta), x1, out.sol,
                     [&](double, const State& y) {
                       if (y[0] > UT && y[1] > 0.0) return Stop::Over;
                       if (y[0] < kULow) return Stop::Under;
                       return Stop::None;
                     },
                     record, g0 > 0 ? 0.0 : 1e-2 * x0s);
    if (s == Stop::Over)
      out.f = kInf;
    else if (s == Stop::Under)
      out.f = -kInf;
    else {
      const double Uend = record ? out.sol.U.back() : 0.0;
      out.f = Uend - UT;
    }
    return out;
  };
  // `record` is needed to read U at the end; keep it on (cheap compared with the integration).
  auto f_of = [&](double zeta) { return shoot(zeta, true).f; };

  std::ostringstream trace;
  double za, zb, fa, fb;
  double z0 = g0 > 0 ? 0.0 : 0.0;
  double f0 = f_of(z0);
  trace << "zeta=" << z0 << " f=" << f0 << "; ";
  if (f0 == 0.0) {
    za = zb = z0;
    fa = fb = 0.0;
  } else if (f0 > 0.0) {
    zb = z0;
    fb = f0;
    double step = 1.0;
    for (int i = 0;; ++i) {
      za = z0 - step;
      fa = f_of(za);
      trace << "zeta=" << za << " f=" << fa << "; ";
      if (fa <= 0.0) break;
      zb = za;
      fb = fa;
      step *= 2.0;
      if (i > 1100) throw NumericalError("solve_annulus: no lower shooting bracket: " + trace.str());
    }
  } else {
    za = z0;
    fa = f0;
    double step = 1.0;
    for (int i = 0;; ++i) {
      zb = z0 + step;
      fb = f_of(zb);
      trace << "zeta=" << zb << " f=" << fb << "; ";
      if (fb >= 0.0) break;
      za = zb;
      fa = fb;
      step *= 2.0;
      if (i > 1100) throw NumericalError("solve_annulus: no upper shooting bracket: " + trace.str());
    }
  }
  // Bisection with Illinois steps once both ends are finite.
  int side = 0;
  for (int it = 0; it < 400 && fa != 0.0 && fb != 0.0; ++it) {
    if (zb - za <= 1e-12 * std::max(1.0, std::abs(za)) * 1e-3) break;
    double zm;
    if (std::isfinite(fa) && std::isfinite(fb)) {
      zm = (za * fb - zb * fa) / (fb - fa);
      if (!(zm > za && zm < zb)) zm = 0.5 * (za + zb);
    } else {
      zm = 0.5 * (za + zb);
    }
    if (zm <= za || zm >= zb) break;
    const double fm = f_of(zm);
    if (std::abs(fm) <= 1e-12) {
      za = zb = zm;
      fa = fb = fm;
      break;
    }
    if (fm < 0) {
      za = zm;
      fa = fm;
      if (side == -1 && std::isfinite(fb)) fb *= 0.5;
      side = -1;
    } else {
      zb = zm;
      fb = fm;
      if (side == 1 && std::isfinite(fa)) fa *= 0.5;
      side = 1;
    }
  }
  // Final shot at the better finite end; the halved Illinois values are not real residuals.
  Shot a = shoot(za, true), b = shoot(zb, true);
  Shot* best = nullptr;
  if (std::isfinite(a.f)) best = &a;
  if (std::isfinite(b.f) && (!best || std::abs(b.f) < std::abs(best->f))) best = &b;
  if (!best) throw NumericalError("solve_annulus: shooting did not reach the inner radius: " + trace.str());
  RadialSolution sol = std::move(best->sol);
  sol.pb = share(pb);
  sol.meta.lambda = std::exp(ln_lambda);
  sol.meta.g0 = g0;
  sol.meta.n = std::exp(ln_n);
  sol.meta.ln_n = ln_n;
  sol.meta.mismatch = std::abs(std::expm1(best->f));
  sol.meta.shots = shots;
  // Pin the imposed boundary values exactly at the end nodes.
  sol.U.back() = UT;
  if (g0 > 0) sol.U.front() = std::log(g0);
  return sol;
}

// ---------------------------------------------------------------------------------------------
namespace {
std::vector<double> probe_points(double r_min) {
  std::vector<double> xs;
  const double xmax = -std::log(r_min);
  for (double x = xmax; x > std::log(10.0) - 1e-9; x -= std::log(10.0)) xs.push_back(x);
  return xs;
}

double max_rel_change(const RadialSolution& a, const RadialSolution& b, const std::vector<double>& xs) {
  double m = 0;
  for (double x : xs) m = std::max(m, std::abs(std::expm1(a.ln_v_at(x) - b.ln_v_at(x))));
  return m;
}

// Restricts to x <= x_cut, ending with an interpolated node at x_cut.
RadialSolution truncate_at(RadialSolution sol, double x_cut) {
  if (!(x_cut < sol.x_max())) return sol;
  const double Uc = sol.ln_v_at(x_cut);
  const size_t i = locate(sol.x, x_cut);
  const double omc = hermite(sol.x, sol.omega, sol.domega, i, x_cut);
  const double Ic = sol.I[i] + (sol.I[i + 1] - sol.I[i]) * (x_cut - sol.x[i]) / (sol.x[i + 1] - sol.x[i]);
  size_t keep = i + 1;
  if (sol.x[i] >= x_cut) keep = i;
  for (auto* v : {&sol.x, &sol.U, &sol.omega, &sol.I, &sol.dU, &sol.domega}) v->resize(keep);
  System sys(*sol.pb, false);
  State y{Uc, omc, Ic}, d;
  sys(y, d, x_cut);
  sol.x.push_back(x_cut);
  sol.U.push_back(Uc);
  sol.omega.push_back(omc);
  sol.I.push_back(Ic);
  sol.dU.push_back(d[0]);
  sol.domega.push_back(d[1]);
  return sol;
}

std::string join_trace(const std::vector<double>& v) {
  std::ostringstream o;
  for (double d : v) o << d << " ";
  return o.str();
}
}  // namespace

SingularResult singular_solution(const Problem& pb, double lambda, double g0, double r_min, const RadialOptions& opt) {
  if (!(lambda > 0.0)) throw DomainError("singular_solution requires lambda in (0, inf]");
  if (!(g0 >= 0.0)) throw DomainError("singular_solution requires g0 >= 0");
  if (!(r_min > 0.0 && r_min < 1e-1)) throw DomainError("singular_solution requires 0 < r_min < 0.1");
  const Integrability integ = integrability_criterion(pb);
  if (!integ.integrable)
    throw DomainError("singular solutions need b h(Phi) integrable near 0; the criterion is false for these data");

  SingularResult res;
  res.probes = probe_points(r_min);
  const bool infinite = std::isinf(lambda);
  // Inner data for lambda = inf: e^d times the strong profile at 1/n, which saturates the interior.
  std::optional<ProfileEvaluator> ev;
  if (infinite) {
    try {
      ev.emplace(pb);
    } catch (const DomainError&) {
    }
  }
  double d = 5.0;
  auto inner_ln_lambda = [&](double ln_n, double dd) {
    if (!infinite) return std::log(lambda);
    if (ev) return ev->ln_tilde_u(-ln_n) + dd - ln_phi(pb.op, -ln_n);
    // no profile available: lambda = 2^k with k growing with the level
    return dd * std::log(2.0) * 4.0;
  };
  auto solve_level = [&](double ln_n, double dd) {
    RadialSolution s = solve_annulus_log(pb, ln_n, inner_ln_lambda(ln_n, dd), g0, opt);
    if (s.truncated) throw NumericalError("singular_solution: annulus solution truncated: " + s.truncation);
    res.n_levels.push_back(ln_n);
    res.lambda_levels.push_back(s.meta.lambda);
    return s;
  };

  const double L0 = std::log(16.0 / r_min);
  if (infinite) {
    // saturation in the inner data, checked once on an annulus reaching well below r_min
    for (int it = 0;; ++it) {
      RadialSolution a = solve_level(2.0 * L0, d), b = solve_level(2.0 * L0, d + 5.0);
      const double c = max_rel_change(a, b, res.probes);
      res.saturation.push_back(c);
      if (c < 1e-6) break;
      d += 5.0;
      if (it > 30) throw NumericalError("singular_solution: inner data do not saturate: " + join_trace(res.saturation));
    }
  }
  const double tail_tol = infinite ? opt.stab_tol_strong : opt.stab_tol;
  RadialSolution prev = solve_level(L0, d);
  double c_prev = kInf;
  for (double L = opt.level_growth * L0; L <= opt.max_ln_n; L *= opt.level_growth) {
    RadialSolution cur = solve_level(L, d);
    if (!(cur.meta.mismatch < 0.5)) {
      // shooting precision exhausted: the inward growth of the separatrix deviation exceeds 1/eps
      res.unresolved_ln_n = L;
      if (std::isfinite(c_prev) && res.tail_estimate < opt.stab_tol_fallback) {
        res.sol = truncate_at(std::move(prev), -std::log(r_min));
        if (infinite) res.sol.meta.lambda = kInf;
        return res;
      }
      break;
    }
    const double c = max_rel_change(cur, prev, res.probes);
    res.cauchy.push_back(c);
    const double rho = c / c_prev;
    const double tail = std::isfinite(c_prev) && rho < 0.9 ? c * rho / (1.0 - rho) : kInf;
    res.tail_estimate = tail;
    if (c < 1e-2 * tail_tol || tail < tail_tol) {
      res.sol = truncate_at(std::move(cur), -std::log(r_min));
      if (infinite) res.sol.meta.lambda = kInf;
      return res;
    }
    c_prev = c;
    prev = std::move(cur);
  }
  std::string msg = "singular_solution: no stabilisation in n; Cauchy trace: " + join_trace(res.cauchy);
  if (res.unresolved_ln_n > 0)
    msg += "; shooting unresolved from ln n = " + std::to_string(res.unresolved_ln_n);
  throw NumericalError(msg);
}

// ---------------------------------------------------------------------------------------------
const char* to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Removable: return "removable";
    case VerdictKind::Weak: return "weak";
    case VerdictKind::Strong: return "strong";
    case VerdictKind::Unknown: return "unknown";
  }
  return "unknown";
}

SingularityVerdict classify(const RadialSolution& sol, const PhiTable& table) {
  SingularityVerdict out;
  if (sol.size() < 2) throw DomainError("classify: empty solution");
  const double x_end = sol.x_max();
  if (x_end < std::log(1e3)) throw DomainError("classify requires the solution to reach r <= 1e-3");
  const double dec = std::log(10.0);
  auto ratio = [&](double x) { return std::exp(sol.ln_v_at(x) - table.ln_phi(-x)); };
  for (double x = x_end - 3 * dec; x <= x_end + 1e-9; x += std::log(2.0))
    out.evidence.emplace_back(std::exp(-x), ratio(std::min(x, x_end)));
  if (std::abs(out.evidence.back().first - std::exp(-x_end)) > 1e-12 * std::exp(-x_end))
    out.evidence.emplace_back(std::exp(-x_end), ratio(x_end));

  double D[4];
  for (int d = 0; d < 4; ++d) D[d] = ratio(x_end - (3 - d) * dec);
  const double d1 = D[1] - D[0], d2 = D[2] - D[1], d3 = D[3] - D[2];
  const double scale = std::max({std::abs(D[0]), std::abs(D[3]), 1e-300});
  out.flux_limit = flux(sol, std::exp(-x_end));

  if (std::max({std::abs(d1), std::abs(d2), std::abs(d3)}) <= 1e-8 * scale) {
    out.kind = D[3] < 1e-3 ? VerdictKind::Removable : VerdictKind::Weak;
    out.lambda_hat = D[3];
    out.reason = "ratio constant over the last three decades";
    if (out.kind == VerdictKind::Removable) out.lambda_hat = 0;
    return out;
  }
  const double rho3 = d2 != 0 ? d3 / d2 : kInf, rho2 = d1 != 0 ? d2 / d1 : kInf;
  double limit = D[3];
  if (rho3 > 0 && rho3 < 1) limit = D[3] + d3 * rho3 / (1 - rho3);
  std::ostringstream why;
  why << "v/Phi per decade: " << D[0] << ", " << D[1] << ", " << D[2] << ", " << D[3] << "; increment ratios " << rho2
      << ", " << rho3 << "; extrapolated " << limit;
  out.reason = why.str();

  const bool decreasing = d1 < 0 && d2 < 0 && d3 < 0;
  const bool increasing = d1 > 0 && d2 > 0 && d3 > 0;
  const bool geometric = std::abs(rho3) <= 0.5 && std::abs(rho2) <= 0.5;
  if (decreasing && limit < 1e-3) {
    out.kind = VerdictKind::Removable;
    return out;
  }
  if (geometric && limit >= 1e-3) {
    out.kind = VerdictKind::Weak;
    out.lambda_hat = limit;
    return out;
  }
  if (increasing && rho3 > 0.5 && rho2 > 0.5) {
    out.kind = VerdictKind::Strong;
    return out;
  }
  out.kind = VerdictKind::Unknown;
  return out;
}

double flux(const RadialSolution& sol, double r) {
  if (!(r > 0.0) || r > 1.0) throw DomainError("flux: r outside (0, 1]");
  return surface_area(sol.pb->spec.N) * (-sol.w_at(-std::log(r)));
}

std::vector<double> apriori_profile(const RadialSolution& sol) {
  std::vector<double> q(sol.size());
  for (size_t i = 0; i < sol.size(); ++i) q[i] = sol.Q(i);
  return q;
}

double apriori_check(const RadialSolution& sol) {
  auto q = apriori_profile(sol);
  return q.empty() ? 0.0 : *std::max_element(q.begin(), q.end());
}

std::vector<SSample> to_s_space(const RadialSolution& sol, const PhiTable& table) {
  std::vector<SSample> out;
  for (size_t i = 0; i < sol.size(); ++i) {
    if (!(sol.x[i] > 0.0)) continue;  // s = Phi(1) = 0
    const double ln_r = -sol.x[i];
    out.push_back({std::exp(table.ln_phi(ln_r)), sol.v(i), sol.dU[i] / table.upsilon(ln_r)});
  }
  return out;
}

RadialSolution synthetic_solution(const Problem& pb, const std::function<Jet(double)>& jet,
                                  const std::vector<double>& x_grid) {
  RadialSolution sol;
  sol.pb = share(pb);
  const double pm1 = pb.spec.p - 1.0;
  for (double x : x_grid) {
    const Jet j = jet(x);
    sol.x.push_back(x);
    sol.U.push_back(j.U);
    sol.dU.push_back(j.Ux);
    const double a = std::abs(j.Ux);
    sol.omega.push_back(std::copysign(std::pow(a, pm1), j.Ux));
    sol.domega.push_back(pm1 * (a > 0 ? std::pow(a, pm1 - 1.0) : 0.0) * j.Uxx);
    sol.I.push_back(0.0);
  }
  if (!std::is_sorted(sol.x.begin(), sol.x.end())) throw DomainError("synthetic_solution: grid must increase in x");
  return sol;
}

}  // namespace radsing
