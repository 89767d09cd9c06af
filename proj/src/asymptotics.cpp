#include "radsing/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "radsing/errors.hpp"
#include "radsing/quad.hpp"

namespace radsing {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// Root of an increasing function f on (lo_limit, inf) with derivative df, starting near u0.
template <class F, class D>
double solve_increasing(F f, D df, double u0, double lo_limit = -kInf) {
  double lo = u0, hi = u0;
  double flo = f(lo), fhi = flo;
  if (flo == 0.0) return u0;
  double step = 1.0;
  if (flo > 0.0) {
    fhi = flo;
    for (int i = 0;; ++i) {
      lo = std::isfinite(lo_limit) ? lo_limit + (hi - lo_limit) * 0.5 : hi - step;
      flo = f(lo);
      if (flo < 0.0) break;
      hi = lo;
      fhi = flo;
      step *= 2.0;
      if (i > 200) throw DomainError("profile equation: no lower bracket");
    }
  } else {
    for (int i = 0;; ++i) {
      hi = lo + step;
      fhi = f(hi);
      if (fhi > 0.0) break;
      lo = hi;
      flo = fhi;
      step *= 2.0;
      if (i > 200) throw DomainError("profile equation: no upper bracket");
    }
  }
  double u = flo > -fhi ? lo + (hi - lo) * 0.25 : hi - (hi - lo) * 0.25;
  for (int it = 0; it < 200; ++it) {
    double fu = f(u);
    if (fu == 0.0) return u;
    if (fu < 0.0)
      lo = u;
    else
      hi = u;
    double next = u - fu / df(u);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    double tol = 2e-15 * std::max(1.0, std::abs(u));
    if (std::abs(next - u) <= tol || hi - lo <= tol) return next;
    u = next;
  }
  throw NumericalError("profile equation: iteration did not converge");
}

void require_r(double r) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("profiles are evaluated for 0 < r < 1");
}
}  // namespace

ProfileEvaluator::ProfileEvaluator(const Problem& pb) : pb_(pb) {
  Classification cl = classification_menu(pb_);
  if (!cl.trichotomy) throw DomainError("no strong singularity profile: " + cl.reason);
  branch_ = cl.profile;
  gamma_ = cl.gamma;
  j_ = cl.j;
  if (branch_ == ProfileKind::CriticalUnsupported || branch_ == ProfileKind::None)
    throw DomainError("critical exponent without (doii) or (doi) structure: no profile formula");
  phi_ = std::make_shared<PhiTable>(pb_.op, 1e-12);
  cuts_ = data_joins(pb_);
  const double last_join = cuts_.empty() ? 0.0 : cuts_.back();
  if (branch_ == ProfileKind::Subcritical) {
    const double bound = 0.5 / ((pb_.spec.p - 1.0) * M());
    eta0_ = std::min(0.1, 0.999 * bound);
  } else {
    x_c_ = std::max(1.0, last_join + 1.0);
    ln_c_ = x_c_;
    ftab_ = std::make_shared<FTable>(pb_, std::min(0.5, x_c_), 1e6);
  }
}

double ProfileEvaluator::ln_f(double x) const {
  if (!ftab_) throw DomainError("F is only used by the critical branches");
  return ftab_->ln_f(x);
}

double ProfileEvaluator::f_ratio(double x) const {
  if (!ftab_) throw DomainError("F is only used by the critical branches");
  return ftab_->phi(x);
}

Jet ProfileEvaluator::jet(double x) const {
  if (!(x > 0.0)) throw DomainError("profiles are evaluated for 0 < r < 1");
  switch (branch_) {
    case ProfileKind::Subcritical: return jet_subcritical(x);
    case ProfileKind::CriticalDoii: return jet_doii(x);
    case ProfileKind::CriticalDoi: return jet_doi(x);
    default: throw DomainError("no profile");
  }
}

// int_{u~}^inf t^{-(q+1)/p} L_h^{-1/p} dt = int_0^r [M xi^{sigma-theta} L_b/L_A]^{1/p} d xi, in
// s = ln t on the left and u = ln 1/xi on the right; differentiated implicitly for the jet.
Jet ProfileEvaluator::jet_subcritical(double x) const {
  const auto& s = pb_.spec;
  const double p = s.p, q = s.q, lnM = std::log(M());
  const double aL = 1.0 - (q + 1.0) / p, aR = (p + s.sigma - s.theta) / p;
  auto psiL = [&](double t) { return aL * t - pb_.L_h.eval_log(t) / p; };
  auto psiR = [&](double u) { return (lnM + pb_.L_b.log_x(u) - pb_.op.L_A.log_x(u)) / p - aR * u; };
  auto lnL = [&](double t) { return quad::log_integral_lower_cut(psiL, t, kInf, cuts_); };
  const double R = quad::log_integral_lower_cut(psiR, x, kInf, cuts_);
  // lnL is decreasing in U; solve -lnL(U) + R = 0.
  double U0 = (std::log(1.0 / -aL) - R) / -aL;
  double U = solve_increasing([&](double t) { return R - lnL(t); },
                              [&](double t) { return std::exp(psiL(t) - lnL(t)); }, U0);
  const double c = std::exp(psiL(U) - lnL(U));
  const double dlng = aL - pb_.L_h.eps_log(U) / p;
  const double l1 = -c, l2 = -c * dlng - c * c;
  const double a = std::exp(psiR(x) - R);
  const double dlngR = (pb_.L_b.eps_x(x) - pb_.op.L_A.eps_x(x)) / p - aR;
  const double R1 = -a, R2 = -a * dlngR - a * a;
  Jet j;
  j.U = U;
  j.Ux = R1 / l1;
  j.Uxx = (R2 - l2 * j.Ux * j.Ux) / l1;
  return j;
}

Jet ProfileEvaluator::jet_doii(double x) const {
  const auto& s = pb_.spec;
  const auto& c = pb_.c;
  const double k = c.k, pm1 = s.p - 1.0;
  const double lnF = ftab_->ln_f(x), phi = ftab_->phi(x);
  const double eA = pb_.op.L_A.eps_x(x), deA = pb_.op.L_A.deps_x(x);
  const double dlnG = -s.q / pm1 * eA + pb_.L_b.eps_x(x) + pb_.L_h.eps_log(x);
  Jet j;
  j.U = -(std::log(c.m1) + (gamma_ + 1.0 - s.p) * std::log(c.m0) + lnF) / k - pb_.op.L_A.log_x(x) / pm1 + c.m0 * x;
  j.Ux = phi / k - eA / pm1 + c.m0;
  j.Uxx = (phi * dlnG + phi * phi) / k - deA / pm1;
  return j;
}

namespace {
// int_{ln c}^{U} F(e^{-s})^{e} e^s ds = exp(R(x)), solved for U with the implicit jet.
Jet solve_doi(const FTable& ft, double ln_c, double e, double R, double R1, double R2,
              const std::vector<double>& cuts) {
  auto psi = [&](double s) { return s + e * ft.ln_f(s); };
  auto lnL = [&](double U) { return quad::log_integral_upper_cut(psi, ln_c, U, cuts); };
  double U0 = std::max(ln_c + 1.0, R);
  double U = solve_increasing([&](double t) { return t <= ln_c ? -kInf : lnL(t) - R; },
                              [&](double t) { return std::exp(psi(t) - lnL(t)); }, U0, ln_c);
  const double c = std::exp(psi(U) - lnL(U));
  const double dlng = 1.0 - e * ft.phi(U);
  const double l1 = c, l2 = c * (dlng - c);
  Jet j;
  j.U = U;
  j.Ux = R1 / l1;
  j.Uxx = (R2 - l2 * j.Ux * j.Ux) / l1;
  return j;
}
}  // namespace

Jet ProfileEvaluator::jet_doi(double x) const {
  const auto& s = pb_.spec;
  const auto& c = pb_.c;
  const double k = c.k, pm1 = s.p - 1.0;
  const double R = -(std::log(c.m1) + (-s.p - j_) * std::log(c.m0)) / k - pb_.op.L_A.log_x(x) / pm1 + c.m0 * x;
  const double R1 = c.m0 - pb_.op.L_A.eps_x(x) / pm1;
  const double R2 = -pb_.op.L_A.deps_x(x) / pm1;
  return solve_doi(*ftab_, ln_c_, 1.0 / k, R, R1, R2, cuts_);
}

double tilde_u_subcritical(const ProfileEvaluator& ev, double r) {
  if (ev.branch() != ProfileKind::Subcritical) throw DomainError("tilde_u_subcritical needs q < q*");
  require_r(r);
  return std::exp(ev.ln_tilde_u(std::log(r)));
}

double tilde_u_critical(const ProfileEvaluator& ev, double r) {
  if (ev.branch() != ProfileKind::CriticalDoii && ev.branch() != ProfileKind::CriticalDoi)
    throw DomainError("tilde_u_critical needs q = q* with (doii) or (doi)");
  require_r(r);
  return std::exp(ev.ln_tilde_u(std::log(r)));
}

double ln_table_closed_form(const Problem& pb, const TableRow& row, double ln_r) {
  const double x = -ln_r;
  if (!(x > 0.0)) throw DomainError("table asymptotics are evaluated for 0 < r < 1");
  const auto& s = pb.spec;
  const auto& c = pb.c;
  const double k = c.k, p = s.p, m0 = c.m0, lx = std::log(x);
  const double a = row.alpha, b = row.beta, g = row.gamma, nu = row.nu;
  if (row.example != 1 && !(nu > 0.0 && nu < 0.5)) throw DomainError("table row requires nu in (0, 1/2)");
  double inner, extra = 0.0;
  if (row.table == 3) {
    if (c.regime != Regime::Subcritical) throw DomainError("Table 3 rows need q < q*");
    const double lnM = std::log(*c.M);
    switch (row.example) {
      case 1: inner = (p - g) * std::log(m0) - lnM + (a - b - g) * lx; break;
      case 2:
        inner = p * std::log(m0) - lnM + (a - b) * lx;
        extra = std::pow(m0 * x, nu) / k;
        break;
      case 3:
        inner = p * std::log(m0) - lnM + a * lx;
        extra = std::sqrt(x) / s.q + std::pow(m0 * x, nu) / k;
        break;
      default: throw DomainError("unknown example");
    }
  } else if (row.table == 4) {
    if (c.regime != Regime::Critical) throw DomainError("Table 4 rows need q = q*");
    const double m1 = c.m1, qs = c.q_star;
    switch (row.example) {
      case 1: {
        const double gap = a * qs / (p - 1.0) - b - g - 1.0;
        if (!(gap > 0.0)) throw DomainError("Table 4 row 1 needs alpha q*/(p-1) > beta + gamma + 1");
        inner = (p - 1.0 - g) * std::log(m0) + std::log(gap) - std::log(m1) + (a - b - g - 1.0) * lx;
        break;
      }
      case 2:
        inner = std::log(nu) + (p - 1.0 + nu) * std::log(m0) - std::log(m1) + (a - b + nu - 1.0) * lx;
        extra = std::pow(m0 * x, nu) / k;
        break;
      case 3:
        inner = std::log(nu) + (p - 1.0 + nu) * std::log(m0) - std::log(m1) + (a + nu - 1.0) * lx;
        extra = std::sqrt(x) / s.q + std::pow(m0 * x, nu) / k;
        break;
      default: throw DomainError("unknown example");
    }
  } else {
    throw DomainError("table must be 3 or 4");
  }
  return m0 * x + inner / k + extra;
}

double table_closed_form(const Problem& pb, const TableRow& row, double r) {
  require_r(r);
  return std::exp(ln_table_closed_form(pb, row, std::log(r)));
}

double family_constant(const ProfileEvaluator& ev, double eta, int sign) {
  const auto& pb = ev.problem();
  const double p = pb.spec.p, se = sign * eta;
  if (ev.branch() == ProfileKind::Subcritical)
    return std::pow(std::pow(1.0 + se, p - 1.0) * (1.0 + se * ev.M() * (p - 1.0)), 1.0 / pb.c.k);
  const auto& c = pb.c;
  if (ev.branch() == ProfileKind::CriticalDoii)
    return std::pow(c.m1 * std::pow(c.m0, ev.gamma() - pb.spec.q) / (1.0 + se), -1.0 / c.k);
  return std::exp(-ln_c_np(pb.op)) *
         std::pow(c.m1 * std::pow(c.m0, -pb.spec.q - 1.0 - ev.j()) / (1.0 + se), -1.0 / c.k);
}

Jet family_jet(const ProfileEvaluator& ev, double eta, int sign, double x) {
  if (sign != 1 && sign != -1) throw DomainError("family sign must be +1 or -1");
  if (!(eta >= 0.0 && eta <= ev.eta0())) throw DomainError("eta must lie in [0, eta0]");
  if (!(x > 0.0)) throw DomainError("profiles are evaluated for 0 < r < 1");
  const auto& pb = ev.problem();
  const auto& c = pb.c;
  const double se = sign * eta, e = (1.0 + se) / c.k, pm1 = pb.spec.p - 1.0;
  if (ev.branch() == ProfileKind::Subcritical) {
    Jet u = ev.jet(x);
    if (eta == 0.0) return u;
    return {std::log(family_constant(ev, eta, sign)) + (1.0 + se) * u.U, (1.0 + se) * u.Ux, (1.0 + se) * u.Uxx};
  }
  if (ev.branch() == ProfileKind::CriticalDoii) {
    if (!(x > ev.x_c_)) throw DomainError("the critical family is defined below r = e^{-x_c} only");
    auto g = [&](double u) { return c.m2 * u - pb.op.L_A.log_x(u) / pm1 - e * ev.ftab_->ln_f(u); };
    const double lnI = quad::log_integral_upper_cut(g, ev.x_c_, x, ev.cuts_);
    Jet j;
    j.U = std::log(family_constant(ev, eta, sign)) + lnI;
    j.Ux = std::exp(g(x) - lnI);
    const double dg = c.m2 - pb.op.L_A.eps_x(x) / pm1 + e * ev.ftab_->phi(x);
    j.Uxx = j.Ux * (dg - j.Ux);
    return j;
  }
  const PhiTable& pt = *ev.phi_;
  const double lnPhi = pt.ln_phi(-x);
  const double ups = pt.upsilon(-x);
  const double R = std::log(family_constant(ev, eta, sign)) + lnPhi;
  const double R2 = ups * (c.m2 - pb.op.L_A.eps_x(x) / pm1 - ups);
  return solve_doi(*ev.ftab_, ev.ln_c_, e, R, ups, R2, ev.cuts_);
}

double sub_super_family(const ProfileEvaluator& ev, double eta, int sign, double r) {
  require_r(r);
  return std::exp(family_jet(ev, eta, sign, -std::log(r)).U);
}

namespace {
// B with r W' = W B, W = r^{N-1+theta} L_A |v'|^{p-2} v'.
double flux_log_derivative(const Problem& pb, const Jet& v, double x) {
  const auto& s = pb.spec;
  if (v.Ux == 0.0) throw DomainError("degenerate gradient: v'(r) = 0");
  return (s.N - 1.0 + s.theta) - pb.op.L_A.eps_x(x) - (s.p - 1.0) * (v.Ux + 1.0 + v.Uxx / v.Ux);
}
}  // namespace

OperatorTerms operator_terms(const Problem& pb, const Jet& v, double x) {
  const auto& s = pb.spec;
  const double B = flux_log_derivative(pb, v, x);
  const double ln_w = -(s.N - 1.0 + s.theta) * x + pb.op.L_A.log_x(x) + (s.p - 1.0) * (v.U + std::log(std::abs(v.Ux)) + x);
  const int w_sign = v.Ux > 0.0 ? -1 : 1;
  OperatorTerms t;
  t.div_sign = B == 0.0 ? 0 : (B > 0.0 ? w_sign : -w_sign);
  t.ln_abs_div = B == 0.0 ? -kInf : ln_w + x + std::log(std::abs(B));
  t.ln_source = -(s.N - 1.0 + s.sigma) * x + pb.L_b.log_x(x) + pb.ln_h(v.U);
  return t;
}

double operator_residual(const Problem& pb, const Jet& v, double x) {
  OperatorTerms t = operator_terms(pb, v, x);
  if (t.div_sign == 0) return 1.0;
  return 1.0 - t.div_sign * std::exp(t.ln_abs_div - t.ln_source);
}

double divergence_relative(const Problem& pb, const Jet& v, double x) { return flux_log_derivative(pb, v, x); }

double p_factor(const ProfileEvaluator& ev, double x) {
  if (ev.branch() != ProfileKind::Subcritical) throw DomainError("P(r) is defined for q < q*");
  const auto& pb = ev.problem();
  const auto& s = pb.spec;
  Jet u = ev.jet(x);
  const double eh = pb.L_h.eps_log(u.U);
  const double uupp = (u.Ux * u.Ux + u.Uxx + u.Ux) / (u.Ux * u.Ux);  // u u'' / u'^2
  const double ratio = -1.0 / u.Ux;                                   // u / (r u')
  const double rlb = -pb.L_b.eps_x(x);                                // r L_b' / L_b
  return ev.M() * (s.q + 1.0 + eh - uupp + (s.N - 1.0 + s.sigma + rlb) * ratio);
}

SignScan sign_scan(const ProfileEvaluator& ev, double eta, double x_lo, double x_hi, int points) {
  if (!(x_lo > 0.0 && x_hi > x_lo && points >= 2)) throw DomainError("sign_scan needs 0 < x_lo < x_hi, points >= 2");
  SignScan out;
  out.eta = eta;
  const auto& pb = ev.problem();
  for (int i = 0; i < points; ++i) {
    double x = x_lo * std::pow(x_hi / x_lo, static_cast<double>(i) / (points - 1));
    double rp = std::numeric_limits<double>::quiet_NaN(), rm = rp;
    try {
      rp = operator_residual(pb, family_jet(ev, eta, +1, x), x);
      rm = operator_residual(pb, family_jet(ev, eta, -1, x), x);
    } catch (const DomainError&) {
    }
    out.x.push_back(x);
    out.res_plus.push_back(rp);
    out.res_minus.push_back(rm);
  }
  int i0 = points;
  while (i0 > 0 && out.res_plus[i0 - 1] > 0.0 && out.res_minus[i0 - 1] < 0.0) --i0;
  if (i0 < points) {
    out.found = true;
    out.x_eps = out.x[i0];
    out.r_eps = std::exp(-out.x_eps);
  }
  return out;
}

}  // namespace radsing
