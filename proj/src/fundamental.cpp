#include "radsing/fundamental.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "radsing/errors.hpp"
#include "radsing/kv.hpp"
#include "radsing/quad.hpp"

namespace radsing {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::string fnv1a_hex(const std::string& s) {
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", h);
  return buf;
}
}  // namespace

Operator make_operator(int N, double p, double theta, const rv::SlowlyVarying& L_A, bool borderline) {
  if (N < 1) throw SpecError("operator.N", "N >= 1", "dimension N must be a positive integer");
  if (!(p > 1.0)) throw SpecError("operator.p", "p > 1", "p must exceed 1");
  if (!std::isfinite(theta)) throw SpecError("operator.theta", "theta finite", "theta must be finite");
  if (L_A.orientation() != rv::Orientation::AtZero && !L_A.is_constant())
    throw SpecError("operator.L_A", "L_A slowly varying at 0", "L_A must be oriented at zero");
  const double gap = N + theta - p;
  if (gap < 0.0 || (gap == 0.0 && !borderline))
    throw SpecError("operator.p", "p < N + theta",
                    "p = " + kv::format_number(p) + " violates p < N + theta = " + kv::format_number(N + theta));
  Operator op;
  op.N = N;
  op.p = p;
  op.theta = theta;
  op.L_A = rv::Completed::automatic(L_A);
  op.borderline = borderline;
  return op;
}

double surface_area(int N) { return 2.0 * std::pow(std::numbers::pi, 0.5 * N) / std::tgamma(0.5 * N); }

double ln_c_np(const Operator& op) { return -std::log(surface_area(op.N)) / (op.p - 1.0); }

double ln_phi(const Operator& op, double ln_r) {
  const double U = -ln_r;
  if (U < 0.0) throw DomainError("Phi is defined for 0 < r <= 1");
  if (U == 0.0) return kNegInf;
  const double m2 = op.m2(), k = 1.0 / (op.p - 1.0);
  const rv::Completed& A = op.L_A;
  auto psi = [&](double u) { return m2 * u - k * A.log_x(u); };
  const double join = A.x_join();
  double lnI;
  if (join > 0.0 && join < U)
    lnI = quad::log_sum_exp(quad::log_integral_upper(psi, join, U), quad::log_integral_upper(psi, 0.0, join));
  else
    lnI = quad::log_integral_upper(psi, 0.0, U);
  return ln_c_np(op) + lnI;
}

double phi(const Operator& op, double r) {
  if (!(r > 0.0) || r > 1.0) throw DomainError("Phi is defined for 0 < r <= 1");
  return std::exp(ln_phi(op, std::log(r)));
}

double ln_abs_dphi(const Operator& op, double ln_r) {
  return ln_c_np(op) - (op.m2() + 1.0) * ln_r - op.L_A.eval_log(ln_r) / (op.p - 1.0);
}

double upsilon_direct(const Operator& op, double ln_r) {
  if (!(ln_r < 0.0)) throw DomainError("Upsilon has a pole at r = 1 (Phi(1) = 0)");
  return std::exp(ln_r + ln_abs_dphi(op, ln_r) - ln_phi(op, ln_r));
}

PhiTable::PhiTable(Operator op, double r_min, double tol) : op_(std::move(op)) {
  if (!(r_min > 0.0 && r_min < 1.0)) throw DomainError("PhiTable needs 0 < r_min < 1");
  c_np_ = std::exp(ln_c_np(op_));
  hash_ = fnv1a_hex(std::to_string(op_.N) + "|" + kv::format_number(op_.p) + "|" + kv::format_number(op_.theta) + "|" +
                    rv::to_text(op_.L_A.raw()) + "|" + kv::format_number(op_.L_A.x_join()) +
                    (op_.borderline ? "|b" : ""));
  u_lo_ = std::numbers::ln2;
  u_hi_ = std::max(u_lo_, -std::log(r_min));
  std::vector<double> nodes;
  for (double u = u_lo_; u < u_hi_; u += std::numbers::ln2) nodes.push_back(u);
  nodes.push_back(u_hi_);
  double join = op_.L_A.x_join();
  if (join > u_lo_ && join < u_hi_) nodes.push_back(join);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              nodes.end());
  std::vector<double> r(nodes.size()), d(nodes.size());
  for (size_t i = 0; i < nodes.size(); ++i) {
    double lp = radsing::ln_phi(op_, -nodes[i]);
    double ups = std::exp(-nodes[i] + radsing::ln_abs_dphi(op_, -nodes[i]) - lp);
    r[i] = lp - base(nodes[i]);
    d[i] = ups - dbase(nodes[i]);
  }
  u_.push_back(nodes[0]);
  red_.push_back(r[0]);
  dred_.push_back(d[0]);
  for (size_t i = 0; i + 1 < nodes.size(); ++i) {
    refine(nodes[i], r[i], d[i], nodes[i + 1], r[i + 1], d[i + 1], 0, tol, u_, red_, dred_);
    u_.push_back(nodes[i + 1]);
    red_.push_back(r[i + 1]);
    dred_.push_back(d[i + 1]);
  }
  for (size_t i = 0; i < u_.size(); ++i) {
    ln_r_.push_back(-u_[i]);
    ln_phi_.push_back(red_[i] + base(u_[i]));
  }
}

// ln(expm1(m2 u)/m2), or ln u when m2 = 0.
double PhiTable::base(double u) const {
  const double m2 = op_.m2();
  if (m2 == 0.0) return std::log(u);
  return m2 * u + std::log1p(-std::exp(-m2 * u)) - std::log(m2);
}

double PhiTable::dbase(double u) const {
  const double m2 = op_.m2();
  if (m2 == 0.0) return 1.0 / u;
  return -m2 / std::expm1(-m2 * u);
}

void PhiTable::refine(double u0, double r0, double d0, double u1, double r1, double d1, int depth, double tol,
                      std::vector<double>& u, std::vector<double>& r, std::vector<double>& d) const {
  const double um = 0.5 * (u0 + u1), h = u1 - u0;
  const double herm = 0.5 * (r0 + r1) + 0.125 * h * (d0 - d1);
  const double lp = radsing::ln_phi(op_, -um);
  const double rm = lp - base(um);
  if (std::abs(herm - rm) <= tol || depth >= 14) return;
  const double ups = std::exp(-um + radsing::ln_abs_dphi(op_, -um) - lp);
  const double dm = ups - dbase(um);
  refine(u0, r0, d0, um, rm, dm, depth + 1, tol, u, r, d);
  u.push_back(um);
  r.push_back(rm);
  d.push_back(dm);
  refine(um, rm, dm, u1, r1, d1, depth + 1, tol, u, r, d);
}

double PhiTable::hermite(double u) const {
  auto it = std::upper_bound(u_.begin(), u_.end(), u);
  size_t i = it == u_.begin() ? 0 : static_cast<size_t>(it - u_.begin()) - 1;
  if (i + 1 >= u_.size()) i = u_.size() - 2;
  const double h = u_[i + 1] - u_[i], t = (u - u_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * red_[i] + (t3 - 2 * t2 + t) * h * dred_[i] + (-2 * t3 + 3 * t2) * red_[i + 1] +
         (t3 - t2) * h * dred_[i + 1];
}

double PhiTable::ln_phi(double ln_r) const {
  const double u = -ln_r;
  if (u < u_lo_ || u > u_hi_ || u_.size() < 2) return radsing::ln_phi(op_, ln_r);
  return hermite(u) + base(u);
}

double PhiTable::phi(double r) const {
  if (!(r > 0.0) || r > 1.0) throw DomainError("Phi is defined for 0 < r <= 1");
  return std::exp(ln_phi(std::log(r)));
}

double PhiTable::upsilon(double ln_r) const {
  if (!(ln_r < 0.0)) throw DomainError("Upsilon has a pole at r = 1 (Phi(1) = 0)");
  return std::exp(ln_r + ln_abs_dphi(ln_r) - ln_phi(ln_r));
}

double PhiTable::inverse_ln(double ln_s) const {
  if (std::isnan(ln_s)) throw DomainError("phi_inverse: NaN argument");
  if (ln_s == kNegInf) return 0.0;
  double lo = 0.0, hi;
  if (ln_s <= ln_phi_.front()) {
    hi = u_.front();
  } else if (ln_s <= ln_phi_.back()) {
    auto it = std::lower_bound(ln_phi_.begin(), ln_phi_.end(), ln_s);
    size_t i = static_cast<size_t>(it - ln_phi_.begin());
    hi = u_[i];
    lo = i > 0 ? u_[i - 1] : 0.0;
  } else {
    lo = u_.back();
    hi = 2.0 * lo;
    while (ln_phi(-hi) < ln_s) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e12) throw DomainError("phi_inverse: argument beyond the representable range");
    }
  }
  double u = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    const double f = ln_phi(-u) - ln_s;
    if (f == 0.0) return -u;
    if (f > 0.0)
      hi = u;
    else
      lo = u;
    const double fp = upsilon(-u);
    double next = u - f / fp;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - u) <= 1e-15 * std::max(1.0, u) || hi - lo <= 1e-15 * std::max(1.0, u)) return -next;
    u = next;
  }
  throw NumericalError("phi_inverse: iteration did not converge");
}

std::string PhiTable::csv() const {
  std::string out = "ln_r,ln_phi,upsilon\n";
  for (size_t i = 0; i < u_.size(); ++i)
    out += kv::format_number(ln_r_[i]) + "," + kv::format_number(ln_phi_[i]) + "," +
           kv::format_number(upsilon(ln_r_[i])) + "\n";
  return out;
}

double phi_inverse(const PhiTable& table, double s) {
  if (!(s >= 0.0)) throw DomainError("phi_inverse requires s >= 0");
  return std::exp(table.inverse_ln(s == 0.0 ? kNegInf : std::log(s)));
}

double upsilon(const PhiTable& table, double r) {
  if (!(r > 0.0) || r > 1.0) throw DomainError("Upsilon is defined for 0 < r < 1");
  return table.upsilon(std::log(r));
}

}  // namespace radsing
