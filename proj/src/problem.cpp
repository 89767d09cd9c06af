#include "radsing/problem.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <limits>
#include <numbers>

#include "radsing/errors.hpp"
#include "radsing/kv.hpp"
#include "radsing/quad.hpp"

namespace radsing {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCoefTol = 1e-12;

std::string num(double v) { return kv::format_number(v); }

void validate(const ProblemSpec& s) {
  if (s.N < 2) throw SpecError("operator.N", "N >= 2", "dimension N must be at least 2");
  if (!(s.p > 1.0)) throw SpecError("operator.p", "p > 1", "p must exceed 1");
  for (auto [key, v] : {std::pair{"operator.theta", s.theta}, {"source.sigma", s.sigma}, {"nonlinearity.q", s.q}})
    if (!std::isfinite(v)) throw SpecError(key, "finite", std::string(key) + " must be finite");
  const double gap = s.N + s.theta - s.p;
  if (gap < 0.0 || (gap == 0.0 && !s.borderline))
    throw SpecError("operator.p", "p < N + theta (A1)",
                    "p = " + num(s.p) + " violates p < N + theta = " + num(s.N + s.theta));
  if (!(s.q + 1.0 > s.p))
    throw SpecError("nonlinearity.q", "q + 1 > p (A3)", "q = " + num(s.q) + " violates q > p - 1 = " + num(s.p - 1));
  if (!(s.p > s.theta - s.sigma))
    throw SpecError("source.sigma", "p > theta - sigma (A3)",
                    "p = " + num(s.p) + " violates p > theta - sigma = " + num(s.theta - s.sigma));
  using rv::Orientation;
  if (s.L_A.orientation() != Orientation::AtZero)
    throw SpecError("operator.L_A", "L_A slowly varying at 0", "L_A must have orientation \"zero\"");
  if (s.L_b.orientation() != Orientation::AtZero)
    throw SpecError("source.L_b", "L_b slowly varying at 0", "L_b must have orientation \"zero\"");
  if (s.L_h.orientation() != Orientation::AtInfinity)
    throw SpecError("nonlinearity.L_h", "L_h slowly varying at infinity", "L_h must have orientation \"infinity\"");
  if (s.h_join && !(*s.h_join > 0.0))
    throw SpecError("nonlinearity.h_join", "h_join > 0", "h_join must be positive");
}

// Is q = q*, i.e. q (N + theta - p) = (N + sigma)(p - 1), exactly for the binary inputs?
bool exactly_critical(const ProblemSpec& s) {
  using boost::multiprecision::cpp_rational;
  auto R = [](double v) { return cpp_rational(v); };
  cpp_rational lhs = R(s.q) * (cpp_rational(s.N) + R(s.theta) - R(s.p));
  cpp_rational rhs = (cpp_rational(s.N) + R(s.sigma)) * (R(s.p) - 1);
  return lhs == rhs;
}

// Smallest join x_h (in x = ln t) beyond which q - p + 1 + eps_h stays above half of q - p + 1.
double auto_h_join(const rv::SlowlyVarying& L, double k) {
  double x = std::max(L.domain_start(), 0.0) + 1.0;
  if (L.is_constant()) return x;
  for (int attempt = 0; attempt < 200; ++attempt) {
    bool ok = true;
    for (double y = x; y < 1e9; y *= std::pow(2.0, 0.125)) {
      if (!(k + L.eps_x(y) > 0.5 * k)) {
        x = y * 1.25 + 1.0;
        ok = false;
        break;
      }
    }
    if (ok) return x;
  }
  throw SpecError("nonlinearity.L_h", "t^{q-p+1} L_h(t) eventually increasing",
                  "no join point found where q - p + 1 + eps_h(t) > 0");
}

bool has_powers(const rv::Expansion& e) {
  for (auto [ex, c] : e.powers)
    if (std::abs(c) > kCoefTol) return true;
  return false;
}

double log1_coef(const rv::Expansion& e) {
  auto it = e.logs.find(1);
  return it == e.logs.end() ? 0.0 : it->second;
}

bool only_log1(const rv::Expansion& e) {
  if (e.oscillating || has_powers(e) || std::abs(e.constant) > kCoefTol) return false;
  for (auto [m, c] : e.logs)
    if (m != 1 && std::abs(c) > kCoefTol) return false;
  return true;
}

// Single power term coef x^e, nothing else except possibly a ln x term when allow_log.
std::optional<std::pair<double, double>> single_power(const rv::Expansion& e, bool allow_log) {
  if (e.oscillating || std::abs(e.constant) > kCoefTol) return std::nullopt;
  for (auto [m, c] : e.logs)
    if (std::abs(c) > kCoefTol && !(allow_log && m == 1)) return std::nullopt;
  std::optional<std::pair<double, double>> out;
  for (auto [ex, c] : e.powers) {
    if (std::abs(c) <= kCoefTol) continue;
    if (out) return std::nullopt;
    out = std::pair{ex, c};
  }
  return out;
}

rv::Expansion gf_expansion(const Problem& pb) {
  const double qs = pb.c.q_star, p = pb.spec.p;
  rv::Expansion g = rv::expansion(pb.spec.L_A).scaled(-qs / (p - 1.0));
  g += rv::expansion(pb.spec.L_b);
  return g;
}

std::vector<double> joins_of(const Problem& pb) {
  std::vector<double> j;
  for (double x : {pb.op.L_A.x_join(), pb.L_b.x_join(), pb.L_h.x_join()})
    if (std::isfinite(x)) j.push_back(x);
  std::sort(j.begin(), j.end());
  return j;
}

// ln int_a^inf exp(psi), split at the completion joins so no panel straddles a kink.
double log_tail(const quad::Fn& psi, double a, const std::vector<double>& cuts) {
  return quad::log_integral_lower_cut(psi, a, kInf, cuts);
}

}  // namespace

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Subcritical: return "subcritical";
    case Regime::Critical: return "critical";
    case Regime::Supercritical: return "supercritical";
  }
  return "?";
}

const char* to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::None: return "none";
    case ProfileKind::Subcritical: return "subcritical";
    case ProfileKind::CriticalDoii: return "critical-doii";
    case ProfileKind::CriticalDoi: return "critical-doi";
    case ProfileKind::CriticalUnsupported: return "critical-unsupported";
  }
  return "?";
}

DerivedConstants derive_constants(const ProblemSpec& s) {
  validate(s);
  DerivedConstants c;
  c.k = s.q - s.p + 1.0;
  c.m0 = (s.p + s.sigma - s.theta) / c.k;
  c.m1 = c.k / (s.p - 1.0);
  c.m2 = (s.N + s.theta - s.p) / (s.p - 1.0);
  c.q_star = c.m2 > 0.0 ? (s.N + s.sigma) / c.m2 : kInf;
  if (c.m2 == 0.0 || s.q < c.q_star)
    c.regime = Regime::Subcritical;
  else
    c.regime = Regime::Supercritical;
  if (std::isfinite(c.q_star)) {
    if (exactly_critical(s)) {
      c.regime = Regime::Critical;
    } else if (std::abs(s.q - c.q_star) <= 1e-12) {
      c.regime = Regime::Critical;
      c.near_critical = true;
    }
  }
  if (c.regime == Regime::Subcritical) {
    double invM = s.q - (s.N + s.sigma) / c.m0;
    if (!(invM > 0.0))
      throw SpecError("nonlinearity.q", "q > (N + sigma)/m0", "1/M = q - (N+sigma)/m0 is not positive");
    c.M = 1.0 / invM;
  }
  return c;
}

Problem make_problem(const ProblemSpec& s) {
  Problem pb;
  pb.c = derive_constants(s);
  pb.spec = s;
  pb.op = make_operator(s.N, s.p, s.theta, s.L_A, s.borderline);
  pb.L_b = rv::Completed::automatic(s.L_b);
  double xh;
  if (s.h_join) {
    xh = std::log(*s.h_join);
    if (!(xh > s.L_h.domain_start()))
      throw SpecError("nonlinearity.h_join", "h_join inside the domain of L_h",
                      "h_join = " + num(*s.h_join) + " lies outside the domain of L_h");
  } else {
    xh = auto_h_join(s.L_h, pb.c.k);
  }
  pb.L_h = rv::Completed(s.L_h, xh);
  return pb;
}

double ln_gf(const Problem& pb, double u) {
  const double qs = pb.c.q_star, p = pb.spec.p;
  return -qs / (p - 1.0) * pb.op.L_A.log_x(u) + pb.L_b.log_x(u) + pb.L_h.log_x(u);
}

double ln_f_integral(const Problem& pb, double ln_r) {
  if (!std::isfinite(pb.c.q_star)) throw DomainError("F is defined only for finite q*");
  if (!(ln_r < 0.0)) throw DomainError("F(r) requires 0 < r < 1");
  auto conv = rv::tail_integral_converges(gf_expansion(pb) += rv::expansion(pb.spec.L_h));
  if (conv.has_value() && !*conv) throw DivergenceError("F(r) diverges: the integrand is not integrable at 0");
  return log_tail([&](double u) { return ln_gf(pb, u); }, -ln_r, joins_of(pb));
}

double f_integral(const Problem& pb, double r) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("F(r) requires 0 < r < 1");
  return std::exp(ln_f_integral(pb, std::log(r)));
}

Integrability integrability_criterion(const Problem& pb) {
  Integrability out;
  const auto& c = pb.c;
  if (c.regime != Regime::Critical) {
    out.integrable = c.regime == Regime::Subcritical;
    out.method = "index";
    return out;
  }
  if (pb.spec.L_A.has_limit() && pb.spec.L_b.has_limit() && pb.spec.L_h.has_limit()) {
    // Integrand in u = ln 1/r is asymptotic to G(u) = L_A^{-q*/(p-1)} L_b(u) L_h(Phi), with
    // ln Phi = m2 u + delta(u), delta = -ln L_A/(p-1) + O(1). L_h(Phi) ~ L_h(e^{m2 u}) needs the
    // power part x^nu of ln L_h to be insensitive to the shift: nu - 1 + (power of delta) < 0.
    rv::Expansion eh = rv::expansion(pb.spec.L_h);
    rv::Expansion delta = rv::expansion(pb.spec.L_A).scaled(-1.0 / (pb.spec.p - 1.0));
    double nu = eh.max_power();
    bool shift_ok = !has_powers(eh) || nu - 1.0 + delta.max_power() < 0.0;
    if (shift_ok && c.m2 > 0.0) {
      rv::Expansion g = gf_expansion(pb);
      g += eh.argument_scaled(c.m2);
      if (auto v = rv::tail_integral_converges(g)) {
        out.integrable = *v;
        out.method = "analytic";
        return out;
      }
    }
  } else {
    throw DomainError("integrability at q = q* is undecidable for slowly varying data without a limit");
  }
  // Nested decades in u = ln(1/r) with a Raabe statistic: I_k ~ u_k^{-a} gives a.
  out.method = "numeric";
  const auto& s = pb.spec;
  auto psi = [&](double u) {
    double lp = ln_phi(pb.op, -u);
    return -(s.N + s.sigma) * u + pb.L_b.log_x(u) + pb.ln_h(lp);
  };
  std::vector<double> lnI;
  const double w = std::numbers::ln10;
  for (int k = 1; k <= 40; ++k) lnI.push_back(quad::log_integral_upper(psi, k * w, (k + 1) * w));
  for (size_t k = 0; k + 1 < lnI.size(); ++k) {
    double uk = (k + 1.5) * w, uk1 = (k + 2.5) * w;
    out.evidence.push_back((lnI[k] - lnI[k + 1]) / std::log(uk1 / uk));
  }
  const size_t n = out.evidence.size();
  bool above = true, below = true;
  for (size_t i = n - 3; i < n; ++i) {
    above = above && out.evidence[i] > 1.1;
    below = below && out.evidence[i] < 0.9;
  }
  if (above == below) throw NumericalError("integrability test inconclusive: Raabe statistic hovers near 1");
  out.integrable = above;
  return out;
}

FTable::FTable(const Problem& pb, double x_lo, double x_hi, double tol) : pb_(pb), x_lo_(x_lo), x_hi_(x_hi) {
  if (!(x_lo > 0.0 && x_hi > x_lo)) throw DomainError("FTable needs 0 < x_lo < x_hi");
  std::vector<double> nodes;
  const double z0 = std::log(x_lo), z1 = std::log(x_hi);
  const int n = std::max(2, static_cast<int>(std::ceil((z1 - z0) / 0.25)) + 1);
  for (int i = 0; i < n; ++i) nodes.push_back(z0 + (z1 - z0) * i / (n - 1));
  for (double j : joins_of(pb_)) {
    if (j > x_lo && j < x_hi) nodes.push_back(std::log(j));
  }
  std::sort(nodes.begin(), nodes.end());
  std::vector<double> f(nodes.size()), d(nodes.size());
  for (size_t i = 0; i < nodes.size(); ++i) {
    double x = std::exp(nodes[i]);
    f[i] = direct(x);
    d[i] = slope(x, f[i]);
  }
  z_.push_back(nodes[0]);
  f_.push_back(f[0]);
  df_.push_back(d[0]);
  for (size_t i = 0; i + 1 < nodes.size(); ++i) {
    refine(nodes[i], f[i], d[i], nodes[i + 1], f[i + 1], d[i + 1], 0, tol);
    z_.push_back(nodes[i + 1]);
    f_.push_back(f[i + 1]);
    df_.push_back(d[i + 1]);
  }
}

double FTable::slope(double x, double lf) const { return -x * std::exp(ln_gf(pb_, x) - lf); }

void FTable::refine(double z0, double f0, double d0, double z1, double f1, double d1, int depth, double tol) {
  const double zm = 0.5 * (z0 + z1), h = z1 - z0;
  const double herm = 0.5 * (f0 + f1) + 0.125 * h * (d0 - d1);
  const double xm = std::exp(zm);
  const double fm = direct(xm);
  if (std::abs(herm - fm) <= tol * std::max(1.0, std::abs(fm)) || depth >= 12) return;
  const double dm = slope(xm, fm);
  refine(z0, f0, d0, zm, fm, dm, depth + 1, tol);
  z_.push_back(zm);
  f_.push_back(fm);
  df_.push_back(dm);
  refine(zm, fm, dm, z1, f1, d1, depth + 1, tol);
}

double FTable::ln_f(double x) const {
  const double z = std::log(x);
  if (!(x >= x_lo_ && x <= x_hi_)) return direct(x);
  auto it = std::upper_bound(z_.begin(), z_.end(), z);
  size_t i = it == z_.begin() ? 0 : static_cast<size_t>(it - z_.begin()) - 1;
  if (i + 1 >= z_.size()) i = z_.size() - 2;
  const double h = z_[i + 1] - z_[i], t = (z - z_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * f_[i] + (t3 - 2 * t2 + t) * h * df_[i] + (-2 * t3 + 3 * t2) * f_[i + 1] +
         (t3 - t2) * h * df_[i + 1];
}

double FTable::ln_g(double x) const { return ln_gf(pb_, x); }

std::optional<double> doii_index(const Problem& pb) {
  rv::Expansion e = rv::expansion(pb.spec.L_h);
  if (e.oscillating || has_powers(e)) return std::nullopt;
  return log1_coef(e);
}

std::optional<double> doi_index(const Problem& pb) {
  rv::Expansion e = rv::expansion(pb.spec.L_A).scaled(-pb.spec.q / (pb.spec.p - 1.0));
  e += rv::expansion(pb.spec.L_b);
  if (e.oscillating || has_powers(e)) return std::nullopt;
  return log1_coef(e);
}

std::optional<TableRow> match_example(const Problem& pb) {
  const auto& s = pb.spec;
  rv::Expansion a = rv::expansion(s.L_A), b = rv::expansion(s.L_b), h = rv::expansion(s.L_h);
  TableRow row;
  row.table = pb.c.regime == Regime::Critical ? 4 : 3;
  if (pb.c.regime == Regime::Supercritical) return std::nullopt;
  auto nu_of = [](const rv::Expansion& e) -> std::optional<double> {
    auto sp = single_power(e, false);
    if (!sp || std::abs(sp->second + 1.0) > kCoefTol || !(sp->first > 0.0 && sp->first < 0.5)) return std::nullopt;
    return sp->first;
  };
  if (only_log1(a) && only_log1(b)) {
    row.alpha = log1_coef(a);
    row.beta = log1_coef(b);
    if (only_log1(h)) {
      row.example = 1;
      row.gamma = log1_coef(h);
      return row;
    }
    if (auto nu = nu_of(h)) {
      row.example = 2;
      row.nu = *nu;
      return row;
    }
    return std::nullopt;
  }
  auto pa = single_power(a, true);
  auto pbx = single_power(b, false);
  auto nu = nu_of(h);
  if (pa && pbx && nu && pa->first == 0.5 && std::abs(pa->second + (s.p - 1.0) / s.q) <= kCoefTol &&
      pbx->first == 0.5 && std::abs(pbx->second + 1.0) <= kCoefTol) {
    row.example = 3;
    row.alpha = log1_coef(a);
    row.nu = *nu;
    return row;
  }
  return std::nullopt;
}

Classification classification_menu(const Problem& pb) {
  Classification out;
  out.integrability = integrability_criterion(pb);
  out.row = match_example(pb);
  if (!out.integrability.integrable) {
    out.trichotomy = false;
    out.row.reset();
    out.reason = pb.c.regime == Regime::Supercritical ? "q > q*: b h(Phi) is not integrable"
                                                        : "q = q*: b h(Phi) is not integrable";
    return out;
  }
  out.trichotomy = true;
  if (pb.c.regime == Regime::Subcritical) {
    out.profile = ProfileKind::Subcritical;
    out.reason = "q < q*";
    return out;
  }
  out.reason = "q = q* with b h(Phi) integrable";
  if (auto g = doii_index(pb)) {
    out.profile = ProfileKind::CriticalDoii;
    out.gamma = *g;
  } else if (auto j = doi_index(pb)) {
    out.profile = ProfileKind::CriticalDoi;
    out.j = *j;
  } else {
    out.profile = ProfileKind::CriticalUnsupported;
  }
  return out;
}

ProblemSpec kelvin_map(double a, double p, int N, double q) {
  if (N < 2) throw SpecError("N", "2 <= N", "Kelvin map needs N >= 2");
  if (!(p >= N)) throw SpecError("p", "N <= p", "Kelvin map needs p >= N");
  if (!(a > p)) throw SpecError("a", "p < a", "Kelvin map needs a > p");
  if (!(q > p - 1.0)) throw SpecError("q", "q > p - 1", "Kelvin map needs q > p - 1");
  ProblemSpec s;
  s.N = N;
  s.p = p;
  s.q = q;
  s.theta = 2.0 * (p - N);
  s.sigma = a - 2.0 * N;
  s.borderline = p == N;
  return s;
}

double kelvin_strong_constant(double a, double p, int N, double q) {
  const double k = q - p + 1.0;
  const double base = std::pow((a - p) / k, p - 1.0) * ((-p * q + a * p - a) / k + N);
  if (!(base > 0.0)) throw DomainError("no strong exterior singularity for these exponents");
  return std::pow(base, 1.0 / k);
}

std::vector<double> data_joins(const Problem& pb) { return joins_of(pb); }

}  // namespace radsing
