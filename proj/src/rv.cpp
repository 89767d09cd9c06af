#include "radsing/rv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "radsing/errors.hpp"
#include "radsing/kv.hpp"
#include "radsing/quad.hpp"
#include "radsing/rv_json.hpp"

namespace radsing::rv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Threshold above which ln_{n-1} x is positive: 1, e, e^e, ...
double iter_log_start(int n) {
  double s = 1.0;
  for (int k = 0; k < n - 2; ++k) s = std::exp(s);
  return s;
}

// Products of iterated logarithms: P_k = x ln x ... ln_k x.
void iter_log_chain(int n, double x, double* lk, double* prod) {
  double v = x, p = 1.0;
  for (int k = 0; k < n; ++k) {
    lk[k] = v;
    p *= v;
    prod[k] = p;
    v = std::log(v);
  }
}

void check_domain(const SlowlyVarying& L, double x) {
  if (!(x > L.domain_start()))
    throw DomainError("slowly varying function evaluated outside its domain (log-distance " + kv::format_number(x) +
                      " <= " + kv::format_number(L.domain_start()) + ")");
}

}  // namespace

const char* to_string(Orientation o) { return o == Orientation::AtZero ? "zero" : "infinity"; }

SlowlyVarying::SlowlyVarying(Family f, Orientation o) : family_(std::move(f)), orient_(o) {
  std::visit(overloaded{
                 [](const Const& c) {
                   if (!(c.c > 0.0) || !std::isfinite(c.c)) throw DomainError("Const requires c > 0");
                 },
                 [](const LogPow& l) {
                   if (!std::isfinite(l.alpha)) throw DomainError("LogPow exponent must be finite");
                 },
                 [](const IterLogPow& l) {
                   if (l.n < 2 || l.n > 5) throw DomainError("IterLogPow requires 2 <= n <= 5");
                   if (!std::isfinite(l.beta)) throw DomainError("IterLogPow exponent must be finite");
                 },
                 [](const ExpLogPow& e) {
                   if (!(e.nu > 0.0 && e.nu < 1.0)) throw DomainError("ExpLogPow requires nu in (0,1)");
                   if (!std::isfinite(e.coef)) throw DomainError("ExpLogPow coefficient must be finite");
                 },
                 [](const ExpSqrtLog& e) {
                   if (!std::isfinite(e.c)) throw DomainError("ExpSqrtLog coefficient must be finite");
                 },
                 [](const Oscillating&) {},
                 [o](const Product& p) {
                   for (const auto& f : p.factors)
                     if (f.orientation() != o && !f.is_constant())
                       throw DomainError("Product factors must share one orientation");
                 },
             },
             family_);
}

double SlowlyVarying::domain_start() const {
  return std::visit(overloaded{
                        [](const Const&) { return -kInf; },
                        [](const LogPow& l) { return l.alpha == 0.0 ? -kInf : 0.0; },
                        [](const IterLogPow& l) { return iter_log_start(l.n); },
                        [](const ExpLogPow&) { return 0.0; },
                        [](const ExpSqrtLog&) { return 0.0; },
                        [](const Oscillating&) { return 0.0; },
                        [](const Product& p) {
                          double s = -kInf;
                          for (const auto& f : p.factors) s = std::max(s, f.domain_start());
                          return s;
                        },
                    },
                    family_);
}

double SlowlyVarying::log_x(double x) const {
  check_domain(*this, x);
  return std::visit(overloaded{
                        [](const Const& c) { return std::log(c.c); },
                        [x](const LogPow& l) { return l.alpha == 0.0 ? 0.0 : l.alpha * std::log(x); },
                        [x](const IterLogPow& l) {
                          double v = x;
                          for (int k = 1; k < l.n; ++k) v = std::log(v);
                          return l.beta * std::log(v);
                        },
                        [x](const ExpLogPow& e) { return e.coef * std::pow(x, e.nu); },
                        [x](const ExpSqrtLog& e) { return -e.c * std::sqrt(x); },
                        [x](const Oscillating& o) {
                          double y = std::cbrt(x);
                          return o.amp * y * std::cos(y);
                        },
                        [x](const Product& p) {
                          double s = 0.0;
                          for (const auto& f : p.factors) s += f.log_x(x);
                          return s;
                        },
                    },
                    family_);
}

double SlowlyVarying::eps_x(double x) const {
  check_domain(*this, x);
  return std::visit(overloaded{
                        [](const Const&) { return 0.0; },
                        [x](const LogPow& l) { return l.alpha / x; },
                        [x](const IterLogPow& l) {
                          double lk[8] = {}, prod[8] = {};
                          iter_log_chain(l.n, x, lk, prod);
                          return l.beta / prod[l.n - 1];
                        },
                        [x](const ExpLogPow& e) { return e.coef * e.nu * std::pow(x, e.nu - 1.0); },
                        [x](const ExpSqrtLog& e) { return -e.c / (2.0 * std::sqrt(x)); },
                        [x](const Oscillating& o) {
                          double y = std::cbrt(x);
                          return o.amp * (std::cos(y) - y * std::sin(y)) / (3.0 * y * y);
                        },
                        [x](const Product& p) {
                          double s = 0.0;
                          for (const auto& f : p.factors) s += f.eps_x(x);
                          return s;
                        },
                    },
                    family_);
}

double SlowlyVarying::deps_x(double x) const {
  check_domain(*this, x);
  return std::visit(overloaded{
                        [](const Const&) { return 0.0; },
                        [x](const LogPow& l) { return -l.alpha / (x * x); },
                        [x](const IterLogPow& l) {
                          double lk[8] = {}, prod[8] = {};
                          iter_log_chain(l.n, x, lk, prod);
                          double eps = l.beta / prod[l.n - 1];
                          double s = 0.0;
                          for (int k = 0; k < l.n; ++k) s += 1.0 / prod[k];
                          return -eps * s;
                        },
                        [x](const ExpLogPow& e) { return e.coef * e.nu * (e.nu - 1.0) * std::pow(x, e.nu - 2.0); },
                        [x](const ExpSqrtLog& e) { return e.c / (4.0 * x * std::sqrt(x)); },
                        [x](const Oscillating& o) {
                          double y = std::cbrt(x);
                          double y1 = 1.0 / (3.0 * y * y);
                          double y2 = -2.0 / (9.0 * std::pow(y, 5));
                          return o.amp * ((-2.0 * std::sin(y) - y * std::cos(y)) * y1 * y1 +
                                          (std::cos(y) - y * std::sin(y)) * y2);
                        },
                        [x](const Product& p) {
                          double s = 0.0;
                          for (const auto& f : p.factors) s += f.deps_x(x);
                          return s;
                        },
                    },
                    family_);
}

bool SlowlyVarying::has_limit() const {
  return std::visit(overloaded{
                        [](const Oscillating&) { return false; },
                        [](const Product& p) {
                          return std::all_of(p.factors.begin(), p.factors.end(),
                                             [](const SlowlyVarying& f) { return f.has_limit(); });
                        },
                        [](const auto&) { return true; },
                    },
                    family_);
}

bool SlowlyVarying::is_constant() const {
  return std::visit(overloaded{
                        [](const Const&) { return true; },
                        [](const LogPow& l) { return l.alpha == 0.0; },
                        [](const Product& p) {
                          return std::all_of(p.factors.begin(), p.factors.end(),
                                             [](const SlowlyVarying& f) { return f.is_constant(); });
                        },
                        [](const auto&) { return false; },
                    },
                    family_);
}

bool operator==(const Const& a, const Const& b) { return a.c == b.c; }
bool operator==(const LogPow& a, const LogPow& b) { return a.alpha == b.alpha; }
bool operator==(const IterLogPow& a, const IterLogPow& b) { return a.n == b.n && a.beta == b.beta; }
bool operator==(const ExpLogPow& a, const ExpLogPow& b) { return a.nu == b.nu && a.coef == b.coef; }
bool operator==(const ExpSqrtLog& a, const ExpSqrtLog& b) { return a.c == b.c; }
bool operator==(const Oscillating& a, const Oscillating& b) { return a.amp == b.amp; }
bool operator==(const Product& a, const Product& b) { return a.factors == b.factors; }
bool operator==(const SlowlyVarying& a, const SlowlyVarying& b) {
  return a.orient_ == b.orient_ && a.family_ == b.family_;
}

SlowlyVarying constant(double c, Orientation o) { return {Const{c}, o}; }
SlowlyVarying log_pow(double alpha, Orientation o) { return {LogPow{alpha}, o}; }
SlowlyVarying iter_log_pow(int n, double beta, Orientation o) { return {IterLogPow{n, beta}, o}; }
SlowlyVarying exp_log_pow(double nu, double coef, Orientation o) { return {ExpLogPow{nu, coef}, o}; }
SlowlyVarying exp_sqrt_log(double c, Orientation o) { return {ExpSqrtLog{c}, o}; }
SlowlyVarying oscillating(double amp, Orientation o) { return {Oscillating{amp}, o}; }

SlowlyVarying product(const std::vector<SlowlyVarying>& factors) {
  if (factors.empty()) return {};
  std::vector<SlowlyVarying> flat;
  double c = 1.0;
  std::optional<Orientation> orient;
  auto add = [&](auto&& self, const SlowlyVarying& f) -> void {
    if (const auto* p = std::get_if<Product>(&f.family())) {
      for (const auto& g : p->factors) self(self, g);
      return;
    }
    if (const auto* k = std::get_if<Const>(&f.family())) {
      c *= k->c;
      return;
    }
    if (orient && *orient != f.orientation()) throw DomainError("Product factors must share one orientation");
    orient = f.orientation();
    flat.push_back(f);
  };
  for (const auto& f : factors) add(add, f);
  Orientation o = orient.value_or(factors.front().orientation());
  if (c != 1.0) flat.insert(flat.begin(), constant(c, o));
  if (flat.empty()) return constant(1.0, o);
  if (flat.size() == 1) return flat.front();
  return {Product{std::move(flat)}, o};
}

SlowlyVarying power(const SlowlyVarying& L, double k) {
  Orientation o = L.orientation();
  return std::visit(overloaded{
                        [&](const Const& c) { return constant(std::pow(c.c, k), o); },
                        [&](const LogPow& l) { return log_pow(l.alpha * k, o); },
                        [&](const IterLogPow& l) { return iter_log_pow(l.n, l.beta * k, o); },
                        [&](const ExpLogPow& e) { return exp_log_pow(e.nu, e.coef * k, o); },
                        [&](const ExpSqrtLog& e) { return exp_sqrt_log(e.c * k, o); },
                        [&](const Oscillating& s) { return oscillating(s.amp * k, o); },
                        [&](const Product& p) {
                          std::vector<SlowlyVarying> f;
                          for (const auto& g : p.factors) f.push_back(power(g, k));
                          return product(f);
                        },
                    },
                    L.family());
}

double eval_log(const SlowlyVarying& L, double ln_t) { return L.eval_log(ln_t); }
double eval_log(const RegularlyVarying& f, double ln_t) { return f.eval_log(ln_t); }
double epsilon(const SlowlyVarying& L, double t) {
  if (!(t > 0.0)) throw DomainError("epsilon requires t > 0");
  return L.epsilon_log(std::log(t));
}

double index_estimate(std::span<const LogSample> samples) {
  if (samples.size() < 8) throw DomainError("index_estimate needs at least 8 samples");
  double lo = kInf, hi = -kInf;
  bool any_neg = false, any_pos = false;
  for (const auto& s : samples) {
    if (!std::isfinite(s.ln_t) || !std::isfinite(s.ln_f)) throw DomainError("index_estimate: non-finite sample");
    lo = std::min(lo, s.ln_t);
    hi = std::max(hi, s.ln_t);
    any_neg |= s.ln_t < 0.0;
    any_pos |= s.ln_t > 0.0;
  }
  if (any_neg == any_pos) throw DomainError("index_estimate: samples must lie on one side of t = 1");
  if (hi - lo < 4.0 * std::numbers::ln10 * (1.0 - 1e-9))
    throw DomainError("index_estimate: samples span fewer than 4 decades");
  // Centred least squares on (ln t, ln x).
  const double n = static_cast<double>(samples.size());
  double m1 = 0, m2 = 0, my = 0;
  for (const auto& s : samples) {
    m1 += s.ln_t;
    m2 += std::log(std::abs(s.ln_t));
    my += s.ln_f;
  }
  m1 /= n;
  m2 /= n;
  my /= n;
  double s11 = 0, s12 = 0, s22 = 0, s1y = 0, s2y = 0;
  for (const auto& s : samples) {
    double a = s.ln_t - m1, b = std::log(std::abs(s.ln_t)) - m2, y = s.ln_f - my;
    s11 += a * a;
    s12 += a * b;
    s22 += b * b;
    s1y += a * y;
    s2y += b * y;
  }
  double det = s11 * s22 - s12 * s12;
  if (!(det > 1e-12 * s11 * s22)) return s1y / s11;
  return (s1y * s22 - s2y * s12) / det;
}

namespace {

// Lower end of the branch-A integral: a point safely inside the domain, at t = 1 when possible.
double karamata_anchor_x(const SlowlyVarying& L) {
  double s = L.domain_start();
  return std::isfinite(s) ? std::max(0.0, s) + 1.0 : 0.0;
}

}  // namespace

double karamata_ratio(const RegularlyVarying& f, double j, double t, Orientation side, Branch branch) {
  if (!(t > 0.0)) throw DomainError("karamata_ratio requires t > 0");
  if (f.slow.orientation() != side && !f.slow.is_constant())
    throw DomainError("karamata_ratio: function orientation differs from the requested side");
  const SlowlyVarying& L = f.slow;
  const double ln_t = std::log(t);
  const double x = side == Orientation::AtZero ? -ln_t : ln_t;
  if (!(x > L.domain_start())) throw DomainError("karamata_ratio: t outside the domain");
  // In the log-distance variable u the integrand of ∫ xi^j f(xi) dxi becomes exp(kappa u + ln L(u)),
  // with kappa = -(j + rho + 1) at zero and +(j + rho + 1) at infinity.
  const double a = j + f.rho + 1.0;
  const double kappa = side == Orientation::AtZero ? -a : a;
  auto psi = [&](double u) { return kappa * u + L.log_x(u); };
  const double lnnum = (j + 1.0) * ln_t + f.eval_log(ln_t);
  const double tol = 1e-12;
  double lnI;
  // Branch B integrates toward the reference point: u runs over [x, inf).
  if (branch == Branch::B) {
    // Integral over u in [x, inf).
    if (kappa > tol) throw DivergenceError("karamata_ratio: integral diverges for this (j, rho, branch)");
    if (std::abs(kappa) <= tol) {
      auto conv = tail_integral_converges(expansion(L));
      if (!conv.has_value() || !*conv) throw DivergenceError("karamata_ratio: borderline integral diverges");
    }
    lnI = quad::log_integral_lower(psi, x, kInf);
  } else {
    if (kappa < -tol) throw DomainError("karamata_ratio: (j, rho) not covered by this branch");
    double x0 = karamata_anchor_x(L);
    if (!(x > x0)) throw DomainError("karamata_ratio: t not beyond the branch anchor point");
    lnI = quad::log_integral_upper(psi, x0, x);
  }
  return std::exp(lnnum - lnI);
}

double uniform_convergence_check(const SlowlyVarying& L, double t, double xi_lo, double xi_hi, int points) {
  if (!(t > 0.0) || !(xi_lo > 0.0) || !(xi_hi >= xi_lo) || points < 2)
    throw DomainError("uniform_convergence_check: bad arguments");
  const double ln_t = std::log(t);
  const double base = L.eval_log(ln_t);
  double sup = 0.0;
  for (int i = 0; i < points; ++i) {
    double ln_xi = std::log(xi_lo) + (std::log(xi_hi) - std::log(xi_lo)) * i / (points - 1);
    sup = std::max(sup, std::abs(std::expm1(L.eval_log(ln_t + ln_xi) - base)));
  }
  return sup;
}

Expansion& Expansion::operator+=(const Expansion& o) {
  constant += o.constant;
  for (auto [m, c] : o.logs) logs[m] += c;
  for (auto [e, c] : o.powers) powers[e] += c;
  oscillating = oscillating || o.oscillating;
  return *this;
}

Expansion Expansion::scaled(double k) const {
  Expansion r = *this;
  r.constant *= k;
  for (auto& [m, c] : r.logs) c *= k;
  for (auto& [e, c] : r.powers) c *= k;
  return r;
}

Expansion Expansion::argument_scaled(double m) const {
  Expansion r = *this;
  if (auto it = r.logs.find(1); it != r.logs.end()) r.constant += it->second * std::log(m);
  for (auto& [e, c] : r.powers) c *= std::pow(m, e);
  return r;
}

double Expansion::max_power() const {
  double e = 0.0;
  for (auto [ex, c] : powers)
    if (std::abs(c) > 1e-12) e = std::max(e, ex);
  return e;
}

Expansion expansion(const SlowlyVarying& L) {
  Expansion r;
  std::visit(overloaded{
                 [&](const Const& c) { r.constant += std::log(c.c); },
                 [&](const LogPow& l) {
                   if (l.alpha != 0.0) r.logs[1] += l.alpha;
                 },
                 [&](const IterLogPow& l) { r.logs[l.n] += l.beta; },
                 [&](const ExpLogPow& e) { r.powers[e.nu] += e.coef; },
                 [&](const ExpSqrtLog& e) { r.powers[0.5] += -e.c; },
                 [&](const Oscillating&) { r.oscillating = true; },
                 [&](const Product& p) {
                   for (const auto& f : p.factors) r += expansion(f);
                 },
             },
             L.family());
  return r;
}

std::optional<bool> tail_integral_converges(const Expansion& g) {
  if (g.oscillating) return std::nullopt;
  constexpr double tol = 1e-12;
  for (auto it = g.powers.rbegin(); it != g.powers.rend(); ++it) {
    if (std::abs(it->second) <= tol) continue;
    return it->second < 0.0;
  }
  int top = g.logs.empty() ? 0 : g.logs.rbegin()->first;
  for (int m = 1; m <= top + 1; ++m) {
    auto it = g.logs.find(m);
    double c = it == g.logs.end() ? 0.0 : it->second;
    if (c < -1.0 - tol) return true;
    if (c > -1.0 + tol) return false;
  }
  return false;
}

nlohmann::json to_json(const SlowlyVarying& L) {
  nlohmann::json j;
  std::visit(overloaded{
                 [&](const Const& c) {
                   j["family"] = "const";
                   j["c"] = c.c;
                 },
                 [&](const LogPow& l) {
                   j["family"] = "logpow";
                   j["alpha"] = l.alpha;
                 },
                 [&](const IterLogPow& l) {
                   j["family"] = "iterlogpow";
                   j["n"] = l.n;
                   j["beta"] = l.beta;
                 },
                 [&](const ExpLogPow& e) {
                   j["family"] = "explogpow";
                   j["nu"] = e.nu;
                   j["sign"] = e.coef < 0 ? "-" : "+";
                   if (std::abs(e.coef) != 1.0) j["scale"] = std::abs(e.coef);
                 },
                 [&](const ExpSqrtLog& e) {
                   j["family"] = "expsqrtlog";
                   j["c"] = e.c;
                 },
                 [&](const Oscillating& o) {
                   j["family"] = "oscillating";
                   if (o.amp != 1.0) j["amp"] = o.amp;
                 },
                 [&](const Product& p) {
                   j["family"] = "product";
                   j["factors"] = nlohmann::json::array();
                   for (const auto& f : p.factors) j["factors"].push_back(to_json(f));
                 },
             },
             L.family());
  j["orientation"] = to_string(L.orientation());
  return j;
}

namespace {

std::string render(const nlohmann::json& j) {
  // family first, orientation last, the parameters in between.
  std::string out = "{ family = " + kv::dump_inline(j["family"]);
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (it.key() == "family" || it.key() == "orientation") continue;
    out += ", " + it.key() + " = ";
    if (it.key() == "factors") {
      out += "[";
      for (size_t i = 0; i < it.value().size(); ++i) out += (i ? ", " : "") + render(it.value()[i]);
      out += "]";
    } else {
      out += kv::dump_inline(it.value());
    }
  }
  return out + ", orientation = " + kv::dump_inline(j["orientation"]) + " }";
}

}  // namespace

std::string to_text(const SlowlyVarying& L) { return render(to_json(L)); }

SlowlyVarying from_json_value(const nlohmann::json& j);

SlowlyVarying from_text(const std::string& text) { return from_json_value(kv::parse_value(text)); }

SlowlyVarying from_json_value(const nlohmann::json& j) {
  if (!j.is_object()) throw DomainError("slowly varying function must be a table");
  auto num = [&](const char* k) -> double {
    if (!j.contains(k) || !j[k].is_number()) throw DomainError(std::string("missing numeric key '") + k + "'");
    return j[k].get<double>();
  };
  if (!j.contains("family") || !j["family"].is_string()) throw DomainError("missing key 'family'");
  if (!j.contains("orientation") || !j["orientation"].is_string()) throw DomainError("missing key 'orientation'");
  std::string o = j["orientation"];
  Orientation orient;
  if (o == "zero")
    orient = Orientation::AtZero;
  else if (o == "infinity")
    orient = Orientation::AtInfinity;
  else
    throw DomainError("orientation must be \"zero\" or \"infinity\"");
  std::string fam = j["family"];
  if (fam == "const") return constant(num("c"), orient);
  if (fam == "logpow") return log_pow(num("alpha"), orient);
  if (fam == "iterlogpow") {
    if (!j.contains("n") || !j["n"].is_number_integer()) throw DomainError("iterlogpow needs integer 'n'");
    return iter_log_pow(j["n"].get<int>(), num("beta"), orient);
  }
  if (fam == "explogpow") {
    if (!j.contains("sign") || !j["sign"].is_string()) throw DomainError("explogpow needs 'sign' (\"+\" or \"-\")");
    std::string s = j["sign"];
    if (s != "+" && s != "-") throw DomainError("explogpow 'sign' must be \"+\" or \"-\"");
    double scale = j.contains("scale") ? num("scale") : 1.0;
    return exp_log_pow(num("nu"), (s == "-" ? -1.0 : 1.0) * scale, orient);
  }
  if (fam == "expsqrtlog") return exp_sqrt_log(num("c"), orient);
  if (fam == "oscillating") return oscillating(j.contains("amp") ? num("amp") : 1.0, orient);
  if (fam == "product") {
    if (!j.contains("factors") || !j["factors"].is_array()) throw DomainError("product needs an array 'factors'");
    std::vector<SlowlyVarying> f;
    for (const auto& e : j["factors"]) f.push_back(from_json_value(e));
    // Keep the literal factor list so the text form round-trips; nesting is flattened.
    std::vector<SlowlyVarying> flat;
    for (const auto& g : f) {
      if (const auto* p = std::get_if<Product>(&g.family()))
        flat.insert(flat.end(), p->factors.begin(), p->factors.end());
      else
        flat.push_back(g);
    }
    return {Product{std::move(flat)}, orient};
  }
  throw DomainError("unknown family '" + fam + "'");
}

}  // namespace radsing::rv
