#pragma once
// Slowly and regularly varying functions evaluated in logarithmic coordinates.
//
// Every family is written in terms of x, the log-distance to the reference point:
// x = ln(1/t) at zero, x = ln t at infinity. In that variable ln L(x) is elementary and
// eps(x) = d ln L / dx coincides with -tL'/L (at zero) and tL'/L (at infinity).
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace radsing::rv {

enum class Orientation { AtZero, AtInfinity };
const char* to_string(Orientation o);

struct Const { double c = 1.0; };
struct LogPow { double alpha = 0.0; };          // x^alpha
struct IterLogPow { int n = 2; double beta = 0.0; };  // (ln_{n-1} x)^beta
struct ExpLogPow { double nu = 0.5; double coef = -1.0; };  // exp(coef x^nu)
struct ExpSqrtLog { double c = 1.0; };          // exp(-c sqrt x)
struct Oscillating { double amp = 1.0; };       // exp(amp x^{1/3} cos x^{1/3}); no limit at the reference point
class SlowlyVarying;
struct Product { std::vector<SlowlyVarying> factors; };

class SlowlyVarying {
 public:
  using Family = std::variant<Const, LogPow, IterLogPow, ExpLogPow, ExpSqrtLog, Oscillating, Product>;

  SlowlyVarying() = default;
  SlowlyVarying(Family f, Orientation o);

  const Family& family() const { return family_; }
  Orientation orientation() const { return orient_; }

  double x_of(double ln_t) const { return orient_ == Orientation::AtZero ? -ln_t : ln_t; }
  double ln_t_of(double x) const { return orient_ == Orientation::AtZero ? -x : x; }

  // Evaluation requires x > domain_start().
  double domain_start() const;
  double log_x(double x) const;
  double eps_x(double x) const;
  double deps_x(double x) const;

  double eval_log(double ln_t) const { return log_x(x_of(ln_t)); }
  double epsilon_log(double ln_t) const { return eps_x(x_of(ln_t)); }

  bool has_limit() const;
  bool is_constant() const;

  friend bool operator==(const SlowlyVarying& a, const SlowlyVarying& b);

 private:
  Family family_ = Const{1.0};
  Orientation orient_ = Orientation::AtZero;
};

bool operator==(const Const& a, const Const& b);
bool operator==(const LogPow& a, const LogPow& b);
bool operator==(const IterLogPow& a, const IterLogPow& b);
bool operator==(const ExpLogPow& a, const ExpLogPow& b);
bool operator==(const ExpSqrtLog& a, const ExpSqrtLog& b);
bool operator==(const Oscillating& a, const Oscillating& b);
bool operator==(const Product& a, const Product& b);

SlowlyVarying constant(double c, Orientation o);
SlowlyVarying log_pow(double alpha, Orientation o);
SlowlyVarying iter_log_pow(int n, double beta, Orientation o);
SlowlyVarying exp_log_pow(double nu, double coef, Orientation o);
SlowlyVarying exp_sqrt_log(double c, Orientation o);
SlowlyVarying oscillating(double amp, Orientation o);
// Flattens nested products and drops unit constants. All factors must share the orientation.
SlowlyVarying product(const std::vector<SlowlyVarying>& factors);
SlowlyVarying power(const SlowlyVarying& L, double k);

struct RegularlyVarying {
  double rho = 0.0;
  SlowlyVarying slow;
  double eval_log(double ln_t) const { return rho * ln_t + slow.eval_log(ln_t); }
};

double eval_log(const SlowlyVarying& L, double ln_t);
double eval_log(const RegularlyVarying& f, double ln_t);
double epsilon(const SlowlyVarying& L, double t);

struct LogSample {
  double ln_t;
  double ln_f;
};

// Index of regular variation from samples approaching 0 (all ln t < 0) or infinity (all ln t > 0).
// The fit is ln f = rho ln t + a ln x + c, with x = |ln t|; the ln x term absorbs log-power
// factors that would otherwise bias a plain slope over a finite window.
double index_estimate(std::span<const LogSample> samples);

enum class Branch { A, B };

// t^{j+1} f(t) / I(t), where at zero I = int_t^c (branch A) or int_0^t (branch B), and at
// infinity I = int_c^t (branch A) or int_t^inf (branch B). Throws DivergenceError when the
// branch integral diverges and DomainError when the theorem does not cover (j, rho, branch).
double karamata_ratio(const RegularlyVarying& f, double j, double t, Orientation side, Branch branch);

// sup over xi in [xi_lo, xi_hi] of |L(xi t)/L(t) - 1|.
double uniform_convergence_check(const SlowlyVarying& L, double t, double xi_lo = 0.5, double xi_hi = 2.0,
                                 int points = 129);

// Asymptotic shape of ln L(x) as x -> inf: constant + sum c_m ln_m(x) + sum c_e x^e (0<e<1).
struct Expansion {
  double constant = 0.0;
  std::map<int, double> logs;       // order m >= 1 -> coefficient of ln_m x
  std::map<double, double> powers;  // exponent -> coefficient
  bool oscillating = false;

  Expansion& operator+=(const Expansion& o);
  Expansion scaled(double k) const;
  // Shape of x -> ln L(m x) for m > 0.
  Expansion argument_scaled(double m) const;
  double max_power() const;  // 0 if no power terms survive
};
Expansion expansion(const SlowlyVarying& L);

// Does int^inf exp(g(u)) du converge, with g given by its expansion? Empty if undecidable.
std::optional<bool> tail_integral_converges(const Expansion& g);

// Nested key-value text, e.g. { family = "logpow", alpha = 2, orientation = "zero" }.
std::string to_text(const SlowlyVarying& L);
SlowlyVarying from_text(const std::string& text);

}  // namespace radsing::rv
