#pragma once
// Problem data for div(A |grad u|^{p-2} grad u) = b(|x|) h(u) in the punctured unit ball, with
//   A = r^theta L_A(r),  b = r^sigma L_b(r),  h(t) = t^q L_h(t)  (L_A, L_b at 0, L_h at infinity).
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "radsing/completion.hpp"
#include "radsing/fundamental.hpp"
#include "radsing/rv.hpp"

namespace radsing {

struct ProblemSpec {
  int N = 3;
  double p = 2.0;
  double theta = 0.0;
  double sigma = 0.0;
  double q = 2.0;
  rv::SlowlyVarying L_A = rv::constant(1.0, rv::Orientation::AtZero);
  rv::SlowlyVarying L_b = rv::constant(1.0, rv::Orientation::AtZero);
  rv::SlowlyVarying L_h = rv::constant(1.0, rv::Orientation::AtInfinity);
  // h(t) = t^q L_h(max(t, h_join)); chosen automatically when absent.
  std::optional<double> h_join;
  bool borderline = false;  // admit p = N + theta
};

enum class Regime { Subcritical, Critical, Supercritical };
const char* to_string(Regime r);

struct DerivedConstants {
  double m0 = 0, m1 = 0, m2 = 0;
  double q_star = 0;  // +inf when m2 = 0
  std::optional<double> M;
  Regime regime = Regime::Subcritical;
  double k = 0;                // q - p + 1
  bool near_critical = false;  // q within 1e-12 of q* but not equal as rationals
};

// Validated problem with all slowly varying parts completed away from their reference points.
struct Problem {
  ProblemSpec spec;
  Operator op;
  rv::Completed L_b;
  rv::Completed L_h;  // in x = ln t
  DerivedConstants c;

  double ln_h(double ln_t) const { return spec.q * ln_t + L_h.eval_log(ln_t); }
  double h_join() const { return std::exp(L_h.x_join()); }
};

// Finite join points of L_A, L_b (in ln 1/r) and L_h (in ln t), sorted.
std::vector<double> data_joins(const Problem& pb);

// Throws SpecError naming the key and the violated inequality.
Problem make_problem(const ProblemSpec& spec);
DerivedConstants derive_constants(const ProblemSpec& spec);

struct Integrability {
  bool integrable = false;
  std::string method;  // "index", "analytic", "numeric"
  std::vector<double> evidence;  // numeric: Raabe statistics per decade
};
// Is b h(Phi) integrable near 0? Throws DomainError for oscillating data at q = q*.
Integrability integrability_criterion(const Problem& pb);

// ln of G_F(u) = L_A^{-q*/(p-1)}(e^{-u}) L_b(e^{-u}) L_h(e^u), the integrand of F in u = ln(1/xi).
double ln_gf(const Problem& pb, double u);
// ln F(r), F(r) = int_0^r xi^{-1} L_A^{-q*/(p-1)} L_b L_h(1/xi) d xi = int_{ln 1/r}^inf G_F.
double ln_f_integral(const Problem& pb, double ln_r);
double f_integral(const Problem& pb, double r);

// ln F tabulated against z = ln x (x = ln 1/r), Hermite-interpolated with the exact slope
// d ln F / dz = -x G_F(x) / F(x). Direct quadrature outside [x_lo, x_hi].
class FTable {
 public:
  FTable(const Problem& pb, double x_lo, double x_hi, double tol = 1e-11);
  double ln_f(double x) const;          // ln F at r = e^{-x}
  double ln_g(double x) const;          // ln G_F(x)
  double phi(double x) const { return std::exp(ln_g(x) - ln_f(x)); }  // G_F / F
  double x_lo() const { return x_lo_; }
  double x_hi() const { return x_hi_; }

 private:
  Problem pb_;
  double x_lo_, x_hi_;
  std::vector<double> z_, f_, df_;
  double direct(double x) const { return ln_f_integral(pb_, -x); }
  double slope(double x, double lf) const;
  void refine(double z0, double f0, double d0, double z1, double f1, double d1, int depth, double tol);
};

enum class ProfileKind { None, Subcritical, CriticalDoii, CriticalDoi, CriticalUnsupported };
const char* to_string(ProfileKind k);

struct TableRow {
  int example = 0;  // 1..3
  int table = 0;    // 3 (q < q*) or 4 (q = q*)
  double alpha = 0, beta = 0, gamma = 0, nu = 0;
};

struct Classification {
  bool trichotomy = false;  // otherwise removable only
  ProfileKind profile = ProfileKind::None;
  double gamma = 0;  // doii index
  double j = 0;      // doi index
  std::optional<TableRow> row;
  Integrability integrability;
  std::string reason;
};

// (doii): L_h(e^t) regularly varying; (doi): L_A^{-q/(p-1)} L_b (e^{-t}) regularly varying.
std::optional<double> doii_index(const Problem& pb);
std::optional<double> doi_index(const Problem& pb);
// Matches the data against Examples 1-3 (exact family shapes, no constant factors).
std::optional<TableRow> match_example(const Problem& pb);

Classification classification_menu(const Problem& pb);

// Weighted interior problem equivalent to div(|grad v|^{p-2} grad v) = |x|^{-a} v^q outside B_1.
ProblemSpec kelvin_map(double a, double p, int N, double q);
// Limit of |x|^{-(a-p)/(q-p+1)} v for the strong exterior singularity.
double kelvin_strong_constant(double a, double p, int N, double q);

}  // namespace radsing
