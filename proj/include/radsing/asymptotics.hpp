#pragma once
// Strong-singularity profiles, the closed-form example asymptotics, the sub/super-solution
// families and the radial operator residual.
//
// Profiles are handled as jets in x = ln(1/r): U = ln v, U_x, U_xx. All formulas stay in log
// space, so r can be taken far below the double range of v itself.
#include <memory>
#include <optional>
#include <vector>

#include "radsing/fundamental.hpp"
#include "radsing/problem.hpp"

namespace radsing {

struct Jet {
  double U = 0, Ux = 0, Uxx = 0;
};

class ProfileEvaluator {
 public:
  // Picks the subcritical branch for q < q*, and (doii) or (doi) at q = q*. Throws DomainError
  // when no profile exists (q > q*, non-integrable, or neither structure holds).
  explicit ProfileEvaluator(const Problem& pb);

  const Problem& problem() const { return pb_; }
  ProfileKind branch() const { return branch_; }
  double gamma() const { return gamma_; }  // doii index
  double j() const { return j_; }          // doi index
  double ln_c_anchor() const { return ln_c_; }
  double x_anchor() const { return x_c_; }  // lower limit of the doii family integral, in ln 1/r
  double M() const { return pb_.c.M.value_or(0.0); }
  double eta0() const { return eta0_; }
  const PhiTable& phi_table() const { return *phi_; }

  double ln_tilde_u(double ln_r) const { return jet(-ln_r).U; }
  Jet jet(double x) const;

  // ln F and G_F/F at x = ln 1/r (critical branches only).
  double ln_f(double x) const;
  double f_ratio(double x) const;

 private:
  Problem pb_;
  ProfileKind branch_ = ProfileKind::None;
  double gamma_ = 0, j_ = 0, ln_c_ = 0, x_c_ = 0, eta0_ = 0.1;
  std::shared_ptr<const PhiTable> phi_;
  std::shared_ptr<const FTable> ftab_;
  std::vector<double> cuts_;

  Jet jet_subcritical(double x) const;
  Jet jet_doii(double x) const;
  Jet jet_doi(double x) const;
  friend Jet family_jet(const ProfileEvaluator&, double, int, double);
};

double tilde_u_subcritical(const ProfileEvaluator& ev, double r);
double tilde_u_critical(const ProfileEvaluator& ev, double r);

// Table row evaluated literally, in log space. Throws DomainError outside the row's hypotheses.
double ln_table_closed_form(const Problem& pb, const TableRow& row, double ln_r);
double table_closed_form(const Problem& pb, const TableRow& row, double r);

// v_{+eta} (sign = +1) or v_{-eta} (sign = -1). Subcritical: C [u~]^{1 +- eta}. Critical: the
// integral families anchored at the evaluator's c. Throws DomainError for eta outside [0, eta0].
Jet family_jet(const ProfileEvaluator& ev, double eta, int sign, double x);
double sub_super_family(const ProfileEvaluator& ev, double eta, int sign, double r);
double family_constant(const ProfileEvaluator& ev, double eta, int sign);  // C_{+-eta}

// Both sides of (r^{N-1+theta} L_A |v'|^{p-2} v')' = r^{N-1+sigma} L_b h(v), in logs.
struct OperatorTerms {
  double ln_abs_div = 0;
  int div_sign = 0;  // -1, 0, +1
  double ln_source = 0;
};
OperatorTerms operator_terms(const Problem& pb, const Jet& v, double x);
// 1 - div/source: positive for super-solutions, negative for sub-solutions, 1 - P(r) on u~.
double operator_residual(const Problem& pb, const Jet& v, double x);
// |div| / |W| r, the divergence part relative to the flux scale; 0 for A-harmonic profiles.
double divergence_relative(const Problem& pb, const Jet& v, double x);

// P(r) from its defining expression (subcritical).
double p_factor(const ProfileEvaluator& ev, double x);

struct SignScan {
  double eta = 0;
  bool found = false;
  double x_eps = 0;  // ln(1/r_eps)
  double r_eps = 0;
  std::vector<double> x, res_plus, res_minus;
};
// Residual signs of v_{+eta}, v_{-eta} on a geometric grid in x; r_eps is the largest sampled
// r below which every sample has the super/sub sign.
SignScan sign_scan(const ProfileEvaluator& ev, double eta, double x_lo, double x_hi, int points);

}  // namespace radsing
