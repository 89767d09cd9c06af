#pragma once
// The fundamental solution of r^{1-N} (r^{N-1+theta} L_A |v'|^{p-2} v')' = 0 vanishing at r = 1,
//   Phi(r) = C_{N,p} int_r^1 (t^{1-N-theta} / L_A(t))^{1/(p-1)} dt,   C_{N,p} = (N w_N)^{-1/(p-1)},
// with w_N the volume of the unit ball. Computed in U = ln(1/r):
//   Phi = C e^{m2 U} int_0^U e^{-m2 s} g(U - s) ds,   g = L_A^{-1/(p-1)}.
#include <string>
#include <vector>

#include "radsing/completion.hpp"

namespace radsing {

struct Operator {
  int N = 3;
  double p = 2.0;
  double theta = 0.0;
  rv::Completed L_A;
  bool borderline = false;  // admit p = N + theta (Phi grows like a slowly varying function)

  double m2() const { return (N + theta - p) / (p - 1.0); }
};

// Validates 1 < p < N + theta (or equality with `borderline`) and completes L_A near r = 1.
Operator make_operator(int N, double p, double theta, const rv::SlowlyVarying& L_A, bool borderline = false);

double surface_area(int N);  // N w_N
double ln_c_np(const Operator& op);

double ln_phi(const Operator& op, double ln_r);
double phi(const Operator& op, double r);
// ln |Phi'(r)|, exact.
double ln_abs_dphi(const Operator& op, double ln_r);
double upsilon_direct(const Operator& op, double ln_r);

class PhiTable {
 public:
  explicit PhiTable(Operator op, double r_min = 1e-12, double tol = 1e-11);

  const Operator& op() const { return op_; }
  const std::string& spec_hash() const { return hash_; }
  double c_np() const { return c_np_; }
  const std::vector<double>& grid() const { return ln_r_; }      // strictly decreasing ln r
  const std::vector<double>& values() const { return ln_phi_; }  // ln Phi at the grid

  double ln_phi(double ln_r) const;
  double phi(double r) const;
  double ln_abs_dphi(double ln_r) const { return radsing::ln_abs_dphi(op_, ln_r); }
  double upsilon(double ln_r) const;
  // ln r with Phi(r) = e^{ln_s}; 0 for ln_s = -inf.
  double inverse_ln(double ln_s) const;

  std::string csv() const;

 private:
  Operator op_;
  std::string hash_;
  double c_np_ = 0.0;
  double u_lo_ = 0.0, u_hi_ = 0.0;
  std::vector<double> u_, red_, dred_;
  std::vector<double> ln_r_, ln_phi_;

  double base(double u) const;
  double dbase(double u) const;
  double hermite(double u) const;
  void refine(double u0, double r0, double d0, double u1, double r1, double d1, int depth, double tol,
              std::vector<double>& u, std::vector<double>& r, std::vector<double>& d) const;
};

double phi_inverse(const PhiTable& table, double s);
double upsilon(const PhiTable& table, double r);

}  // namespace radsing
