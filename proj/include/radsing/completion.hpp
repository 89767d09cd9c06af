#pragma once
// A slowly varying function extended to the whole half-line by freezing its argument at a
// join point x_join: L_c(x) = L(max(x, x_join)). Continuous, constant on the far side of the
// join, equal to L near the reference point.
#include <limits>

#include "radsing/rv.hpp"

namespace radsing::rv {

class Completed {
 public:
  Completed() = default;
  Completed(SlowlyVarying raw, double x_join);
  // Join at domain_start + 1 (no join for functions defined everywhere).
  static Completed automatic(SlowlyVarying raw);

  const SlowlyVarying& raw() const { return raw_; }
  double x_join() const { return x_join_; }
  Orientation orientation() const { return raw_.orientation(); }
  double x_of(double ln_t) const { return raw_.x_of(ln_t); }

  double log_x(double x) const { return raw_.log_x(x < x_join_ ? x_join_ : x); }
  double eps_x(double x) const { return x < x_join_ ? 0.0 : raw_.eps_x(x); }
  double deps_x(double x) const { return x < x_join_ ? 0.0 : raw_.deps_x(x); }

  double eval_log(double ln_t) const { return log_x(x_of(ln_t)); }
  double eps_log(double ln_t) const { return eps_x(x_of(ln_t)); }
  double deps_log(double ln_t) const { return deps_x(x_of(ln_t)); }

 private:
  SlowlyVarying raw_;
  double x_join_ = -std::numeric_limits<double>::infinity();
};

}  // namespace radsing::rv
