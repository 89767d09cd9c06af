#include "radsing/completion.hpp"

#include <algorithm>
#include <cmath>

#include "radsing/errors.hpp"

namespace radsing::rv {

Completed::Completed(SlowlyVarying raw, double x_join) : raw_(std::move(raw)), x_join_(x_join) {
  if (std::isfinite(x_join_) && !(x_join_ > raw_.domain_start()))
    throw DomainError("completion join point lies outside the function's domain");
  if (!std::isfinite(x_join_) && std::isfinite(raw_.domain_start()))
    throw DomainError("a function with a bounded domain needs a finite join point");
}

Completed Completed::automatic(SlowlyVarying raw) {
  double s = raw.domain_start();
  double join = std::isfinite(s) ? std::max(s, 0.0) + 1.0 : -std::numeric_limits<double>::infinity();
  return Completed(std::move(raw), join);
}

}  // namespace radsing::rv
