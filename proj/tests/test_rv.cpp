#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "radsing/errors.hpp"
#include "radsing/kv.hpp"
#include "radsing/quad.hpp"
#include "radsing/rv.hpp"

using namespace radsing;
using namespace radsing::rv;

namespace {
const Orientation Z = Orientation::AtZero;
const Orientation I = Orientation::AtInfinity;

std::vector<SlowlyVarying> zoo(Orientation o) {
  return {constant(2.5, o),
          log_pow(2.0, o),
          log_pow(-1.5, o),
          iter_log_pow(2, 1.5, o),
          iter_log_pow(3, -2.0, o),
          exp_log_pow(0.4, -1.0, o),
          exp_log_pow(0.3, 1.0, o),
          exp_sqrt_log(1.0, o),
          product({log_pow(1.0, o), exp_sqrt_log(0.5, o)}),
          product({log_pow(-2.0, o), iter_log_pow(2, 1.0, o), exp_log_pow(0.25, -1.0, o)})};
}
}  // namespace

TEST_CASE("eval_log closed forms") {
  CHECK(constant(1.0, Z).eval_log(-3.7) == 0.0);
  CHECK(constant(1.0, I).eval_log(12.0) == 0.0);
  CHECK(log_pow(2.0, Z).eval_log(-5.0) == doctest::Approx(3.2188758248682006).epsilon(1e-15));
  auto p = product({log_pow(1.0, Z), exp_sqrt_log(1.0, Z)});
  CHECK(p.eval_log(-4.0) == doctest::Approx(-0.6137056388801094).epsilon(1e-15));
  RegularlyVarying f{1.5, log_pow(3.0, Z)};
  CHECK(eval_log(f, -10.0) == doctest::Approx(-15.0 + 3.0 * std::log(10.0)));
}

TEST_CASE("eval_log rejects points outside the domain") {
  CHECK_THROWS_AS(log_pow(2.0, Z).eval_log(0.0), DomainError);
  CHECK_THROWS_AS(log_pow(2.0, Z).eval_log(0.5), DomainError);
  CHECK_THROWS_AS(iter_log_pow(2, 1.0, I).eval_log(0.5), DomainError);
  CHECK_THROWS_AS(constant(-1.0, Z), DomainError);
  CHECK_THROWS_AS(exp_log_pow(1.2, -1.0, Z), DomainError);
  CHECK_THROWS_AS(product({log_pow(1.0, Z), log_pow(1.0, I)}), DomainError);
}

TEST_CASE("no overflow over the full logarithmic range") {
  for (auto o : {Z, I})
    for (const auto& L : zoo(o)) {
      double lt = o == Z ? -1e6 : 1e6;
      double v = L.eval_log(lt);
      CHECK(std::isfinite(v));
      CHECK(std::exp(L.eval_log(o == Z ? -30.0 : 30.0)) > 0.0);
    }
}

TEST_CASE("epsilon closed forms") {
  CHECK(epsilon(constant(3.0, Z), 0.1) == 0.0);
  CHECK(epsilon(log_pow(2.0, Z), std::exp(-10.0)) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(epsilon(exp_sqrt_log(1.0, Z), std::exp(-25.0)) == doctest::Approx(-0.1).epsilon(1e-14));
  // At infinity epsilon = t L'/L: (ln t)^2 at t = e^10 gives 0.2 as well.
  CHECK(epsilon(log_pow(2.0, I), std::exp(10.0)) == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("epsilon of a product is the sum over its factors") {
  auto a = log_pow(1.5, Z), b = exp_sqrt_log(0.7, Z), c = iter_log_pow(2, -1.0, Z);
  auto p = product({a, product({b, c})});
  for (double x : {3.0, 17.0, 400.0}) {
    CHECK(p.eps_x(x) == a.eps_x(x) + b.eps_x(x) + c.eps_x(x));
    CHECK(p.deps_x(x) == doctest::Approx(a.deps_x(x) + b.deps_x(x) + c.deps_x(x)).epsilon(1e-15));
  }
  CHECK(std::get<Product>(p.family()).factors.size() == 3);
}

TEST_CASE("epsilon and its slope agree with finite differences") {
  for (auto o : {Z, I})
    for (const auto& L : zoo(o)) {
      for (double x : {20.0, 150.0}) {
        double h = 1e-4 * x;
        double fd = (L.log_x(x + h) - L.log_x(x - h)) / (2 * h);
        CHECK(L.eps_x(x) == doctest::Approx(fd).epsilon(1e-6).scale(1e-6));
        double fd2 = (L.eps_x(x + h) - L.eps_x(x - h)) / (2 * h);
        CHECK(L.deps_x(x) == doctest::Approx(fd2).epsilon(1e-5).scale(1e-8));
      }
    }
  auto osc = oscillating(1.0, Z);
  for (double x : {8.0, 64.0, 1000.0}) {
    double h = 1e-4 * x;
    CHECK(osc.eps_x(x) == doctest::Approx((osc.log_x(x + h) - osc.log_x(x - h)) / (2 * h)).epsilon(1e-6));
    CHECK(osc.deps_x(x) == doctest::Approx((osc.eps_x(x + h) - osc.eps_x(x - h)) / (2 * h)).epsilon(1e-5));
  }
  CHECK_FALSE(osc.has_limit());
  CHECK(log_pow(1.0, Z).has_limit());
}

TEST_CASE("representation: ln L(t) - ln L(c) equals the integral of eps") {
  for (auto o : {Z, I})
    for (const auto& L : zoo(o)) {
      double xc = std::max(0.0, L.domain_start()) + 1.5;
      for (double xt : {10.0, 60.0}) {
        double lhs = L.log_x(xt) - L.log_x(xc);
        double rhs = quad::integrate([&](double x) { return L.eps_x(x); }, xc, xt);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-8).scale(1.0));
      }
    }
}

TEST_CASE("real powers stay inside the family algebra") {
  auto L = product({log_pow(2.0, Z), exp_sqrt_log(1.0, Z), exp_log_pow(0.4, -1.0, Z), constant(3.0, Z)});
  auto P = power(L, -0.75);
  for (double x : {5.0, 50.0}) CHECK(P.log_x(x) == doctest::Approx(-0.75 * L.log_x(x)).epsilon(1e-14));
}

TEST_CASE("index_estimate") {
  std::vector<LogSample> s;
  for (int k = 1; k <= 16; ++k) s.push_back({-k * std::numbers::ln2, 2.0 * k * std::numbers::ln2});
  CHECK(index_estimate(s) == doctest::Approx(-2.0).epsilon(1e-12));

  s.clear();
  for (int i = 0; i <= 16; ++i) {
    double lt = std::log(1e-8) + i * (std::log(1e-4) - std::log(1e-8)) / 16;
    s.push_back({lt, 1.5 * lt + 3.0 * std::log(-lt)});
  }
  CHECK(index_estimate(s) == doctest::Approx(1.5).epsilon(0.05 / 1.5));

  // Phi for N = 3, p = 2: (1/(4 pi)) (1/r - 1).
  s.clear();
  for (int k = 12; k <= 32; ++k) {
    double r = std::ldexp(1.0, -k);
    s.push_back({std::log(r), std::log((1.0 / r - 1.0) / (4 * std::numbers::pi))});
  }
  CHECK(index_estimate(s) == doctest::Approx(-1.0).epsilon(0.02));

  std::vector<LogSample> few(s.begin(), s.begin() + 5);
  CHECK_THROWS_AS(index_estimate(few), DomainError);
  std::vector<LogSample> narrow;
  for (int k = 0; k < 10; ++k) narrow.push_back({-1.0 - 0.2 * k, 0.0});
  CHECK_THROWS_AS(index_estimate(narrow), DomainError);
}

TEST_CASE("index_estimate recovers rho for every family") {
  for (double rho : {-2.0, 0.5}) {
    for (auto o : {Z, I}) {
      for (const auto& L : zoo(o)) {
        RegularlyVarying f{rho, L};
        std::vector<LogSample> s;
        double x0 = 40.0 * std::numbers::ln10, x1 = 46.0 * std::numbers::ln10;
        for (int i = 0; i <= 24; ++i) {
          double x = x0 + (x1 - x0) * i / 24;
          double lt = o == Z ? -x : x;
          s.push_back({lt, f.eval_log(lt)});
        }
        CHECK(index_estimate(s) == doctest::Approx(rho).epsilon(0.02 / std::abs(rho)));
      }
    }
  }
}

TEST_CASE("karamata_ratio") {
  // pure powers: exact
  for (double rho : {-0.5, 0.0, 2.0})
    for (double t : {1e-2, 1e-6, 1e-12}) {
      RegularlyVarying f{rho, constant(1.0, Z)};
      CHECK(karamata_ratio(f, 0.0, t, Z, Branch::B) == doctest::Approx(rho + 1.0).epsilon(1e-13));
    }
  // r^0.5 (ln 1/r)^2, j = 0, branch B at t = 1e-8: closed form 1.5 / (1 + 4/(3X) + 8/(9X^2)).
  {
    RegularlyVarying f{0.5, log_pow(2.0, Z)};
    double X = std::log(1e8);
    double oracle = 1.5 / (1.0 + 4.0 / (3.0 * X) + 8.0 / (9.0 * X * X));
    CHECK(oracle == doctest::Approx(1.395347).epsilon(1e-6));
    CHECK(karamata_ratio(f, 0.0, 1e-8, Z, Branch::B) == doctest::Approx(oracle).epsilon(1e-10));
  }
  // r^-0.5, j = -1, branch A at zero with c = 1.
  {
    RegularlyVarying f{-0.5, constant(1.0, Z)};
    double t = 1e-6, oracle = std::pow(t, -0.5) / (2.0 * (std::pow(t, -0.5) - 1.0));
    CHECK(karamata_ratio(f, -1.0, t, Z, Branch::A) == doctest::Approx(oracle).epsilon(1e-10));
  }
  // at infinity: t^2 with j = 0, branch A over [1, t]: 3 / (1 - t^-3)
  {
    RegularlyVarying f{2.0, constant(1.0, I)};
    CHECK(karamata_ratio(f, 0.0, 10.0, I, Branch::A) == doctest::Approx(3.0 / (1.0 - 1e-3)).epsilon(1e-12));
    RegularlyVarying g{-3.0, constant(1.0, I)};
    CHECK(karamata_ratio(g, 0.0, 10.0, I, Branch::B) == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("karamata_ratio refuses divergent or uncovered combinations") {
  RegularlyVarying f{-2.0, log_pow(1.0, Z)};
  CHECK_THROWS_AS(karamata_ratio(f, 0.0, 1e-4, Z, Branch::B), DivergenceError);
  RegularlyVarying g{1.0, constant(1.0, Z)};
  CHECK_THROWS_AS(karamata_ratio(g, 0.0, 1e-4, Z, Branch::A), DomainError);
  // borderline j = -(rho + 1): integrable iff the slowly varying part is
  RegularlyVarying h{0.0, log_pow(-2.0, Z)};
  CHECK(karamata_ratio(h, -1.0, 1e-8, Z, Branch::B) == doctest::Approx(1.0 / std::log(1e8)).epsilon(1e-10));
  RegularlyVarying k{0.0, log_pow(-1.0, Z)};
  CHECK_THROWS_AS(karamata_ratio(k, -1.0, 1e-8, Z, Branch::B), DivergenceError);
}

TEST_CASE("karamata deviation shrinks monotonically toward the reference point") {
  struct Case {
    RegularlyVarying f;
    double j;
    Branch b;
  };
  std::vector<Case> cases = {
      {{0.5, log_pow(2.0, Z)}, 0.0, Branch::B},
      {{0.5, exp_sqrt_log(1.0, Z)}, 0.0, Branch::B},
      {{-0.5, log_pow(1.0, Z)}, -1.0, Branch::A},
      {{1.0, iter_log_pow(2, 2.0, Z)}, 1.0, Branch::B},
      {{-2.0, exp_log_pow(0.4, -1.0, Z)}, 0.0, Branch::A},
      {{0.0, product({log_pow(-1.0, Z), exp_sqrt_log(0.5, Z)})}, 0.0, Branch::B},
  };
  for (const auto& c : cases) {
    double target = std::abs(c.j + c.f.rho + 1.0);
    double prev = 1e300;
    for (int k = 2; k <= 8; ++k) {
      double dev = std::abs(karamata_ratio(c.f, c.j, std::pow(10.0, -k), Z, c.b) - target);
      CHECK(dev < prev);
      prev = dev;
    }
  }
}

TEST_CASE("uniform_convergence_check") {
  CHECK(uniform_convergence_check(constant(4.0, Z), 1e-3) == 0.0);
  CHECK(uniform_convergence_check(log_pow(2.0, Z), 1e-8) <= 0.08);
  CHECK(uniform_convergence_check(exp_log_pow(0.4, -1.0, Z), 1e-12) <= 0.05);
  double prev = 1e300;
  for (int k = 2; k <= 12; k += 2) {
    double d = uniform_convergence_check(exp_sqrt_log(1.0, Z), std::pow(10.0, -k));
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("tail integral convergence by the asymptotic expansion") {
  auto conv = [](const SlowlyVarying& L) { return tail_integral_converges(expansion(L)); };
  CHECK(conv(log_pow(-2.0, I)) == true);
  CHECK(conv(log_pow(-1.01, I)) == true);
  CHECK(conv(log_pow(-1.0, I)) == false);
  CHECK(conv(log_pow(-0.5, I)) == false);
  CHECK(conv(product({log_pow(-1.0, I), iter_log_pow(2, -2.0, I)})) == true);
  CHECK(conv(product({log_pow(-1.0, I), iter_log_pow(2, -1.0, I)})) == false);
  CHECK(conv(product({log_pow(5.0, I), exp_log_pow(0.3, -1.0, I)})) == true);
  CHECK(conv(product({log_pow(-5.0, I), exp_sqrt_log(-1.0, I)})) == false);
  CHECK_FALSE(conv(oscillating(1.0, I)).has_value());
}

TEST_CASE("text form round-trips bit-exactly") {
  std::vector<SlowlyVarying> all = zoo(Z);
  for (const auto& L : zoo(I)) all.push_back(L);
  all.push_back(oscillating(0.3, Z));
  all.push_back(log_pow(0.1 + 0.2, Z));
  all.push_back(exp_log_pow(1.0 / 3.0, -2.0 / 7.0, I));
  for (const auto& L : all) {
    std::string text = to_text(L);
    CHECK(from_text(text) == L);
    CHECK(to_text(from_text(text)) == text);
  }
  CHECK(to_text(log_pow(2.0, Z)) == "{ family = \"logpow\", alpha = 2, orientation = \"zero\" }");
  auto doc = kv::parse("slow = { family = \"logpow\", alpha = 2.0, orientation = \"zero\" }\n");
  CHECK(from_text(kv::dump_inline(doc["slow"])) == log_pow(2.0, Z));
  CHECK_THROWS_AS(from_text("{ family = \"nope\", orientation = \"zero\" }"), DomainError);
}
