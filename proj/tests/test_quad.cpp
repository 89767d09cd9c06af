#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "radsing/errors.hpp"
#include "radsing/quad.hpp"

using namespace radsing;
using namespace radsing::quad;

TEST_CASE("integrate on finite panels") {
  CHECK(integrate([](double x) { return x * x; }, 0.0, 3.0) == doctest::Approx(9.0).epsilon(1e-14));
  CHECK(integrate([](double x) { return std::cos(x); }, 0.0, std::numbers::pi / 2) ==
        doctest::Approx(1.0).epsilon(1e-14));
  CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
}

TEST_CASE("log_sum_exp") {
  const double ninf = -std::numeric_limits<double>::infinity();
  CHECK(log_sum_exp(0.0, 0.0) == doctest::Approx(std::numbers::ln2));
  CHECK(log_sum_exp(ninf, 3.0) == 3.0);
  CHECK(log_sum_exp(ninf, ninf) == ninf);
  CHECK(log_sum_exp(1000.0, 0.0) == doctest::Approx(1000.0));
}

TEST_CASE("log_integral_upper handles integrands far beyond double range") {
  // int_0^U e^u du = e^U - 1
  for (double U : {0.5, 3.0, 40.0, 800.0, 5000.0}) {
    double expect = U + std::log(-std::expm1(-U));
    CHECK(log_integral_upper([](double u) { return u; }, 0.0, U) == doctest::Approx(expect).epsilon(1e-13));
  }
  // int_0^U e^{2u} u du
  double U = 300.0;
  double expect = 2 * U + std::log(U / 2 - 0.25 + 0.25 * std::exp(-2 * U));
  CHECK(log_integral_upper([](double u) { return 2 * u + std::log(u); }, 0.0, U) ==
        doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("log_integral_lower with finite and infinite upper limits") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK(log_integral_lower([](double u) { return -u; }, 0.0, inf) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
  CHECK(log_integral_lower([](double u) { return -u; }, 0.0, 2.0) ==
        doctest::Approx(std::log(-std::expm1(-2.0))).epsilon(1e-13));
  // power tails: int_X^inf u^-a du = X^{1-a}/(a-1)
  for (double a : {1.05, 1.5, 2.0, 4.0})
    for (double X : {1.0, 18.0, 900.0}) {
      double expect = (1 - a) * std::log(X) - std::log(a - 1);
      CHECK(log_integral_lower([a](double u) { return -a * std::log(u); }, X, inf) ==
            doctest::Approx(expect).epsilon(1e-9));
    }
  // stretched exponential
  CHECK(log_integral_lower([](double u) { return -std::sqrt(u); }, 0.0, inf) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("divergent tails are reported") {
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(log_integral_lower([](double u) { return -std::log(u); }, 2.0, inf), DivergenceError);
  CHECK_THROWS_AS(log_integral_lower([](double u) { return -0.5 * std::log(u); }, 2.0, inf), DivergenceError);
  CHECK_THROWS_AS(log_integral_lower([](double u) { return 0.1 * u; }, 0.0, inf), DivergenceError);
}
