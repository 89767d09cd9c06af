#include <doctest.h>

#include <cmath>
#include <string>

#include "radsing/config.hpp"
#include "radsing/errors.hpp"

using namespace radsing;

namespace {
const char* kBase = R"(# Example 1 family
[operator]
N = 3
p = 2
theta = 0
L_A = { family = "logpow", alpha = 1 }

[source]
sigma = 0
L_b = 1

[nonlinearity]
q = 2
L_h = "{ family = \"logpow\", alpha = -2 }"
)";

std::string failing_key(const std::string& text) {
  try {
    parse_config(text);
  } catch (const SpecError& e) {
    return e.key;
  }
  return "<none>";
}

std::string replace(std::string s, const std::string& from, const std::string& to) {
  auto i = s.find(from);
  REQUIRE(i != std::string::npos);
  return s.replace(i, from.size(), to);
}
}  // namespace

TEST_CASE("key-value configuration") {
  RunConfig c = parse_config(kBase);
  CHECK(c.problem.N == 3);
  CHECK(c.problem.q == 2.0);
  CHECK(c.problem.L_A == rv::log_pow(1.0, rv::Orientation::AtZero));
  CHECK(c.problem.L_b == rv::constant(1.0, rv::Orientation::AtZero));
  CHECK(c.problem.L_h == rv::log_pow(-2.0, rv::Orientation::AtInfinity));
  CHECK(c.solve.lambda == 1.0);
  CHECK(c.grid.points == 61);
}

TEST_CASE("optional sections") {
  std::string t = std::string(kBase) +
                  "[solve]\nlambda = \"inf\"\ng0 = 0.5\nn = 128\n[grid]\nr_min = 1e-5\nr_max = 1e-1\npoints = 9\n"
                  "[tolerances]\nquad = 1e-9\node = 1e-8\n";
  RunConfig c = parse_config(t);
  CHECK(std::isinf(c.solve.lambda));
  CHECK(c.solve.n == 128);
  CHECK(c.grid.r_min == 1e-5);
  CHECK(c.tol.ode == 1e-8);
}

TEST_CASE("text and JSON encodings round-trip") {
  RunConfig c = parse_config(std::string(kBase) + "[solve]\nlambda = \"inf\"\n");
  c.problem.L_A = rv::product({rv::log_pow(0.3, rv::Orientation::AtZero), rv::exp_sqrt_log(0.5, rv::Orientation::AtZero)});
  c.problem.L_h = rv::exp_log_pow(0.4, -1.0, rv::Orientation::AtInfinity);
  c.problem.h_join = 20.0;
  std::string text = config_to_text(c);
  RunConfig back = parse_config(text);
  CHECK(config_to_text(back) == text);
  CHECK(back.problem.L_A == c.problem.L_A);
  CHECK(back.problem.L_h == c.problem.L_h);
  CHECK(*back.problem.h_join == 20.0);
  RunConfig via_json = parse_config(config_to_json(c).dump());
  CHECK(config_to_text(via_json) == text);
}

TEST_CASE("physics keys have no defaults") {
  CHECK(failing_key(replace(kBase, "theta = 0\n", "")) == "operator.theta");
  CHECK(failing_key(replace(kBase, "sigma = 0\n", "")) == "source.sigma");
  CHECK(failing_key(replace(kBase, "L_b = 1\n", "")) == "source.L_b");
  CHECK(failing_key(replace(kBase, "q = 2\n", "")) == "nonlinearity.q");
  CHECK(failing_key(replace(kBase, "[source]", "[sauce]")) == "source");
}

TEST_CASE("assumption violations name the key") {
  CHECK(failing_key(replace(kBase, "p = 2", "p = 3")) == "operator.p");
  CHECK(failing_key(replace(kBase, "q = 2", "q = 0.5")) == "nonlinearity.q");
  CHECK(failing_key(replace(kBase, "N = 3", "N = 2.5")) == "operator.N");
  CHECK(failing_key(replace(kBase, "alpha = 1 }", "alpha = 1, orientation = \"infinity\" }")) == "operator.L_A");
  CHECK(failing_key(replace(kBase, "family = \"logpow\", alpha = 1", "family = \"nope\"")) == "operator.L_A");
  CHECK(failing_key(std::string(kBase) + "[grid]\nr_min = 0.5\nr_max = 0.1\n") == "grid.r_min");
  CHECK(failing_key(std::string(kBase) + "[tolerances]\nquad = -1\n") == "tolerances.quad");
  CHECK(failing_key(std::string(kBase) + "[solve]\nlambda = 0\ng0 = 0\n") == "solve.lambda");
  CHECK(failing_key("[operator]\nN = = 3\n") == "");
  CHECK(failing_key("{ \"operator\": ") == "");
  CHECK_THROWS_AS(load_config("/nonexistent/config.toml"), SpecError);
}
