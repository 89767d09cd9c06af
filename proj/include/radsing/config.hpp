#pragma once
// Run configuration: a sectioned key-value file (or the same schema as JSON).
//
//   [operator]      N, p, theta, L_A, borderline (optional)
//   [source]        sigma, L_b
//   [nonlinearity]  q, L_h, h_join (optional)
//   [solve]         lambda (number or "inf"), g0, n          (optional section)
//   [grid]          r_min, r_max, points                     (optional section)
//   [tolerances]    quad, ode                                (optional section)
//
// Physics keys have no defaults. A slowly varying entry is an inline table
// { family = "logpow", alpha = 1 }, a bare number (constant), or the same table as a string;
// the orientation follows from the section and may be omitted.
#include <json.hpp>
#include <optional>
#include <string>

#include "radsing/problem.hpp"

namespace radsing {

struct GridSpec {
  double r_min = 1e-6;
  double r_max = 0.5;
  int points = 61;
};

struct Tolerances {
  double quad = 1e-11;
  double ode = 1e-10;
};

struct SolveSpec {
  double lambda = 1.0;  // +inf requests the strong (large solution) limit
  double g0 = 1.0;
  int n = 64;
};

struct RunConfig {
  ProblemSpec problem;
  GridSpec grid;
  Tolerances tol;
  SolveSpec solve;
};

// Throws SpecError (key names the offending entry) for schema and assumption violations.
RunConfig config_from_json(const nlohmann::json& doc);
RunConfig parse_config(const std::string& text);  // key-value text, or JSON if it starts with '{'
RunConfig load_config(const std::string& path);

nlohmann::json problem_to_json(const ProblemSpec& spec);
nlohmann::json config_to_json(const RunConfig& cfg);
std::string config_to_text(const RunConfig& cfg);

}  // namespace radsing
