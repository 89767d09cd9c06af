#include "radsing/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "radsing/errors.hpp"
#include "radsing/kv.hpp"
#include "radsing/rv_json.hpp"

namespace radsing {

namespace {
using nlohmann::json;

const json& section(const json& doc, const char* name, bool required) {
  static const json empty = json::object();
  if (!doc.contains(name)) {
    if (required) throw SpecError(name, "section present", std::string("missing section [") + name + "]");
    return empty;
  }
  if (!doc[name].is_object()) throw SpecError(name, "section is a table", std::string("[") + name + "] must be a table");
  return doc[name];
}

std::string key_of(const char* sec, const char* k) { return std::string(sec) + "." + k; }

double number(const json& s, const char* sec, const char* k, std::optional<double> dflt = std::nullopt) {
  if (!s.contains(k)) {
    if (dflt) return *dflt;
    throw SpecError(key_of(sec, k), "key present", "missing required key " + key_of(sec, k));
  }
  const json& v = s[k];
  if (v.is_string()) {
    std::string t = v;
    if (t == "inf" || t == "+inf" || t == "infinity") return std::numeric_limits<double>::infinity();
  }
  if (!v.is_number()) throw SpecError(key_of(sec, k), "number", key_of(sec, k) + " must be a number");
  return v.get<double>();
}

int integer(const json& s, const char* sec, const char* k, std::optional<int> dflt = std::nullopt) {
  if (!s.contains(k)) {
    if (dflt) return *dflt;
    throw SpecError(key_of(sec, k), "key present", "missing required key " + key_of(sec, k));
  }
  const json& v = s[k];
  if (v.is_number_integer()) return v.get<int>();
  if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>()) return static_cast<int>(v.get<double>());
  throw SpecError(key_of(sec, k), "integer", key_of(sec, k) + " must be an integer");
}

rv::SlowlyVarying slowly_varying(const json& s, const char* sec, const char* k, rv::Orientation o) {
  const std::string key = key_of(sec, k);
  if (!s.contains(k)) throw SpecError(key, "key present", "missing required key " + key);
  json v = s[k];
  try {
    if (v.is_number()) return rv::constant(v.get<double>(), o);
    if (v.is_string()) v = kv::parse_value(v.get<std::string>());
    if (!v.is_object()) throw DomainError("expected a table or a number");
    std::function<void(json&)> orient = [&](json& t) {
      if (!t.contains("orientation")) t["orientation"] = o == rv::Orientation::AtZero ? "zero" : "infinity";
      if (t.contains("factors"))
        for (auto& f : t["factors"]) orient(f);
    };
    orient(v);
    return rv::from_json_value(v);
  } catch (const SpecError&) {
    throw;
  } catch (const std::exception& e) {
    throw SpecError(key, "slowly varying function", key + ": " + e.what());
  }
}

void check_positive(double v, const std::string& key) {
  if (!(v > 0.0) || !std::isfinite(v)) throw SpecError(key, key + " > 0", key + " must be positive and finite");
}
}  // namespace

RunConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw SpecError("", "table", "configuration must be a table");
  RunConfig c;
  ProblemSpec& s = c.problem;
  const json& op = section(doc, "operator", true);
  const json& src = section(doc, "source", true);
  const json& nl = section(doc, "nonlinearity", true);
  s.N = integer(op, "operator", "N");
  s.p = number(op, "operator", "p");
  s.theta = number(op, "operator", "theta");
  s.L_A = slowly_varying(op, "operator", "L_A", rv::Orientation::AtZero);
  if (op.contains("borderline")) {
    if (!op["borderline"].is_boolean())
      throw SpecError("operator.borderline", "boolean", "operator.borderline must be true or false");
    s.borderline = op["borderline"].get<bool>();
  }
  s.sigma = number(src, "source", "sigma");
  s.L_b = slowly_varying(src, "source", "L_b", rv::Orientation::AtZero);
  s.q = number(nl, "nonlinearity", "q");
  s.L_h = slowly_varying(nl, "nonlinearity", "L_h", rv::Orientation::AtInfinity);
  if (nl.contains("h_join")) s.h_join = number(nl, "nonlinearity", "h_join");

  const json& solve = section(doc, "solve", false);
  c.solve.lambda = number(solve, "solve", "lambda", c.solve.lambda);
  c.solve.g0 = number(solve, "solve", "g0", c.solve.g0);
  c.solve.n = integer(solve, "solve", "n", c.solve.n);
  if (!(c.solve.lambda >= 0.0)) throw SpecError("solve.lambda", "lambda >= 0", "solve.lambda must be >= 0");
  if (!(c.solve.g0 >= 0.0) || !std::isfinite(c.solve.g0)) throw SpecError("solve.g0", "g0 >= 0", "solve.g0 must be >= 0");
  if (c.solve.lambda == 0.0 && c.solve.g0 == 0.0)
    throw SpecError("solve.lambda", "(lambda, g0) != (0, 0)", "lambda and g0 cannot both vanish");
  if (c.solve.n < 2) throw SpecError("solve.n", "n >= 2", "solve.n must be at least 2");

  const json& grid = section(doc, "grid", false);
  c.grid.r_min = number(grid, "grid", "r_min", c.grid.r_min);
  c.grid.r_max = number(grid, "grid", "r_max", c.grid.r_max);
  c.grid.points = integer(grid, "grid", "points", c.grid.points);
  if (!(c.grid.r_min > 0.0 && c.grid.r_min < c.grid.r_max && c.grid.r_max <= 1.0))
    throw SpecError("grid.r_min", "0 < r_min < r_max <= 1", "grid range must satisfy 0 < r_min < r_max <= 1");
  if (c.grid.points < 2) throw SpecError("grid.points", "points >= 2", "grid.points must be at least 2");

  const json& tol = section(doc, "tolerances", false);
  c.tol.quad = number(tol, "tolerances", "quad", c.tol.quad);
  c.tol.ode = number(tol, "tolerances", "ode", c.tol.ode);
  check_positive(c.tol.quad, "tolerances.quad");
  check_positive(c.tol.ode, "tolerances.ode");

  make_problem(s);  // enforce the structural assumptions at load time
  return c;
}

RunConfig parse_config(const std::string& text) {
  size_t i = text.find_first_not_of(" \t\r\n");
  json doc;
  if (i != std::string::npos && text[i] == '{') {
    try {
      doc = json::parse(text);
    } catch (const json::exception& e) {
      throw SpecError("", "valid JSON", std::string("JSON parse error: ") + e.what());
    }
  } else {
    try {
      doc = kv::parse(text);
    } catch (const kv::ParseError& e) {
      throw SpecError("", "valid key-value syntax", "line " + std::to_string(e.line) + ": " + e.what());
    }
  }
  return config_from_json(doc);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("--config", "readable file", "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

json problem_to_json(const ProblemSpec& s) {
  auto strip = [](json j) {
    j.erase("orientation");
    if (j.contains("factors"))
      for (auto& f : j["factors"]) f.erase("orientation");
    return j;
  };
  json d;
  d["operator"] = {{"N", s.N}, {"p", s.p}, {"theta", s.theta}, {"L_A", strip(rv::to_json(s.L_A))}};
  if (s.borderline) d["operator"]["borderline"] = true;
  d["source"] = {{"sigma", s.sigma}, {"L_b", strip(rv::to_json(s.L_b))}};
  d["nonlinearity"] = {{"q", s.q}, {"L_h", strip(rv::to_json(s.L_h))}};
  if (s.h_join) d["nonlinearity"]["h_join"] = *s.h_join;
  return d;
}

json config_to_json(const RunConfig& c) {
  json d = problem_to_json(c.problem);
  d["solve"] = {{"lambda", std::isinf(c.solve.lambda) ? json("inf") : json(c.solve.lambda)},
                {"g0", c.solve.g0},
                {"n", c.solve.n}};
  d["grid"] = {{"r_min", c.grid.r_min}, {"r_max", c.grid.r_max}, {"points", c.grid.points}};
  d["tolerances"] = {{"quad", c.tol.quad}, {"ode", c.tol.ode}};
  return d;
}

std::string config_to_text(const RunConfig& c) { return kv::dump_document(config_to_json(c)); }

}  // namespace radsing
