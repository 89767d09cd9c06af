#include "radsing/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <unistd.h>

#include "radsing/errors.hpp"
#include "radsing/kv.hpp"

namespace radsing::report {

using nlohmann::json;

namespace {
// JSON has no infinities; they are written as strings.
json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}
std::string cell(double v) { return kv::format_number(v); }
}  // namespace

json report_schema() {
  json s;
  s["version"] = kSchemaVersion;
  s["solution_csv"] = {{"header", kSolutionHeader},
                       {"columns",
                        {{"r", "radius, decreasing"},
                         {"v", "solution value"},
                         {"w", "flux variable r^{N-1+theta} L_A |v'|^{p-2} v'"},
                         {"v_over_phi", "v / Phi"},
                         {"flux", "N w_N (-w); lambda^{p-1} for lambda Phi"}}}};
  s["profile_csv"] = {{"header", kProfileHeader},
                      {"columns",
                       {{"r", "radius, decreasing"},
                        {"tilde_u", "strong-singularity profile"},
                        {"table_oracle", "closed-form example asymptotics; empty when no row applies"},
                        {"ratio", "tilde_u / table_oracle"},
                        {"residual", "1 - div/source on tilde_u"}}}};
  s["phi_csv"] = {{"header", kPhiHeader}};
  s["derive_json"] = {{"fields", {"m0", "m1", "m2", "q_star", "M", "k", "regime", "near_critical"}}};
  s["classify_json"] = {{"fields", {"verdict", "profile", "gamma", "j", "row", "integrable", "method", "reason"}}};
  s["verdict_json"] = {{"fields", {"kind", "lambda_hat", "flux_limit", "evidence", "reason"}},
                       {"evidence", "array of [r, v/Phi] over the last three decades"}};
  s["verify_json"] = {{"fields", {"criteria", "passed", "failed"}},
                      {"criterion", {"id", "name", "passed", "detail"}}};
  s["exit_codes"] = {{"0", "success"},
                     {"2", "configuration error"},
                     {"3", "numerical non-convergence"},
                     {"4", "verification failure"}};
  return s;
}

std::string report_schema_text() { return dump(report_schema()); }

json derive_json(const Problem& pb) {
  const DerivedConstants& c = pb.c;
  json j;
  j["m0"] = number(c.m0);
  j["m1"] = number(c.m1);
  j["m2"] = number(c.m2);
  j["q_star"] = number(c.q_star);
  j["M"] = c.M ? number(*c.M) : json(nullptr);
  j["k"] = number(c.k);
  j["regime"] = to_string(c.regime);
  j["near_critical"] = c.near_critical;
  if (c.near_critical) j["warning"] = "q is within 1e-12 of q* but not equal; treated as critical";
  return j;
}

const char* menu_verdict(const Classification& c) { return c.trichotomy ? "trichotomy" : "removable-only"; }

json classification_json(const Classification& c) {
  json j;
  j["verdict"] = menu_verdict(c);
  j["profile"] = to_string(c.profile);
  j["gamma"] = number(c.gamma);
  j["j"] = number(c.j);
  if (c.row)
    j["row"] = {{"example", c.row->example}, {"table", c.row->table},     {"alpha", c.row->alpha},
                {"beta", c.row->beta},       {"gamma", c.row->gamma},     {"nu", c.row->nu}};
  else
    j["row"] = nullptr;
  j["integrable"] = c.integrability.integrable;
  j["method"] = c.integrability.method;
  j["reason"] = c.reason;
  return j;
}

std::vector<double> log_grid(double r_min, double r_max, int points) {
  if (!(r_min > 0.0) || !(r_max <= 1.0) || !(r_min < r_max) || points < 2)
    throw DomainError("grid requires 0 < r_min < r_max <= 1 and at least 2 points");
  std::vector<double> g(points);
  const double a = std::log(r_max), b = std::log(r_min);
  for (int i = 0; i < points; ++i) g[i] = std::exp(a + (b - a) * i / (points - 1));
  g.front() = r_max;
  g.back() = r_min;
  return g;
}

std::string phi_csv(const PhiTable& table, const std::vector<double>& r_grid) {
  std::string out = std::string(kPhiHeader) + "\n";
  for (double r : r_grid) {
    const double ln_r = std::log(r);
    const double ups = r < 1.0 ? table.upsilon(ln_r) : std::numeric_limits<double>::infinity();
    out += cell(r) + "," + cell(std::exp(table.ln_phi(ln_r))) + "," + cell(ups) + "\n";
  }
  return out;
}

std::string profile_csv(const ProfileEvaluator& ev, const std::vector<double>& r_grid) {
  const Problem& pb = ev.problem();
  const std::optional<TableRow> row = match_example(pb);
  std::string out = std::string(kProfileHeader) + "\n";
  for (double r : r_grid) {
    const double x = -std::log(r);
    const Jet jet = ev.jet(x);
    std::string oracle, ratio;
    if (row) {
      try {
        const double lt = ln_table_closed_form(pb, *row, std::log(r));
        oracle = cell(std::exp(lt));
        ratio = cell(std::exp(jet.U - lt));
      } catch (const DomainError&) {
      }
    }
    double res = std::numeric_limits<double>::quiet_NaN();
    try {
      res = operator_residual(pb, jet, x);
    } catch (const DomainError&) {
    }
    out += cell(r) + "," + cell(std::exp(jet.U)) + "," + oracle + "," + ratio + "," + cell(res) + "\n";
  }
  return out;
}

std::string solution_csv(const RadialSolution& sol, const PhiTable& table) {
  std::string out = std::string(kSolutionHeader) + "\n";
  const double nw = surface_area(sol.pb->spec.N);
  for (size_t i = 0; i < sol.size(); ++i) {
    const double r = sol.r(i), w = sol.w(i);
    const double ratio = sol.x[i] > 0 ? std::exp(sol.U[i] - table.ln_phi(-sol.x[i]))
                                      : std::numeric_limits<double>::infinity();
    out += cell(r) + "," + cell(sol.v(i)) + "," + cell(w) + "," + cell(ratio) + "," + cell(-nw * w) + "\n";
  }
  return out;
}

json verdict_json(const SingularityVerdict& v) {
  json j;
  j["kind"] = to_string(v.kind);
  j["lambda_hat"] = v.kind == VerdictKind::Weak ? number(v.lambda_hat) : json(nullptr);
  j["flux_limit"] = v.flux_limit ? number(*v.flux_limit) : json(nullptr);
  json ev = json::array();
  for (const auto& [r, q] : v.evidence) ev.push_back({number(r), number(q)});
  j["evidence"] = ev;
  j["reason"] = v.reason;
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_atomic(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(path);
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw std::runtime_error("cannot move report into place: " + path + ": " + ec.message());
  }
}

}  // namespace radsing::report
