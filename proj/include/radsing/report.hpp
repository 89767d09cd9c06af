#pragma once
// Report emitters. Every CSV/JSON product goes through here so that identical inputs give
// byte-identical files (shortest round-trip number formatting, fixed key order, no timestamps).
#include <json.hpp>
#include <string>
#include <vector>

#include "radsing/asymptotics.hpp"
#include "radsing/radial.hpp"

namespace radsing::report {

inline constexpr const char* kSchemaVersion = "radsing-report/1";
inline constexpr const char* kSolutionHeader = "r,v,w,v_over_phi,flux";
inline constexpr const char* kProfileHeader = "r,tilde_u,table_oracle,ratio,residual";
inline constexpr const char* kPhiHeader = "r,phi,upsilon";

// Field and column list of every product, as a JSON document.
nlohmann::json report_schema();
std::string report_schema_text();

nlohmann::json derive_json(const Problem& pb);
nlohmann::json classification_json(const Classification& c);
const char* menu_verdict(const Classification& c);  // "removable-only" or "trichotomy"

std::string phi_csv(const PhiTable& table, const std::vector<double>& r_grid);

// tilde_u with the literal table row where one applies (empty cells otherwise) and the
// operator residual of the profile.
std::string profile_csv(const ProfileEvaluator& ev, const std::vector<double>& r_grid);

std::string solution_csv(const RadialSolution& sol, const PhiTable& table);
nlohmann::json verdict_json(const SingularityVerdict& v);

// Geometric grid from r_max down to r_min.
std::vector<double> log_grid(double r_min, double r_max, int points);

// Writes to a sibling temporary file and renames it over `path`. "-" writes to stdout.
void write_atomic(const std::string& path, const std::string& content);

// Fixed-layout JSON text (2-space indent, trailing newline).
std::string dump(const nlohmann::json& j);

}  // namespace radsing::report
