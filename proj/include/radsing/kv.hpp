#pragma once
// A small sectioned key-value format (a TOML subset) read into JSON values:
//
//   # comment
//   [operator]
//   N = 3
//   L_A = { family = "logpow", alpha = 1, orientation = "zero" }
//
// Values are numbers, strings, booleans, inline tables and arrays. Floats are parsed with
// from_chars and written shortest-round-trip, so values survive a write/read cycle bit-exactly.
#include <json.hpp>
#include <stdexcept>
#include <string>
#include <string_view>

namespace radsing::kv {

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& msg) : std::runtime_error(msg), line(line_) {}
};

nlohmann::json parse(std::string_view text);
nlohmann::json parse_value(std::string_view text);

std::string format_number(double v);
// Single-line rendering of a value (inline tables for objects).
std::string dump_inline(const nlohmann::json& v);
// Document rendering: scalars first, then one [section] per nested object.
std::string dump_document(const nlohmann::json& doc);

}  // namespace radsing::kv
