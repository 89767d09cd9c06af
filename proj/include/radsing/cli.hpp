#pragma once
// Command-line front end: radsing <derive|phi|classify|tilde-u|solve|verify> [options].
#include <iosfwd>
#include <string>
#include <vector>

namespace radsing::cli {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumerical = 3, kVerifyFailed = 4 };

// Reports without --out go to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// CSV text (header + rows) as {"columns": [...], "rows": [[...], ...]}; empty cells become null.
std::string csv_to_json(const std::string& csv);

}  // namespace radsing::cli
