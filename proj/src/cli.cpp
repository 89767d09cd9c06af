#include "radsing/cli.hpp"

#include <CLI11.hpp>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include "radsing/acceptance.hpp"
#include "radsing/asymptotics.hpp"
#include "radsing/config.hpp"
#include "radsing/errors.hpp"
#include "radsing/kv.hpp"
#include "radsing/radial.hpp"
#include "radsing/report.hpp"

namespace radsing::cli {

using nlohmann::json;

namespace {

struct Flags {
  std::string command;
  std::vector<std::string> configs;
  std::string out;
  std::string format;  // empty: the command's natural format
  std::optional<double> tol_quad, tol_ode, r_min;
  int jobs = 1;
  bool annulus = false;
};

// Failure with a chosen exit status; the message is printed as is.
struct Failure {
  int code;
  std::string message;
};

std::string natural_format(const std::string& cmd) {
  return cmd == "phi" || cmd == "tilde-u" || cmd == "solve" ? "csv" : "json";
}

std::string key_value_csv(const json& j) {
  std::string out = "key,value\n";
  for (auto it = j.begin(); it != j.end(); ++it) {
    const json& v = it.value();
    std::string cell;
    if (v.is_string())
      cell = v.get<std::string>();
    else if (v.is_number())
      cell = kv::format_number(v.get<double>());
    else
      cell = v.dump();
    if (cell.find_first_of(",\"\n") != std::string::npos) {
      std::string q = "\"";
      for (char ch : cell) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      cell = q + "\"";
    }
    out += it.key() + "," + cell + "\n";
  }
  return out;
}

RadialOptions radial_options(const RunConfig& cfg) {
  RadialOptions opt;
  opt.rtol = cfg.tol.ode;
  opt.atol = cfg.tol.ode * 1e-2;
  return opt;
}

// One command on one configuration; returns the report text.
std::string execute(const Flags& f, const RunConfig& cfg_in, const std::string& fmt) {
  RunConfig cfg = cfg_in;
  if (f.tol_quad) cfg.tol.quad = *f.tol_quad;
  if (f.tol_ode) cfg.tol.ode = *f.tol_ode;
  if (f.r_min) cfg.grid.r_min = *f.r_min;
  if (!(cfg.grid.r_min > 0.0 && cfg.grid.r_min < cfg.grid.r_max))
    throw SpecError("grid.r_min", "0 < r_min < r_max <= 1", "grid range must satisfy 0 < r_min < r_max <= 1");
  const Problem pb = make_problem(cfg.problem);

  if (f.command == "derive") {
    const json j = report::derive_json(pb);
    return fmt == "json" ? report::dump(j) : key_value_csv(j);
  }
  if (f.command == "classify") {
    const json j = report::classification_json(classification_menu(pb));
    return fmt == "json" ? report::dump(j) : key_value_csv(j);
  }
  const auto grid = report::log_grid(cfg.grid.r_min, cfg.grid.r_max, cfg.grid.points);
  if (f.command == "phi") {
    const PhiTable tab(pb.op, std::min(cfg.grid.r_min, 1e-12), cfg.tol.quad);
    const std::string csv = report::phi_csv(tab, grid);
    return fmt == "csv" ? csv : csv_to_json(csv);
  }
  if (f.command == "tilde-u") {
    const ProfileEvaluator ev(pb);
    const std::string csv = report::profile_csv(ev, grid);
    return fmt == "csv" ? csv : csv_to_json(csv);
  }
  // solve
  const RadialOptions opt = radial_options(cfg);
  const PhiTable tab(pb.op, std::min(cfg.grid.r_min, 1e-12), cfg.tol.quad);
  RadialSolution sol;
  std::optional<SingularResult> singular;
  if (f.annulus) {
    if (std::isinf(cfg.solve.lambda))
      throw SpecError("solve.lambda", "finite lambda", "annulus problems need a finite lambda");
    sol = solve_annulus(pb, cfg.solve.n, cfg.solve.lambda, cfg.solve.g0, opt);
  } else {
    singular = singular_solution(pb, cfg.solve.lambda, cfg.solve.g0, cfg.grid.r_min, opt);
    sol = singular->sol;
  }
  const std::string csv = report::solution_csv(sol, tab);
  if (fmt == "csv") return csv;
  json j;
  j["schema"] = report::kSchemaVersion;
  j["lambda"] = std::isinf(sol.meta.lambda) ? json("inf") : json(sol.meta.lambda);
  j["g0"] = sol.meta.g0;
  j["ln_n"] = sol.meta.ln_n;
  j["mismatch"] = sol.meta.mismatch;
  j["truncated"] = sol.truncated;
  if (singular) {
    j["levels"] = singular->n_levels.size();
    j["tail_estimate"] = singular->tail_estimate;
  }
  try {
    j["verdict"] = report::verdict_json(classify(sol, tab));
  } catch (const DomainError& e) {
    j["verdict"] = {{"kind", "Unknown"}, {"reason", e.what()}};
  }
  const double a = apriori_check(sol);
  j["apriori_sup"] = std::isfinite(a) ? json(a) : json("inf");
  j["solution"] = json::parse(csv_to_json(csv));
  return report::dump(j);
}

int verify(const Flags& f, std::ostream& out, std::ostream& err) {
  acceptance::Options opt;
  opt.jobs = f.jobs;
  const auto results = acceptance::run_acceptance(opt);
  json j;
  j["schema"] = report::kSchemaVersion;
  json arr = json::array();
  int failed = 0;
  for (const auto& r : results) {
    err << acceptance::format_line(r) << "\n";
    failed += !r.passed;
    // timings stay on the diagnostic stream so the report is reproducible
    arr.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
  }
  j["criteria"] = arr;
  j["passed"] = static_cast<int>(results.size()) - failed;
  j["failed"] = failed;
  const std::string text = f.format == "csv" ? [&] {
    std::string s = "id,name,passed\n";
    for (const auto& r : results) s += std::to_string(r.id) + "," + r.name + "," + (r.passed ? "true" : "false") + "\n";
    return s;
  }()
                                             : report::dump(j);
  if (f.out.empty() || f.out == "-")
    out << text;
  else
    report::write_atomic(f.out, text);
  return failed ? kVerifyFailed : kOk;
}

std::string describe(const SpecError& e) {
  std::string msg = "configuration error";
  if (!e.key.empty()) msg += " [" + e.key + "]";
  msg += ": " + std::string(e.what());
  if (!e.assumption.empty()) msg += " (requires " + e.assumption + ")";
  return msg;
}

// Maps exceptions from a single run onto exit codes.
Failure classify_error(std::exception_ptr ep) {
  try {
    std::rethrow_exception(ep);
  } catch (const SpecError& e) {
    return {kConfigError, describe(e)};
  } catch (const DomainError& e) {
    return {kConfigError, std::string("not applicable: ") + e.what()};
  } catch (const NumericalError& e) {
    return {kNumerical, std::string("numerical failure: ") + e.what()};
  } catch (const DivergenceError& e) {
    return {kNumerical, std::string("divergent integral: ") + e.what()};
  } catch (const json::exception& e) {
    return {kConfigError, std::string("configuration error: ") + e.what()};
  } catch (const std::exception& e) {
    return {kNumerical, std::string("error: ") + e.what()};
  }
}

int dispatch(const Flags& f, std::ostream& out, std::ostream& err) {
  if (f.command == "verify") return verify(f, out, err);
  if (f.configs.empty()) {
    err << "configuration error: --config is required for " << f.command << "\n";
    return kConfigError;
  }
  const std::string fmt = f.format.empty() ? natural_format(f.command) : f.format;
  const std::string ext = fmt == "csv" ? ".csv" : ".json";
  namespace fs = std::filesystem;
  const bool sweep = f.configs.size() > 1;
  if (sweep && (f.out.empty() || f.out == "-" || !fs::is_directory(f.out))) {
    err << "configuration error: several --config files need --out naming an existing directory\n";
    return kConfigError;
  }

  std::vector<Failure> failures(f.configs.size(), Failure{kOk, ""});
  std::vector<std::string> texts(f.configs.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i; (i = next++) < f.configs.size();) {
      try {
        const RunConfig cfg = load_config(f.configs[i]);
        texts[i] = execute(f, cfg, fmt);
        if (sweep)
          report::write_atomic((fs::path(f.out) / (fs::path(f.configs[i]).stem().string() + ext)).string(), texts[i]);
        else if (!f.out.empty() && f.out != "-")
          report::write_atomic(f.out, texts[i]);
      } catch (...) {
        failures[i] = classify_error(std::current_exception());
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(f.jobs, static_cast<int>(f.configs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int code = kOk;
  for (size_t i = 0; i < f.configs.size(); ++i) {
    if (failures[i].code != kOk) {
      err << (sweep ? f.configs[i] + ": " : "") << failures[i].message << "\n";
      code = std::max(code, failures[i].code);
    } else if (!sweep && (f.out.empty() || f.out == "-")) {
      out << texts[i];
    }
  }
  return code;
}

}  // namespace

std::string csv_to_json(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    size_t start = 0;
    for (;;) {
      const size_t k = s.find(',', start);
      cells.push_back(s.substr(start, k == std::string::npos ? std::string::npos : k - start));
      if (k == std::string::npos) break;
      start = k + 1;
    }
    return cells;
  };
  json j;
  j["columns"] = json::array();
  j["rows"] = json::array();
  if (!std::getline(in, line)) return report::dump(j);
  for (const auto& c : split(line)) j["columns"].push_back(c);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json row = json::array();
    for (const auto& c : split(line)) {
      double v = 0;
      const auto [p, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (c.empty())
        row.push_back(nullptr);
      else if (ec == std::errc() && p == c.data() + c.size() && std::isfinite(v))
        row.push_back(v);
      else
        row.push_back(c);
    }
    j["rows"].push_back(row);
  }
  return report::dump(j);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Isolated singularities of weighted quasilinear elliptic equations, radial case", "radsing"};
  app.require_subcommand(1);
  Flags f;
  const auto positive = CLI::PositiveNumber;
  app.add_option("--config", f.configs, "problem configuration (key-value or JSON); repeat for a sweep");
  app.add_option("--out", f.out, "report path (default stdout); a directory for sweeps");
  app.add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--tol-quad", f.tol_quad, "quadrature tolerance")->check(positive);
  app.add_option("--tol-ode", f.tol_ode, "ODE relative tolerance")->check(positive);
  app.add_option("--r-min", f.r_min, "smallest radius reported")->check(CLI::Range(0.0, 1.0) & positive);
  app.add_option("--jobs", f.jobs, "parallel runs")->check(CLI::PositiveNumber);
  app.set_version_flag("--version", std::string(report::kSchemaVersion));
  app.fallthrough();

  struct Sub {
    const char* name;
    const char* help;
  };
  for (Sub s : {Sub{"derive", "derived constants m0, m1, m2, q*, M and the regime"},
                Sub{"phi", "fundamental solution Phi and Upsilon on the grid"},
                Sub{"classify", "removable-only or trichotomy, with the profile branch and table row"},
                Sub{"tilde-u", "strong-singularity profile against the closed-form table row"},
                Sub{"solve", "singular radial solution (or --annulus) with its classification"},
                Sub{"verify", "run the acceptance battery"}}) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->fallthrough();
    sub->final_callback([&f, name = std::string(s.name)] { f.command = name; });
    if (std::string(s.name) == "solve") sub->add_flag("--annulus", f.annulus, "finite annulus with solve.n instead of n -> inf");
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << report::kSchemaVersion << "\n";
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kConfigError;
  }
  try {
    return dispatch(f, out, err);
  } catch (...) {
    const Failure fl = classify_error(std::current_exception());
    err << fl.message << "\n";
    return fl.code;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace radsing::cli
