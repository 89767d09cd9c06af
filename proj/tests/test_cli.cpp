#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "radsing/cli.hpp"
#include "radsing/report.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const char* kPower = R"([operator]
N = 3
p = 2
theta = 0
L_A = 1

[source]
sigma = 0
L_b = 1

[nonlinearity]
q = 2
L_h = 1
)";

const char* kExample1Critical = R"([operator]
N = 3
p = 2
theta = 0
L_A = { family = "logpow", alpha = 0 }

[source]
sigma = 0
L_b = { family = "logpow", alpha = 0 }

[nonlinearity]
q = 3
L_h = { family = "logpow", alpha = 1 }
)";

// critical doii sample; the grid starts exactly at r = e^-4
const char* kDoii = R"([operator]
N = 3
p = 2
theta = 0
L_A = 1

[source]
sigma = 0
L_b = 1

[nonlinearity]
q = 3
L_h = { family = "logpow", alpha = -2 }

[grid]
r_min = 1e-6
r_max = 0.01831563888873418
points = 13
)";

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("radsing_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string file(const std::string& name, const std::string& text) const {
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p.string();
  }
};

struct Run {
  int code;
  std::string out, err;
};
Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = radsing::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("derive reports the constants") {
  Scratch s;
  const Run r = run({"derive", "--config", s.file("power.cfg", kPower)});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["m0"] == 2.0);
  CHECK(j["m1"] == 1.0);
  CHECK(j["m2"] == 1.0);
  CHECK(j["q_star"] == 3.0);
  CHECK(j["M"].get<double>() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(j["regime"] == "subcritical");
  CHECK(j["near_critical"] == false);

  const Run c = run({"derive", "--config", s.file("power.cfg", kPower), "--format", "csv"});
  REQUIRE(c.code == 0);
  CHECK(c.out.rfind("key,value\n", 0) == 0);
  CHECK(c.out.find("\nregime,subcritical\n") != std::string::npos);
}

TEST_CASE("classify: Example 1 at q* below the threshold is removable-only") {
  Scratch s;
  const Run r = run({"classify", "--config", s.file("ex1.cfg", kExample1Critical)});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["verdict"] == "removable-only");
  CHECK(j["integrable"] == false);
  CHECK(j["row"].is_null());

  const Run t = run({"classify", "--config", s.file("pw.cfg", kPower)});
  REQUIRE(t.code == 0);
  const json k = json::parse(t.out);
  CHECK(k["verdict"] == "trichotomy");
  CHECK(k["profile"] == "subcritical");
  CHECK(k["row"]["example"] == 1);
  CHECK(k["row"]["table"] == 3);
}

TEST_CASE("tilde-u row at r = e^-4 for the critical doii sample") {
  Scratch s;
  const Run r = run({"tilde-u", "--config", s.file("doii.cfg", kDoii)});
  REQUIRE(r.code == 0);
  std::istringstream in(r.out);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == radsing::report::kProfileHeader);
  std::vector<double> cells;
  std::stringstream ss(row);
  for (std::string c; std::getline(ss, c, ',');) cells.push_back(std::stod(c));
  REQUIRE(cells.size() == 5);
  CHECK(cells[0] == doctest::Approx(std::exp(-4.0)).epsilon(1e-15));
  CHECK(std::abs(cells[1] - 77.22) <= 1e-2);
  CHECK(cells[3] == doctest::Approx(1.0).epsilon(1e-10));

  const Run j = run({"tilde-u", "--config", s.file("doii.cfg", kDoii), "--format", "json"});
  REQUIRE(j.code == 0);
  const json doc = json::parse(j.out);
  CHECK(doc["columns"].size() == 5);
  CHECK(doc["rows"].size() == 13);
}

TEST_CASE("report schema") {
  CHECK(std::string(radsing::report::kSolutionHeader) == "r,v,w,v_over_phi,flux");
  CHECK(std::string(radsing::report::kProfileHeader) == "r,tilde_u,table_oracle,ratio,residual");
  const json s = radsing::report::report_schema();
  CHECK(s["version"] == radsing::report::kSchemaVersion);
  const auto& fields = s["verdict_json"]["fields"];
  for (const char* k : {"kind", "lambda_hat", "evidence"})
    CHECK(std::find(fields.begin(), fields.end(), k) != fields.end());
  CHECK(radsing::report::report_schema_text() == radsing::report::report_schema_text());
}

TEST_CASE("solve emits the solution table and a verdict") {
  Scratch s;
  const std::string cfg = s.file("weak.cfg", std::string(kPower) +
                                                 "\n[solve]\nlambda = 1\ng0 = 1\n\n[grid]\nr_min = 1e-4\nr_max = 0.5\n");
  const Run r = run({"solve", "--config", cfg, "--format", "json"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["verdict"]["kind"] == "weak");
  CHECK(j["verdict"]["lambda_hat"].get<double>() == doctest::Approx(1.0).epsilon(0.02));
  REQUIRE(j["solution"]["columns"].size() == 5);
  CHECK(j["solution"]["columns"][0] == "r");
  const double r_last = j["solution"]["rows"].back()[0].get<double>();
  CHECK(r_last == doctest::Approx(1e-4).epsilon(1e-12));

  const Run c = run({"solve", "--config", cfg, "--annulus"});
  REQUIRE(c.code == 0);
  CHECK(c.out.rfind(std::string(radsing::report::kSolutionHeader) + "\n", 0) == 0);
}

TEST_CASE("identical configuration gives byte-identical reports") {
  Scratch s;
  const std::string cfg = s.file("doii.cfg", kDoii);
  for (const char* cmd : {"derive", "phi", "classify", "tilde-u"}) {
    const Run a = run({cmd, "--config", cfg});
    const Run b = run({cmd, "--config", cfg});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
  }
  const std::string out = (s.dir / "phi.csv").string();
  REQUIRE(run({"phi", "--config", cfg, "--out", out}).code == 0);
  CHECK(slurp(out) == run({"phi", "--config", cfg}).out);
  // the temporary sibling is gone after the rename
  int entries = 0;
  for (const auto& e : fs::directory_iterator(s.dir)) entries += e.path().string().find(".tmp.") != std::string::npos;
  CHECK(entries == 0);
}

TEST_CASE("sweeps write one report per configuration") {
  Scratch s;
  const std::string a = s.file("a.cfg", kPower), b = s.file("b.cfg", kDoii);
  const fs::path out = s.dir / "out";
  fs::create_directories(out);
  const Run r = run({"derive", "--config", a, "--config", b, "--out", out.string(), "--jobs", "2"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(slurp(out / "a.json"))["regime"] == "subcritical");
  CHECK(json::parse(slurp(out / "b.json"))["regime"] == "critical");
  CHECK(run({"derive", "--config", a, "--config", b}).code == 2);
}

TEST_CASE("failure paths name the violated precondition") {
  Scratch s;
  std::string bad = kPower;
  bad.replace(bad.find("q = 2"), 5, "q = 0.5");
  const Run r = run({"derive", "--config", s.file("bad.cfg", bad)});
  CHECK(r.code == 2);
  CHECK(r.err.find("nonlinearity.q") != std::string::npos);
  CHECK(r.err.find("(A3)") != std::string::npos);

  std::string missing = kPower;
  missing.erase(missing.find("sigma = 0"), 10);
  const Run m = run({"derive", "--config", s.file("missing.cfg", missing)});
  CHECK(m.code == 2);
  CHECK(m.err.find("source.sigma") != std::string::npos);

  CHECK(run({"derive"}).code == 2);
  CHECK(run({"derive", "--config", (s.dir / "nope.cfg").string()}).code == 2);
  CHECK(run({"derive", "--config", s.file("p.cfg", kPower), "--format", "xml"}).code == 2);
  CHECK(run({"phi", "--config", s.file("p.cfg", kPower), "--r-min", "-1"}).code == 2);
  CHECK(run({}).code == 2);

  // no strong profile exists above q*
  std::string sup = kPower;
  sup.replace(sup.find("q = 2"), 5, "q = 4");
  const Run t = run({"tilde-u", "--config", s.file("sup.cfg", sup)});
  CHECK(t.code == 2);
  CHECK_FALSE(t.err.empty());
}

TEST_CASE("csv_to_json") {
  const json j = json::parse(radsing::cli::csv_to_json("a,b,c\n1,,inf\n2.5,x,-3\n"));
  CHECK(j["columns"] == json::array({"a", "b", "c"}));
  CHECK(j["rows"][0][0] == 1.0);
  CHECK(j["rows"][0][1].is_null());
  CHECK(j["rows"][0][2] == "inf");
  CHECK(j["rows"][1][1] == "x");
  CHECK(j["rows"][1][2] == -3.0);
}

TEST_CASE("help and version exit cleanly") {
  const Run h = run({"--help"});
  CHECK(h.code == 0);
  CHECK(h.out.find("tilde-u") != std::string::npos);
  const Run v = run({"--version"});
  CHECK(v.code == 0);
  CHECK(v.out.find(radsing::report::kSchemaVersion) != std::string::npos);
}

TEST_CASE("verify reports every criterion and sets the exit status") {
  const Run r = run({"verify", "--jobs", "2"});
  const json j = json::parse(r.out);
  REQUIRE(j["criteria"].size() == 12);
  CHECK(j["passed"].get<int>() + j["failed"].get<int>() == 12);
  CHECK(r.code == (j["failed"].get<int>() > 0 ? 4 : 0));
  for (const auto& c : j["criteria"]) {
    CHECK(c.contains("detail"));
    CHECK_FALSE(c.contains("seconds"));
  }
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 12);
}
