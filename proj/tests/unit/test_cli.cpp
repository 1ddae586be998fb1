#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "relmech/cli/runner.hpp"

using namespace relmech::cli;
namespace fs = std::filesystem;

namespace {

const char* kHeader = R"s(
[scenario]
name = t
dimension = 2
)s";

const char* kRotating = R"s(
[constants]
w = 1

[equation free]
xi1 = "0"
xi2 = "0"

[frame spin]
gamma1 = "-w*q2"
gamma2 = "w*q1"

[chart rot]
forward1 = "q1*cos(w*t) + q2*sin(w*t)"
forward2 = "-q1*sin(w*t) + q2*cos(w*t)"
inverse1 = "q1*cos(w*t) - q2*sin(w*t)"
inverse2 = "q1*sin(w*t) + q2*cos(w*t)"
)s";

fs::path fresh_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("relmech_test_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

struct Outcome {
  int code;
  std::string out, err;
  fs::path dir;
};

Outcome run_text(const std::string& text, const std::string& name, double tol_scale = 1.0) {
  const auto dir = fresh_dir(name);
  fs::create_directories(dir);
  const auto file = dir / "s.scn";
  std::ofstream(file) << text;
  RunOptions opt;
  opt.out_dir = dir / "out";
  opt.tol_scale = tol_scale;
  std::ostringstream out, err;
  const int code = run_scenario_file(file, opt, out, err);
  return {code, out.str(), err.str(), dir / "out"};
}

nlohmann::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return nlohmann::json::parse(in);
}

}  // namespace

TEST_CASE("rotating scenario reports the relative acceleration") {
  const auto r = run_text(std::string(kHeader) + kRotating + R"s(
[task transform]
kind = transform
equation = free
chart = rot
t = 0
q = "1, 0"
v = "0, 0"

[task coriolis]
kind = coriolis
equation = free
frame = spin
t = 0
q = "1, 0"
v = "0, 0"
expect = "-1, 0"
)s", "rotating");
  CHECK(r.code == kExitOk);
  const auto rep = read_json(r.dir / "coriolis.json");
  CHECK(rep["results"]["relative_acceleration"][0].get<double>() == doctest::Approx(-1.0));
  CHECK(std::abs(rep["results"]["relative_acceleration"][1].get<double>()) <= 1e-15);
  const auto tr = read_json(r.dir / "transform.json");
  CHECK(tr["results"]["value"][0].get<double>() == doctest::Approx(1.0));
  const auto header = read_json(r.dir / "report.json");
  CHECK(header["seed"] == 0);
  CHECK(header["tasks"].size() == 2);
}

TEST_CASE("empty task list") {
  const auto r = run_text(kHeader, "empty");
  CHECK(r.code == kExitOk);
  CHECK(read_json(r.dir / "report.json")["tasks"].empty());
}

TEST_CASE("undefined names are validation errors") {
  const auto r = run_text(std::string(kHeader) + kRotating + R"s(
[task c]
kind = coriolis
equation = free
frame = nowhere
t = 0
q = "1, 0"
v = "0, 0"
)s", "undefined");
  CHECK(r.code == kExitInvalid);
  CHECK(r.err.find("nowhere") != std::string::npos);
  CHECK(r.err.find("line") != std::string::npos);
  CHECK_FALSE(fs::exists(r.dir / "report.json"));
}

TEST_CASE("parse errors carry the line") {
  CHECK_THROWS_WITH_AS(parse_scenario("[scenario]\nname = x\ndimension = 1\n[equation e]\nxi1 = \"q1 +\"\n"),
                       doctest::Contains("line 5"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario("[scenario]\nname = x\n"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario("[scenario]\nname = x\ndimension = 1\n[task a]\nkind = dance\n"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario("[scenario]\nname = x\ndimension = 1\n[frame f]\ngamma1 = \"v1\"\n"), ScenarioError);
  CHECK_THROWS_AS(parse_scenario("[scenario]\nname = x\ndimension = 1\n[equation e]\nxi1 = \"0\"\nxi2 = \"0\"\n"),
                  ScenarioError);
  CHECK_THROWS_AS(parse_scenario("[scenario]\nname = x\ndimension = 1\n[chart c]\nforward1 = \"q1^3\"\n"
                                 "inverse1 = \"q1\"\n"),
                  ScenarioError);
  CHECK_THROWS_AS(parse_scenario("[scenario]\nname = x\ndimension = 1\n[equation e]\nxi1 = \"0\"\n"
                                 "[task a]\nkind = integrate\nequation = e\nq = \"0\"\nv = \"1\"\nt_end = 1\nstep = 0\n"),
                  ScenarioError);
  const auto ok = parse_scenario("[scenario]\nname = x\ndimension = 1\n[constants]\nk = 2\nh = \"k/4\"\n");
  CHECK(ok.constants.at("h") == 0.5);
}

TEST_CASE("assertion failures exit 1 and evaluation errors exit 3") {
  const std::string bad_expect = std::string(kHeader) + kRotating + R"s(
[task c]
kind = coriolis
equation = free
frame = spin
t = 0
q = "1, 0"
v = "0, 0"
expect = "1, 0"
)s";
  const auto fail = run_text(bad_expect, "assert");
  CHECK(fail.code == kExitAssertion);
  CHECK(fail.err.find("'c'") != std::string::npos);
  CHECK(read_json(fail.dir / "c.json")["status"] == "fail");

  const auto eval = run_text(std::string(kHeader) + kRotating + R"s(
[equation wild]
xi1 = "sin(v1)"
xi2 = "0"

[task c]
kind = coriolis
equation = wild
frame = spin
t = 0
q = "1, 0"
v = "0, 0"
)s", "evaluation");
  CHECK(eval.code == kExitEvaluation);
  CHECK(eval.err.find("line") != std::string::npos);
  CHECK(read_json(eval.dir / "report.json")["exit_code"] == 3);

  // --tol-scale loosens every tolerance.
  const auto loose = run_text(bad_expect, "loose", 1e12);
  CHECK(loose.code == kExitOk);
}

TEST_CASE("integration writes the CSV series") {
  const auto r = run_text(R"s(
[scenario]
name = i
dimension = 1
[equation osc]
xi1 = "-q1"
[task run]
kind = integrate
equation = osc
q = "1"
v = "0"
t_end = 1
step = 0.25
)s", "csv");
  CHECK(r.code == kExitOk);
  std::ifstream in(r.dir / "run.csv");
  std::string header, first;
  std::getline(in, header);
  std::getline(in, first);
  CHECK(header == "t,q1,v1,a1");
  CHECK(first == "0,1,0,-1");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 4);
}

TEST_CASE("reports are byte-stable") {
  const std::string text = std::string(kHeader) + kRotating + R"s(
[task cov]
kind = integrate
equation = free
q = "1, 0"
v = "0, 1"
t_end = 0.5
step = 0.01
chart = rot
)s";
  const auto a = run_text(text, "stable_a");
  const auto b = run_text(text, "stable_b");
  for (const char* f : {"report.json", "cov.json", "cov.csv", "cov.pushed.csv", "cov.direct.csv"}) {
    std::ifstream x(a.dir / f, std::ios::binary), y(b.dir / f, std::ios::binary);
    std::stringstream sx, sy;
    sx << x.rdbuf();
    sy << y.rdbuf();
    CHECK(sx.str() == sy.str());
    CHECK_FALSE(sx.str().empty());
  }
}
