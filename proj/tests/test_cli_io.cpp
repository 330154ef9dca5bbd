#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "cosym/cli.hpp"
#include "cosym/errors.hpp"
#include "cosym/model.hpp"
#include "cosym/scenario.hpp"

using namespace cosym;
namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kFixtures{"r5_flat",     "h3_r2",       "t2_anosov",     "cp1_s1",
                                         "cp2_s1",      "example_105", "dense_reeb_cp2"};

fs::path fixture(const std::string& name) { return fs::path(COSYM_FIXTURE_DIR) / (name + ".json"); }
fs::path data(const std::string& name) { return fs::path(COSYM_TEST_DATA_DIR) / (name + ".json"); }

std::string input_error(const std::string& text) {
  try {
    load_model_text(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cosym");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::size_t count(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
  return n;
}

const char* kMinimal = R"({"schema_version": 1, "label": "m",
  "lie_algebra": {"dim": 3, "brackets": []},
  "forms": {"eta": {"degree": 1, "terms": {"3": "1"}}, "omega": {"degree": 2, "terms": {"1,2": "1"}}}
  %s})";

std::string minimal(const std::string& extra) {
  std::string s = kMinimal;
  return s.replace(s.find("%s"), 2, extra);
}

}  // namespace

TEST_CASE("loading the flat fixture") {
  const ModelFile m = load_model(fixture("r5_flat"));
  REQUIRE(m.lie_algebra.has_value());
  CHECK(m.lie_algebra->is_abelian());
  CHECK(m.forms.at("eta") == SymbolicForm(AltForm::monomial(5, {4})));
  CHECK(m.forms.at("omega") == SymbolicForm(AltForm::monomial(5, {0, 1}) + AltForm::monomial(5, {2, 3})));
  CHECK(m.vectors.at("theta")[2] == Rational(1, 2));
}

TEST_CASE("input errors carry field diagnostics") {
  CHECK(input_error(minimal(R"(, "vectors": {"v": [{"numerator": "1", "denominator": "0"}, 0, 0]})"))
            .find("malformed rational") != std::string::npos);
  CHECK(input_error(minimal(R"(, "scenario": [{"op": "deform_type_II", "args": {"eta": "eta", "omega": "omega", "beta": "beta2"}}])"))
            .find("dangling reference beta2") != std::string::npos);
  CHECK(input_error(R"({"schema_version": 2})").find("unknown schema_version") != std::string::npos);
  CHECK(input_error(R"({"schema_version": 1, "colour": 1})").find("unknown field") != std::string::npos);
  CHECK(input_error(R"({"schema_version": 1,)").find("parse error") != std::string::npos);
  CHECK(input_error(minimal(R"(, "scenario": [{"op": "no_such_op"}])")).find("unknown op") != std::string::npos);
  CHECK(input_error(minimal(R"(, "scenario": [{"op": "wang_betti"}])")).find("mapping_torus") != std::string::npos);
  CHECK(input_error(R"({"schema_version": 1, "forms": {}})").find("lie_algebra") != std::string::npos);
  CHECK(input_error(R"({"schema_version": 1, "lie_algebra": {"dim": 3, "brackets": [{"i": 2, "j": 1, "value": {}}]}})") != "");
  CHECK(input_error(minimal(R"(, "scenario": [{"op": "reeb", "args": {"eta": "eta"}}])")).find("missing argument") !=
        std::string::npos);
  CHECK_THROWS_AS(load_model(data("zero_denominator")), InputError);
  CHECK_THROWS_AS(load_model(data("dangling_reference")), InputError);
  CHECK_THROWS_AS(load_model(data("does_not_exist")), InputError);
}

TEST_CASE("canonical serialization round-trips every fixture") {
  for (const auto& name : kFixtures) {
    CAPTURE(name);
    const ModelFile m = load_model(fixture(name));
    const Json once = model_to_json(m);
    const Json twice = model_to_json(load_model_json(once));
    CHECK(once == twice);
    CHECK(once.dump() == twice.dump());
  }
}

TEST_CASE("every fixture scenario passes, deterministically") {
  for (const auto& name : kFixtures) {
    CAPTURE(name);
    const ModelFile m = load_model(fixture(name));
    const Report r = run_scenario(m, 1);
    for (const auto& s : r.steps) {
      CAPTURE(s.id);
      CHECK(s.status == StepStatus::Pass);
    }
    CHECK(r.exit_code() == 0);
    CHECK(emit_report(r, ReportFormat::Json) == emit_report(run_scenario(m, 1), ReportFormat::Json));
  }
}

TEST_CASE("irrational deformation pipeline verdicts") {
  const Report r = run_scenario(load_model(fixture("example_105")));
  const auto step = [&](const std::string& id) -> const StepResult& {
    for (const auto& s : r.steps) {
      if (s.id == id) return s;
    }
    throw std::runtime_error("missing step " + id);
  };
  CHECK(step("fibration").value.at("rational_multiple_of_integer_class") == false);
  CHECK(step("moment").value.at("standard_simplex") == true);
  CHECK(step("rationalize").value.at("coefficients") == Json::array({"-1", "-1"}));
  CHECK(step("fibration_fixed").value.at("rational_multiple_of_integer_class") == true);
  REQUIRE(r.assumptions.size() == 1);
  CHECK(r.assumptions[0].find("{1, eps1, eps2}") != std::string::npos);
  CHECK(r.conventions.contains("ce_differential"));
  CHECK(r.conventions.contains("momentum_map"));
}

TEST_CASE("anosov fixture reports the obstruction") {
  const Report r = run_scenario(load_model(fixture("t2_anosov")));
  CHECK(r.steps[1].value.at("verdict") == "no K-cosymplectic metric");
  CHECK(r.exit_code() == 0);
}

TEST_CASE("step errors skip dependents but not independent steps") {
  const Report r = run_scenario(load_model(data("type_I_boundary")));
  REQUIRE(r.steps.size() == 3);
  CHECK(r.steps[0].status == StepStatus::Error);
  CHECK(r.steps[0].error_kind == ErrorKind::Precondition);
  CHECK(r.steps[1].status == StepStatus::Skipped);
  CHECK(r.steps[2].status == StepStatus::Pass);
  CHECK(r.exit_code() == 1);
}

TEST_CASE("expected errors count as passes") {
  const ModelFile m = load_model_text(minimal(R"(, "vectors": {"theta": ["0", "0", "-1"]},
    "scenario": [{"op": "deform_type_I", "args": {"eta": "eta", "omega": "omega", "theta": "theta"},
                  "expect": {"error": "precondition"}}])"));
  const Report r = run_scenario(m);
  CHECK(r.steps[0].status == StepStatus::Pass);
  CHECK(r.exit_code() == 0);
}

TEST_CASE("report emission") {
  const Report empty = run_scenario(load_model_text(R"({"schema_version": 1, "label": "empty"})"));
  CHECK(empty.steps.empty());
  CHECK(empty.passed());
  CHECK(report_to_json(empty).at("overall") == "pass");

  const Report failing = run_scenario(load_model(data("expected_failure")));
  CHECK(failing.exit_code() == 1);
  const std::string text = emit_report(failing, ReportFormat::Text);
  CHECK(count(text, "FAIL") == 1);
  CHECK(text.find("odd basic Betti numbers vanish") != std::string::npos);

  for (const auto& name : kFixtures) {
    const Report r = run_scenario(load_model(fixture(name)));
    const Json parsed = Json::parse(emit_report(r, ReportFormat::Json));
    CHECK(parsed.at("report_schema_version") == kReportSchemaVersion);
    const auto verdicts = verdicts_from_json(parsed);
    REQUIRE(verdicts.size() == r.steps.size());
    for (std::size_t i = 0; i < verdicts.size(); ++i) {
      CHECK(verdicts[i].first == r.steps[i].id);
      CHECK(verdicts[i].second == r.steps[i].status);
    }
  }
}

TEST_CASE("non-toric Hamiltonian models skip the toric Betti relations") {
  const ModelFile m = load_model_text(R"({"schema_version": 1, "label": "hamiltonian",
    "toric": {"model": "cpn", "n": 1, "manifold_dim": 5},
    "scenario": [{"op": "toric_betti_check", "args": {"betti": [1, 1, 1, 1]}},
                 {"op": "moment_rescale", "args": {"eta0_theta": "1"}}]})");
  const Report r = run_scenario(m);
  CHECK(r.steps[0].status == StepStatus::Skipped);
  CHECK(r.steps[1].status == StepStatus::Pass);
  CHECK(r.exit_code() == 0);
}

TEST_CASE("command line") {
  const CliRun run = cli({"run", fixture("example_105").string()});
  CHECK(run.code == 0);
  CHECK(Json::parse(run.out).at("overall") == "pass");

  CHECK(cli({"run", data("type_I_boundary").string()}).code == 1);
  const CliRun dangling = cli({"run", data("dangling_reference").string()});
  CHECK(dangling.code == 2);
  CHECK(dangling.err.find("dangling reference beta2") != std::string::npos);
  CHECK(cli({"run", data("zero_denominator").string()}).code == 2);
  CHECK(cli({"--format", "xml", "run", fixture("r5_flat").string()}).code == 2);

  const CliRun check = cli({"--format", "text", "check", fixture("h3_r2").string()});
  CHECK(check.code == 0);
  CHECK(count(check.out, "[PASS]") == 3);

  CHECK(cli({"deform", fixture("r5_flat").string(), "--type", "I", "--theta", "theta"}).code == 0);
  CHECK(cli({"deform", fixture("r5_flat").string(), "--type", "I"}).code == 2);
  CHECK(cli({"betti", "wang", fixture("t2_anosov").string()}).code == 0);
  CHECK(cli({"betti", "toric", "1,1,1,1"}).code == 0);
  CHECK(cli({"betti", "toric", "1,3,3,1"}).code == 1);
  CHECK(cli({"betti", "basic", "1,1,1,1,1,1"}).code == 0);
  CHECK(cli({"betti", "basic", "1,x"}).code == 2);
  CHECK(cli({"fibration", fixture("example_105").string(), "--periods", "beta"}).code == 1);
  CHECK(cli({"--seed", "4", "moment", "residual", "--n", "1", "--weights", "2"}).code == 0);
  CHECK(cli({"moment", "rescale", fixture("cp2_s1").string(), "--eta0-theta", "-1"}).code == 1);
  CHECK(cli({"moment", "orbits", fixture("dense_reeb_cp2").string()}).code == 0);

  const CliRun pt = cli({"moment", "point", "1", "1", "0:2"});
  CHECK(pt.code == 0);
  CHECK(Json::parse(pt.out).at("steps")[0].at("value").at("moment") == Json::array({"1/6", "2/3"}));
}

TEST_CASE("report directory override") {
  const fs::path dir = fs::temp_directory_path() / "cosym_report_dir_test";
  fs::remove_all(dir);
  fs::create_directories(dir);
  ::setenv("COSYM_REPORT_DIR", dir.c_str(), 1);
  const CliRun run = cli({"run", fixture("t2_anosov").string()});
  ::unsetenv("COSYM_REPORT_DIR");
  CHECK(run.code == 0);
  std::ifstream file(dir / "t2_anosov.json");
  REQUIRE(file.good());
  std::stringstream ss;
  ss << file.rdbuf();
  CHECK(ss.str() == run.out);
  fs::remove_all(dir);
}
