#include "cosym/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "cosym/errors.hpp"
#include "cosym/model.hpp"
#include "cosym/scenario.hpp"

namespace cosym {
namespace {

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InputError("expected a comma-separated list of integers, got '" + text + "'");
    }
  }
  if (out.empty()) throw InputError("empty integer list");
  return out;
}

// "re" or "re:im", rationals as p/q.
Json parse_complex(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return Json(text);
  return Json::array({text.substr(0, colon), text.substr(colon + 1)});
}

std::string file_stem(std::string label) {
  for (char& c : label) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  }
  return label.empty() ? "report" : label;
}

struct Session {
  std::ostream& out;
  std::ostream& err;
  ReportFormat format = ReportFormat::Json;
  std::uint64_t seed = 0;

  int emit(const Report& report) const {
    const std::string text = emit_report(report, format);
    out << text;
    if (const char* dir = std::getenv("COSYM_REPORT_DIR"); dir && *dir) {
      const std::filesystem::path path = std::filesystem::path(dir) /
                                         (file_stem(report.model_label) + (format == ReportFormat::Json ? ".json" : ".txt"));
      std::ofstream file(path);
      if (!file) {
        err << "error: cannot write report to " << path.string() << "\n";
        return 2;
      }
      file << text;
    }
    return report.exit_code();
  }

  // Replaces the model's scenario with `steps`, validates and runs it.
  int run_steps(ModelFile m, std::vector<ScenarioStep> steps) const {
    for (std::size_t i = 0; i < steps.size(); ++i) {
      if (steps[i].id.empty()) steps[i].id = "step" + std::to_string(i + 1);
    }
    m.scenario = std::move(steps);
    m.notes = validate_scenario(m);
    return emit(run_scenario(m, seed));
  }
};

ModelFile empty_model(const std::string& label) {
  ModelFile m;
  m.label = label;
  return m;
}

}  // namespace

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact cosymplectic and toric computations"};
  app.require_subcommand(1);

  std::string format = "json";
  std::uint64_t seed = 0;
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--seed", seed, "Default seed for sampled checks");

  std::string model_path;
  std::string eta = "eta", omega = "omega";

  auto* check = app.add_subcommand("check", "Verify a cosymplectic pair, its Reeb field and the splitting condition");
  check->add_option("model", model_path, "Model file")->required();
  check->add_option("--eta", eta, "Name of the 1-form");
  check->add_option("--omega", omega, "Name of the 2-form");

  std::string type, theta, beta;
  auto* deform = app.add_subcommand("deform", "Deform a cosymplectic pair (type I or II)");
  deform->add_option("model", model_path, "Model file")->required();
  deform->add_option("--type", type, "I or II")->required()->check(CLI::IsMember({"I", "II"}));
  deform->add_option("--eta", eta, "Name of the 1-form");
  deform->add_option("--omega", omega, "Name of the 2-form");
  deform->add_option("--theta", theta, "Vector name (type I)");
  deform->add_option("--beta", beta, "Form name (type II)");

  std::string list;
  auto* betti = app.add_subcommand("betti", "Betti number computations");
  betti->require_subcommand(1);
  auto* wang = betti->add_subcommand("wang", "Betti numbers of a mapping torus");
  wang->add_option("model", model_path, "Model file")->required();
  auto* toric = betti->add_subcommand("toric", "Check the toric Betti relations");
  toric->add_option("betti", list, "Comma-separated Betti numbers")->required();
  auto* basic = betti->add_subcommand("basic", "Basic Betti numbers from Betti numbers");
  basic->add_option("betti", list, "Comma-separated Betti numbers")->required();
  auto* poincare = betti->add_subcommand("poincare", "Poincare polynomial from fixed-component indices");
  poincare->add_option("indices", list, "Comma-separated indices")->required();

  std::string periods;
  auto* fibration = app.add_subcommand("fibration", "Compact-leaf criterion for a period class");
  fibration->add_option("model", model_path, "Model file")->required();
  fibration->add_option("--periods", periods, "Period class name, or a 1-form on a torus model")->required();

  int n = 1, samples = 100;
  double h = 1e-5;
  std::string weights, eta0;
  std::vector<std::string> coords;
  auto* moment = app.add_subcommand("moment", "Momentum map checks on CP^n");
  moment->require_subcommand(1);
  auto* residual = moment->add_subcommand("residual", "Finite-difference residual of the momentum condition");
  residual->add_option("--n", n, "Complex dimension")->required();
  residual->add_option("--weights", weights, "Comma-separated integer weights A")->required();
  residual->add_option("--samples", samples, "Number of sample points");
  residual->add_option("--step", h, "Finite-difference step");
  auto* rescale = moment->add_subcommand("rescale", "Momentum image after a type I deformation");
  rescale->add_option("model", model_path, "Model file")->required();
  rescale->add_option("--eta0-theta", eta0, "Override of eta(theta-bar)");
  auto* orbits = moment->add_subcommand("orbits", "Closed Reeb orbits of the mapping torus");
  orbits->add_option("model", model_path, "Model file")->required();
  auto* point = moment->add_subcommand("point", "Momentum image of a point of CP^n");
  point->add_option("coords", coords, "Homogeneous coordinates, each re or re:im")->required();

  auto* run = app.add_subcommand("run", "Run the scenario of a model file");
  run->add_option("model", model_path, "Model file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  Session session{out, err, format == "text" ? ReportFormat::Text : ReportFormat::Json, seed};
  try {
    const auto load = [&] { return load_model(model_path); };
    const auto step = [](std::string op, Json args) {
      ScenarioStep s;
      s.op = std::move(op);
      s.args = std::move(args);
      return s;
    };

    if (*run) return session.emit(run_scenario(load(), seed));
    if (*check) {
      const Json args{{"eta", eta}, {"omega", omega}};
      return session.run_steps(load(), {step("verify_cosymplectic", args), step("reeb", args),
                                        step("splitting_obstruction", args)});
    }
    if (*deform) {
      Json args{{"eta", eta}, {"omega", omega}};
      if (type == "I") {
        if (theta.empty()) throw InputError("deform --type I needs --theta");
        args["theta"] = theta;
      } else {
        if (beta.empty()) throw InputError("deform --type II needs --beta");
        args["beta"] = beta;
      }
      return session.run_steps(load(), {step(type == "I" ? "deform_type_I" : "deform_type_II", args)});
    }
    if (*wang) return session.run_steps(load(), {step("wang_betti", Json::object())});
    if (*toric) return session.run_steps(empty_model("betti"), {step("toric_betti_check", {{"betti", parse_int_list(list)}})});
    if (*basic) return session.run_steps(empty_model("betti"), {step("basic_betti", {{"betti", parse_int_list(list)}})});
    if (*poincare) {
      return session.run_steps(empty_model("betti"), {step("poincare_from_fixed", {{"indices", parse_int_list(list)}})});
    }
    if (*fibration) {
      ModelFile m = load();
      if (m.periods.contains(periods) || !m.forms.contains(periods)) {
        return session.run_steps(std::move(m), {step("fibration_check", {{"periods", periods}})});
      }
      // A closed 1-form on a torus model: check the class of its periods.
      ScenarioStep periods_step = step("torus_periods", {{"form", periods}});
      periods_step.output = periods + ".periods";
      return session.run_steps(std::move(m), {periods_step, step("fibration_check", {{"periods", periods + ".periods"}})});
    }
    if (*residual) {
      Json args{{"n", n}, {"weights", parse_int_list(weights)}, {"samples", samples}, {"seed", seed}, {"h", h}};
      return session.run_steps(empty_model("moment"), {step("moment_condition_residual", args)});
    }
    if (*rescale) {
      Json args = Json::object();
      if (!eta0.empty()) args["eta0_theta"] = eta0;
      return session.run_steps(load(), {step("moment_rescale", args)});
    }
    if (*orbits) return session.run_steps(load(), {step("closed_reeb_orbit_count", Json::object())});
    if (*point) {
      Json pt = Json::array();
      for (const auto& c : coords) pt.push_back(parse_complex(c));
      return session.run_steps(empty_model("moment"), {step("cpn_moment", {{"point", pt}})});
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << to_string(e.kind()) << " error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace cosym
