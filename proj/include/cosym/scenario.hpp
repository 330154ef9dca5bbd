#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cosym/errors.hpp"
#include "cosym/model.hpp"

namespace cosym {

inline constexpr int kReportSchemaVersion = 1;

enum class StepStatus { Pass, Fail, Error, Skipped };

std::string_view to_string(StepStatus s);

struct StepResult {
  std::string id;
  std::string op;
  std::string anchor;  ///< the mathematical statement the step exercises
  StepStatus status = StepStatus::Pass;
  bool verdict = false;
  Json value = Json::object();
  std::optional<Json> expected;
  std::vector<std::string> mismatches;
  std::optional<ErrorKind> error_kind;
  std::string error_message;
};

struct Report {
  std::string model_label;
  Json conventions = Json::object();
  std::vector<std::string> assumptions;  ///< symbol independence assertions
  std::vector<std::string> notes;
  std::vector<StepResult> steps;

  bool passed() const;
  /// 0 all steps pass, 2 an unexpected input error, 1 otherwise.
  int exit_code() const;
};

/// Checks op names, required sections, argument shapes and that every
/// reference resolves. Called by the loader; throws InputError. Returns notes
/// about model sections the scenario never touches.
std::vector<std::string> validate_scenario(const ModelFile& m);

/// Runs the steps in order. A step that fails to produce its outputs causes
/// the steps consuming them to be skipped; independent steps still run.
Report run_scenario(const ModelFile& m, std::uint64_t default_seed = 0);

enum class ReportFormat { Json, Text };

std::string emit_report(const Report& r, ReportFormat format);
Json report_to_json(const Report& r);
/// Step id -> status pairs of a JSON report, in order.
std::vector<std::pair<std::string, StepStatus>> verdicts_from_json(const Json& report);

}  // namespace cosym
