#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cosym/cosymplectic.hpp"
#include "cosym/exterior.hpp"
#include "cosym/symbolic.hpp"
#include "cosym/topology.hpp"
#include "cosym/toric.hpp"

namespace cosym {

using Json = nlohmann::ordered_json;

inline constexpr int kModelSchemaVersion = 1;

struct ScenarioStep {
  std::string id;
  std::string op;
  Json args = Json::object();
  std::optional<Json> expect;
  std::string output;  ///< optional name under which results are registered
};

/// A validated JSON model (schema v1). Every name referenced by the scenario
/// resolves either to a section entry or to the output of an earlier step.
struct ModelFile {
  int schema_version = kModelSchemaVersion;
  std::string label;
  BasisPtr symbols = std::make_shared<const SymbolBasis>();
  std::optional<LieAlgebra> lie_algebra;
  std::map<std::string, SymbolicForm> forms;
  std::map<std::string, AlgVector> vectors;
  std::optional<MappingTorusModel> mapping_torus;
  std::map<std::string, PeriodClass> periods;
  std::optional<ToricMomentModel> toric;
  std::vector<ScenarioStep> scenario;
  std::vector<std::string> notes;  ///< loader observations, e.g. unused sections
};

/// Throws InputError with a field path or parse position.
ModelFile load_model(const std::filesystem::path& path);
ModelFile load_model_json(const Json& doc);
ModelFile load_model_text(const std::string& text);

/// Canonical serialization; load_model_json(model_to_json(m)) reproduces m.
Json model_to_json(const ModelFile& m);

// Fragment codecs shared with the scenario runner and CLI.
Rational rational_from_json(const Json& j, const std::string& where);
Json rational_to_json(const Rational& r);
SymbolicReal symbolic_from_json(const Json& j, const BasisPtr& basis, const std::string& where);
Json symbolic_to_json(const SymbolicReal& x);
Json vector_to_json(const AlgVector& v);
Json form_to_json(const SymbolicForm& f);
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& where);
Json period_class_to_json(const PeriodClass& pc);
Json point_to_json(const Point& p);

}  // namespace cosym
