#include "cosym/model.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "cosym/errors.hpp"
#include "cosym/scenario.hpp"

namespace cosym {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw InputError(where + ": " + what);
}

const Json& require(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) fail(where, std::string("missing field '") + key + "'");
  return obj.at(key);
}

void reject_unknown(const Json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      fail(where, "unknown field '" + key + "'");
    }
  }
}

int int_from_json(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

std::string integer_text(const Json& j, const std::string& where) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  fail(where, "malformed rational (expected an integer part)");
}

// "1,3" -> {0, 2}; indices are 1-based and strictly increasing.
std::vector<int> parse_multi_index(const std::string& key, int dim, const std::string& where) {
  std::vector<int> out;
  if (key.empty()) return out;
  std::stringstream ss(key);
  std::string part;
  while (std::getline(ss, part, ',')) {
    int v = 0;
    try {
      std::size_t used = 0;
      v = std::stoi(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      fail(where, "malformed multi-index '" + key + "'");
    }
    if (v < 1 || v > dim) fail(where, "index " + std::to_string(v) + " out of range 1.." + std::to_string(dim));
    if (!out.empty() && v - 1 <= out.back()) fail(where, "multi-index '" + key + "' must be strictly increasing");
    out.push_back(v - 1);
  }
  return out;
}

std::string multi_index_key(IndexSet set) {
  std::string out;
  for (int i : indices_of(set)) out += (out.empty() ? "" : ",") + std::to_string(i + 1);
  return out;
}

LieAlgebra lie_algebra_from_json(const Json& j, const std::string& where) {
  reject_unknown(j, {"dim", "brackets"}, where);
  const int dim = int_from_json(require(j, "dim", where), where + ".dim");
  if (dim < 1 || dim > kMaxDim) fail(where + ".dim", "dimension must lie in 1.." + std::to_string(kMaxDim));
  LieAlgebra g(dim);
  if (!j.contains("brackets")) return g;
  const Json& brackets = j.at("brackets");
  if (!brackets.is_array()) fail(where + ".brackets", "expected an array");
  std::set<std::pair<int, int>> seen;
  for (std::size_t b = 0; b < brackets.size(); ++b) {
    const std::string w = where + ".brackets[" + std::to_string(b) + "]";
    const Json& entry = brackets[b];
    reject_unknown(entry, {"i", "j", "value"}, w);
    const int i = int_from_json(require(entry, "i", w), w + ".i");
    const int k = int_from_json(require(entry, "j", w), w + ".j");
    if (i < 1 || k < 1 || i > dim || k > dim) fail(w, "bracket index out of range");
    if (i >= k) fail(w, "brackets are given for i < j only; antisymmetry is implied");
    if (!seen.insert({i, k}).second) fail(w, "duplicate bracket [e" + std::to_string(i) + ", e" + std::to_string(k) + "]");
    const Json& value = require(entry, "value", w);
    if (!value.is_object()) fail(w + ".value", "expected an object index -> coefficient");
    AlgVector v(dim);
    for (const auto& [key, coeff] : value.items()) {
      const auto idx = parse_multi_index(key, dim, w + ".value");
      if (idx.size() != 1) fail(w + ".value", "keys must be single basis indices");
      v[idx[0]] = rational_from_json(coeff, w + ".value." + key);
    }
    g.set_bracket(i - 1, k - 1, v);
  }
  return g;
}

Json lie_algebra_to_json(const LieAlgebra& g) {
  Json brackets = Json::array();
  for (int i = 0; i < g.dim(); ++i)
    for (int j = i + 1; j < g.dim(); ++j) {
      const AlgVector& v = g.bracket_basis(i, j);
      if (v.is_zero()) continue;
      Json value = Json::object();
      for (int k = 0; k < g.dim(); ++k) {
        if (!v[k].is_zero()) value[std::to_string(k + 1)] = rational_to_json(v[k]);
      }
      brackets.push_back(Json{{"i", i + 1}, {"j", j + 1}, {"value", value}});
    }
  return Json{{"dim", g.dim()}, {"brackets", brackets}};
}

SymbolicForm form_from_json(const Json& j, int dim, const BasisPtr& basis, const std::string& where) {
  reject_unknown(j, {"degree", "terms"}, where);
  const int degree = int_from_json(require(j, "degree", where), where + ".degree");
  if (degree < 0 || degree > dim) fail(where + ".degree", "degree must lie in 0..dim");
  SymbolicForm f(dim, degree);
  if (!j.contains("terms")) return f;
  const Json& terms = j.at("terms");
  if (!terms.is_object()) fail(where + ".terms", "expected an object multi-index -> coefficient");
  for (const auto& [key, coeff] : terms.items()) {
    const std::string w = where + ".terms[" + key + "]";
    const auto idx = parse_multi_index(key, dim, w);
    if (static_cast<int>(idx.size()) != degree) fail(w, "multi-index length differs from degree");
    const SymbolicReal c = symbolic_from_json(coeff, basis, w);
    const IndexSet set = index_set(idx);
    for (const auto& [s, value] : c.terms()) {
      AltForm piece(dim, degree);
      piece.add(set, value);
      f.add(basis, s, piece);
    }
  }
  return f;
}

AlgVector vector_from_json(const Json& j, int dim, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim) {
    fail(where, "expected an array of " + std::to_string(dim) + " rationals");
  }
  AlgVector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = rational_from_json(j[static_cast<std::size_t>(i)], where + "[" + std::to_string(i) + "]");
  return v;
}

MappingTorusModel mapping_torus_from_json(const Json& j, const std::string& where) {
  reject_unknown(j, {"label", "fiber_betti", "phi_star"}, where);
  MappingTorusModel m;
  if (j.contains("label")) m.label = j.at("label").get<std::string>();
  const Json& betti = require(j, "fiber_betti", where);
  if (!betti.is_array()) fail(where + ".fiber_betti", "expected an array");
  for (std::size_t p = 0; p < betti.size(); ++p) {
    m.fiber_betti.push_back(int_from_json(betti[p], where + ".fiber_betti[" + std::to_string(p) + "]"));
  }
  const Json& phi = require(j, "phi_star", where);
  if (!phi.is_array()) fail(where + ".phi_star", "expected an array of matrices");
  for (std::size_t p = 0; p < phi.size(); ++p) {
    m.phi_star.push_back(matrix_from_json(phi[p], where + ".phi_star[" + std::to_string(p) + "]"));
  }
  try {
    validate(m);
  } catch (const InputError& e) {
    fail(where, e.what());
  }
  return m;
}

Json mapping_torus_to_json(const MappingTorusModel& m) {
  Json phi = Json::array();
  for (const auto& mat : m.phi_star) phi.push_back(matrix_to_json(mat));
  return Json{{"label", m.label}, {"fiber_betti", m.fiber_betti}, {"phi_star", phi}};
}

Point point_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of rationals");
  Point p;
  for (std::size_t i = 0; i < j.size(); ++i) p.push_back(rational_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return p;
}

ToricMomentModel toric_from_json(const Json& j, const BasisPtr& basis, const std::string& where) {
  reject_unknown(j, {"model", "n", "vertices", "eta0_theta", "torus_element", "manifold_dim"}, where);
  const std::string kind = require(j, "model", where).get<std::string>();
  const int n = int_from_json(require(j, "n", where), where + ".n");
  if (n < 1) fail(where + ".n", "n must be positive");
  ToricMomentModel m;
  if (kind == "cpn") {
    m = ToricMomentModel::complex_projective(n);
  } else if (kind == "other") {
    m.kind = ToricModelKind::Other;
    m.n = n;
    if (!j.contains("vertices")) fail(where, "non-CP^n models must list their vertices");
    m.torus_element.assign(static_cast<std::size_t>(n), SymbolicReal());
  } else {
    fail(where + ".model", "unknown toric model '" + kind + "' (expected cpn or other)");
  }
  if (j.contains("vertices")) {
    const Json& verts = j.at("vertices");
    if (!verts.is_array() || verts.empty()) fail(where + ".vertices", "expected a nonempty array of points");
    m.vertices.clear();
    for (std::size_t v = 0; v < verts.size(); ++v) {
      Point p = point_from_json(verts[v], where + ".vertices[" + std::to_string(v) + "]");
      if (static_cast<int>(p.size()) != n) fail(where + ".vertices", "every vertex needs n coordinates");
      m.vertices.push_back(std::move(p));
    }
  }
  if (j.contains("manifold_dim")) {
    m.manifold_dim = int_from_json(j.at("manifold_dim"), where + ".manifold_dim");
    if (m.manifold_dim < 2 * n + 1) fail(where + ".manifold_dim", "a Hamiltonian T^n-manifold has dimension >= 2n+1");
  }
  if (j.contains("eta0_theta")) m.eta0_theta = rational_from_json(j.at("eta0_theta"), where + ".eta0_theta");
  if (j.contains("torus_element")) {
    const Json& t = j.at("torus_element");
    if (!t.is_array() || static_cast<int>(t.size()) != n) fail(where + ".torus_element", "expected n rotation numbers");
    m.torus_element.clear();
    for (std::size_t i = 0; i < t.size(); ++i) {
      m.torus_element.push_back(symbolic_from_json(t[i], basis, where + ".torus_element[" + std::to_string(i) + "]"));
    }
  }
  return m;
}

Json toric_to_json(const ToricMomentModel& m) {
  Json verts = Json::array();
  for (const auto& v : m.vertices) verts.push_back(point_to_json(v));
  Json t = Json::array();
  for (const auto& a : m.torus_element) t.push_back(symbolic_to_json(a));
  return Json{{"model", m.kind == ToricModelKind::ComplexProjective ? "cpn" : "other"},
              {"n", m.n},
              {"vertices", verts},
              {"eta0_theta", rational_to_json(m.eta0_theta)},
              {"torus_element", t},
              {"manifold_dim", m.manifold_dim == 0 ? 2 * m.n + 1 : m.manifold_dim}};
}

}  // namespace

// ----------------------------------------------------------- fragment codecs

Rational rational_from_json(const Json& j, const std::string& where) {
  try {
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_object()) {
      reject_unknown(j, {"numerator", "denominator"}, where);
      const std::string num = integer_text(require(j, "numerator", where), where);
      const std::string den = j.contains("denominator") ? integer_text(j.at("denominator"), where) : "1";
      return Rational::from_parts(num, den);
    }
  } catch (const InputError& e) {
    fail(where, e.what());
  }
  fail(where, "malformed rational (expected \"p/q\", an integer, or {numerator, denominator})");
}

Json rational_to_json(const Rational& r) { return r.str(); }

SymbolicReal symbolic_from_json(const Json& j, const BasisPtr& basis, const std::string& where) {
  if (!j.is_object() || j.contains("numerator")) return SymbolicReal(rational_from_json(j, where));
  SymbolicReal out;
  for (const auto& [name, coeff] : j.items()) {
    const Rational c = rational_from_json(coeff, where + "." + name);
    if (name == "1") {
      out += SymbolicReal(c);
      continue;
    }
    if (!basis || !basis->index_of(name)) fail(where, "unknown symbol '" + name + "'");
    out += SymbolicReal::symbol(basis, name, c);
  }
  return out;
}

Json symbolic_to_json(const SymbolicReal& x) {
  if (x.is_rational()) return rational_to_json(x.coefficient(0));
  Json out = Json::object();
  for (const auto& [idx, c] : x.terms()) out[x.basis()->name(idx)] = rational_to_json(c);
  return out;
}

Json vector_to_json(const AlgVector& v) {
  Json out = Json::array();
  for (const auto& c : v.components()) out.push_back(rational_to_json(c));
  return out;
}

Json form_to_json(const SymbolicForm& f) {
  std::set<IndexSet> sets;
  for (const auto& [s, form] : f.components())
    for (const auto& [set, c] : form.terms()) sets.insert(set);
  std::vector<std::pair<std::vector<int>, IndexSet>> ordered;
  for (IndexSet set : sets) ordered.emplace_back(indices_of(set), set);
  std::sort(ordered.begin(), ordered.end());
  Json terms = Json::object();
  for (const auto& [idx, set] : ordered) terms[multi_index_key(set)] = symbolic_to_json(f.coefficient(set));
  return Json{{"degree", f.degree()}, {"terms", terms}};
}

Json matrix_to_json(const Matrix& m) {
  Json out = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) {
      const Rational& x = m(r, c);
      if (x.is_integer() && x.numerator().fits_slong_p()) {
        row.push_back(x.numerator().get_si());
      } else {
        row.push_back(rational_to_json(x));
      }
    }
    out.push_back(row);
  }
  return out;
}

Matrix matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected a matrix (array of rows)");
  std::vector<Vector> rows;
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array()) fail(where, "matrix rows must be arrays");
    Vector row;
    for (std::size_t c = 0; c < j[r].size(); ++c) {
      row.push_back(rational_from_json(j[r][c], where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]"));
    }
    rows.push_back(std::move(row));
  }
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  for (const auto& row : rows) {
    if (row.size() != cols) fail(where, "ragged matrix");
  }
  return Matrix::from_rows(rows, cols);
}

Json period_class_to_json(const PeriodClass& pc) {
  Json out = Json::array();
  for (const auto& p : pc.periods) out.push_back(symbolic_to_json(p));
  return out;
}

Json point_to_json(const Point& p) {
  Json out = Json::array();
  for (const auto& x : p) out.push_back(rational_to_json(x));
  return out;
}

// ---------------------------------------------------------------- loading

ModelFile load_model_json(const Json& doc) {
  if (!doc.is_object()) fail("model", "top level must be an object");
  reject_unknown(doc, {"schema_version", "label", "symbols", "lie_algebra", "forms", "vectors", "mapping_torus",
                       "periods", "toric", "scenario"},
                 "model");
  ModelFile m;
  m.schema_version = int_from_json(require(doc, "schema_version", "model"), "schema_version");
  if (m.schema_version != kModelSchemaVersion) {
    fail("schema_version", "unknown schema_version " + std::to_string(m.schema_version));
  }
  if (doc.contains("label")) m.label = doc.at("label").get<std::string>();

  if (doc.contains("symbols")) {
    const Json& s = doc.at("symbols");
    if (!s.is_array()) fail("symbols", "expected an array of names");
    std::vector<std::string> names;
    for (const auto& n : s) {
      if (!n.is_string()) fail("symbols", "symbol names must be strings");
      names.push_back(n.get<std::string>());
    }
    try {
      m.symbols = std::make_shared<const SymbolBasis>(std::move(names));
    } catch (const InputError& e) {
      fail("symbols", e.what());
    }
  }

  if (doc.contains("lie_algebra")) m.lie_algebra = lie_algebra_from_json(doc.at("lie_algebra"), "lie_algebra");
  const auto need_algebra = [&](const char* section) {
    if (!m.lie_algebra) fail(section, "requires a lie_algebra section");
    return m.lie_algebra->dim();
  };
  if (doc.contains("forms")) {
    const int dim = need_algebra("forms");
    for (const auto& [name, f] : doc.at("forms").items()) {
      m.forms.emplace(name, form_from_json(f, dim, m.symbols, "forms." + name));
    }
  }
  if (doc.contains("vectors")) {
    const int dim = need_algebra("vectors");
    for (const auto& [name, v] : doc.at("vectors").items()) {
      m.vectors.emplace(name, vector_from_json(v, dim, "vectors." + name));
    }
  }
  if (doc.contains("mapping_torus")) m.mapping_torus = mapping_torus_from_json(doc.at("mapping_torus"), "mapping_torus");
  if (doc.contains("periods")) {
    for (const auto& [name, arr] : doc.at("periods").items()) {
      if (!arr.is_array()) fail("periods." + name, "expected an array of periods");
      PeriodClass pc;
      for (std::size_t i = 0; i < arr.size(); ++i) {
        pc.periods.push_back(symbolic_from_json(arr[i], m.symbols, "periods." + name + "[" + std::to_string(i) + "]"));
      }
      m.periods.emplace(name, std::move(pc));
    }
  }
  if (doc.contains("toric")) m.toric = toric_from_json(doc.at("toric"), m.symbols, "toric");

  if (doc.contains("scenario")) {
    const Json& sc = doc.at("scenario");
    if (!sc.is_array()) fail("scenario", "expected an array of steps");
    std::set<std::string> ids;
    for (std::size_t k = 0; k < sc.size(); ++k) {
      const std::string w = "scenario[" + std::to_string(k) + "]";
      const Json& s = sc[k];
      reject_unknown(s, {"id", "op", "args", "expect", "output"}, w);
      ScenarioStep step;
      step.id = s.contains("id") ? s.at("id").get<std::string>() : "step" + std::to_string(k + 1);
      if (!ids.insert(step.id).second) fail(w, "duplicate step id '" + step.id + "'");
      step.op = require(s, "op", w).get<std::string>();
      if (s.contains("args")) {
        step.args = s.at("args");
        if (!step.args.is_object()) fail(w + ".args", "expected an object");
      }
      if (s.contains("expect")) step.expect = s.at("expect");
      if (s.contains("output")) step.output = s.at("output").get<std::string>();
      m.scenario.push_back(std::move(step));
    }
  }
  m.notes = validate_scenario(m);
  return m;
}

ModelFile load_model_text(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("parse error: ") + e.what());
  }
  try {
    return load_model_json(doc);
  } catch (const Json::exception& e) {
    throw InputError(std::string("invalid model: ") + e.what());
  }
}

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open model file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return load_model_text(buffer.str());
  } catch (const InputError& e) {
    throw InputError(path.filename().string() + ": " + e.what());
  }
}

Json model_to_json(const ModelFile& m) {
  Json doc;
  doc["schema_version"] = m.schema_version;
  doc["label"] = m.label;
  doc["symbols"] = m.symbols ? m.symbols->names() : std::vector<std::string>{};
  if (m.lie_algebra) doc["lie_algebra"] = lie_algebra_to_json(*m.lie_algebra);
  if (!m.forms.empty()) {
    Json forms = Json::object();
    for (const auto& [name, f] : m.forms) forms[name] = form_to_json(f);
    doc["forms"] = forms;
  }
  if (!m.vectors.empty()) {
    Json vectors = Json::object();
    for (const auto& [name, v] : m.vectors) vectors[name] = vector_to_json(v);
    doc["vectors"] = vectors;
  }
  if (m.mapping_torus) doc["mapping_torus"] = mapping_torus_to_json(*m.mapping_torus);
  if (!m.periods.empty()) {
    Json periods = Json::object();
    for (const auto& [name, pc] : m.periods) periods[name] = period_class_to_json(pc);
    doc["periods"] = periods;
  }
  if (m.toric) doc["toric"] = toric_to_json(*m.toric);
  Json steps = Json::array();
  for (const auto& s : m.scenario) {
    Json step{{"id", s.id}, {"op", s.op}, {"args", s.args}};
    if (s.expect) step["expect"] = *s.expect;
    if (!s.output.empty()) step["output"] = s.output;
    steps.push_back(step);
  }
  doc["scenario"] = steps;
  return doc;
}

}  // namespace cosym
