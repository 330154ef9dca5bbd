#include "cosym/scenario.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "cosym/errors.hpp"

namespace cosym {

std::string_view to_string(StepStatus s) {
  switch (s) {
    case StepStatus::Pass: return "pass";
    case StepStatus::Fail: return "fail";
    case StepStatus::Error: return "error";
    case StepStatus::Skipped: return "skipped";
  }
  return "unknown";
}

namespace {

inline constexpr double kMomentTolerance = 1e-6;
inline constexpr double kIsotropyTolerance = 1e-9;

enum class ArgKind {
  Form,          // name of a form
  Vector,        // name of a vector or an inline array
  VectorList,    // array of Vector
  Period,        // name of a period class
  PeriodList,    // array of period class names
  Record,        // name of a deformation output
  BettiList,     // inline int array or name of a list output
  IntList,
  Matrix,
  Bool,
  Int,
  Double,
  RationalValue,
  SymbolicList,
  ComplexPoint,  // array of [re, im] pairs (or real rationals)
  RationalPoint,
  SymbolicRows,
};

enum class Section { LieAlgebra, MappingTorus, Toric };
enum class OutputKind { None, Record, List, Period, Vector, Form };

struct ArgSpec {
  const char* name;
  ArgKind kind;
  bool required;
};

struct Context;
struct Outcome {
  bool verdict = true;
  Json value = Json::object();
};
using Executor = std::function<Outcome(Context&, const ScenarioStep&)>;

struct OpSpec {
  const char* name;
  const char* anchor;
  std::vector<ArgSpec> args;
  std::vector<Section> sections;
  OutputKind output;
  Executor run;
};

struct Context {
  const ModelFile& model;
  std::uint64_t seed;
  std::map<std::string, SymbolicForm> forms;
  std::map<std::string, AlgVector> vectors;
  std::map<std::string, PeriodClass> periods;
  std::map<std::string, DeformationRecord> records;
  std::map<std::string, std::vector<int>> lists;
  std::set<std::string> torus_period_names;  // periods of linear foliations on torus models
  std::vector<std::string> notes;
};

// ----------------------------------------------------------- arg decoding

const Json& arg(const ScenarioStep& s, const char* name) {
  if (!s.args.contains(name)) throw InputError("step " + s.id + ": missing argument '" + name + "'");
  return s.args.at(name);
}

std::string where(const ScenarioStep& s, const char* name) { return "scenario." + s.id + ".args." + name; }

std::string ref_name(const Json& j, const std::string& w) {
  if (!j.is_string()) throw InputError(w + ": expected a name");
  return j.get<std::string>();
}

std::vector<int> int_list(const Json& j, const std::string& w) {
  if (!j.is_array()) throw InputError(w + ": expected an array of integers");
  std::vector<int> out;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw InputError(w + ": expected an array of integers");
    out.push_back(x.get<int>());
  }
  return out;
}

std::vector<long> long_list(const Json& j, const std::string& w) {
  std::vector<long> out;
  for (int x : int_list(j, w)) out.push_back(x);
  return out;
}

std::vector<SymbolicReal> symbolic_list(const Json& j, const BasisPtr& basis, const std::string& w) {
  if (!j.is_array()) throw InputError(w + ": expected an array");
  std::vector<SymbolicReal> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(symbolic_from_json(j[i], basis, w + "[" + std::to_string(i) + "]"));
  return out;
}

Point rational_point(const Json& j, const std::string& w) {
  if (!j.is_array()) throw InputError(w + ": expected an array of rationals");
  Point p;
  for (std::size_t i = 0; i < j.size(); ++i) p.push_back(rational_from_json(j[i], w + "[" + std::to_string(i) + "]"));
  return p;
}

ProjectivePoint complex_point(const Json& j, const std::string& w) {
  if (!j.is_array()) throw InputError(w + ": expected an array of coordinates");
  std::vector<ComplexRational> coords;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string wi = w + "[" + std::to_string(i) + "]";
    if (j[i].is_array()) {
      if (j[i].size() != 2) throw InputError(wi + ": complex coordinates are [re, im]");
      coords.push_back({rational_from_json(j[i][0], wi), rational_from_json(j[i][1], wi)});
    } else {
      coords.push_back({rational_from_json(j[i], wi), Rational(0)});
    }
  }
  try {
    return ProjectivePoint(std::move(coords));
  } catch (const InputError& e) {
    throw InputError(w + ": " + e.what());
  }
}

std::vector<std::vector<SymbolicReal>> symbolic_rows(const Json& j, const BasisPtr& basis, const std::string& w) {
  if (!j.is_array()) throw InputError(w + ": expected an array of rows");
  std::vector<std::vector<SymbolicReal>> rows;
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Json& row = j[r].is_array() ? j[r] : Json::array({j[r]});
    rows.push_back(symbolic_list(row, basis, w + "[" + std::to_string(r) + "]"));
  }
  return rows;
}

const SymbolicForm& form(Context& ctx, const ScenarioStep& s, const char* name) {
  return ctx.forms.at(ref_name(arg(s, name), where(s, name)));
}

AlgVector vector_value(Context& ctx, const Json& j, const std::string& w) {
  if (j.is_string()) return ctx.vectors.at(j.get<std::string>());
  if (!ctx.model.lie_algebra) throw InputError(w + ": inline vectors need a lie_algebra section");
  const int dim = ctx.model.lie_algebra->dim();
  if (!j.is_array() || static_cast<int>(j.size()) != dim) throw InputError(w + ": expected " + std::to_string(dim) + " rationals");
  AlgVector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = rational_from_json(j[static_cast<std::size_t>(i)], w);
  return v;
}

std::vector<int> betti_list(Context& ctx, const ScenarioStep& s, const char* name) {
  const Json& j = arg(s, name);
  if (j.is_string()) return ctx.lists.at(j.get<std::string>());
  return int_list(j, where(s, name));
}

CosymplecticPair pair_from(Context& ctx, const ScenarioStep& s) {
  const SymbolicForm& eta = form(ctx, s, "eta");
  const SymbolicForm& omega = form(ctx, s, "omega");
  return CosymplecticPair::make(*ctx.model.lie_algebra, eta, omega.rational_part());
}

Matrix gluing_matrix(Context& ctx, const ScenarioStep& s) {
  if (s.args.contains("matrix")) return matrix_from_json(s.args.at("matrix"), where(s, "matrix"));
  const int p = arg(s, "degree").get<int>();
  const auto& mt = *ctx.model.mapping_torus;
  if (p < 0 || p >= static_cast<int>(mt.phi_star.size())) throw InputError(where(s, "degree") + ": no such degree");
  return mt.phi_star[static_cast<std::size_t>(p)];
}

// --------------------------------------------------------- value encoders

Json symbolic_list_json(const std::vector<SymbolicReal>& xs) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(symbolic_to_json(x));
  return out;
}

Json rational_list_json(const std::vector<Rational>& xs) {
  Json out = Json::array();
  for (const auto& x : xs) out.push_back(rational_to_json(x));
  return out;
}

Json vertices_json(const std::vector<Point>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) out.push_back(point_to_json(v));
  return out;
}

Json pair_json(const CosymplecticPair& p) {
  return Json{{"eta", form_to_json(p.eta())}, {"omega", form_to_json(p.omega())}, {"volume", symbolic_to_json(p.volume())}};
}

Json record_json(const DeformationRecord& r) {
  Json param = r.kind == DeformationKind::TypeI ? vector_to_json(std::get<AlgVector>(r.parameter))
                                                 : form_to_json(std::get<SymbolicForm>(r.parameter));
  return Json{{"kind", r.kind == DeformationKind::TypeI ? "I" : "II"},
              {"parameter", param},
              {"scale", rational_to_json(r.scale)},
              {"input", pair_json(r.input)},
              {"output", pair_json(r.output)}};
}

Json order_json(const OrderResult& o) {
  Json v;
  v["finite"] = o.is_finite();
  v["order"] = o.order ? Json(*o.order) : Json(nullptr);
  v["charpoly"] = rational_list_json(o.charpoly);
  v["cyclotomic"] = o.cyclotomic;
  v["exhaustive_bound"] = o.exhaustive_bound;
  return v;
}

bool is_standard_simplex(const std::vector<Point>& vs, int n) { return vs == standard_simplex_vertices(n); }

void register_record(Context& ctx, const ScenarioStep& s, const DeformationRecord& r) {
  if (s.output.empty()) return;
  ctx.records.insert_or_assign(s.output, r);
  ctx.forms.insert_or_assign(s.output + ".eta", r.output.eta());
  ctx.forms.insert_or_assign(s.output + ".omega", SymbolicForm(r.output.omega()));
}

void register_list(Context& ctx, const ScenarioStep& s, const std::vector<int>& xs) {
  if (!s.output.empty()) ctx.lists.insert_or_assign(s.output, xs);
}

// -------------------------------------------------------------- op table

Outcome run_deform(Context& ctx, const ScenarioStep& s, DeformationKind kind) {
  const CosymplecticPair pair = pair_from(ctx, s);
  const DeformationRecord r =
      kind == DeformationKind::TypeI
          ? deform_type_I(pair, vector_value(ctx, arg(s, "theta"), where(s, "theta")))
          : deform_type_II(pair, form(ctx, s, "beta"));
  register_record(ctx, s, r);
  Outcome o;
  o.value = record_json(r);
  o.value["is_cosymplectic"] = true;
  if (kind == DeformationKind::TypeI) {
    // eta' ^ omega'^n = (1 + eta(theta))^{-(n+1)} eta ^ omega^n
    Rational factor = 1;
    for (int i = 0; i <= pair.n(); ++i) factor *= r.scale;
    o.value["volume_law"] = r.output.volume() * factor == r.input.volume();
    o.verdict = o.value["volume_law"].get<bool>();
  } else {
    o.value["reeb"] = vector_to_json(reeb(r.output));
    o.value["reeb_preserved"] = reeb(r.output) == reeb(r.input);
    o.verdict = o.value["reeb_preserved"].get<bool>();
  }
  return o;
}

const std::vector<OpSpec>& op_table() {
  using K = ArgKind;
  using S = Section;
  static const std::vector<OpSpec> table = {
      {"jacobi_check", "Jacobi identity (equivalently d o d = 0)", {}, {S::LieAlgebra}, OutputKind::None,
       [](Context& ctx, const ScenarioStep&) {
         const JacobiResult r = jacobi_check(*ctx.model.lie_algebra);
         Outcome o;
         o.verdict = r.ok;
         o.value["jacobi"] = r.ok;
         o.value["witness"] = r.witness ? Json::array({(*r.witness)[0] + 1, (*r.witness)[1] + 1, (*r.witness)[2] + 1})
                                        : Json(nullptr);
         return o;
       }},
      {"verify_cosymplectic", "cosymplectic structure: d eta = 0, d omega = 0, eta ^ omega^n != 0",
       {{"eta", K::Form, true}, {"omega", K::Form, true}}, {S::LieAlgebra}, OutputKind::None,
       [](Context& ctx, const ScenarioStep& s) {
         const CosymplecticVerdict v =
             verify_cosymplectic(*ctx.model.lie_algebra, form(ctx, s, "eta"), form(ctx, s, "omega").rational_part());
         Outcome o;
         o.verdict = v.is_cosymplectic();
         o.value = Json{{"is_cosymplectic", v.is_cosymplectic()}, {"d_eta_zero", v.d_eta_zero},
                        {"d_omega_zero", v.d_omega_zero}, {"volume_nonzero", v.volume_nonzero},
                        {"n", v.n}, {"volume", symbolic_to_json(v.volume)}};
         return o;
       }},
      {"reeb", "Reeb field: eta(R) = 1, contract(R, omega) = 0", {{"eta", K::Form, true}, {"omega", K::Form, true}},
       {S::LieAlgebra}, OutputKind::Vector,
       [](Context& ctx, const ScenarioStep& s) {
         const AlgVector r = reeb(pair_from(ctx, s));
         if (!s.output.empty()) ctx.vectors.insert_or_assign(s.output, r);
         Outcome o;
         o.value["reeb"] = vector_to_json(r);
         return o;
       }},
      {"hamiltonian_vector", "Hamiltonian field: eta(X) = 0, contract(X, omega) = df",
       {{"eta", K::Form, true}, {"omega", K::Form, true}, {"df", K::Form, true}}, {S::LieAlgebra}, OutputKind::Vector,
       [](Context& ctx, const ScenarioStep& s) {
         const AlgVector x = hamiltonian_vector(pair_from(ctx, s), form(ctx, s, "df").rational_part());
         if (!s.output.empty()) ctx.vectors.insert_or_assign(s.output, x);
         Outcome o;
         o.value["vector"] = vector_to_json(x);
         return o;
       }},
      {"splitting_obstruction", "Killing Reeb field forces the splitting ker(eta) + <R>",
       {{"eta", K::Form, true}, {"omega", K::Form, true}}, {S::LieAlgebra}, OutputKind::None,
       [](Context& ctx, const ScenarioStep& s) {
         const SplittingVerdict v = splitting_obstruction(pair_from(ctx, s));
         Outcome o;
         o.verdict = v.splits();
         o.value = Json{{"splits", v.splits()}, {"ker_eta_ideal", v.ker_eta_ideal},
                        {"reeb_central_on_ker", v.reeb_central_on_ker}, {"reeb", vector_to_json(v.reeb)},
                        {"noncommuting", v.noncommuting ? vector_to_json(*v.noncommuting) : Json(nullptr)},
                        {"verdict", v.splits() ? "necessary condition satisfied"
                                               : "no adapted metric with Killing Reeb field exists"}};
         return o;
       }},
      {"deform_type_I", "type I deformation and volume scaling",
       {{"eta", K::Form, true}, {"omega", K::Form, true}, {"theta", K::Vector, true}}, {S::LieAlgebra},
       OutputKind::Record, [](Context& ctx, const ScenarioStep& s) { return run_deform(ctx, s, DeformationKind::TypeI); }},
      {"deform_type_II", "type II deformation by a closed basic 1-form",
       {{"eta", K::Form, true}, {"omega", K::Form, true}, {"beta", K::Form, true}}, {S::LieAlgebra},
       OutputKind::Record, [](Context& ctx, const ScenarioStep& s) { return run_deform(ctx, s, DeformationKind::TypeII); }},
      {"check_t_basic", "eta(A-bar) is constant and vanishes when the action has fixed points",
       {{"eta", K::Form, true}, {"generators", K::VectorList, true}, {"has_fixed_point", K::Bool, true}},
       {S::LieAlgebra}, OutputKind::None,
       [](Context& ctx, const ScenarioStep& s) {
         std::vector<AlgVector> gens;
         const Json& list = arg(s, "generators");
         for (std::size_t i = 0; i < list.size(); ++i) gens.push_back(vector_value(ctx, list[i], where(s, "generators")));
         const TBasicVerdict v =
             check_t_basic(*ctx.model.lie_algebra, form(ctx, s, "eta"), gens, arg(s, "has_fixed_point").get<bool>());
         Outcome o;
         o.verdict = !v.contradicts_fixed_point();
         o.value = Json{{"constants", symbolic_list_json(v.constants)}, {"basic", v.all_zero},
                        {"has_fixed_point", v.has_fixed_point},
                        {"verdict", v.contradicts_fixed_point() ? "contradiction with fixed point"
                                                                : (v.all_zero ? "basic" : "constants reported")}};
         return o;
       }},
      {"lie_derivative", "Cartan formula L_X = contract(X) d + d contract(X)",
       {{"vector", K::Vector, true}, {"form", K::Form, true}}, {S::LieAlgebra}, OutputKind::Form,
       [](Context& ctx, const ScenarioStep& s) {
         const SymbolicForm f = lie_derivative(*ctx.model.lie_algebra, vector_value(ctx, arg(s, "vector"), where(s, "vector")),
                                               form(ctx, s, "form"));
         if (!s.output.empty()) ctx.forms.insert_or_assign(s.output, f);
         Outcome o;
         o.value["form"] = form_to_json(f);
         return o;
       }},
      {"wang_betti", "Wang sequence of a mapping torus", {}, {S::MappingTorus}, OutputKind::List,
       [](Context& ctx, const ScenarioStep& s) {
         const auto b = wang_betti(*ctx.model.mapping_torus);
         register_list(ctx, s, b);
         Outcome o;
         o.value["betti"] = b;
         return o;
       }},
      {"toric_betti_check", "toric Betti relations b_2k = b_2k+1, b_1 = b_2n = 1", {{"betti", K::BettiList, true}}, {},
       OutputKind::None,
       [](Context& ctx, const ScenarioStep& s) {
         if (ctx.model.toric && !ctx.model.toric->is_toric()) {
           throw UnsupportedModelError("Hamiltonian, non-toric model: the toric Betti relations do not apply");
         }
         const auto b = betti_list(ctx, s, "betti");
         const ToricBettiVerdict v = toric_betti_check(b);
         Outcome o;
         o.verdict = v.holds();
         o.value = Json{{"holds", v.holds()}, {"betti", b}, {"b0_is_one", v.b0_is_one}, {"b1_is_one", v.b1_is_one},
                        {"b2n_is_one", v.b2n_is_one}, {"even_odd_pairs_equal", v.even_odd_pairs_equal},
                        {"first_unequal_pair", v.first_unequal_pair ? Json(*v.first_unequal_pair) : Json(nullptr)}};
         return o;
       }},
      {"poincare_from_fixed", "Poincare polynomial sum_B t^index(B) (1 + t)", {{"indices", K::IntList, true}}, {},
       OutputKind::List,
       [](Context& ctx, const ScenarioStep& s) {
         const auto p = poincare_from_fixed(FixedSetData{int_list(arg(s, "indices"), where(s, "indices"))});
         register_list(ctx, s, p);
         Outcome o;
         o.value["coefficients"] = p;
         return o;
       }},
      {"basic_betti", "b_p = b_p(basic) + b_p-1(basic), odd basic Betti numbers vanish", {{"betti", K::BettiList, true}},
       {}, OutputKind::List,
       [](Context& ctx, const ScenarioStep& s) {
         const auto b = betti_list(ctx, s, "betti");
         const BasicBettiResult r = basic_betti(b);
         bool odd_zero = true;
         for (std::size_t p = 1; p < r.basic.size(); p += 2) odd_zero &= r.basic[p] == 0;
         if (r.consistent) register_list(ctx, s, r.basic);
         Outcome o;
         o.verdict = r.consistent;
         o.value = Json{{"consistent", r.consistent}, {"basic", r.basic},
                        {"inconsistent_at", r.inconsistent_at ? Json(*r.inconsistent_at) : Json(nullptr)},
                        {"odd_basic_zero", r.consistent && odd_zero}};
         return o;
       }},
      {"finite_order", "finite order of the gluing map on cohomology",
       {{"matrix", K::Matrix, false}, {"degree", K::Int, false}}, {}, OutputKind::None,
       [](Context& ctx, const ScenarioStep& s) {
         const OrderResult r = finite_order(gluing_matrix(ctx, s));
         Outcome o;
         o.verdict = r.is_finite();
         o.value = order_json(r);
         return o;
       }},
      {"k_cosymplectic_obstruction_torus", "infinite-order gluing admits no K-cosymplectic metric",
       {{"matrix", K::Matrix, false}, {"degree", K::Int, false}}, {}, OutputKind::None,
       [](Context& ctx, const ScenarioStep& s) {
         const KObstruction k = k_cosymplectic_obstruction_torus(gluing_matrix(ctx, s));
         Outcome o;
         o.verdict = k.verdict == KCosymplecticVerdict::ObstructionVacuous;
         o.value = order_json(k.order);
         o.value["verdict"] = describe(k.verdict);
         return o;
       }},
      {"fibration_check", "Tischler criterion: a multiple of an integer class fibers over the circle",
       {{"periods", K::Period, true}}, {}, OutputKind::None,
       [](Context& ctx, const ScenarioStep& s) {
         const std::string name = ref_name(arg(s, "periods"), where(s, "periods"));
         const FibrationVerdict v = fibration_check(ctx.periods.at(name));
         Outcome o;
         o.verdict = v.rational_multiple_of_integer_class;
         std::string verdict = "fibers over S^1; leaves compact";
         if (!v.rational_multiple_of_integer_class) {
           verdict = ctx.torus_period_names.contains(name) ? "leaves noncompact (linear foliation of a torus model)"
                                                           : "no compactness guarantee from this criterion";
         }
         o.value = Json{{"rational_multiple_of_integer_class", v.rational_multiple_of_integer_class},
                        {"rank", v.rank},
                        {"generator", v.generator ? symbolic_to_json(*v.generator) : Json(nullptr)},
                        {"integer_periods", rational_list_json(v.integer_periods)},
                        {"scaling", v.scaling ? rational_to_json(*v.scaling) : Json(nullptr)},
                        {"verdict", verdict}};
         return o;
       }},
      {"rationalize_class", "closed basic correction making the class a multiple of an integer class",
       {{"periods", K::Period, true}, {"generators", K::PeriodList, true}}, {}, OutputKind::Period,
       [](Context& ctx, const ScenarioStep& s) {
         std::vector<PeriodClass> gens;
         for (const auto& g : arg(s, "generators")) gens.push_back(ctx.periods.at(g.get<std::string>()));
         const RationalizeResult r =
             rationalize_class(ctx.periods.at(ref_name(arg(s, "periods"), where(s, "periods"))), gens);
         if (r.feasible && !s.output.empty()) ctx.periods.insert_or_assign(s.output, r.corrected);
         Outcome o;
         o.verdict = r.feasible;
         o.value = Json{{"feasible", r.feasible}, {"coefficients", r.feasible ? rational_list_json(r.coefficients) : Json(nullptr)},
                        {"corrected", r.feasible ? period_class_to_json(r.corrected) : Json(nullptr)},
                        {"direction", r.feasible ? Json(r.direction) : Json(nullptr)}};
         return o;
       }},
      {"torus_periods", "periods of a closed 1-form on a torus model", {{"form", K::Form, true}}, {S::LieAlgebra},
       OutputKind::Period,
       [](Context& ctx, const ScenarioStep& s) {
         const PeriodClass pc = torus_periods(*ctx.model.lie_algebra, form(ctx, s, "form"));
         if (!s.output.empty()) {
           ctx.periods.insert_or_assign(s.output, pc);
           ctx.torus_period_names.insert(s.output);
         }
         Outcome o;
         o.value["periods"] = period_class_to_json(pc);
         return o;
       }},
      {"rank_over_q", "rank over Q of symbolic coefficient rows", {{"rows", K::SymbolicRows, true}}, {}, OutputKind::None,
       [](Context& ctx, const ScenarioStep& s) {
         const auto rows = symbolic_rows(arg(s, "rows"), ctx.model.symbols, where(s, "rows"));
         Outcome o;
         o.value["rank"] = rank_over_q(rows);
         return o;
       }},
      {"cpn_moment", "momentum map of the standard torus action on CP^n", {{"point", K::ComplexPoint, true}}, {},
       OutputKind::None,
       [](Context&, const ScenarioStep& s) {
         const Point mu = cpn_moment(complex_point(arg(s, "point"), where(s, "point")));
         Outcome o;
         o.value["moment"] = point_to_json(mu);
         o.value["in_simplex"] = in_standard_simplex(mu);
         o.verdict = o.value["in_simplex"].get<bool>();
         return o;
       }},
      {"in_standard_simplex", "standard simplex membership", {{"point", K::RationalPoint, true}}, {}, OutputKind::None,
       [](Context&, const ScenarioStep& s) {
         Outcome o;
         o.verdict = in_standard_simplex(rational_point(arg(s, "point"), where(s, "point")));
         o.value["inside"] = o.verdict;
         return o;
       }},
      {"moment_rescale", "type I deformation rescales the momentum map by 1/(1 + eta(theta))",
       {{"eta0_theta", K::RationalValue, false}}, {S::Toric}, OutputKind::None,
       [](Context& ctx, const ScenarioStep& s) {
         ToricMomentModel m = *ctx.model.toric;
         if (s.args.contains("eta0_theta")) m.eta0_theta = rational_from_json(s.args.at("eta0_theta"), where(s, "eta0_theta"));
         Outcome o;
         o.value["vertices"] = vertices_json(moment_rescale(m));
         o.value["scale"] = rational_to_json((1 + m.eta0_theta).inverse());
         return o;
       }},
      {"moment_unchanged_type_II", "type II deformation leaves omega and the momentum image unchanged",
       {{"record", K::Record, true}}, {S::Toric}, OutputKind::None,
       [](Context& ctx, const ScenarioStep& s) {
         const auto& m = *ctx.model.toric;
         const MomentUnchangedVerdict v =
             moment_unchanged_type_II(m, ctx.records.at(ref_name(arg(s, "record"), where(s, "record"))));
         Outcome o;
         o.verdict = v.unchanged;
         o.value = Json{{"unchanged", v.unchanged}, {"vertices", vertices_json(v.vertices)},
                        {"standard_simplex", is_standard_simplex(v.vertices, m.n)}};
         return o;
       }},
      {"dense_subgroup_check", "powers of t are dense iff {1, a_1, ..., a_n} is Q-independent",
       {{"a", K::SymbolicList, false}}, {}, OutputKind::None,
       [](Context& ctx, const ScenarioStep& s) {
         const auto a = s.args.contains("a") ? symbolic_list(s.args.at("a"), ctx.model.symbols, where(s, "a"))
                                             : ctx.model.toric->torus_element;
         Outcome o;
         o.verdict = dense_subgroup_check(a);
         o.value["dense"] = o.verdict;
         return o;
       }},
      {"closed_reeb_orbit_count", "closed Reeb orbits of L_t pass through the fixed points of the closure of <t>", {},
       {S::Toric}, OutputKind::None,
       [](Context& ctx, const ScenarioStep& s) {
         const ClosedOrbitResult r = closed_reeb_orbit_count(*ctx.model.toric);
         if (r.extension) {
           ctx.notes.push_back("step " + s.id +
                               ": t is neither dense nor of finite order; orbit count uses the identity component "
                               "of the closure of <t> (extension)");
         }
         Outcome o;
         const char* kind = r.kind == OrbitCountKind::Finite            ? "finite"
                            : r.kind == OrbitCountKind::AllOrbitsClosed ? "all_orbits_closed"
                                                                        : "infinitely_many";
         o.value = Json{{"kind", kind}, {"count", r.kind == OrbitCountKind::Finite ? Json(r.count) : Json(nullptr)},
                        {"dense", r.dense}, {"extension", r.extension}, {"fixed_components", r.fixed_components}};
         return o;
       }},
      {"moment_condition_residual", "momentum condition d mu^A = contract(A-bar, omega)",
       {{"n", K::Int, true}, {"weights", K::IntList, true}, {"samples", K::Int, true}, {"seed", K::Int, false},
        {"h", K::Double, false}},
       {}, OutputKind::None,
       [](Context& ctx, const ScenarioStep& s) {
         const auto w = long_list(arg(s, "weights"), where(s, "weights"));
         const std::uint64_t seed = s.args.contains("seed") ? s.args.at("seed").get<std::uint64_t>() : ctx.seed;
         const double h = s.args.contains("h") ? s.args.at("h").get<double>() : 1e-5;
         const ResidualRecord r = moment_condition_residual(arg(s, "n").get<int>(), w, arg(s, "samples").get<int>(), seed, h);
         Outcome o;
         o.verdict = r.max_residual < kMomentTolerance;
         o.value = Json{{"n", r.n}, {"A", r.weights}, {"samples", r.samples}, {"seed", r.seed}, {"h", r.h},
                        {"max_residual", r.max_residual}, {"tolerance", kMomentTolerance}};
         return o;
       }},
      {"orbit_isotropy_residual", "torus orbits are isotropic: omega(A-bar, B-bar) = 0",
       {{"n", K::Int, true}, {"a", K::IntList, true}, {"b", K::IntList, true}, {"samples", K::Int, true},
        {"seed", K::Int, false}},
       {}, OutputKind::None,
       [](Context& ctx, const ScenarioStep& s) {
         const auto a = long_list(arg(s, "a"), where(s, "a"));
         const auto b = long_list(arg(s, "b"), where(s, "b"));
         const std::uint64_t seed = s.args.contains("seed") ? s.args.at("seed").get<std::uint64_t>() : ctx.seed;
         const int n = arg(s, "n").get<int>();
         const int samples = arg(s, "samples").get<int>();
         const double r = orbit_isotropy_residual(n, a, b, samples, seed);
         Outcome o;
         o.verdict = r < kIsotropyTolerance;
         o.value = Json{{"n", n}, {"A", a}, {"B", b}, {"samples", samples}, {"seed", seed},
                        {"max_residual", r}, {"tolerance", kIsotropyTolerance}};
         return o;
       }},
  };
  return table;
}

const OpSpec* find_op(const std::string& name) {
  for (const auto& op : op_table()) {
    if (name == op.name) return &op;
  }
  return nullptr;
}

const char* section_name(Section s) {
  switch (s) {
    case Section::LieAlgebra: return "lie_algebra";
    case Section::MappingTorus: return "mapping_torus";
    case Section::Toric: return "toric";
  }
  return "?";
}

bool has_section(const ModelFile& m, Section s) {
  switch (s) {
    case Section::LieAlgebra: return m.lie_algebra.has_value();
    case Section::MappingTorus: return m.mapping_torus.has_value();
    case Section::Toric: return m.toric.has_value();
  }
  return false;
}

// Names a step reads, per namespace; used for validation and skipping.
struct Refs {
  std::vector<std::string> forms, vectors, periods, records, lists;
};

Refs collect_refs(const OpSpec& op, const ScenarioStep& s) {
  Refs r;
  for (const auto& a : op.args) {
    if (!s.args.contains(a.name)) continue;
    const Json& j = s.args.at(a.name);
    const std::string w = where(s, a.name);
    switch (a.kind) {
      case ArgKind::Form: r.forms.push_back(ref_name(j, w)); break;
      case ArgKind::Vector:
        if (j.is_string()) r.vectors.push_back(j.get<std::string>());
        break;
      case ArgKind::VectorList:
        if (!j.is_array()) throw InputError(w + ": expected an array");
        for (const auto& x : j) {
          if (x.is_string()) r.vectors.push_back(x.get<std::string>());
        }
        break;
      case ArgKind::Period: r.periods.push_back(ref_name(j, w)); break;
      case ArgKind::PeriodList:
        if (!j.is_array()) throw InputError(w + ": expected an array of names");
        for (const auto& x : j) r.periods.push_back(ref_name(x, w));
        break;
      case ArgKind::Record: r.records.push_back(ref_name(j, w)); break;
      case ArgKind::BettiList:
        if (j.is_string()) r.lists.push_back(j.get<std::string>());
        break;
      default: break;
    }
  }
  return r;
}

void check_inline(const ModelFile& m, const ArgSpec& a, const ScenarioStep& s) {
  const Json& j = s.args.at(a.name);
  const std::string w = where(s, a.name);
  switch (a.kind) {
    case ArgKind::Vector:
      if (!j.is_string() && !j.is_array()) throw InputError(w + ": expected a vector name or array");
      break;
    case ArgKind::BettiList:
      if (!j.is_string()) int_list(j, w);
      break;
    case ArgKind::IntList: int_list(j, w); break;
    case ArgKind::Matrix: matrix_from_json(j, w); break;
    case ArgKind::Bool:
      if (!j.is_boolean()) throw InputError(w + ": expected true or false");
      break;
    case ArgKind::Int:
      if (!j.is_number_integer()) throw InputError(w + ": expected an integer");
      break;
    case ArgKind::Double:
      if (!j.is_number()) throw InputError(w + ": expected a number");
      break;
    case ArgKind::RationalValue: rational_from_json(j, w); break;
    case ArgKind::SymbolicList: symbolic_list(j, m.symbols, w); break;
    case ArgKind::ComplexPoint: complex_point(j, w); break;
    case ArgKind::RationalPoint: rational_point(j, w); break;
    case ArgKind::SymbolicRows: symbolic_rows(j, m.symbols, w); break;
    default: break;
  }
}

void check_defined(const std::vector<std::string>& names, const std::set<std::string>& defined) {
  for (const auto& n : names) {
    if (!defined.contains(n)) throw InputError("dangling reference " + n);
  }
}

}  // namespace

// --------------------------------------------------------------- validation

std::vector<std::string> validate_scenario(const ModelFile& m) {
  std::set<std::string> forms, vectors, periods, records, lists;
  for (const auto& [k, v] : m.forms) forms.insert(k);
  for (const auto& [k, v] : m.vectors) vectors.insert(k);
  for (const auto& [k, v] : m.periods) periods.insert(k);
  std::set<Section> used;

  for (const auto& s : m.scenario) {
    const OpSpec* op = find_op(s.op);
    if (!op) throw InputError("scenario." + s.id + ": unknown op '" + s.op + "'");
    for (const auto& [key, value] : s.args.items()) {
      const bool known = std::any_of(op->args.begin(), op->args.end(), [&](const ArgSpec& a) { return key == a.name; });
      if (!known) throw InputError("scenario." + s.id + ": unknown argument '" + key + "' for " + s.op);
    }
    for (const auto& a : op->args) {
      if (!s.args.contains(a.name)) {
        if (a.required) throw InputError("scenario." + s.id + ": missing argument '" + a.name + "'");
        continue;
      }
      check_inline(m, a, s);
    }
    std::vector<Section> sections = op->sections;
    const std::string name = s.op;
    if (name == "finite_order" || name == "k_cosymplectic_obstruction_torus") {
      if (s.args.contains("matrix") == s.args.contains("degree")) {
        throw InputError("scenario." + s.id + ": give exactly one of 'matrix' or 'degree'");
      }
      if (s.args.contains("degree")) sections.push_back(Section::MappingTorus);
    }
    if (name == "dense_subgroup_check" && !s.args.contains("a")) sections.push_back(Section::Toric);
    if (!s.args.empty() && std::any_of(op->args.begin(), op->args.end(), [&](const ArgSpec& a) {
          return a.kind == ArgKind::Vector && s.args.contains(a.name) && s.args.at(a.name).is_array();
        })) {
      sections.push_back(Section::LieAlgebra);
    }
    for (Section sec : sections) {
      if (!has_section(m, sec)) {
        throw InputError("scenario." + s.id + ": op " + s.op + " needs a " + section_name(sec) + " section");
      }
      used.insert(sec);
    }

    const Refs refs = collect_refs(*op, s);
    check_defined(refs.forms, forms);
    check_defined(refs.vectors, vectors);
    check_defined(refs.periods, periods);
    check_defined(refs.records, records);
    check_defined(refs.lists, lists);

    if (!s.output.empty()) {
      switch (op->output) {
        case OutputKind::None: throw InputError("scenario." + s.id + ": op " + s.op + " produces no named output");
        case OutputKind::Record:
          records.insert(s.output);
          forms.insert(s.output + ".eta");
          forms.insert(s.output + ".omega");
          break;
        case OutputKind::List: lists.insert(s.output); break;
        case OutputKind::Period: periods.insert(s.output); break;
        case OutputKind::Vector: vectors.insert(s.output); break;
        case OutputKind::Form: forms.insert(s.output); break;
      }
    }
  }

  std::vector<std::string> notes;
  if (!m.scenario.empty()) {
    for (Section sec : {Section::LieAlgebra, Section::MappingTorus, Section::Toric}) {
      if (has_section(m, sec) && !used.contains(sec)) {
        notes.push_back(std::string("section '") + section_name(sec) + "' is not used by the scenario");
      }
    }
  }
  return notes;
}

// ---------------------------------------------------------------- running

bool Report::passed() const {
  return std::all_of(steps.begin(), steps.end(), [](const StepResult& s) {
    return s.status == StepStatus::Pass || s.status == StepStatus::Skipped;
  });
}

int Report::exit_code() const {
  for (const auto& s : steps) {
    if (s.status == StepStatus::Error && s.error_kind == ErrorKind::Input) return 2;
  }
  return passed() ? 0 : 1;
}

namespace {

std::vector<std::string> compare_expectation(const Json& expect, const Json& value) {
  std::vector<std::string> mismatches;
  if (!expect.is_object()) return {"expect must be an object"};
  for (const auto& [key, want] : expect.items()) {
    if (!value.contains(key)) {
      mismatches.push_back(key + ": not produced");
    } else if (value.at(key) != want) {
      mismatches.push_back(key + ": expected " + want.dump() + ", got " + value.at(key).dump());
    }
  }
  return mismatches;
}

Json conventions_ledger() {
  return Json{
      {"ce_differential", "(d alpha)(X,Y) = -alpha([X,Y]) on 1-forms, extended as an antiderivation"},
      {"contraction", "contract(e_k, e^{i1..ip}) removes i_s = k with sign (-1)^(s-1)"},
      {"reeb_invariance", "invariance under the Reeb flow is tested as contract(R, form) = 0"},
      {"momentum_map", "CP^n: mu_j = |z_j|^2 / sum_i |z_i|^2, image the unit standard simplex"},
      {"betti_coefficients", "real Betti numbers over Q; torsion ignored"},
  };
}

}  // namespace

Report run_scenario(const ModelFile& m, std::uint64_t default_seed) {
  Report report;
  report.model_label = m.label;
  report.conventions = conventions_ledger();
  if (m.symbols && m.symbols->size() > 0) {
    std::string set = "{1";
    for (const auto& n : m.symbols->names()) set += ", " + n;
    set += "}";
    report.assumptions.push_back(set + " declared linearly independent over Q (asserted, not verified)");
  }
  report.notes = m.notes;
  if (m.toric && !m.toric->is_toric()) {
    report.notes.push_back("toric section: Hamiltonian, non-toric (dim M = " + std::to_string(m.toric->manifold_dim) +
                           " != 2n+1); toric Betti relations skipped");
  }

  Context ctx{m, default_seed, m.forms, m.vectors, m.periods, {}, {}, {}, {}};
  std::set<std::string> unavailable;

  for (const auto& s : m.scenario) {
    const OpSpec* op = find_op(s.op);
    StepResult r;
    r.id = s.id;
    r.op = s.op;
    r.anchor = op->anchor;
    r.expected = s.expect;

    const Refs refs = collect_refs(*op, s);
    std::string missing;
    for (const auto* names : {&refs.forms, &refs.vectors, &refs.periods, &refs.records, &refs.lists}) {
      for (const auto& n : *names) {
        if (unavailable.contains(n) && missing.empty()) missing = n;
      }
    }
    const auto mark_outputs_unavailable = [&] {
      if (s.output.empty()) return;
      unavailable.insert(s.output);
      unavailable.insert(s.output + ".eta");
      unavailable.insert(s.output + ".omega");
    };

    if (!missing.empty()) {
      r.status = StepStatus::Skipped;
      r.error_message = "depends on '" + missing + "', which was not produced";
      mark_outputs_unavailable();
      report.steps.push_back(std::move(r));
      continue;
    }
    if (s.op == "toric_betti_check" && m.toric && !m.toric->is_toric()) {
      r.status = StepStatus::Skipped;
      r.error_message = "Hamiltonian, non-toric model";
      report.steps.push_back(std::move(r));
      continue;
    }

    try {
      Outcome o = op->run(ctx, s);
      r.verdict = o.verdict;
      r.value = std::move(o.value);
      if (s.expect && s.expect->contains("error")) {
        r.mismatches.push_back("error: expected " + s.expect->at("error").dump() + ", step succeeded");
      } else if (s.expect) {
        r.mismatches = compare_expectation(*s.expect, r.value);
      } else if (!r.verdict) {
        r.mismatches.push_back("verdict is false");
      }
      r.status = r.mismatches.empty() ? StepStatus::Pass : StepStatus::Fail;
    } catch (const Error& e) {
      r.error_kind = e.kind();
      r.error_message = e.what();
      mark_outputs_unavailable();
      const bool expected_error = s.expect && s.expect->contains("error") &&
                                  s.expect->at("error") == std::string(to_string(e.kind()));
      r.status = expected_error ? StepStatus::Pass : StepStatus::Error;
    }
    report.steps.push_back(std::move(r));
  }
  report.notes.insert(report.notes.end(), ctx.notes.begin(), ctx.notes.end());
  return report;
}

// --------------------------------------------------------------- emission

Json report_to_json(const Report& r) {
  Json steps = Json::array();
  for (const auto& s : r.steps) {
    Json j{{"id", s.id}, {"op", s.op}, {"anchor", s.anchor}, {"status", std::string(to_string(s.status))},
           {"verdict", s.verdict}, {"value", s.value}};
    if (s.expected) j["expected"] = *s.expected;
    if (!s.mismatches.empty()) j["mismatches"] = s.mismatches;
    if (s.error_kind) {
      j["error"] = Json{{"kind", std::string(to_string(*s.error_kind))}, {"message", s.error_message}};
    } else if (!s.error_message.empty()) {
      j["reason"] = s.error_message;
    }
    steps.push_back(std::move(j));
  }
  return Json{{"report_schema_version", kReportSchemaVersion},
              {"model", r.model_label},
              {"conventions", r.conventions},
              {"assumptions", r.assumptions},
              {"notes", r.notes},
              {"steps", steps},
              {"overall", r.passed() ? "pass" : "fail"},
              {"exit_code", r.exit_code()}};
}

std::vector<std::pair<std::string, StepStatus>> verdicts_from_json(const Json& report) {
  std::vector<std::pair<std::string, StepStatus>> out;
  for (const auto& s : report.at("steps")) {
    const std::string status = s.at("status").get<std::string>();
    StepStatus st = StepStatus::Error;
    for (StepStatus c : {StepStatus::Pass, StepStatus::Fail, StepStatus::Error, StepStatus::Skipped}) {
      if (status == to_string(c)) st = c;
    }
    out.emplace_back(s.at("id").get<std::string>(), st);
  }
  return out;
}

std::string emit_report(const Report& r, ReportFormat format) {
  if (format == ReportFormat::Json) return report_to_json(r).dump(2) + "\n";

  std::ostringstream os;
  os << "report (schema " << kReportSchemaVersion << ") for model '" << r.model_label << "'\n";
  os << "conventions:\n";
  for (const auto& [key, value] : r.conventions.items()) os << "  " << key << ": " << value.get<std::string>() << "\n";
  for (const auto& a : r.assumptions) os << "assumption: " << a << "\n";
  for (const auto& n : r.notes) os << "note: " << n << "\n";
  std::size_t counts[4] = {0, 0, 0, 0};
  for (const auto& s : r.steps) {
    ++counts[static_cast<int>(s.status)];
    const char* tag = s.status == StepStatus::Pass   ? "PASS"
                      : s.status == StepStatus::Fail ? "FAIL"
                      : s.status == StepStatus::Error ? "ERROR"
                                                      : "SKIP";
    os << "[" << tag << "] " << s.id << " " << s.op << " -- " << s.anchor << "\n";
    if (!s.value.empty()) os << "    value: " << s.value.dump() << "\n";
    for (const auto& mm : s.mismatches) os << "    mismatch: " << mm << "\n";
    if (s.error_kind) os << "    " << to_string(*s.error_kind) << " error: " << s.error_message << "\n";
    else if (!s.error_message.empty()) os << "    reason: " << s.error_message << "\n";
  }
  os << "summary: " << counts[0] << " passed, " << counts[1] << " failed, " << counts[2] << " errors, " << counts[3]
     << " skipped; exit code " << r.exit_code() << "\n";
  return os.str();
}

}  // namespace cosym
