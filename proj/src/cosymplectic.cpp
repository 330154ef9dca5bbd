#include "cosym/cosymplectic.hpp"

#include <algorithm>
#include <sstream>

#include "cosym/errors.hpp"
#include "cosym/matrix.hpp"

namespace cosym {

// ------------------------------------------------------------- SymbolicForm

SymbolicForm::SymbolicForm(const AltForm& rational_part)
    : dim_(rational_part.dim()), degree_(rational_part.degree()) {
  if (!rational_part.is_zero()) components_.emplace(0, rational_part);
}

void SymbolicForm::add(const BasisPtr& basis, std::size_t symbol, const AltForm& form) {
  if (components_.empty() && !basis_ && dim_ == 0) {
    dim_ = form.dim();
    degree_ = form.degree();
  }
  if (form.dim() != dim_ || form.degree() != degree_) throw InputError("symbolic form shape mismatch");
  if (symbol != 0) {
    if (!basis || symbol > basis->size()) throw InputError("symbol index out of range");
    if (basis_ && basis_ != basis && !(*basis_ == *basis)) throw InputError("mixed symbol bases");
    basis_ = basis;
  }
  auto [it, inserted] = components_.try_emplace(symbol, form);
  if (!inserted) it->second += form;
  if (it->second.is_zero()) components_.erase(it);
}

AltForm SymbolicForm::component(std::size_t symbol) const {
  const auto it = components_.find(symbol);
  return it == components_.end() ? AltForm(dim_, degree_) : it->second;
}

bool SymbolicForm::is_rational() const noexcept {
  return components_.empty() || (components_.size() == 1 && components_.begin()->first == 0);
}

AltForm SymbolicForm::rational_part() const {
  if (!is_rational()) throw InputError("form " + str() + " has symbolic coefficients");
  return component(0);
}

SymbolicReal SymbolicForm::coefficient(IndexSet set) const {
  SymbolicReal out;
  for (const auto& [s, f] : components_) out += SymbolicReal(basis_, s, f.coefficient(set));
  return out;
}

SymbolicForm& SymbolicForm::operator+=(const SymbolicForm& o) {
  if (is_zero() && dim_ == 0) {
    dim_ = o.dim_;
    degree_ = o.degree_;
  }
  if (o.dim_ != dim_ || o.degree_ != degree_) throw InputError("sum of symbolic forms of different shape");
  for (const auto& [s, f] : o.components_) add(o.basis_, s, f);
  return *this;
}

SymbolicForm& SymbolicForm::operator*=(const Rational& r) {
  if (r.is_zero()) {
    components_.clear();
    return *this;
  }
  for (auto& [s, f] : components_) f *= r;
  return *this;
}

bool operator==(const SymbolicForm& a, const SymbolicForm& b) {
  if (a.dim_ != b.dim_ || a.degree_ != b.degree_ || a.components_ != b.components_) return false;
  if (a.is_rational()) return true;
  return *a.basis_ == *b.basis_;
}

std::string SymbolicForm::str() const {
  if (components_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [s, f] : components_) {
    if (!first) os << " + ";
    if (s == 0) {
      os << f.str();
    } else {
      os << basis_->name(s) << "*(" << f.str() << ")";
    }
    first = false;
  }
  return os.str();
}

namespace {

template <class Op>
SymbolicForm map_components(const SymbolicForm& a, int dim, int degree, Op op) {
  SymbolicForm out(dim, degree);
  for (const auto& [s, f] : a.components()) out.add(a.basis(), s, op(f));
  return out;
}

}  // namespace

SymbolicForm ce_d(const LieAlgebra& g, const SymbolicForm& a) {
  return map_components(a, a.dim(), a.degree() + 1, [&](const AltForm& f) { return ce_d(g, f); });
}

SymbolicForm contract(const AlgVector& x, const SymbolicForm& a) {
  if (a.degree() == 0) throw InputError("contraction of a degree-0 form");
  return map_components(a, a.dim(), a.degree() - 1, [&](const AltForm& f) { return contract(x, f); });
}

SymbolicForm lie_derivative(const LieAlgebra& g, const AlgVector& x, const SymbolicForm& a) {
  return map_components(a, a.dim(), a.degree(), [&](const AltForm& f) { return lie_derivative(g, x, f); });
}

SymbolicForm wedge(const SymbolicForm& a, const AltForm& b) {
  return map_components(a, a.dim(), a.degree() + b.degree(), [&](const AltForm& f) { return wedge(f, b); });
}

SymbolicReal pairing(const SymbolicForm& one_form, const AlgVector& x) {
  if (one_form.degree() != 1) throw InputError("pairing expects a 1-form");
  SymbolicReal out;
  for (const auto& [s, f] : one_form.components()) out += SymbolicReal(one_form.basis(), s, pairing(f, x));
  return out;
}

// ------------------------------------------------------------- verification

CosymplecticVerdict verify_cosymplectic(const LieAlgebra& g, const SymbolicForm& eta, const AltForm& omega) {
  const int dim = g.dim();
  if (dim % 2 == 0) throw InputError("cosymplectic structures need odd dimension, got " + std::to_string(dim));
  if (eta.degree() != 1) throw InputError("eta must be a 1-form");
  if (omega.degree() != 2) throw InputError("omega must be a 2-form");
  if ((eta.dim() != dim && !eta.is_zero()) || omega.dim() != dim) {
    throw InputError("forms and Lie algebra have different dimensions");
  }
  require_jacobi(g);

  CosymplecticVerdict v;
  v.n = (dim - 1) / 2;
  v.d_eta_zero = ce_d(g, eta).is_zero();
  v.d_omega_zero = ce_d(g, omega).is_zero();
  const SymbolicForm eta_full = eta.is_zero() ? SymbolicForm(dim, 1) : eta;
  const SymbolicForm top = wedge(eta_full, wedge_power(omega, v.n));
  const IndexSet all = dim == kMaxDim ? ~IndexSet{0} : ((IndexSet{1} << dim) - 1);
  v.volume = top.coefficient(all);
  v.volume_nonzero = !v.volume.is_zero();
  return v;
}

CosymplecticPair CosymplecticPair::make(LieAlgebra g, SymbolicForm eta, AltForm omega) {
  const CosymplecticVerdict v = verify_cosymplectic(g, eta, omega);
  if (!v.d_eta_zero) throw PreconditionError("eta is not closed: d eta = " + ce_d(g, eta).str());
  if (!v.d_omega_zero) throw PreconditionError("omega is not closed: d omega = " + ce_d(g, omega).str());
  if (!v.volume_nonzero) throw PreconditionError("eta ^ omega^n vanishes");
  return CosymplecticPair(std::move(g), std::move(eta), std::move(omega), v.volume);
}

namespace {

// Rows: one per symbolic component s of eta, requiring eta_s(X) = (s == 0 ? eta_value : 0);
// then contract(X, omega) = rhs coordinatewise.
SolveResult solve_structure_system(const CosymplecticPair& pair, const Rational& eta_value, const AltForm& rhs) {
  const int dim = pair.algebra().dim();
  std::vector<Vector> rows;
  Vector b;
  bool has_rational_component = false;
  for (const auto& [s, f] : pair.eta().components()) {
    Vector row(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) row[static_cast<std::size_t>(i)] = f.coefficient(IndexSet{1} << i);
    rows.push_back(std::move(row));
    b.push_back(s == 0 ? eta_value : Rational(0));
    has_rational_component |= (s == 0);
  }
  if (!has_rational_component && !eta_value.is_zero()) {
    rows.emplace_back(static_cast<std::size_t>(dim));
    b.push_back(eta_value);
  }
  // contract(X, omega)_j = sum_i X_i omega(e_i, e_j)
  for (int j = 0; j < dim; ++j) {
    Vector row(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
      if (i == j) continue;
      const IndexSet set = (IndexSet{1} << i) | (IndexSet{1} << j);
      const Rational c = pair.omega().coefficient(set);
      row[static_cast<std::size_t>(i)] = i < j ? c : -c;
    }
    rows.push_back(std::move(row));
    b.push_back(rhs.coefficient(IndexSet{1} << j));
  }
  return solve_linear(Matrix::from_rows(rows, static_cast<std::size_t>(dim)), b);
}

[[noreturn]] void structure_system_failure(const CosymplecticPair& pair, const SolveResult& r,
                                           const std::string& what) {
  if (!pair.eta().is_rational()) {
    throw UnsupportedModelError(what + " has no rational solution for a symbolic eta");
  }
  throw IntegrityError(what + (r.status == SolveStatus::NoSolution
                                    ? " system has no solution"
                                    : " system is underdetermined (kernel dimension " +
                                          std::to_string(r.kernel_dim()) + ")"));
}

}  // namespace

AlgVector reeb(const CosymplecticPair& pair) {
  const AltForm zero(pair.algebra().dim(), 1);
  const SolveResult r = solve_structure_system(pair, 1, zero);
  if (r.status != SolveStatus::Unique) structure_system_failure(pair, r, "Reeb");
  return AlgVector(r.solution);
}

AlgVector hamiltonian_vector(const CosymplecticPair& pair, const AltForm& df) {
  const LieAlgebra& g = pair.algebra();
  if (df.degree() != 1 || df.dim() != g.dim()) throw InputError("df must be a 1-form on the algebra");
  if (!ce_d(g, df).is_zero()) throw PreconditionError("df is not closed");
  const Rational along_reeb = pairing(df, reeb(pair));
  if (!along_reeb.is_zero()) {
    throw PreconditionError("not Reeb-basic: df(R) = " + along_reeb.str() + " != 0");
  }
  const SolveResult r = solve_structure_system(pair, 0, df);
  if (r.status != SolveStatus::Unique) structure_system_failure(pair, r, "Hamiltonian");
  return AlgVector(r.solution);
}

SplittingVerdict splitting_obstruction(const CosymplecticPair& pair) {
  if (!pair.eta().is_rational()) throw UnsupportedModelError("splitting test needs a rational eta");
  const LieAlgebra& g = pair.algebra();
  const int dim = g.dim();
  const AltForm eta = pair.eta().rational_part();

  SplittingVerdict v;
  v.reeb = reeb(pair);
  Matrix eta_row(1, static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) eta_row(0, static_cast<std::size_t>(i)) = eta.coefficient(IndexSet{1} << i);
  std::vector<AlgVector> ker;
  for (auto& k : kernel_basis(eta_row)) ker.emplace_back(std::move(k));

  v.ker_eta_ideal = true;
  for (const auto& y : ker) {
    for (int i = 0; i < dim && v.ker_eta_ideal; ++i) {
      if (!pairing(eta, g.bracket(AlgVector::basis(dim, i), y)).is_zero()) v.ker_eta_ideal = false;
    }
  }
  v.reeb_central_on_ker = true;
  for (const auto& x : ker) {
    if (!g.bracket(v.reeb, x).is_zero()) {
      v.reeb_central_on_ker = false;
      v.noncommuting = x;
      break;
    }
  }
  return v;
}

// ------------------------------------------------------------- deformations

DeformationRecord deform_type_I(const CosymplecticPair& pair, const AlgVector& theta) {
  if (!pair.eta().is_rational()) throw UnsupportedModelError("type I deformation needs a rational eta");
  const LieAlgebra& g = pair.algebra();
  if (theta.dim() != g.dim()) throw InputError("theta has wrong dimension");
  const AltForm eta = pair.eta().rational_part();
  const AltForm& omega = pair.omega();

  const Rational scale = 1 + pairing(eta, theta);
  if (scale.sign() <= 0) {
    throw PreconditionError("1+eta(theta) <= 0 (1+eta(theta) = " + scale.str() + ")");
  }
  if (!lie_derivative(g, theta, eta).is_zero() || !lie_derivative(g, theta, omega).is_zero()) {
    throw PreconditionError("theta is not a cosymplectic vector: L_theta eta or L_theta omega is nonzero");
  }

  const Rational inv = scale.inverse();
  const AltForm eta_new = inv * eta;
  const AltForm omega_new = inv * (omega + wedge(contract(theta, omega), eta_new));
  try {
    CosymplecticPair out = CosymplecticPair::make(g, eta_new, omega_new);
    return DeformationRecord{DeformationKind::TypeI, pair, theta, std::move(out), scale};
  } catch (const PreconditionError& e) {
    throw IntegrityError(std::string("type I deformation lost the cosymplectic property: ") + e.what());
  }
}

DeformationRecord deform_type_II(const CosymplecticPair& pair, const SymbolicForm& beta_in) {
  const LieAlgebra& g = pair.algebra();
  const SymbolicForm beta = beta_in.is_zero() ? SymbolicForm(g.dim(), 1) : beta_in;
  if (beta.degree() != 1 || beta.dim() != g.dim()) throw InputError("beta must be a 1-form on the algebra");
  if (!ce_d(g, beta).is_zero()) throw PreconditionError("beta is not closed: d beta = " + ce_d(g, beta).str());
  const AlgVector r = reeb(pair);
  const SymbolicReal along_reeb = pairing(beta, r);
  if (!along_reeb.is_zero()) {
    throw PreconditionError("not R-basic: beta(R) = " + along_reeb.str() + " != 0");
  }
  CosymplecticPair out = [&] {
    try {
      return CosymplecticPair::make(g, pair.eta() + beta, pair.omega());
    } catch (const PreconditionError& e) {
      throw IntegrityError(std::string("type II deformation lost the cosymplectic property: ") + e.what());
    }
  }();
  if (!(reeb(out) == r)) throw IntegrityError("type II deformation changed the Reeb field");
  return DeformationRecord{DeformationKind::TypeII, pair, beta, std::move(out), 1};
}

TBasicVerdict check_t_basic(const LieAlgebra& g, const SymbolicForm& eta,
                            const std::vector<AlgVector>& generators, bool has_fixed_point) {
  if (eta.degree() != 1) throw InputError("eta must be a 1-form");
  require_jacobi(g);
  if (!ce_d(g, eta).is_zero()) throw PreconditionError("eta is not closed");
  TBasicVerdict v;
  v.has_fixed_point = has_fixed_point;
  for (std::size_t k = 0; k < generators.size(); ++k) {
    if (generators[k].dim() != g.dim()) throw InputError("torus generator has wrong dimension");
    if (!lie_derivative(g, generators[k], eta).is_zero()) {
      throw PreconditionError("eta is not invariant under torus generator " + std::to_string(k + 1));
    }
    v.constants.push_back(pairing(eta, generators[k]));
    if (!v.constants.back().is_zero()) v.all_zero = false;
  }
  return v;
}

// ------------------------------------------------------- parameter spaces

std::vector<AlgVector> cosymplectic_vectors(const CosymplecticPair& pair) {
  const LieAlgebra& g = pair.algebra();
  const int dim = g.dim();
  // Column i holds the coefficients of (L_{e_i} eta, L_{e_i} omega).
  std::vector<std::pair<std::size_t, IndexSet>> coords;
  std::vector<std::map<std::pair<std::size_t, IndexSet>, Rational>> images;
  for (int i = 0; i < dim; ++i) {
    const AlgVector e = AlgVector::basis(dim, i);
    std::map<std::pair<std::size_t, IndexSet>, Rational> image;
    for (const auto& [s, f] : lie_derivative(g, e, pair.eta()).components())
      for (const auto& [set, c] : f.terms()) image[{s + 1, set}] = c;
    for (const auto& [set, c] : lie_derivative(g, e, pair.omega()).terms()) image[{0, set}] = c;
    for (const auto& [key, c] : image) coords.push_back(key);
    images.push_back(std::move(image));
  }
  std::sort(coords.begin(), coords.end());
  coords.erase(std::unique(coords.begin(), coords.end()), coords.end());
  Matrix m(coords.size(), static_cast<std::size_t>(dim));
  for (std::size_t r = 0; r < coords.size(); ++r)
    for (int i = 0; i < dim; ++i) {
      const auto it = images[static_cast<std::size_t>(i)].find(coords[r]);
      if (it != images[static_cast<std::size_t>(i)].end()) m(r, static_cast<std::size_t>(i)) = it->second;
    }
  std::vector<AlgVector> out;
  if (coords.empty()) {
    for (int i = 0; i < dim; ++i) out.push_back(AlgVector::basis(dim, i));
    return out;
  }
  for (auto& k : kernel_basis(m)) out.emplace_back(std::move(k));
  return out;
}

std::vector<AltForm> closed_basic_one_forms(const CosymplecticPair& pair) {
  const LieAlgebra& g = pair.algebra();
  const int dim = g.dim();
  const AlgVector r = reeb(pair);
  // Rows: coefficients of d(e^i) per 2-index, then e^i(R).
  std::vector<IndexSet> two_sets;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j) two_sets.push_back((IndexSet{1} << i) | (IndexSet{1} << j));
  Matrix m(two_sets.size() + 1, static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    const AltForm d = ce_d(g, AltForm::monomial(dim, {i}));
    for (std::size_t row = 0; row < two_sets.size(); ++row) m(row, static_cast<std::size_t>(i)) = d.coefficient(two_sets[row]);
    m(two_sets.size(), static_cast<std::size_t>(i)) = r[i];
  }
  std::vector<AltForm> out;
  for (const auto& k : kernel_basis(m)) {
    AltForm f(dim, 1);
    for (int i = 0; i < dim; ++i) f.add(IndexSet{1} << i, k[static_cast<std::size_t>(i)]);
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace cosym
