#include "cosym/exterior.hpp"

#include <bit>
#include <sstream>
#include <unordered_map>

#include "cosym/errors.hpp"

namespace cosym {

namespace {

IndexSet bit(int i) { return IndexSet{1} << i; }

IndexSet below(int i) { return bit(i) - 1; }

// Sign of sorting the concatenation (A, B) for disjoint A, B: one transposition
// per pair a in A, b in B with a > b.
int shuffle_sign(IndexSet a, IndexSet b) {
  int inversions = 0;
  for (IndexSet rest = b; rest; rest &= rest - 1) {
    const int j = std::countr_zero(rest);
    inversions += std::popcount(a & ~below(j + 1));
  }
  return (inversions % 2) ? -1 : 1;
}

void check_same_dim(const AltForm& a, const AltForm& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw InputError(std::string(op) + ": forms live on algebras of different dimension (" +
                     std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
  }
}

std::string index_label(IndexSet set, int dim) {
  std::string out;
  bool first = true;
  for (int i : indices_of(set)) {
    if (!first && dim >= 10) out += ",";
    out += std::to_string(i + 1);
    first = false;
  }
  return out;
}

}  // namespace

std::vector<int> indices_of(IndexSet set) {
  std::vector<int> out;
  for (; set; set &= set - 1) out.push_back(std::countr_zero(set));
  return out;
}

IndexSet index_set(std::span<const int> indices) {
  IndexSet set = 0;
  for (int i : indices) {
    if (i < 0 || i >= kMaxDim) throw InputError("form index out of range");
    if (set & bit(i)) throw InputError("repeated index in multi-index");
    set |= bit(i);
  }
  return set;
}

// ---------------------------------------------------------------- AlgVector

AlgVector AlgVector::basis(int dim, int i) {
  AlgVector v(dim);
  v[i] = 1;
  return v;
}

bool AlgVector::is_zero() const {
  for (const auto& c : components_) {
    if (!c.is_zero()) return false;
  }
  return true;
}

AlgVector& AlgVector::operator+=(const AlgVector& o) {
  if (o.dim() != dim()) throw InputError("vector dimension mismatch");
  for (std::size_t i = 0; i < components_.size(); ++i) components_[i] += o.components_[i];
  return *this;
}

AlgVector& AlgVector::operator-=(const AlgVector& o) {
  if (o.dim() != dim()) throw InputError("vector dimension mismatch");
  for (std::size_t i = 0; i < components_.size(); ++i) components_[i] -= o.components_[i];
  return *this;
}

AlgVector& AlgVector::operator*=(const Rational& r) {
  for (auto& c : components_) c *= r;
  return *this;
}

std::string AlgVector::str() const {
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < dim(); ++i) {
    const Rational& c = (*this)[i];
    if (c.is_zero()) continue;
    if (!first) os << (c.sign() < 0 ? " - " : " + ");
    const Rational mag = first ? c : c.abs();
    if (mag == Rational(-1)) {
      os << "-";
    } else if (mag != Rational(1)) {
      os << mag << "*";
    }
    os << "e" << (i + 1);
    first = false;
  }
  return first ? "0" : os.str();
}

// --------------------------------------------------------------- LieAlgebra

LieAlgebra::LieAlgebra(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw InputError("Lie algebra dimension must lie in 1.." + std::to_string(kMaxDim));
  }
  table_.assign(static_cast<std::size_t>(dim * dim), AlgVector(dim));
}

void LieAlgebra::set_bracket(int i, int j, const AlgVector& value) {
  if (i < 0 || j < 0 || i >= dim_ || j >= dim_) throw InputError("bracket index out of range");
  if (i >= j) throw InputError("brackets must be given for i < j only");
  if (value.dim() != dim_) throw InputError("bracket value has wrong dimension");
  table_[static_cast<std::size_t>(i * dim_ + j)] = value;
  AlgVector neg = value;
  neg *= Rational(-1);
  table_[static_cast<std::size_t>(j * dim_ + i)] = std::move(neg);
}

AlgVector LieAlgebra::bracket(const AlgVector& x, const AlgVector& y) const {
  if (x.dim() != dim_ || y.dim() != dim_) throw InputError("bracket: vector dimension mismatch");
  AlgVector out(dim_);
  for (int i = 0; i < dim_; ++i) {
    if (x[i].is_zero()) continue;
    for (int j = 0; j < dim_; ++j) {
      if (i == j || y[j].is_zero()) continue;
      const Rational s = x[i] * y[j];
      const AlgVector& b = bracket_basis(i, j);
      for (int k = 0; k < dim_; ++k) {
        if (!b[k].is_zero()) out[k] += s * b[k];
      }
    }
  }
  return out;
}

bool LieAlgebra::is_abelian() const {
  for (const auto& v : table_) {
    if (!v.is_zero()) return false;
  }
  return true;
}

// ------------------------------------------------------------------ AltForm

AltForm::AltForm(int dim, int degree) : dim_(dim), degree_(degree) {
  if (dim < 0 || dim > kMaxDim) throw InputError("form dimension out of range");
  if (degree < 0) throw InputError("negative form degree");
}

AltForm AltForm::constant(int dim, const Rational& value) {
  AltForm f(dim, 0);
  f.add(0, value);
  return f;
}

AltForm AltForm::monomial(int dim, std::initializer_list<int> indices, const Rational& coeff) {
  return monomial(dim, std::span<const int>(indices.begin(), indices.size()), coeff);
}

AltForm AltForm::monomial(int dim, std::span<const int> indices, const Rational& coeff) {
  AltForm f(dim, static_cast<int>(indices.size()));
  IndexSet set = 0;
  int inversions = 0;
  for (int i : indices) {
    if (i < 0 || i >= dim) throw InputError("form index out of range");
    if (set & bit(i)) return f;
    inversions += std::popcount(set & ~below(i + 1));
    set |= bit(i);
  }
  f.add(set, (inversions % 2) ? -coeff : coeff);
  return f;
}

Rational AltForm::coefficient(IndexSet set) const {
  const auto it = terms_.find(set);
  return it == terms_.end() ? Rational(0) : it->second;
}

void AltForm::add(IndexSet set, const Rational& coeff) {
  if (std::popcount(set) != degree_) throw InputError("multi-index length differs from form degree");
  if (dim_ < kMaxDim && (set >> dim_) != 0) throw InputError("multi-index out of range");
  if (coeff.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(set, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

AltForm AltForm::operator-() const {
  AltForm out = *this;
  for (auto& [k, c] : out.terms_) c = -c;
  return out;
}

AltForm& AltForm::operator+=(const AltForm& o) {
  check_same_dim(*this, o, "sum");
  if (o.degree_ != degree_) throw InputError("sum of forms of different degree");
  for (const auto& [k, c] : o.terms_) add(k, c);
  return *this;
}

AltForm& AltForm::operator-=(const AltForm& o) { return *this += -o; }

AltForm& AltForm::operator*=(const Rational& r) {
  if (r.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, c] : terms_) c *= r;
  return *this;
}

std::string AltForm::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [set, c] : terms_) {
    if (!first) os << (c.sign() < 0 ? " - " : " + ");
    const Rational mag = first ? c : c.abs();
    if (set == 0) {
      os << mag;
    } else {
      if (mag == Rational(-1)) {
        os << "-";
      } else if (mag != Rational(1)) {
        os << mag << "*";
      }
      os << "e^" << (degree_ > 1 ? "{" : "") << index_label(set, dim_) << (degree_ > 1 ? "}" : "");
    }
    first = false;
  }
  return os.str();
}

// --------------------------------------------------------------- operations

AltForm wedge(const AltForm& a, const AltForm& b) {
  check_same_dim(a, b, "wedge");
  AltForm out(a.dim(), a.degree() + b.degree());
  if (out.degree() > a.dim()) return out;
  for (const auto& [sa, ca] : a.terms()) {
    for (const auto& [sb, cb] : b.terms()) {
      if (sa & sb) continue;
      const Rational c = ca * cb;
      out.add(sa | sb, shuffle_sign(sa, sb) < 0 ? -c : c);
    }
  }
  return out;
}

AltForm wedge_power(const AltForm& a, int k) {
  AltForm out = AltForm::constant(a.dim(), 1);
  for (int i = 0; i < k; ++i) out = wedge(out, a);
  return out;
}

AltForm contract(const AlgVector& x, const AltForm& a) {
  if (a.degree() == 0) throw InputError("contraction of a degree-0 form");
  if (x.dim() != a.dim()) throw InputError("contract: vector and form dimensions differ");
  AltForm out(a.dim(), a.degree() - 1);
  for (const auto& [set, c] : a.terms()) {
    for (int k : indices_of(set)) {
      if (x[k].is_zero()) continue;
      const Rational v = x[k] * c;
      out.add(set & ~bit(k), (std::popcount(set & below(k)) % 2) ? -v : v);
    }
  }
  return out;
}

Rational pairing(const AltForm& one_form, const AlgVector& x) {
  if (one_form.degree() != 1) throw InputError("pairing expects a 1-form");
  return contract(x, one_form).coefficient(0);
}

namespace {

class Differential {
 public:
  explicit Differential(const LieAlgebra& g) : g_(g) {
    const int n = g.dim();
    for (int k = 0; k < n; ++k) {
      AltForm dek(n, 2);
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
          const Rational& c = g.structure_constant(i, j, k);
          if (!c.is_zero()) dek.add(bit(i) | bit(j), -c);
        }
      de_.push_back(std::move(dek));
    }
  }

  // d(e^i ^ e^rest) = de^i ^ e^rest - e^i ^ d(e^rest), i the lowest index.
  const AltForm& of_monomial(IndexSet set) {
    if (auto it = cache_.find(set); it != cache_.end()) return it->second;
    const int n = g_.dim();
    AltForm result(n, std::popcount(set) + 1);
    if (set != 0 && result.degree() <= n) {
      const int i = std::countr_zero(set);
      const IndexSet rest = set & ~bit(i);
      AltForm rest_form(n, std::popcount(rest));
      rest_form.add(rest, 1);
      AltForm first(n, 1);
      first.add(bit(i), 1);
      result = wedge(de_[static_cast<std::size_t>(i)], rest_form);
      result -= wedge(first, of_monomial(rest));
    }
    return cache_.emplace(set, std::move(result)).first->second;
  }

 private:
  const LieAlgebra& g_;
  std::vector<AltForm> de_;
  std::unordered_map<IndexSet, AltForm> cache_;
};

}  // namespace

AltForm ce_d(const LieAlgebra& g, const AltForm& a) {
  if (a.dim() != g.dim()) throw InputError("ce_d: form and algebra dimensions differ");
  AltForm out(a.dim(), a.degree() + 1);
  if (out.degree() > a.dim()) return out;
  Differential d(g);
  for (const auto& [set, c] : a.terms()) out += c * d.of_monomial(set);
  return out;
}

AltForm lie_derivative(const LieAlgebra& g, const AlgVector& x, const AltForm& a) {
  AltForm out = a.degree() + 1 <= a.dim() ? contract(x, ce_d(g, a)) : AltForm(a.dim(), a.degree());
  if (a.degree() > 0) out += ce_d(g, contract(x, a));
  return out;
}

JacobiResult jacobi_check(const LieAlgebra& g) {
  const int n = g.dim();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const AlgVector ei = AlgVector::basis(n, i);
        const AlgVector ej = AlgVector::basis(n, j);
        const AlgVector ek = AlgVector::basis(n, k);
        const AlgVector jac = g.bracket(ei, g.bracket_basis(j, k)) +
                              g.bracket(ej, g.bracket_basis(k, i)) +
                              g.bracket(ek, g.bracket_basis(i, j));
        if (!jac.is_zero()) return JacobiResult{false, std::array<int, 3>{i, j, k}};
      }
  return {};
}

void require_jacobi(const LieAlgebra& g) {
  const JacobiResult r = jacobi_check(g);
  if (!r.ok) {
    const auto& w = *r.witness;
    throw InputError("bracket table violates the Jacobi identity on (e" + std::to_string(w[0] + 1) +
                     ", e" + std::to_string(w[1] + 1) + ", e" + std::to_string(w[2] + 1) + ")");
  }
}

}  // namespace cosym
