#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cosym/rational.hpp"

// Exterior algebra of the dual of a finite-dimensional real Lie algebra with
// the Chevalley-Eilenberg differential. Basis vectors e_0..e_{dim-1} and dual
// covectors e^0..e^{dim-1} are 0-based in code; text renderings are 1-based.

namespace cosym {

/// Strictly increasing multi-index stored as a bit set (bit i <=> e^i).
using IndexSet = std::uint32_t;
inline constexpr int kMaxDim = 32;

std::vector<int> indices_of(IndexSet set);
/// Throws InputError on repeated or out-of-range indices.
IndexSet index_set(std::span<const int> indices);

class AlgVector {
 public:
  AlgVector() = default;
  explicit AlgVector(int dim) : components_(static_cast<std::size_t>(dim)) {}
  explicit AlgVector(std::vector<Rational> components) : components_(std::move(components)) {}
  static AlgVector basis(int dim, int i);

  int dim() const noexcept { return static_cast<int>(components_.size()); }
  const Rational& operator[](int i) const { return components_[static_cast<std::size_t>(i)]; }
  Rational& operator[](int i) { return components_[static_cast<std::size_t>(i)]; }
  const std::vector<Rational>& components() const noexcept { return components_; }
  bool is_zero() const;

  AlgVector& operator+=(const AlgVector& o);
  AlgVector& operator-=(const AlgVector& o);
  AlgVector& operator*=(const Rational& r);
  friend AlgVector operator+(AlgVector a, const AlgVector& b) { return a += b; }
  friend AlgVector operator-(AlgVector a, const AlgVector& b) { return a -= b; }
  friend AlgVector operator*(const Rational& r, AlgVector a) { return a *= r; }
  friend bool operator==(const AlgVector&, const AlgVector&) = default;

  std::string str() const;

 private:
  std::vector<Rational> components_;
};

/// Real Lie algebra given by structure constants [e_i, e_j] = sum_k c^k_ij e_k.
/// Only brackets with i < j are set; antisymmetry is synthesized.
class LieAlgebra {
 public:
  explicit LieAlgebra(int dim);
  static LieAlgebra abelian(int dim) { return LieAlgebra(dim); }

  int dim() const noexcept { return dim_; }
  /// Requires i < j (0-based). Overwrites any previous value.
  void set_bracket(int i, int j, const AlgVector& value);
  /// [e_i, e_j] for any i, j.
  const AlgVector& bracket_basis(int i, int j) const {
    return table_[static_cast<std::size_t>(i * dim_ + j)];
  }
  const Rational& structure_constant(int i, int j, int k) const { return bracket_basis(i, j)[k]; }
  AlgVector bracket(const AlgVector& x, const AlgVector& y) const;
  bool is_abelian() const;

  friend bool operator==(const LieAlgebra&, const LieAlgebra&) = default;

 private:
  int dim_;
  std::vector<AlgVector> table_;
};

/// Alternating p-form with constant coefficients on a Lie algebra of dimension dim.
class AltForm {
 public:
  AltForm() = default;
  AltForm(int dim, int degree);
  /// Degree-0 form.
  static AltForm constant(int dim, const Rational& value);
  /// coeff * e^{i1} ^ ... ^ e^{ip}; the indices may come in any order.
  static AltForm monomial(int dim, std::initializer_list<int> indices, const Rational& coeff = 1);
  static AltForm monomial(int dim, std::span<const int> indices, const Rational& coeff = 1);

  int dim() const noexcept { return dim_; }
  int degree() const noexcept { return degree_; }
  const std::map<IndexSet, Rational>& terms() const noexcept { return terms_; }
  Rational coefficient(IndexSet set) const;
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Adds coeff to the coefficient of the sorted multi-index `set`.
  void add(IndexSet set, const Rational& coeff);

  AltForm operator-() const;
  AltForm& operator+=(const AltForm& o);
  AltForm& operator-=(const AltForm& o);
  AltForm& operator*=(const Rational& r);
  friend AltForm operator+(AltForm a, const AltForm& b) { return a += b; }
  friend AltForm operator-(AltForm a, const AltForm& b) { return a -= b; }
  friend AltForm operator*(const Rational& r, AltForm a) { return a *= r; }
  friend AltForm operator*(AltForm a, const Rational& r) { return a *= r; }
  friend bool operator==(const AltForm&, const AltForm&) = default;

  std::string str() const;

 private:
  int dim_ = 0;
  int degree_ = 0;
  std::map<IndexSet, Rational> terms_;
};

AltForm wedge(const AltForm& a, const AltForm& b);
/// k-fold wedge power; power(a, 0) is the constant 1.
AltForm wedge_power(const AltForm& a, int k);
/// Interior product. Throws InputError for degree-0 forms.
AltForm contract(const AlgVector& x, const AltForm& a);
/// Evaluation of a 1-form on a vector.
Rational pairing(const AltForm& one_form, const AlgVector& x);
/// Chevalley-Eilenberg differential with (d alpha)(X,Y) = -alpha([X,Y]) on 1-forms.
AltForm ce_d(const LieAlgebra& g, const AltForm& a);
/// Cartan formula: L_X = contract(X) o d + d o contract(X).
AltForm lie_derivative(const LieAlgebra& g, const AlgVector& x, const AltForm& a);

struct JacobiResult {
  bool ok = true;
  std::optional<std::array<int, 3>> witness;  ///< first failing basis triple (0-based)
};

JacobiResult jacobi_check(const LieAlgebra& g);
/// Throws InputError naming the witness triple when Jacobi fails.
void require_jacobi(const LieAlgebra& g);

}  // namespace cosym
