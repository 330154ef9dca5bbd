#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cosym/rational.hpp"

namespace cosym {

/// Ordered list of symbol names. Index 0 is the constant 1; symbols occupy
/// 1..size(). The set {1, symbols...} is asserted (never checked) to be
/// linearly independent over Q.
class SymbolBasis {
 public:
  SymbolBasis() = default;
  explicit SymbolBasis(std::vector<std::string> names);

  std::size_t size() const noexcept { return names_.size(); }
  /// Width of a flattened coefficient vector: constant plus symbols.
  std::size_t width() const noexcept { return names_.size() + 1; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  /// "1" maps to 0, symbol names to 1..size().
  std::optional<std::size_t> index_of(const std::string& name) const;
  std::string name(std::size_t index) const;

  friend bool operator==(const SymbolBasis&, const SymbolBasis&) = default;

 private:
  std::vector<std::string> names_;
};

using BasisPtr = std::shared_ptr<const SymbolBasis>;

/// Finite Q-linear combination c_0 + sum c_s * sym_s over a SymbolBasis.
/// Symbols are additive placeholders: a product of two non-rational values is
/// rejected. A value without symbolic terms is compatible with every basis.
class SymbolicReal {
 public:
  SymbolicReal() = default;
  SymbolicReal(Rational value);  // NOLINT(google-explicit-constructor)
  template <std::integral I>
  SymbolicReal(I value) : SymbolicReal(Rational(value)) {}  // NOLINT(google-explicit-constructor)

  /// coeff * basis[symbol]; symbol 0 is the constant.
  SymbolicReal(BasisPtr basis, std::size_t symbol, Rational coeff);
  /// Throws InputError for unknown names.
  static SymbolicReal symbol(const BasisPtr& basis, const std::string& name, Rational coeff = 1);

  const BasisPtr& basis() const noexcept { return basis_; }
  const std::map<std::size_t, Rational>& terms() const noexcept { return terms_; }
  Rational coefficient(std::size_t index) const;

  bool is_zero() const noexcept { return terms_.empty(); }
  bool is_rational() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 0);
  }
  /// Throws InputError when symbolic terms are present.
  Rational rational_value() const;
  /// Coefficients at indices 0..width-1.
  std::vector<Rational> coefficient_vector(std::size_t width) const;

  std::string str() const;

  SymbolicReal operator-() const;
  SymbolicReal& operator+=(const SymbolicReal& o);
  SymbolicReal& operator-=(const SymbolicReal& o);
  SymbolicReal& operator*=(const Rational& r);
  SymbolicReal& operator/=(const Rational& r);

  friend SymbolicReal operator+(SymbolicReal a, const SymbolicReal& b) { return a += b; }
  friend SymbolicReal operator-(SymbolicReal a, const SymbolicReal& b) { return a -= b; }
  friend SymbolicReal operator*(SymbolicReal a, const Rational& r) { return a *= r; }
  friend SymbolicReal operator*(const Rational& r, SymbolicReal a) { return a *= r; }
  friend SymbolicReal operator/(SymbolicReal a, const Rational& r) { return a /= r; }
  /// Allowed only when at least one factor is rational.
  friend SymbolicReal operator*(const SymbolicReal& a, const SymbolicReal& b);

  friend bool operator==(const SymbolicReal& a, const SymbolicReal& b);

 private:
  void adopt_basis(const BasisPtr& other);
  void prune();

  BasisPtr basis_;
  std::map<std::size_t, Rational> terms_;
};

/// The single basis shared by all values (nullptr when all are rational).
/// Throws InputError on mixed bases.
BasisPtr common_basis(std::span<const SymbolicReal> values);

}  // namespace cosym
