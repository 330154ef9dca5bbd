#include "cosym/symbolic.hpp"

#include <set>
#include <sstream>

#include "cosym/errors.hpp"

namespace cosym {

SymbolBasis::SymbolBasis(std::vector<std::string> names) : names_(std::move(names)) {
  std::set<std::string> seen;
  for (const auto& n : names_) {
    if (n.empty() || n == "1") throw InputError("invalid symbol name '" + n + "'");
    if (!seen.insert(n).second) throw InputError("duplicate symbol name '" + n + "'");
  }
}

std::optional<std::size_t> SymbolBasis::index_of(const std::string& name) const {
  if (name == "1") return 0;
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i + 1;
  }
  return std::nullopt;
}

std::string SymbolBasis::name(std::size_t index) const {
  if (index == 0) return "1";
  if (index > names_.size()) throw InputError("symbol index out of range");
  return names_[index - 1];
}

SymbolicReal::SymbolicReal(Rational value) {
  if (!value.is_zero()) terms_.emplace(0, std::move(value));
}

SymbolicReal::SymbolicReal(BasisPtr basis, std::size_t symbol, Rational coeff) {
  if (symbol != 0) {
    if (!basis || symbol > basis->size()) throw InputError("symbol index out of range");
    basis_ = std::move(basis);
  }
  if (!coeff.is_zero()) terms_.emplace(symbol, std::move(coeff));
}

SymbolicReal SymbolicReal::symbol(const BasisPtr& basis, const std::string& name, Rational coeff) {
  if (!basis) {
    if (name == "1") return SymbolicReal(std::move(coeff));
    throw InputError("unknown symbol '" + name + "' (no symbols declared)");
  }
  const auto idx = basis->index_of(name);
  if (!idx) throw InputError("unknown symbol '" + name + "'");
  return SymbolicReal(basis, *idx, std::move(coeff));
}

Rational SymbolicReal::coefficient(std::size_t index) const {
  const auto it = terms_.find(index);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational SymbolicReal::rational_value() const {
  if (!is_rational()) throw InputError("value " + str() + " is not rational");
  return coefficient(0);
}

std::vector<Rational> SymbolicReal::coefficient_vector(std::size_t width) const {
  std::vector<Rational> out(width);
  for (const auto& [idx, c] : terms_) {
    if (idx >= width) throw InputError("coefficient vector too narrow for " + str());
    out[idx] = c;
  }
  return out;
}

std::string SymbolicReal::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [idx, c] : terms_) {
    Rational mag = c;
    if (!first) {
      os << (c.sign() < 0 ? " - " : " + ");
      mag = c.abs();
    }
    if (idx == 0) {
      os << mag;
    } else {
      const std::string name = basis_ ? basis_->name(idx) : "?";
      if (mag == Rational(1)) {
        os << name;
      } else if (mag == Rational(-1)) {
        os << "-" << name;
      } else {
        os << mag << "*" << name;
      }
    }
    first = false;
  }
  return os.str();
}

void SymbolicReal::adopt_basis(const BasisPtr& other) {
  if (!other) return;
  if (!basis_) {
    basis_ = other;
    return;
  }
  if (basis_ != other && !(*basis_ == *other)) {
    throw InputError("mixed symbol bases in one expression");
  }
}

void SymbolicReal::prune() {
  std::erase_if(terms_, [](const auto& kv) { return kv.second.is_zero(); });
  if (is_rational()) basis_.reset();
}

SymbolicReal SymbolicReal::operator-() const {
  SymbolicReal out = *this;
  for (auto& [idx, c] : out.terms_) c = -c;
  return out;
}

SymbolicReal& SymbolicReal::operator+=(const SymbolicReal& o) {
  if (!o.is_rational()) adopt_basis(o.basis_);
  for (const auto& [idx, c] : o.terms_) terms_[idx] += c;
  prune();
  return *this;
}

SymbolicReal& SymbolicReal::operator-=(const SymbolicReal& o) { return *this += -o; }

SymbolicReal& SymbolicReal::operator*=(const Rational& r) {
  for (auto& [idx, c] : terms_) c *= r;
  prune();
  return *this;
}

SymbolicReal& SymbolicReal::operator/=(const Rational& r) {
  if (r.is_zero()) throw InputError("division by zero");
  for (auto& [idx, c] : terms_) c /= r;
  return *this;
}

SymbolicReal operator*(const SymbolicReal& a, const SymbolicReal& b) {
  if (a.is_rational()) return b * a.coefficient(0);
  if (b.is_rational()) return a * b.coefficient(0);
  throw InputError("product of symbolic values " + a.str() + " and " + b.str() + " is not supported");
}

bool operator==(const SymbolicReal& a, const SymbolicReal& b) {
  if (a.terms_ != b.terms_) return false;
  if (a.is_rational()) return true;
  return *a.basis_ == *b.basis_;
}

BasisPtr common_basis(std::span<const SymbolicReal> values) {
  BasisPtr basis;
  for (const auto& v : values) {
    if (v.is_rational()) continue;
    if (!basis) {
      basis = v.basis();
    } else if (basis != v.basis() && !(*basis == *v.basis())) {
      throw InputError("mixed symbol bases");
    }
  }
  return basis;
}

}  // namespace cosym
