#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cosym/exterior.hpp"
#include "cosym/symbolic.hpp"

namespace cosym {

/// A form sum_s sym_s * alpha_s whose coefficients are SymbolicReals: one
/// rational AltForm per basis symbol (index 0 is the rational part). Used for
/// closed 1-forms carrying declared-independent irrational periods.
class SymbolicForm {
 public:
  SymbolicForm() = default;
  SymbolicForm(int dim, int degree) : dim_(dim), degree_(degree) {}
  SymbolicForm(const AltForm& rational_part);  // NOLINT(google-explicit-constructor)

  /// Adds sym_symbol * form. Throws InputError on basis or shape mismatch.
  void add(const BasisPtr& basis, std::size_t symbol, const AltForm& form);

  int dim() const noexcept { return dim_; }
  int degree() const noexcept { return degree_; }
  const BasisPtr& basis() const noexcept { return basis_; }
  const std::map<std::size_t, AltForm>& components() const noexcept { return components_; }
  AltForm component(std::size_t symbol) const;

  bool is_zero() const noexcept { return components_.empty(); }
  bool is_rational() const noexcept;
  /// Throws InputError if symbolic components are present.
  AltForm rational_part() const;
  SymbolicReal coefficient(IndexSet set) const;

  SymbolicForm& operator+=(const SymbolicForm& o);
  SymbolicForm& operator*=(const Rational& r);
  friend SymbolicForm operator+(SymbolicForm a, const SymbolicForm& b) { return a += b; }
  friend SymbolicForm operator*(const Rational& r, SymbolicForm a) { return a *= r; }
  friend bool operator==(const SymbolicForm& a, const SymbolicForm& b);

  std::string str() const;

 private:
  int dim_ = 0;
  int degree_ = 0;
  BasisPtr basis_;
  std::map<std::size_t, AltForm> components_;
};

SymbolicForm ce_d(const LieAlgebra& g, const SymbolicForm& a);
SymbolicForm contract(const AlgVector& x, const SymbolicForm& a);
SymbolicForm lie_derivative(const LieAlgebra& g, const AlgVector& x, const SymbolicForm& a);
SymbolicForm wedge(const SymbolicForm& a, const AltForm& b);
SymbolicReal pairing(const SymbolicForm& one_form, const AlgVector& x);

struct CosymplecticVerdict {
  bool d_eta_zero = false;
  bool d_omega_zero = false;
  bool volume_nonzero = false;
  int n = 0;
  SymbolicReal volume;  ///< coefficient of e^{1..2n+1} in eta ^ omega^n
  bool is_cosymplectic() const noexcept { return d_eta_zero && d_omega_zero && volume_nonzero; }
};

/// Checks d eta = 0, d omega = 0 and eta ^ omega^n != 0.
/// Throws InputError for even dimension, wrong degrees, or a non-Jacobi table.
CosymplecticVerdict verify_cosymplectic(const LieAlgebra& g, const SymbolicForm& eta, const AltForm& omega);

/// A verified cosymplectic structure on a Lie algebra.
class CosymplecticPair {
 public:
  /// Throws PreconditionError naming the first failed condition.
  static CosymplecticPair make(LieAlgebra g, SymbolicForm eta, AltForm omega);

  const LieAlgebra& algebra() const noexcept { return g_; }
  const SymbolicForm& eta() const noexcept { return eta_; }
  const AltForm& omega() const noexcept { return omega_; }
  int n() const noexcept { return (g_.dim() - 1) / 2; }
  const SymbolicReal& volume() const noexcept { return volume_; }

  friend bool operator==(const CosymplecticPair&, const CosymplecticPair&) = default;

 private:
  CosymplecticPair(LieAlgebra g, SymbolicForm eta, AltForm omega, SymbolicReal volume)
      : g_(std::move(g)), eta_(std::move(eta)), omega_(std::move(omega)), volume_(std::move(volume)) {}

  LieAlgebra g_;
  SymbolicForm eta_;
  AltForm omega_;
  SymbolicReal volume_;
};

/// The unique R with eta(R) = 1 and contract(R, omega) = 0.
AlgVector reeb(const CosymplecticPair& pair);

/// The unique X with eta(X) = 0 and contract(X, omega) = df. Requires d(df) = 0
/// and df(R) = 0; throws PreconditionError otherwise.
AlgVector hamiltonian_vector(const CosymplecticPair& pair, const AltForm& df);

struct SplittingVerdict {
  bool ker_eta_ideal = false;
  bool reeb_central_on_ker = false;
  AlgVector reeb;
  std::optional<AlgVector> noncommuting;  ///< a ker(eta) vector with [R, X] != 0
  bool splits() const noexcept { return ker_eta_ideal && reeb_central_on_ker; }
};

/// Necessary condition for a metric with Killing Reeb field: the algebra must
/// split as ker(eta) + <R>.
SplittingVerdict splitting_obstruction(const CosymplecticPair& pair);

enum class DeformationKind { TypeI, TypeII };

struct DeformationRecord {
  DeformationKind kind;
  CosymplecticPair input;
  std::variant<AlgVector, SymbolicForm> parameter;  ///< theta (type I) or beta (type II)
  CosymplecticPair output;
  Rational scale = 1;  ///< 1 + eta(theta) for type I, 1 for type II
};

/// eta' = eta / (1 + eta(theta)), omega' = (omega + contract(theta, omega) ^ eta') / (1 + eta(theta)).
DeformationRecord deform_type_I(const CosymplecticPair& pair, const AlgVector& theta);
/// eta' = eta + beta for a closed beta with beta(R) = 0; omega and R unchanged.
DeformationRecord deform_type_II(const CosymplecticPair& pair, const SymbolicForm& beta);

struct TBasicVerdict {
  std::vector<SymbolicReal> constants;  ///< eta(X) for each generator X
  bool has_fixed_point = false;
  bool all_zero = true;
  /// A fixed point forces every constant to vanish.
  bool contradicts_fixed_point() const noexcept { return has_fixed_point && !all_zero; }
};

TBasicVerdict check_t_basic(const LieAlgebra& g, const SymbolicForm& eta,
                            const std::vector<AlgVector>& generators, bool has_fixed_point);

/// Basis of {theta : L_theta eta = 0 and L_theta omega = 0}.
std::vector<AlgVector> cosymplectic_vectors(const CosymplecticPair& pair);
/// Basis of the rational closed 1-forms beta with beta(R) = 0.
std::vector<AltForm> closed_basic_one_forms(const CosymplecticPair& pair);

}  // namespace cosym
