#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cosym/cosymplectic.hpp"
#include "cosym/matrix.hpp"
#include "cosym/symbolic.hpp"

namespace cosym {

/// Real cohomology data of a mapping torus L_phi: Betti numbers of the fiber L
/// and the matrix of phi^* on H^p(L) for p = 0..dim L.
struct MappingTorusModel {
  std::string label;
  std::vector<int> fiber_betti;
  std::vector<Matrix> phi_star;
};

/// Throws InputError when sizes, b_0 = 1, phi^* = id on H^0, or invertibility fail.
void validate(const MappingTorusModel& m);

/// b_p(L_phi) = dim ker(phi^*-1 | H^p) + dim coker(phi^*-1 | H^{p-1}), p = 0..dim L + 1.
std::vector<int> wang_betti(const MappingTorusModel& m);

struct ToricBettiVerdict {
  bool b0_is_one = false;
  bool b1_is_one = false;
  bool b2n_is_one = false;
  bool even_odd_pairs_equal = false;
  std::optional<int> first_unequal_pair;  ///< k with b_{2k} != b_{2k+1}
  bool holds() const noexcept { return b0_is_one && b1_is_one && b2n_is_one && even_odd_pairs_equal; }
};

/// Betti relations of a compact toric cosymplectic (2n+1)-manifold: b_0 = 1,
/// b_{2k} = b_{2k+1} for k = 0..n, b_1 = b_{2n} = 1. The list has 2n+2 entries;
/// an odd-length list throws InputError.
ToricBettiVerdict toric_betti_check(std::span<const int> betti);

/// Indices of the circle components of the fixed point set of a Morse-Bott
/// momentum component.
struct FixedSetData {
  std::vector<int> indices;
};

/// Coefficients of sum_B t^{index(B)} (1 + t). Throws InputError for odd or
/// negative indices, or when the index 0 does not occur exactly once.
std::vector<int> poincare_from_fixed(const FixedSetData& fixed);

struct OrderResult {
  std::optional<long> order;           ///< minimal k >= 1 with A^k = I
  std::vector<Rational> charpoly;      ///< det(xI - A), constant term first
  std::vector<long> cyclotomic_orders; ///< m with Phi_m | charpoly (with multiplicity)
  bool cyclotomic = false;             ///< charpoly is a product of cyclotomic polynomials
  long exhaustive_bound = 0;           ///< lcm of cyclotomic orders; powers tested up to it
  bool is_finite() const noexcept { return order.has_value(); }
};

/// Coefficients of det(xI - A), constant term first (Faddeev-LeVerrier).
std::vector<Rational> characteristic_polynomial(const Matrix& a);
/// Phi_m, constant term first.
std::vector<Rational> cyclotomic_polynomial(long m);

/// Order of an integer matrix invertible over Z. Throws InputError otherwise.
OrderResult finite_order(const Matrix& a);

enum class KCosymplecticVerdict { NoKCosymplecticMetric, ObstructionVacuous };

std::string describe(KCosymplecticVerdict v);

struct KObstruction {
  OrderResult order;
  KCosymplecticVerdict verdict;
};

/// Torus mapping torus T^2_phi with phi^* = a on H^1: infinite order rules out
/// any metric making the structure K-cosymplectic.
KObstruction k_cosymplectic_obstruction_torus(const Matrix& a);

/// Periods of a closed 1-form over a basis of H_1 (or its coefficients in a torus model).
struct PeriodClass {
  std::vector<SymbolicReal> periods;
  friend bool operator==(const PeriodClass&, const PeriodClass&) = default;
};

struct FibrationVerdict {
  bool rational_multiple_of_integer_class = false;
  std::size_t rank = 0;                      ///< rank over Q of the period coefficients
  std::optional<SymbolicReal> generator;     ///< g with periods = g * integer_periods
  std::vector<Rational> integer_periods;     ///< coprime integers
  std::optional<Rational> scaling;           ///< c = 1/g when g is rational
};

/// Compact-leaf criterion: true iff the nonzero periods span a rank-1 Q-space,
/// i.e. the class is a real multiple of an integer class. Throws InputError if
/// all periods vanish or bases are mixed.
FibrationVerdict fibration_check(const PeriodClass& pc);

struct RationalizeResult {
  bool feasible = false;
  std::vector<Rational> coefficients;  ///< c_i applied to generator i
  PeriodClass corrected;               ///< pc + sum c_i gen_i
  std::string direction;               ///< symbol the corrected periods are proportional to
};

/// Finds rational c_i such that pc + sum c_i gen_i has all periods proportional
/// to one basis symbol ("1" preferred), which makes it pass fibration_check.
RationalizeResult rationalize_class(const PeriodClass& pc, const std::vector<PeriodClass>& generators);

struct BasicBettiResult {
  bool consistent = false;
  std::vector<int> basic;
  std::optional<int> inconsistent_at;  ///< degree where the recursion broke
};

/// Inverts b_p = b_p^basic + b_{p-1}^basic. Throws InputError on an empty list or b_0 != 1.
BasicBettiResult basic_betti(std::span<const int> betti);
/// Forward recursion b_p = basic_p + basic_{p-1}, p = 0..size-1.
std::vector<int> betti_from_basic(std::span<const int> basic);

/// Periods of a closed 1-form on an abelian (torus) model: its coefficients.
/// Throws UnsupportedModelError on non-abelian algebras.
PeriodClass torus_periods(const LieAlgebra& g, const SymbolicForm& one_form);

}  // namespace cosym
