#include <random>

#include "doctest.h"
#include "cosym/errors.hpp"
#include "cosym/matrix.hpp"
#include "cosym/rational.hpp"
#include "cosym/symbolic.hpp"
#include "support.hpp"

using namespace cosym;

namespace {

BasisPtr eps_basis() { return std::make_shared<const SymbolBasis>(std::vector<std::string>{"eps1", "eps2"}); }

// Classifies a 2x2 system from its minors alone: det != 0 is Unique (Cramer),
// otherwise consistency is decided by the 2x2 minors of the augmented matrix.
SolveStatus classify_2x2(const Matrix& m, const Vector& b) {
  const Rational det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  if (!det.is_zero()) return SolveStatus::Unique;
  const bool zero_matrix = m(0, 0).is_zero() && m(0, 1).is_zero() && m(1, 0).is_zero() && m(1, 1).is_zero();
  if (zero_matrix) return b[0].is_zero() && b[1].is_zero() ? SolveStatus::NonUnique : SolveStatus::NoSolution;
  const Rational m1 = m(0, 0) * b[1] - m(1, 0) * b[0];
  const Rational m2 = m(0, 1) * b[1] - m(1, 1) * b[0];
  return m1.is_zero() && m2.is_zero() ? SolveStatus::NonUnique : SolveStatus::NoSolution;
}

Rational leibniz_det(const Matrix& m) {
  const std::size_t n = m.rows();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rational total = 0;
  do {
    Rational term = cosym::testing::permutation_sign(perm);
    for (std::size_t r = 0; r < n; ++r) term *= m(r, static_cast<std::size_t>(perm[r]));
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

Matrix random_matrix(std::mt19937& rng, std::size_t rows, std::size_t cols, int bound) {
  std::uniform_int_distribution<int> d(-bound, bound);
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = d(rng);
  return m;
}

}  // namespace

TEST_CASE("rationals parse to canonical form") {
  CHECK(Rational::parse("6/-4").str() == "-3/2");
  CHECK(Rational::parse(" 10/5 ") == Rational(2));
  CHECK(Rational::parse("-7").is_integer());
  CHECK(Rational::from_parts("3", "9") == Rational(1, 3));
  CHECK_THROWS_AS(Rational::parse("1/0"), InputError);
  CHECK_THROWS_AS(Rational::parse("1.5"), InputError);
  CHECK_THROWS_AS(Rational::parse(""), InputError);
  CHECK_THROWS_AS(Rational(1, 0), InputError);
  CHECK_THROWS_AS(Rational(3) / Rational(0), InputError);
  CHECK_THROWS_AS(Rational(0).inverse(), InputError);
}

TEST_CASE("rational arithmetic is exact beyond machine integers") {
  Rational x = Rational::parse("123456789012345678901234567890/7");
  CHECK((x * Rational(7)).str() == "123456789012345678901234567890");
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(-2, 3) < Rational(-1, 2));
  CHECK(Rational(-5, 2).abs() == Rational(5, 2));
}

TEST_CASE("property: rationals form an ordered field") {
  std::mt19937 rng(101);
  for (int trial = 0; trial < 500; ++trial) {
    const Rational a = cosym::testing::small_rational(rng, 9);
    const Rational b = cosym::testing::small_rational(rng, 9);
    const Rational c = cosym::testing::small_rational(rng, 9);
    CHECK(a * (b + c) == a * b + a * c);
    CHECK((a + b) - b == a);
    if (!b.is_zero()) CHECK((a / b) * b == a);
    CHECK(((a < b) || (b < a) || (a == b)));
    if (a < b) CHECK(a + c < b + c);
  }
}

TEST_CASE("symbolic reals") {
  const BasisPtr basis = eps_basis();
  const SymbolicReal e1 = SymbolicReal::symbol(basis, "eps1");
  const SymbolicReal e2 = SymbolicReal::symbol(basis, "eps2", Rational(2));
  const SymbolicReal x = e1 + e2 + SymbolicReal(Rational(1, 2));

  CHECK_FALSE(x.is_rational());
  CHECK(x.coefficient(0) == Rational(1, 2));
  CHECK(x.coefficient(2) == Rational(2));
  CHECK((x - e1 - e2).is_rational());
  CHECK((x - e1 - e2).rational_value() == Rational(1, 2));
  CHECK((x * Rational(2)).coefficient(1) == Rational(2));
  CHECK((e1 - e1).is_zero());
  CHECK(x.coefficient_vector(basis->width()) == std::vector<Rational>{Rational(1, 2), 1, 2});
  CHECK_THROWS_AS(e1 * e2, InputError);
  CHECK_THROWS_AS(x.rational_value(), InputError);
  CHECK_THROWS_AS(SymbolicReal::symbol(basis, "eps3"), InputError);

  const BasisPtr other = std::make_shared<const SymbolBasis>(std::vector<std::string>{"eps1"});
  CHECK_THROWS_AS(e1 + SymbolicReal::symbol(other, "eps1"), InputError);
  CHECK_THROWS_AS(SymbolBasis({"a", "a"}), InputError);
}

TEST_CASE("solve_linear on the rank-one example") {
  const Matrix m{{1, 1}, {1, 1}};
  const SolveResult r = solve_linear(m, {1, 1});
  CHECK(classify_2x2(m, {1, 1}) == SolveStatus::NonUnique);
  CHECK(r.status == SolveStatus::NonUnique);
  CHECK(r.kernel_dim() == 1);
  CHECK(m * r.solution == Vector{1, 1});
  CHECK(m * r.kernel[0] == Vector{0, 0});
  CHECK(solve_linear(m, {1, 2}).status == SolveStatus::NoSolution);
  const SolveResult u = solve_linear(Matrix{{2, 1}, {1, 1}}, {3, 2});
  CHECK(u.status == SolveStatus::Unique);
  CHECK(u.solution == Vector{1, 1});
}

TEST_CASE("property: 2x2 solve status matches the minor oracle") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> d(-2, 2);
  for (int trial = 0; trial < 2000; ++trial) {
    const Matrix m = random_matrix(rng, 2, 2, 2);
    const Vector b{d(rng), d(rng)};
    const SolveResult r = solve_linear(m, b);
    REQUIRE(r.status == classify_2x2(m, b));
    if (r.status != SolveStatus::NoSolution) CHECK(m * r.solution == b);
  }
}

TEST_CASE("property: determinant, rank and kernel") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + trial % 4;
    const Matrix sq = random_matrix(rng, n, n, 3);
    CHECK(determinant(sq) == leibniz_det(sq));
    CHECK((rank(sq) == n) == !determinant(sq).is_zero());

    const Matrix m = random_matrix(rng, 1 + trial % 3, 1 + (trial / 3) % 4, 1);
    const auto kernel = kernel_basis(m);
    CHECK(kernel.size() + rank(m) == m.cols());
    for (const auto& v : kernel) CHECK(m * v == Vector(m.rows(), Rational(0)));
    CHECK(rank(m.transpose()) == rank(m));
  }
}

TEST_CASE("rank over Q of symbolic rows") {
  const BasisPtr basis = eps_basis();
  const SymbolicReal one(1), e1 = SymbolicReal::symbol(basis, "eps1"), e2 = SymbolicReal::symbol(basis, "eps2");
  const std::vector<std::vector<SymbolicReal>> independent{{one}, {e1}, {e2}};
  CHECK(rank_over_q(independent) == 3);
  const std::vector<std::vector<SymbolicReal>> dependent{{e1}, {e1 * Rational(2)}};
  CHECK(rank_over_q(dependent) == 1);
  const std::vector<std::vector<SymbolicReal>> mixed{{one + e1, e2}, {e1, e2}, {one, SymbolicReal(0)}};
  CHECK(rank_over_q(mixed) == 2);
}
