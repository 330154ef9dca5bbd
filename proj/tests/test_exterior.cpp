#include <random>

#include "doctest.h"
#include "cosym/errors.hpp"
#include "cosym/exterior.hpp"
#include "support.hpp"

using namespace cosym;
namespace t = cosym::testing;

namespace {

AlgVector e(int dim, int i) { return AlgVector::basis(dim, i - 1); }

// 1-based convenience for monomials.
AltForm mono(int dim, std::initializer_list<int> one_based, const Rational& c = 1) {
  std::vector<int> idx;
  for (int i : one_based) idx.push_back(i - 1);
  return AltForm::monomial(dim, std::span<const int>(idx), c);
}

LieAlgebra heisenberg() {
  LieAlgebra g(3);
  g.set_bracket(0, 1, e(3, 3));
  return g;
}

}  // namespace

TEST_CASE("monomials sort their indices with the permutation sign") {
  CHECK(mono(3, {2, 1}) == mono(3, {1, 2}, -1));
  CHECK(mono(4, {3, 1, 2}) == mono(4, {1, 2, 3}));
  CHECK(mono(3, {1, 1}).is_zero());
  CHECK((mono(5, {1, 2}) - mono(5, {3, 5}, 2)).str() == "e^{12} - 2*e^{35}");
  CHECK_THROWS_AS(mono(3, {4}), InputError);
}

TEST_CASE("wedge and contraction examples against the oracles") {
  const AltForm a = mono(3, {1}) + mono(3, {2});
  const AltForm expected = mono(3, {1, 2, 3}, -1);
  CHECK(t::wedge_oracle(a, mono(3, {1, 3})) == expected);
  CHECK(wedge(a, mono(3, {1, 3})) == expected);

  const AlgVector x = e(3, 1) + e(3, 2);
  const AltForm f = mono(3, {1, 2}) + mono(3, {2, 3}, 2);
  const AltForm contracted = mono(3, {2}) - mono(3, {1}) + mono(3, {3}, 2);
  CHECK(t::contract_oracle(x, f) == contracted);
  CHECK(contract(x, f) == contracted);
  CHECK_THROWS_AS(contract(x, AltForm::constant(3, 1)), InputError);
  CHECK(pairing(mono(3, {2}, 5), x) == Rational(5));
}

TEST_CASE("property: wedge agrees with the shuffle formula") {
  t::Rng rng(2024);
  for (int trial = 0; trial < 150; ++trial) {
    const int dim = 2 + trial % 4;
    std::uniform_int_distribution<int> deg(0, dim);
    const int p = deg(rng);
    const int q = std::uniform_int_distribution<int>(0, dim - p)(rng);
    const AltForm a = t::random_form(rng, dim, p);
    const AltForm b = t::random_form(rng, dim, q);
    const AltForm ab = wedge(a, b);
    REQUIRE(ab == t::wedge_oracle(a, b));
    // graded commutativity
    CHECK(wedge(b, a) == ab * Rational((p * q) % 2 == 0 ? 1 : -1));
  }
}

TEST_CASE("property: contraction is the multilinear insertion and an antiderivation") {
  t::Rng rng(77);
  for (int trial = 0; trial < 150; ++trial) {
    const int dim = 2 + trial % 4;
    const int p = 1 + trial % dim;
    const AlgVector x = t::random_vector(rng, dim);
    const AltForm a = t::random_form(rng, dim, p);
    REQUIRE(contract(x, a) == t::contract_oracle(x, a));
    CHECK((p < 2 || contract(x, contract(x, a)).is_zero()));

    const AltForm b = t::random_form(rng, dim, 1);
    if (p + 1 <= dim) {
      const Rational sign = p % 2 == 0 ? 1 : -1;
      CHECK(contract(x, wedge(a, b)) == wedge(contract(x, a), b) + sign * wedge(a, contract(x, b)));
    }
  }
}

TEST_CASE("Chevalley-Eilenberg differential on the Heisenberg algebra") {
  const LieAlgebra g = heisenberg();
  CHECK(ce_d(g, mono(3, {3})) == mono(3, {1, 2}, -1));
  CHECK(ce_d(g, mono(3, {1, 3})).is_zero());
  CHECK(ce_d(g, mono(3, {1})).is_zero());
  for (int p = 0; p <= 3; ++p) {
    for (IndexSet set = 0; set < 8; ++set) {
      if (std::popcount(set) != p) continue;
      const auto idx = indices_of(set);
      const AltForm m = AltForm::monomial(3, std::span<const int>(idx));
      CHECK(ce_d(g, m) == t::ce_d_oracle(g, m));
    }
  }
}

TEST_CASE("property: differential matches the invariant formula and satisfies Leibniz") {
  t::Rng rng(5);
  for (int trial = 0; trial < 120; ++trial) {
    const int dim = 2 + trial % 4;
    const LieAlgebra g = trial % 2 == 0 ? t::random_semidirect(rng, dim) : t::random_table(rng, dim);
    const int p = trial % dim;
    const AltForm a = t::random_form(rng, dim, p);
    REQUIRE(ce_d(g, a) == t::ce_d_oracle(g, a));
    if (p + 1 < dim) {
      const AltForm b = t::random_form(rng, dim, 1);
      const Rational sign = p % 2 == 0 ? 1 : -1;
      CHECK(ce_d(g, wedge(a, b)) == wedge(ce_d(g, a), b) + sign * wedge(a, ce_d(g, b)));
    }
  }
}

TEST_CASE("Jacobi check") {
  CHECK(jacobi_check(heisenberg()).ok);
  CHECK(jacobi_check(LieAlgebra::abelian(4)).ok);

  LieAlgebra so3(3);
  so3.set_bracket(0, 1, e(3, 3));
  so3.set_bracket(0, 2, Rational(-1) * e(3, 2));
  so3.set_bracket(1, 2, e(3, 1));
  CHECK(jacobi_check(so3).ok);
  // Each bracket here lands on the third index, so flipping one sign keeps Jacobi.
  for (int flip = 0; flip < 3; ++flip) {
    LieAlgebra h = so3;
    const int i = flip == 2 ? 1 : 0, j = flip == 0 ? 1 : 2;
    h.set_bracket(i, j, Rational(-1) * so3.bracket_basis(i, j));
    CHECK(jacobi_check(h).ok);
  }

  // [e1,e2] = e2, [e1,e3] = e3, [e2,e3] = e1: Jacobiator of (e1,e2,e3) is -2 e1.
  LieAlgebra broken(3);
  broken.set_bracket(0, 1, e(3, 2));
  broken.set_bracket(0, 2, e(3, 3));
  broken.set_bracket(1, 2, e(3, 1));
  const JacobiResult r = jacobi_check(broken);
  CHECK_FALSE(r.ok);
  REQUIRE(r.witness.has_value());
  CHECK(*r.witness == std::array<int, 3>{0, 1, 2});
  CHECK_THROWS_AS(require_jacobi(broken), InputError);
  CHECK_FALSE(t::d_squared_vanishes(broken));
}

TEST_CASE("property: Jacobi holds exactly when d o d vanishes") {
  t::Rng rng(9);
  int valid = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int dim = 2 + trial % 5;
    const LieAlgebra g = trial % 3 == 0 ? t::random_semidirect(rng, dim) : t::random_table(rng, dim, 0.15);
    const bool ok = jacobi_check(g).ok;
    valid += ok;
    REQUIRE(ok == t::d_squared_vanishes(g));
  }
  CHECK(valid > 50);
  CHECK(valid < 150);
}

TEST_CASE("Lie derivative via Cartan") {
  const LieAlgebra g = heisenberg();
  CHECK(lie_derivative(g, e(3, 1), mono(3, {3})) == mono(3, {2}, -1));
  CHECK(lie_derivative(LieAlgebra::abelian(3), e(3, 1), mono(3, {1, 3})).is_zero());
}

TEST_CASE("property: Lie derivative commutes with d") {
  t::Rng rng(31);
  for (int trial = 0; trial < 80; ++trial) {
    const int dim = 3 + trial % 3;
    const LieAlgebra g = t::random_semidirect(rng, dim);
    const AlgVector x = t::random_vector(rng, dim);
    const AltForm a = t::random_form(rng, dim, 1 + trial % 2);
    CHECK(lie_derivative(g, x, ce_d(g, a)) == ce_d(g, lie_derivative(g, x, a)));
  }
}
