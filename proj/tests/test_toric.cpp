#include <random>

#include "doctest.h"
#include "cosym/errors.hpp"
#include "cosym/toric.hpp"
#include "support.hpp"

using namespace cosym;
namespace t = cosym::testing;

namespace {

BasisPtr eps_basis() { return std::make_shared<const SymbolBasis>(std::vector<std::string>{"eps1", "eps2"}); }

ProjectivePoint point(std::vector<ComplexRational> z) { return ProjectivePoint(std::move(z)); }

CosymplecticPair flat3() {
  return CosymplecticPair::make(LieAlgebra::abelian(3), AltForm::monomial(3, {2}), AltForm::monomial(3, {0, 1}));
}

ToricMomentModel with_vertices(const ToricMomentModel& base, std::vector<Point> vertices, const Rational& eta0) {
  ToricMomentModel m = base;
  m.kind = ToricModelKind::Other;
  m.vertices = std::move(vertices);
  m.eta0_theta = eta0;
  return m;
}

}  // namespace

TEST_CASE("momentum map of CP^n") {
  CHECK(cpn_moment(point({{1, 0}, {1, 0}})) == Point{Rational(1, 2)});
  CHECK(cpn_moment(point({{1, 0}, {1, 0}, {0, 2}})) == Point{Rational(1, 6), Rational(4, 6)});
  CHECK(cpn_moment(point({{0, 0}, {3, 4}})) == Point{1});
  CHECK_THROWS_AS(point({{0, 0}, {0, 0}}), InputError);

  CHECK(in_standard_simplex(Point{Rational(1, 6), Rational(4, 6)}));
  CHECK(in_standard_simplex(Point{0, 1}));
  CHECK_FALSE(in_standard_simplex(Point{Rational(1, 2), Rational(2, 3)}));
  CHECK_FALSE(in_standard_simplex(Point{Rational(-1, 5), Rational(1, 2)}));
  CHECK(standard_simplex_vertices(2) == std::vector<Point>{{0, 0}, {1, 0}, {0, 1}});
}

TEST_CASE("property: moment images lie in the standard simplex") {
  t::Rng rng(8);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 3;
    std::vector<ComplexRational> z;
    for (int j = 0; j <= n; ++j) z.push_back({t::small_rational(rng), t::small_rational(rng)});
    bool all_zero = true;
    for (const auto& c : z) all_zero &= c.re.is_zero() && c.im.is_zero();
    if (all_zero) continue;
    const Point mu = cpn_moment(point(z));
    CHECK(mu.size() == static_cast<std::size_t>(n));
    CHECK(in_standard_simplex(mu));
    // invariance under the torus: rotating z_j by i leaves mu fixed
    std::vector<ComplexRational> rotated = z;
    for (auto& c : rotated) c = {-c.im, c.re};
    CHECK(cpn_moment(point(rotated)) == mu);
  }
}

TEST_CASE("momentum rescaling") {
  ToricMomentModel m = ToricMomentModel::complex_projective(2);
  m.eta0_theta = 1;
  CHECK(moment_rescale(m) == std::vector<Point>{{0, 0}, {Rational(1, 2), 0}, {0, Rational(1, 2)}});
  m.eta0_theta = -1;
  CHECK_THROWS_AS(moment_rescale(m), PreconditionError);
}

TEST_CASE("property: successive rescalings compose multiplicatively") {
  t::Rng rng(19);
  std::uniform_int_distribution<int> num(-4, 8), den(1, 5);
  for (int trial = 0; trial < 200; ++trial) {
    const ToricMomentModel base = ToricMomentModel::complex_projective(1 + trial % 3);
    const Rational a(num(rng), den(rng)), b(num(rng), den(rng));
    if (Rational(1) + a <= Rational(0) || Rational(1) + b <= Rational(0)) continue;
    const auto once = moment_rescale(with_vertices(base, base.vertices, a));
    const auto twice = moment_rescale(with_vertices(base, once, b));
    const Rational combined = (Rational(1) + a) * (Rational(1) + b) - Rational(1);
    CHECK(twice == moment_rescale(with_vertices(base, base.vertices, combined)));
  }
}

TEST_CASE("type II deformations keep the momentum image") {
  const BasisPtr basis = eps_basis();
  SymbolicForm beta(3, 1);
  beta.add(basis, 1, AltForm::monomial(3, {0}));
  beta.add(basis, 2, AltForm::monomial(3, {1}));
  const DeformationRecord r = deform_type_II(flat3(), beta);
  const ToricMomentModel m = ToricMomentModel::complex_projective(2);
  const MomentUnchangedVerdict v = moment_unchanged_type_II(m, r);
  CHECK(v.unchanged);
  CHECK(v.vertices == standard_simplex_vertices(2));
  CHECK_THROWS_AS(moment_unchanged_type_II(m, deform_type_I(flat3(), AlgVector::basis(3, 2))), InputError);
}

TEST_CASE("dense subgroups and closed Reeb orbits") {
  const BasisPtr basis = eps_basis();
  const SymbolicReal e1 = SymbolicReal::symbol(basis, "eps1"), e2 = SymbolicReal::symbol(basis, "eps2");
  CHECK(dense_subgroup_check(std::vector<SymbolicReal>{e1, e2}));
  CHECK_FALSE(dense_subgroup_check(std::vector<SymbolicReal>{e1, e1 * Rational(2)}));
  CHECK_FALSE(dense_subgroup_check(std::vector<SymbolicReal>{SymbolicReal(Rational(1, 3))}));

  ToricMomentModel m = ToricMomentModel::complex_projective(2);
  m.torus_element = {e1, e2};
  const ClosedOrbitResult dense = closed_reeb_orbit_count(m);
  CHECK(dense.kind == OrbitCountKind::Finite);
  CHECK(dense.count == 3);
  CHECK(dense.dense);

  CHECK(closed_reeb_orbit_count(ToricMomentModel::complex_projective(2)).kind == OrbitCountKind::AllOrbitsClosed);

  ToricMomentModel third = ToricMomentModel::complex_projective(1);
  third.torus_element = {SymbolicReal(Rational(1, 3))};
  CHECK(closed_reeb_orbit_count(third).kind == OrbitCountKind::AllOrbitsClosed);

  // closure is a circle with weights (0, 1, 2): isolated fixed points
  m.torus_element = {e1, e1 * Rational(2)};
  const ClosedOrbitResult circle = closed_reeb_orbit_count(m);
  CHECK(circle.kind == OrbitCountKind::Finite);
  CHECK(circle.count == 3);
  CHECK(circle.extension);

  // weights (0, 1, 1): a fixed CP^1, so a continuum of closed orbits
  m.torus_element = {e1, e1 + SymbolicReal(Rational(1, 2))};
  CHECK(closed_reeb_orbit_count(m).kind == OrbitCountKind::InfinitelyMany);

  ToricMomentModel other = ToricMomentModel::complex_projective(1);
  other.kind = ToricModelKind::Other;
  CHECK_THROWS_AS(closed_reeb_orbit_count(other), UnsupportedModelError);
}

TEST_CASE("momentum condition and isotropy residuals") {
  for (const auto& [n, a] : std::vector<std::pair<int, std::vector<long>>>{{1, {1}}, {1, {-3}}, {2, {1, -1}}, {2, {2, 1}}}) {
    const ResidualRecord r = moment_condition_residual(n, a, 100, 99);
    CHECK(r.max_residual < 1e-6);
    CHECK(r.max_residual >= 0.0);
  }
  CHECK(orbit_isotropy_residual(2, std::vector<long>{1, -1}, std::vector<long>{2, 1}, 100, 99) < 1e-9);
  CHECK(moment_condition_residual(2, std::vector<long>{1, 2}, 20, 5).max_residual ==
        moment_condition_residual(2, std::vector<long>{1, 2}, 20, 5).max_residual);
  CHECK_THROWS_AS(moment_condition_residual(0, std::vector<long>{}, 10, 1), InputError);
  CHECK_THROWS_AS(moment_condition_residual(2, std::vector<long>{1}, 10, 1), InputError);
  CHECK_THROWS_AS(moment_condition_residual(1, std::vector<long>{1}, 0, 1), InputError);
}
