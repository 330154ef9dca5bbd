#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cosym/cosymplectic.hpp"
#include "cosym/rational.hpp"
#include "cosym/symbolic.hpp"

// Momentum convention on CP^n: mu_j = |z_j|^2 / sum_i |z_i|^2 for j = 1..n,
// with no 2*pi or 1/2 factors, so the image is the unit standard simplex.

namespace cosym {

using Point = std::vector<Rational>;

struct ComplexRational {
  Rational re;
  Rational im;
  Rational norm2() const { return re * re + im * im; }
};

/// Homogeneous coordinates [z_0 : ... : z_n], not all zero.
class ProjectivePoint {
 public:
  /// Throws InputError when every coordinate vanishes or the list is empty.
  explicit ProjectivePoint(std::vector<ComplexRational> coords);
  int n() const noexcept { return static_cast<int>(coords_.size()) - 1; }
  const std::vector<ComplexRational>& coords() const noexcept { return coords_; }

 private:
  std::vector<ComplexRational> coords_;
};

enum class ToricModelKind { ComplexProjective, Other };

struct ToricMomentModel {
  ToricModelKind kind = ToricModelKind::Other;
  int n = 0;
  std::vector<Point> vertices;
  Rational eta0_theta = 0;                   ///< eta(theta-bar), constant on the model
  std::vector<SymbolicReal> torus_element;   ///< rotation numbers a_j, t_j = exp(2 pi i a_j)
  int manifold_dim = 0;                      ///< dim M; 0 means 2n+1 (toric)

  /// The torus acts effectively and Hamiltonianly with dim M = 2n+1.
  bool is_toric() const noexcept { return manifold_dim == 0 || manifold_dim == 2 * n + 1; }

  /// CP^n with the standard simplex as momentum image and t = id.
  static ToricMomentModel complex_projective(int n);
};

std::vector<Point> standard_simplex_vertices(int n);

Point cpn_moment(const ProjectivePoint& p);
bool in_standard_simplex(std::span<const Rational> x);

/// Vertices scaled by 1/(1 + eta0_theta). Throws PreconditionError if 1 + eta0_theta <= 0.
std::vector<Point> moment_rescale(const ToricMomentModel& m);

struct MomentUnchangedVerdict {
  bool unchanged = false;
  std::vector<Point> vertices;
};

/// A type II deformation keeps omega, hence the momentum image. Throws
/// InputError for a type I record.
MomentUnchangedVerdict moment_unchanged_type_II(const ToricMomentModel& m, const DeformationRecord& record);

/// True iff {1, a_1, ..., a_n} is linearly independent over Q, i.e. the powers
/// of t are dense in the torus.
bool dense_subgroup_check(std::span<const SymbolicReal> a);

enum class OrbitCountKind { Finite, AllOrbitsClosed, InfinitelyMany };

struct ClosedOrbitResult {
  OrbitCountKind kind = OrbitCountKind::Finite;
  long count = 0;                                  ///< number of closed orbits when Finite
  bool dense = false;
  bool extension = false;                          ///< neither dense nor finite order
  std::vector<std::vector<int>> fixed_components;  ///< coordinate groups; each spans a CP^{k-1}
};

/// Closed Reeb orbits of the mapping torus L_t for L = CP^n: those through the
/// fixed set of the identity component of the closure of {t^k}.
/// Throws UnsupportedModelError for non-CP^n models.
ClosedOrbitResult closed_reeb_orbit_count(const ToricMomentModel& m);

struct ResidualRecord {
  int n = 0;
  std::vector<long> weights;
  int samples = 0;
  std::uint64_t seed = 0;
  double h = 1e-5;
  double max_residual = 0.0;
};

/// Max over seeded sample points of CP^n (affine chart z_0 = 1) and real chart
/// directions of |central difference of mu^A - omega_FS(A-bar, .)|.
/// Requires 1 <= n <= 3 and samples >= 1.
ResidualRecord moment_condition_residual(int n, std::span<const long> weights, int samples,
                                         std::uint64_t seed, double h = 1e-5);

/// Max |omega_FS(A-bar, B-bar)| over the same seeded sample points.
double orbit_isotropy_residual(int n, std::span<const long> a, std::span<const long> b, int samples,
                               std::uint64_t seed);

}  // namespace cosym
