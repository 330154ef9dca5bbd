#include "cosym/toric.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <random>

#include "cosym/errors.hpp"
#include "cosym/matrix.hpp"

namespace cosym {

ProjectivePoint::ProjectivePoint(std::vector<ComplexRational> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) throw InputError("projective point needs at least one coordinate");
  const bool all_zero = std::all_of(coords_.begin(), coords_.end(),
                                    [](const ComplexRational& z) { return z.re.is_zero() && z.im.is_zero(); });
  if (all_zero) throw InputError("projective point with all coordinates zero");
}

std::vector<Point> standard_simplex_vertices(int n) {
  std::vector<Point> out;
  out.emplace_back(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    Point v(static_cast<std::size_t>(n));
    v[static_cast<std::size_t>(j)] = 1;
    out.push_back(std::move(v));
  }
  return out;
}

ToricMomentModel ToricMomentModel::complex_projective(int n) {
  if (n < 1) throw InputError("CP^n needs n >= 1");
  ToricMomentModel m;
  m.kind = ToricModelKind::ComplexProjective;
  m.n = n;
  m.vertices = standard_simplex_vertices(n);
  m.torus_element.assign(static_cast<std::size_t>(n), SymbolicReal());
  return m;
}

Point cpn_moment(const ProjectivePoint& p) {
  Rational total = 0;
  for (const auto& z : p.coords()) total += z.norm2();
  Point mu;
  for (std::size_t j = 1; j < p.coords().size(); ++j) mu.push_back(p.coords()[j].norm2() / total);
  return mu;
}

bool in_standard_simplex(std::span<const Rational> x) {
  Rational sum = 0;
  for (const auto& v : x) {
    if (v.sign() < 0) return false;
    sum += v;
  }
  return sum <= Rational(1);
}

std::vector<Point> moment_rescale(const ToricMomentModel& m) {
  const Rational scale = 1 + m.eta0_theta;
  if (scale.sign() <= 0) throw PreconditionError("1+eta(theta) <= 0 (1+eta(theta) = " + scale.str() + ")");
  const Rational inv = scale.inverse();
  std::vector<Point> out = m.vertices;
  for (auto& v : out)
    for (auto& x : v) x *= inv;
  return out;
}

MomentUnchangedVerdict moment_unchanged_type_II(const ToricMomentModel& m, const DeformationRecord& record) {
  if (record.kind != DeformationKind::TypeII) throw InputError("expected a type II deformation record");
  MomentUnchangedVerdict v;
  v.unchanged = record.output.omega() == record.input.omega();
  v.vertices = m.vertices;
  return v;
}

bool dense_subgroup_check(std::span<const SymbolicReal> a) {
  std::vector<std::vector<SymbolicReal>> rows;
  rows.push_back({SymbolicReal(1)});
  for (const auto& x : a) rows.push_back({x});
  return rank_over_q(rows) == rows.size();
}

ClosedOrbitResult closed_reeb_orbit_count(const ToricMomentModel& m) {
  if (m.kind != ToricModelKind::ComplexProjective) {
    throw UnsupportedModelError("closed Reeb orbit count is implemented for CP^n mapping tori only");
  }
  if (m.torus_element.size() != static_cast<std::size_t>(m.n)) {
    throw InputError("torus element needs " + std::to_string(m.n) + " rotation numbers");
  }
  const BasisPtr basis = common_basis(m.torus_element);
  const std::size_t symbols = basis ? basis->size() : 0;

  // The closure's identity component has Lie algebra spanned by the vectors of
  // symbolic coefficients v_s = (coeff of symbol s in a_j)_j. Coordinates j, k lie
  // in one fixed component iff their weights agree on that span: v_s[j] = v_s[k].
  std::map<std::vector<Rational>, std::vector<int>> groups;
  for (int j = 0; j <= m.n; ++j) {
    std::vector<Rational> key(symbols);
    if (j > 0) {
      for (std::size_t s = 1; s <= symbols; ++s) key[s - 1] = m.torus_element[static_cast<std::size_t>(j - 1)].coefficient(s);
    }
    groups[key].push_back(j);
  }

  ClosedOrbitResult r;
  r.dense = dense_subgroup_check(m.torus_element);
  for (auto& [key, coords] : groups) r.fixed_components.push_back(coords);
  std::sort(r.fixed_components.begin(), r.fixed_components.end());
  if (groups.size() == 1) {
    r.kind = OrbitCountKind::AllOrbitsClosed;
  } else if (groups.size() == static_cast<std::size_t>(m.n) + 1) {
    r.kind = OrbitCountKind::Finite;
    r.count = m.n + 1;
  } else {
    r.kind = OrbitCountKind::InfinitelyMany;
  }
  r.extension = !r.dense && r.kind != OrbitCountKind::AllOrbitsClosed;
  return r;
}

// ------------------------------------------------------ numeric residuals

namespace {

using Cvec = std::vector<std::complex<double>>;

Cvec sample_point(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> den_dist(1, 8);
  Cvec w(static_cast<std::size_t>(n));
  for (auto& z : w) {
    const int qr = den_dist(rng);
    const int qi = den_dist(rng);
    std::uniform_int_distribution<int> nr(-2 * qr, 2 * qr);
    std::uniform_int_distribution<int> ni(-2 * qi, 2 * qi);
    z = {static_cast<double>(nr(rng)) / qr, static_cast<double>(ni(rng)) / qi};
  }
  return w;
}

double moment_component(std::span<const long> weights, const Cvec& w) {
  double total = 1.0;
  double weighted = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    const double a = std::norm(w[j]);
    total += a;
    weighted += static_cast<double>(weights[j]) * a;
  }
  return weighted / total;
}

// omega(u, v) = 2 Im sum_{jk} h_{jk} u_j conj(v_k), h_{jk} = delta_jk / s - conj(w_j) w_k / s^2,
// s = 1 + |w|^2: the form for which d mu^A = contract(A-bar, omega) in this convention.
double fubini_study(const Cvec& w, const Cvec& u, const Cvec& v) {
  double s = 1.0;
  for (const auto& z : w) s += std::norm(z);
  std::complex<double> acc = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j)
    for (std::size_t k = 0; k < w.size(); ++k) {
      const std::complex<double> h = (j == k ? 1.0 / s : 0.0) - std::conj(w[j]) * w[k] / (s * s);
      acc += h * u[j] * std::conj(v[k]);
    }
  return 2.0 * acc.imag();
}

// Fundamental field of t.[z_0 : z_1 : ...] = [z_0 : t_1 z_1 : ...] in the chart z_0 = 1.
Cvec fundamental_field(std::span<const long> weights, const Cvec& w) {
  Cvec x(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) x[j] = std::complex<double>(0.0, static_cast<double>(weights[j])) * w[j];
  return x;
}

void check_residual_args(int n, std::span<const long> weights, int samples) {
  if (n < 1 || n > 3) throw InputError("residual checks support 1 <= n <= 3");
  if (samples < 1) throw InputError("residual checks need at least one sample");
  if (weights.size() != static_cast<std::size_t>(n)) throw InputError("weight vector must have n entries");
}

}  // namespace

ResidualRecord moment_condition_residual(int n, std::span<const long> weights, int samples,
                                         std::uint64_t seed, double h) {
  check_residual_args(n, weights, samples);
  ResidualRecord rec{n, std::vector<long>(weights.begin(), weights.end()), samples, seed, h, 0.0};
  std::mt19937_64 rng(seed);
  for (int s = 0; s < samples; ++s) {
    const Cvec w = sample_point(n, rng);
    const Cvec field = fundamental_field(weights, w);
    for (int dir = 0; dir < 2 * n; ++dir) {
      Cvec u(static_cast<std::size_t>(n));
      u[static_cast<std::size_t>(dir % n)] = dir < n ? std::complex<double>(1.0, 0.0) : std::complex<double>(0.0, 1.0);
      Cvec plus = w;
      Cvec minus = w;
      for (std::size_t j = 0; j < w.size(); ++j) {
        plus[j] += h * u[j];
        minus[j] -= h * u[j];
      }
      const double diff = (moment_component(weights, plus) - moment_component(weights, minus)) / (2.0 * h);
      rec.max_residual = std::max(rec.max_residual, std::abs(diff - fubini_study(w, field, u)));
    }
  }
  return rec;
}

double orbit_isotropy_residual(int n, std::span<const long> a, std::span<const long> b, int samples,
                               std::uint64_t seed) {
  check_residual_args(n, a, samples);
  check_residual_args(n, b, samples);
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Cvec w = sample_point(n, rng);
    worst = std::max(worst, std::abs(fubini_study(w, fundamental_field(a, w), fundamental_field(b, w))));
  }
  return worst;
}

}  // namespace cosym
