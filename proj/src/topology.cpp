#include "cosym/topology.hpp"

#include <algorithm>
#include <numeric>

#include "cosym/errors.hpp"

namespace cosym {

namespace {

using Poly = std::vector<Rational>;  // constant term first

void trim(Poly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

// Exact division; returns nullopt if b does not divide a.
std::optional<Poly> divide_exact(Poly a, const Poly& b) {
  trim(a);
  if (b.empty()) throw InputError("polynomial division by zero");
  if (a.size() < b.size()) {
    if (a.empty()) return Poly{};
    return std::nullopt;
  }
  Poly q(a.size() - b.size() + 1);
  const Rational lead_inv = b.back().inverse();
  for (std::size_t i = q.size(); i-- > 0;) {
    const Rational c = a[i + b.size() - 1] * lead_inv;
    q[i] = c;
    if (c.is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) a[i + j] -= c * b[j];
  }
  trim(a);
  if (!a.empty()) return std::nullopt;
  return q;
}

long euler_phi(long m) {
  long result = m;
  for (long p = 2; p * p <= m; ++p) {
    if (m % p) continue;
    while (m % p == 0) m /= p;
    result -= result / p;
  }
  if (m > 1) result -= result / m;
  return result;
}

int matrix_rank_minus_identity(const Matrix& phi) {
  if (phi.rows() == 0) return 0;
  return static_cast<int>(rank(phi - Matrix::identity(phi.rows())));
}

}  // namespace

// ----------------------------------------------------------- mapping tori

void validate(const MappingTorusModel& m) {
  if (m.fiber_betti.empty()) throw InputError("mapping torus: empty fiber Betti list");
  if (m.phi_star.size() != m.fiber_betti.size()) {
    throw InputError("mapping torus: " + std::to_string(m.phi_star.size()) + " phi^* matrices for " +
                     std::to_string(m.fiber_betti.size()) + " fiber degrees");
  }
  if (m.fiber_betti.front() != 1) throw InputError("mapping torus: b_0 of the fiber must be 1");
  for (std::size_t p = 0; p < m.fiber_betti.size(); ++p) {
    const int b = m.fiber_betti[p];
    const Matrix& phi = m.phi_star[p];
    if (b < 0) throw InputError("mapping torus: negative Betti number");
    if (phi.rows() != static_cast<std::size_t>(b) || phi.cols() != static_cast<std::size_t>(b)) {
      throw InputError("mapping torus: phi^* on H^" + std::to_string(p) + " must be " + std::to_string(b) +
                       "x" + std::to_string(b));
    }
    if (b == 0) continue;
    const Rational det = determinant(phi);
    if (phi.is_integral() ? det.abs() != Rational(1) : det.is_zero()) {
      throw InputError("mapping torus: phi^* on H^" + std::to_string(p) + " is not invertible");
    }
  }
  if (!(m.phi_star.front() == Matrix::identity(1))) {
    throw InputError("mapping torus: phi^* must be the identity on H^0");
  }
}

std::vector<int> wang_betti(const MappingTorusModel& m) {
  validate(m);
  const std::size_t top = m.fiber_betti.size();
  std::vector<int> out(top + 1, 0);
  for (std::size_t p = 0; p <= top; ++p) {
    if (p < top) out[p] += m.fiber_betti[p] - matrix_rank_minus_identity(m.phi_star[p]);
    if (p >= 1) out[p] += m.fiber_betti[p - 1] - matrix_rank_minus_identity(m.phi_star[p - 1]);
  }
  return out;
}

ToricBettiVerdict toric_betti_check(std::span<const int> betti) {
  if (betti.size() < 2 || betti.size() % 2 != 0) {
    throw InputError("toric Betti check needs 2n+2 Betti numbers of a (2n+1)-manifold, got " +
                     std::to_string(betti.size()));
  }
  const std::size_t n = betti.size() / 2 - 1;
  ToricBettiVerdict v;
  v.b0_is_one = betti[0] == 1;
  v.b1_is_one = betti[1] == 1;
  v.b2n_is_one = betti[2 * n] == 1;
  v.even_odd_pairs_equal = true;
  for (std::size_t k = 0; k <= n; ++k) {
    if (betti[2 * k] != betti[2 * k + 1]) {
      v.even_odd_pairs_equal = false;
      v.first_unequal_pair = static_cast<int>(k);
      break;
    }
  }
  return v;
}

std::vector<int> poincare_from_fixed(const FixedSetData& fixed) {
  if (fixed.indices.empty()) throw InputError("fixed set has no components");
  int zeros = 0;
  int top = 0;
  for (int idx : fixed.indices) {
    if (idx < 0 || idx % 2 != 0) throw InputError("fixed component index " + std::to_string(idx) + " is not even");
    zeros += idx == 0;
    top = std::max(top, idx);
  }
  if (zeros != 1) throw InputError("exactly one fixed component must have index 0");
  std::vector<int> coeffs(static_cast<std::size_t>(top) + 2, 0);
  for (int idx : fixed.indices) {
    coeffs[static_cast<std::size_t>(idx)] += 1;
    coeffs[static_cast<std::size_t>(idx) + 1] += 1;
  }
  return coeffs;
}

// ------------------------------------------------------------ finite order

std::vector<Rational> characteristic_polynomial(const Matrix& a) {
  if (!a.is_square()) throw InputError("characteristic polynomial of a non-square matrix");
  const std::size_t n = a.rows();
  Poly c(n + 1);
  c[n] = 1;
  Matrix m(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    Matrix next = a * m;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    m = std::move(next);
    const Matrix am = a * m;
    Rational trace = 0;
    for (std::size_t i = 0; i < n; ++i) trace += am(i, i);
    c[n - k] = -trace / Rational(static_cast<long>(k));
  }
  return c;
}

std::vector<Rational> cyclotomic_polynomial(long m) {
  if (m < 1) throw InputError("cyclotomic index must be positive");
  Poly p(static_cast<std::size_t>(m) + 1);
  p[0] = -1;
  p[static_cast<std::size_t>(m)] = 1;
  for (long d = 1; d < m; ++d) {
    if (m % d) continue;
    p = *divide_exact(p, cyclotomic_polynomial(d));
  }
  return p;
}

OrderResult finite_order(const Matrix& a) {
  if (!a.is_square() || a.rows() == 0) throw InputError("finite_order needs a nonempty square matrix");
  if (!a.is_integral()) throw InputError("finite_order needs an integer matrix");
  if (determinant(a).abs() != Rational(1)) throw InputError("matrix is not invertible over the integers");

  OrderResult r;
  r.charpoly = characteristic_polynomial(a);
  const long d = static_cast<long>(a.rows());
  Poly rest = r.charpoly;
  for (long m = 1; m <= 2 * d * d + 2 && rest.size() > 1; ++m) {
    if (euler_phi(m) > d) continue;
    const Poly phi = cyclotomic_polynomial(m);
    while (auto q = divide_exact(rest, phi)) {
      rest = std::move(*q);
      r.cyclotomic_orders.push_back(m);
    }
  }
  trim(rest);
  r.cyclotomic = rest.size() == 1 && rest[0] == Rational(1);
  if (!r.cyclotomic) return r;

  r.exhaustive_bound = 1;
  for (long m : r.cyclotomic_orders) r.exhaustive_bound = std::lcm(r.exhaustive_bound, m);
  const Matrix id = Matrix::identity(a.rows());
  Matrix power = a;
  for (long k = 1; k <= r.exhaustive_bound; ++k) {
    if (power == id) {
      r.order = k;
      break;
    }
    power = power * a;
  }
  return r;
}

std::string describe(KCosymplecticVerdict v) {
  switch (v) {
    case KCosymplecticVerdict::NoKCosymplecticMetric: return "no K-cosymplectic metric";
    case KCosymplecticVerdict::ObstructionVacuous:
      return "obstruction vacuous (finite-order gluing is an isometry for an averaged metric)";
  }
  return "unknown";
}

KObstruction k_cosymplectic_obstruction_torus(const Matrix& a) {
  KObstruction k{finite_order(a), KCosymplecticVerdict::ObstructionVacuous};
  if (!k.order.is_finite()) k.verdict = KCosymplecticVerdict::NoKCosymplecticMetric;
  return k;
}

// -------------------------------------------------------------- fibrations

FibrationVerdict fibration_check(const PeriodClass& pc) {
  std::vector<std::vector<SymbolicReal>> rows;
  for (const auto& p : pc.periods) {
    if (!p.is_zero()) rows.push_back({p});
  }
  if (rows.empty()) throw InputError("all periods vanish; the class is zero");
  (void)common_basis(pc.periods);

  FibrationVerdict v;
  v.rank = rank_over_q(rows);
  if (v.rank != 1) return v;
  v.rational_multiple_of_integer_class = true;

  // Every period is r_i * p0 with r_i rational.
  const SymbolicReal& p0 = rows.front().front();
  const auto& [lead_index, lead_coeff] = *p0.terms().begin();
  std::vector<Rational> ratios;
  mpz_class den_lcm = 1;
  for (const auto& p : pc.periods) {
    ratios.push_back(p.coefficient(lead_index) / lead_coeff);
    den_lcm = lcm(den_lcm, ratios.back().denominator());
  }
  mpz_class num_gcd = 0;
  for (const auto& r : ratios) num_gcd = gcd(num_gcd, (r * Rational(den_lcm)).numerator());
  const Rational unit = Rational(mpq_class(num_gcd, den_lcm));  // periods = (p0 * unit) * integers
  for (const auto& r : ratios) v.integer_periods.push_back(r / unit);
  v.generator = p0 * unit;
  if (v.generator->is_rational()) v.scaling = v.generator->rational_value().inverse();
  return v;
}

RationalizeResult rationalize_class(const PeriodClass& pc, const std::vector<PeriodClass>& generators) {
  std::vector<SymbolicReal> all = pc.periods;
  for (const auto& g : generators) {
    if (g.periods.size() != pc.periods.size()) {
      throw InputError("generator has " + std::to_string(g.periods.size()) + " periods, class has " +
                       std::to_string(pc.periods.size()));
    }
    all.insert(all.end(), g.periods.begin(), g.periods.end());
  }
  const BasisPtr basis = common_basis(all);
  const std::size_t width = basis ? basis->width() : 1;
  const std::size_t slots = pc.periods.size();

  RationalizeResult out;
  out.coefficients.assign(generators.size(), Rational(0));

  const bool nonzero = std::any_of(pc.periods.begin(), pc.periods.end(), [](const auto& p) { return !p.is_zero(); });
  if (nonzero && fibration_check(pc).rational_multiple_of_integer_class) {
    out.feasible = true;
    out.corrected = pc;
    out.direction = fibration_check(pc).generator->is_rational() ? "1" : fibration_check(pc).generator->str();
    return out;
  }

  for (std::size_t target = 0; target < width; ++target) {
    // Unknowns c_j; every coordinate other than `target` must cancel in every slot.
    std::vector<Vector> rows;
    Vector rhs;
    for (std::size_t i = 0; i < slots; ++i) {
      for (std::size_t s = 0; s < width; ++s) {
        if (s == target) continue;
        Vector row(generators.size());
        for (std::size_t j = 0; j < generators.size(); ++j) row[j] = generators[j].periods[i].coefficient(s);
        rows.push_back(std::move(row));
        rhs.push_back(-pc.periods[i].coefficient(s));
      }
    }
    Vector c(generators.size());
    if (!rows.empty()) {
      const SolveResult r = solve_linear(Matrix::from_rows(rows, generators.size()), rhs);
      if (r.status == SolveStatus::NoSolution) continue;
      c = r.solution;
    }
    PeriodClass corrected = pc;
    for (std::size_t j = 0; j < generators.size(); ++j)
      for (std::size_t i = 0; i < slots; ++i) corrected.periods[i] += generators[j].periods[i] * c[j];
    const bool any = std::any_of(corrected.periods.begin(), corrected.periods.end(),
                                 [](const auto& p) { return !p.is_zero(); });
    if (!any) continue;
    out.feasible = true;
    out.coefficients = std::move(c);
    out.corrected = std::move(corrected);
    out.direction = basis ? basis->name(target) : "1";
    return out;
  }
  return out;
}

// ------------------------------------------------------- basic cohomology

BasicBettiResult basic_betti(std::span<const int> betti) {
  if (betti.empty()) throw InputError("basic_betti: empty Betti list");
  if (betti[0] != 1) throw InputError("basic_betti: b_0 must be 1");
  BasicBettiResult r;
  int previous = 0;
  for (std::size_t p = 0; p < betti.size(); ++p) {
    const int value = betti[p] - previous;
    r.basic.push_back(value);
    if (value < 0) {
      r.inconsistent_at = static_cast<int>(p);
      return r;
    }
    previous = value;
  }
  if (r.basic.back() != 0) {
    r.inconsistent_at = static_cast<int>(betti.size()) - 1;
    return r;
  }
  r.consistent = true;
  return r;
}

std::vector<int> betti_from_basic(std::span<const int> basic) {
  std::vector<int> out;
  int previous = 0;
  for (int b : basic) {
    out.push_back(b + previous);
    previous = b;
  }
  return out;
}

PeriodClass torus_periods(const LieAlgebra& g, const SymbolicForm& one_form) {
  if (!g.is_abelian()) throw UnsupportedModelError("periods from coefficients need an abelian (torus) model");
  if (one_form.degree() != 1) throw InputError("periods are defined for 1-forms");
  PeriodClass pc;
  for (int i = 0; i < g.dim(); ++i) pc.periods.push_back(one_form.coefficient(IndexSet{1} << i));
  return pc;
}

}  // namespace cosym
