#pragma once

// Independent oracles and random generators shared by the unit tests and the
// acceptance binary. The oracles evaluate forms as multilinear maps on tuples
// of vectors and never call the exterior routines they are compared against.

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>
#include <random>
#include <stdexcept>
#include <vector>

#include "cosym/exterior.hpp"

namespace cosym::testing {

inline int permutation_sign(std::vector<int> p) {
  int sign = 1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (p[i] != static_cast<int>(i)) {
      std::swap(p[i], p[static_cast<std::size_t>(p[i])]);
      sign = -sign;
    }
  }
  return sign;
}

// Leibniz expansion of det[vs[k][idx[l]]].
inline Rational leibniz_minor(const std::vector<AlgVector>& vs, const std::vector<int>& idx) {
  const std::size_t p = vs.size();
  std::vector<int> perm(p);
  std::iota(perm.begin(), perm.end(), 0);
  Rational total = 0;
  do {
    Rational term = permutation_sign(perm);
    for (std::size_t k = 0; k < p && !term.is_zero(); ++k) term *= vs[k][idx[static_cast<std::size_t>(perm[k])]];
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// alpha(v_1, ..., v_p) with e^I(e_I) = 1 for sorted I.
inline Rational evaluate(const AltForm& a, const std::vector<AlgVector>& vs) {
  if (static_cast<int>(vs.size()) != a.degree()) throw std::logic_error("arity mismatch");
  if (a.degree() == 0) return a.coefficient(0);
  Rational total = 0;
  for (const auto& [set, c] : a.terms()) total += c * leibniz_minor(vs, indices_of(set));
  return total;
}

inline std::vector<AlgVector> basis_tuple(int dim, IndexSet set) {
  std::vector<AlgVector> out;
  for (int i : indices_of(set)) out.push_back(AlgVector::basis(dim, i));
  return out;
}

/// Builds the form of degree p whose coefficient on e^I is f(e_I).
inline AltForm form_from_values(int dim, int degree, const std::function<Rational(const std::vector<AlgVector>&)>& f) {
  AltForm out(dim, degree);
  for (IndexSet set = 0; set < (IndexSet{1} << dim); ++set) {
    if (std::popcount(set) != degree) continue;
    const Rational v = f(basis_tuple(dim, set));
    if (!v.is_zero()) out.add(set, v);
  }
  return out;
}

/// Shuffle formula for the wedge product.
inline AltForm wedge_oracle(const AltForm& a, const AltForm& b) {
  const int p = a.degree(), q = b.degree();
  return form_from_values(a.dim(), p + q, [&](const std::vector<AlgVector>& vs) {
    Rational total = 0;
    std::vector<int> perm(static_cast<std::size_t>(p + q));
    std::iota(perm.begin(), perm.end(), 0);
    do {
      if (!std::is_sorted(perm.begin(), perm.begin() + p) || !std::is_sorted(perm.begin() + p, perm.end())) continue;
      std::vector<AlgVector> left, right;
      for (int k = 0; k < p; ++k) left.push_back(vs[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])]);
      for (int k = p; k < p + q; ++k) right.push_back(vs[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])]);
      total += Rational(permutation_sign(perm)) * evaluate(a, left) * evaluate(b, right);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
  });
}

/// (contract(x, a))(v_1..v_{p-1}) = a(x, v_1, ..., v_{p-1}).
inline AltForm contract_oracle(const AlgVector& x, const AltForm& a) {
  return form_from_values(a.dim(), a.degree() - 1, [&](const std::vector<AlgVector>& vs) {
    std::vector<AlgVector> args{x};
    args.insert(args.end(), vs.begin(), vs.end());
    return evaluate(a, args);
  });
}

/// Invariant formula (d a)(X_0..X_p) = sum_{i<j} (-1)^{i+j} a([X_i, X_j], X_0, ^i, ^j, X_p).
inline AltForm ce_d_oracle(const LieAlgebra& g, const AltForm& a) {
  const int p = a.degree();
  return form_from_values(a.dim(), p + 1, [&](const std::vector<AlgVector>& xs) {
    Rational total = 0;
    for (int i = 0; i <= p; ++i) {
      for (int j = i + 1; j <= p; ++j) {
        std::vector<AlgVector> args{g.bracket(xs[static_cast<std::size_t>(i)], xs[static_cast<std::size_t>(j)])};
        for (int k = 0; k <= p; ++k) {
          if (k != i && k != j) args.push_back(xs[static_cast<std::size_t>(k)]);
        }
        total += Rational((i + j) % 2 == 0 ? 1 : -1) * evaluate(a, args);
      }
    }
    return total;
  });
}

// ------------------------------------------------------------- generators

using Rng = std::mt19937;

inline Rational small_rational(Rng& rng, int bound = 3) {
  std::uniform_int_distribution<int> num(-bound, bound), den(1, 3);
  return Rational(num(rng), den(rng));
}

inline AlgVector random_vector(Rng& rng, int dim) {
  AlgVector v(dim);
  for (int i = 0; i < dim; ++i) v[i] = small_rational(rng);
  return v;
}

inline AltForm random_form(Rng& rng, int dim, int degree, double density = 0.5) {
  std::bernoulli_distribution keep(density);
  return form_from_values(dim, degree, [&](const std::vector<AlgVector>&) {
    return keep(rng) ? small_rational(rng) : Rational(0);
  });
}

/// Arbitrary bracket table with coefficients in {-2..2}; Jacobi usually fails.
inline LieAlgebra random_table(Rng& rng, int dim, double density = 0.3) {
  std::bernoulli_distribution keep(density);
  std::uniform_int_distribution<int> coeff(-2, 2);
  LieAlgebra g(dim);
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      AlgVector v(dim);
      for (int k = 0; k < dim; ++k) {
        if (keep(rng)) v[k] = coeff(rng);
      }
      g.set_bracket(i, j, v);
    }
  }
  return g;
}

/// Semidirect product R x_A R^{dim-1}: [e_0, e_i] = A e_i, R^{dim-1} abelian.
/// Jacobi holds for every A; entries in {-2..2}.
inline LieAlgebra random_semidirect(Rng& rng, int dim) {
  std::uniform_int_distribution<int> coeff(-2, 2);
  LieAlgebra g(dim);
  for (int i = 1; i < dim; ++i) {
    AlgVector v(dim);
    for (int k = 1; k < dim; ++k) v[k] = coeff(rng);
    g.set_bracket(0, i, v);
  }
  return g;
}

/// d o d = 0 on every basis monomial, computed with the library differential.
inline bool d_squared_vanishes(const LieAlgebra& g) {
  const int dim = g.dim();
  for (IndexSet set = 1; set < (IndexSet{1} << dim); ++set) {
    const auto idx = indices_of(set);
    const AltForm mono = AltForm::monomial(dim, std::span<const int>(idx));
    if (!ce_d(g, ce_d(g, mono)).is_zero()) return false;
  }
  return true;
}

}  // namespace cosym::testing
