#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "cosym/rational.hpp"
#include "cosym/symbolic.hpp"

namespace cosym {

using Vector = std::vector<Rational>;

/// Dense row-major matrix of exact rationals.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<Rational>> rows);
  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<Vector>& rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  Vector row(std::size_t r) const;

  bool is_integral() const;
  Matrix transpose() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Vector operator*(const Matrix& a, const Vector& x);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix& a, const Matrix& b) = default;

  std::string str() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

struct RowEchelon {
  Matrix reduced;                    ///< reduced row echelon form
  std::vector<std::size_t> pivots;   ///< pivot column of each nonzero row
};

RowEchelon row_reduce(Matrix m);
std::size_t rank(const Matrix& m);
/// Basis of {x : m x = 0}; one vector per free column.
std::vector<Vector> kernel_basis(const Matrix& m);
/// Throws InputError for non-square input.
Rational determinant(const Matrix& m);

enum class SolveStatus { Unique, NoSolution, NonUnique };

struct SolveResult {
  SolveStatus status = SolveStatus::NoSolution;
  Vector solution;              ///< the solution, or a particular one when NonUnique
  std::vector<Vector> kernel;   ///< kernel basis when NonUnique
  std::size_t kernel_dim() const noexcept { return kernel.size(); }
};

/// Exact solve of m x = b. Throws InputError on dimension mismatch.
SolveResult solve_linear(const Matrix& m, const Vector& b);

/// Flattens each row of SymbolicReal entries into its rational coefficient
/// vector (entry-major, basis-minor) over the common basis.
Matrix flatten_symbolic_rows(std::span<const std::vector<SymbolicReal>> rows);
/// Rank over Q of the flattened coefficient matrix. Throws InputError on
/// mixed symbol bases or ragged rows.
std::size_t rank_over_q(std::span<const std::vector<SymbolicReal>> rows);

}  // namespace cosym
