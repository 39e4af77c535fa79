#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace nilmag {

using Integer = mpz_class;
using Rational = mpq_class;
using RVec = std::vector<Rational>;

/// Parses "p/q" or "p" (optionally signed). Throws a parse Error otherwise.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" text; integers are printed without a denominator.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// Exact rational value of a finite double.
Rational lift(double value);

RVec zero_vector(std::size_t n);
RVec unit_vector(std::size_t n, std::size_t i);
RVec add(const RVec& a, const RVec& b);
RVec subtract(const RVec& a, const RVec& b);
RVec scale(const Rational& s, const RVec& a);
Rational dot(const RVec& a, const RVec& b);
bool is_zero(const RVec& a);
Rational max_abs(const RVec& a);
std::vector<double> to_doubles(const RVec& a);

/// Dense row-major rational matrix.
class RMatrix {
 public:
  RMatrix() = default;
  RMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static RMatrix identity(std::size_t n);
  static RMatrix from_rows(const std::vector<RVec>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  RVec row(std::size_t i) const;
  RVec column(std::size_t j) const;
  RMatrix transpose() const;
  RVec apply(const RVec& x) const;
  RMatrix operator*(const RMatrix& other) const;
  bool operator==(const RMatrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

/// Reduced row echelon form. Pivot is always the first nonzero entry in the
/// column scan, so the result is canonical for the row space.
struct Echelon {
  std::vector<RVec> rows;              // nonzero rows only
  std::vector<std::size_t> pivots;     // pivot column of each row
};

Echelon reduced_echelon(std::vector<RVec> rows, std::size_t cols);
std::size_t rank(const std::vector<RVec>& rows, std::size_t cols);
Rational determinant(const RMatrix& m);

/// Inverse of a square matrix; throws a validation Error when singular.
RMatrix inverse(const RMatrix& m);

}  // namespace nilmag
