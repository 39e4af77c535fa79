#include "nilmag/rational.hpp"

#include <cctype>
#include <cmath>
#include <utility>

#include "nilmag/error.hpp"

namespace nilmag {

std::string_view category_name(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::parse: return "parse";
    case ErrorCategory::validation: return "validation";
    case ErrorCategory::divergence: return "divergence";
    case ErrorCategory::unsupported_step: return "unsupported-step";
  }
  return "unknown";
}

int exit_code(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::parse: return 2;
    case ErrorCategory::validation: return 3;
    case ErrorCategory::divergence: return 4;
    case ErrorCategory::unsupported_step: return 5;
  }
  return 1;
}

namespace {

bool is_integer_text(std::string_view s, bool allow_sign) {
  if (s.empty()) return false;
  std::size_t i = 0;
  if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? "1" : text.substr(slash + 1);
  if (!is_integer_text(num, true) || !is_integer_text(den, false)) {
    fail(ErrorCategory::parse, "malformed rational '" + std::string(text) + "'");
  }
  if (num.front() == '+') num.remove_prefix(1);
  Integer n(std::string(num), 10);
  Integer d(std::string(den), 10);
  if (d == 0) fail(ErrorCategory::parse, "zero denominator in '" + std::string(text) + "'");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_str();
}

double to_double(const Rational& value) { return value.get_d(); }

Rational lift(double value) {
  if (!std::isfinite(value)) {
    fail(ErrorCategory::validation, "cannot lift a non-finite double to a rational");
  }
  return Rational(value);
}

RVec zero_vector(std::size_t n) { return RVec(n, Rational(0)); }

RVec unit_vector(std::size_t n, std::size_t i) {
  RVec v = zero_vector(n);
  v[i] = 1;
  return v;
}

RVec add(const RVec& a, const RVec& b) {
  RVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

RVec subtract(const RVec& a, const RVec& b) {
  RVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

RVec scale(const Rational& s, const RVec& a) {
  RVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
  return r;
}

Rational dot(const RVec& a, const RVec& b) {
  Rational acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

bool is_zero(const RVec& a) {
  for (const auto& x : a) {
    if (sgn(x) != 0) return false;
  }
  return true;
}

Rational max_abs(const RVec& a) {
  Rational m = 0;
  for (const auto& x : a) {
    Rational ax = abs(x);
    if (ax > m) m = ax;
  }
  return m;
}

std::vector<double> to_doubles(const RVec& a) {
  std::vector<double> r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i].get_d();
  return r;
}

RMatrix RMatrix::identity(std::size_t n) {
  RMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

RMatrix RMatrix::from_rows(const std::vector<RVec>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  RMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) fail(ErrorCategory::validation, "ragged matrix rows");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

RVec RMatrix::row(std::size_t i) const {
  return RVec(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
              data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

RVec RMatrix::column(std::size_t j) const {
  RVec c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

RMatrix RMatrix::transpose() const {
  RMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

RVec RMatrix::apply(const RVec& x) const {
  RVec y = zero_vector(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) {
      if (sgn(x[j]) != 0) y[i] += (*this)(i, j) * x[j];
    }
  return y;
}

RMatrix RMatrix::operator*(const RMatrix& other) const {
  RMatrix r(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Rational& a = (*this)(i, k);
      if (sgn(a) == 0) continue;
      for (std::size_t j = 0; j < other.cols_; ++j) r(i, j) += a * other(k, j);
    }
  return r;
}

Echelon reduced_echelon(std::vector<RVec> rows, std::size_t cols) {
  Echelon out;
  std::size_t lead = 0;
  for (std::size_t col = 0; col < cols && lead < rows.size(); ++col) {
    std::size_t pivot = lead;
    while (pivot < rows.size() && sgn(rows[pivot][col]) == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[lead], rows[pivot]);
    const Rational inv = 1 / rows[lead][col];
    for (auto& x : rows[lead]) x *= inv;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == lead || sgn(rows[r][col]) == 0) continue;
      const Rational f = rows[r][col];
      for (std::size_t c = col; c < cols; ++c) rows[r][c] -= f * rows[lead][c];
    }
    out.pivots.push_back(col);
    ++lead;
  }
  rows.resize(lead);
  out.rows = std::move(rows);
  return out;
}

std::size_t rank(const std::vector<RVec>& rows, std::size_t cols) {
  return reduced_echelon(rows, cols).rows.size();
}

Rational determinant(const RMatrix& m) {
  if (m.rows() != m.cols()) fail(ErrorCategory::validation, "determinant of non-square matrix");
  const std::size_t n = m.rows();
  RMatrix a = m;
  Rational det = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && sgn(a(pivot, col)) == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (sgn(a(r, col)) == 0) continue;
      const Rational f = a(r, col) / a(col, col);
      for (std::size_t j = col; j < n; ++j) a(r, j) -= f * a(col, j);
    }
  }
  return det;
}

RMatrix inverse(const RMatrix& m) {
  if (m.rows() != m.cols()) fail(ErrorCategory::validation, "inverse of non-square matrix");
  const std::size_t n = m.rows();
  std::vector<RVec> aug(n, zero_vector(2 * n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = m(i, j);
    aug[i][n + i] = 1;
  }
  Echelon e = reduced_echelon(std::move(aug), 2 * n);
  if (e.rows.size() < n || e.pivots[n - 1] != n - 1) {
    fail(ErrorCategory::validation, "matrix is singular");
  }
  RMatrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.rows[i][n + j];
  return inv;
}

}  // namespace nilmag
