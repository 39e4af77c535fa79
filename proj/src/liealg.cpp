#include "nilmag/liealg.hpp"

#include <set>

#include "nilmag/error.hpp"

namespace nilmag {

void require_dim(const RVec& v, std::size_t n, const char* what) {
  if (v.size() != n) {
    fail(ErrorCategory::validation, std::string(what) + ": dimension mismatch (expected " +
                                        std::to_string(n) + ", got " + std::to_string(v.size()) + ")");
  }
}

LieAlgebra::LieAlgebra(std::vector<std::string> labels, StructureMap structure)
    : labels_(std::move(labels)) {
  const std::size_t n = labels_.size();
  if (n == 0) fail(ErrorCategory::validation, "Lie algebra must have positive dimension");
  std::set<std::string> seen;
  for (const auto& l : labels_) {
    if (l.empty() || !seen.insert(l).second) {
      fail(ErrorCategory::validation, "basis labels must be distinct and non-empty");
    }
  }
  for (auto& [key, vec] : structure) {
    const auto [i, j] = key;
    if (i >= j || j >= n) {
      fail(ErrorCategory::validation, "structure constants must be keyed by (i, j) with i < j < dim");
    }
    require_dim(vec, n, "structure constant vector");
    if (!is_zero(vec)) structure_.emplace(key, std::move(vec));
  }
}

LieAlgebra LieAlgebra::abelian(std::vector<std::string> labels) {
  return LieAlgebra(std::move(labels), {});
}

std::optional<std::size_t> LieAlgebra::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) return i;
  }
  return std::nullopt;
}

RVec LieAlgebra::basis_bracket(std::size_t i, std::size_t j) const {
  if (i == j) return zero_vector(dim());
  if (i < j) {
    auto it = structure_.find({i, j});
    return it == structure_.end() ? zero_vector(dim()) : it->second;
  }
  auto it = structure_.find({j, i});
  return it == structure_.end() ? zero_vector(dim()) : scale(-1, it->second);
}

namespace {

bool leading_minors_positive(const RMatrix& g) {
  // Gaussian elimination without row exchanges: every pivot is a ratio of
  // consecutive leading principal minors.
  const std::size_t n = g.rows();
  RMatrix a = g;
  for (std::size_t k = 0; k < n; ++k) {
    if (sgn(a(k, k)) <= 0) return false;
    for (std::size_t r = k + 1; r < n; ++r) {
      if (sgn(a(r, k)) == 0) continue;
      const Rational f = a(r, k) / a(k, k);
      for (std::size_t c = k; c < n; ++c) a(r, c) -= f * a(k, c);
    }
  }
  return true;
}

}  // namespace

InnerProduct::InnerProduct(RMatrix gram) : gram_(std::move(gram)) {
  if (gram_.rows() != gram_.cols() || gram_.rows() == 0) {
    fail(ErrorCategory::validation, "metric must be a non-empty square matrix");
  }
  if (gram_ != gram_.transpose()) fail(ErrorCategory::validation, "metric is not symmetric");
  if (!leading_minors_positive(gram_)) {
    fail(ErrorCategory::validation, "metric is not positive definite");
  }
  inverse_ = inverse(gram_);
}

InnerProduct InnerProduct::identity(std::size_t n) { return InnerProduct(RMatrix::identity(n)); }

TwoForm::TwoForm(RMatrix matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) fail(ErrorCategory::validation, "2-form must be square");
  for (std::size_t i = 0; i < matrix_.rows(); ++i)
    for (std::size_t j = 0; j < matrix_.cols(); ++j) {
      if (matrix_(i, j) != -matrix_(j, i)) {
        fail(ErrorCategory::validation, "2-form is not skew-symmetric");
      }
    }
}

TwoForm TwoForm::zero(std::size_t n) { return TwoForm(RMatrix(n, n)); }

TwoForm TwoForm::from_entries(
    std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, Rational>>& entries) {
  RMatrix m(n, n);
  for (const auto& [i, j, v] : entries) {
    if (i >= n || j >= n) fail(ErrorCategory::validation, "2-form entry index out of range");
    if (i == j) {
      if (sgn(v) != 0) fail(ErrorCategory::validation, "2-form diagonal must vanish");
      continue;
    }
    m(i, j) = v;
    m(j, i) = -v;
  }
  return TwoForm(std::move(m));
}

Rational TwoForm::operator()(const RVec& x, const RVec& y) const {
  return dot(x, matrix_.apply(y));
}

bool TwoForm::is_zero() const {
  for (std::size_t i = 0; i < matrix_.rows(); ++i)
    for (std::size_t j = 0; j < matrix_.cols(); ++j)
      if (sgn(matrix_(i, j)) != 0) return false;
  return true;
}

Subspace::Subspace(std::size_t ambient_dim, const std::vector<RVec>& spanning)
    : ambient_dim_(ambient_dim) {
  for (const auto& v : spanning) require_dim(v, ambient_dim, "subspace vector");
  basis_ = reduced_echelon(spanning, ambient_dim).rows;
}

bool Subspace::contains(const RVec& v) const {
  require_dim(v, ambient_dim_, "subspace membership");
  auto rows = basis_;
  rows.push_back(v);
  return rank(rows, ambient_dim_) == basis_.size();
}

bool Subspace::contains(const Subspace& other) const {
  for (const auto& v : other.basis()) {
    if (!contains(v)) return false;
  }
  return true;
}

LatticeBasis::LatticeBasis(std::vector<RVec> vectors) : vectors_(std::move(vectors)) {
  const std::size_t n = vectors_.size();
  if (n == 0) fail(ErrorCategory::validation, "lattice basis is empty");
  for (const auto& v : vectors_) require_dim(v, n, "lattice vector");
  const RMatrix columns = RMatrix::from_rows(vectors_).transpose();
  if (sgn(determinant(columns)) == 0) {
    fail(ErrorCategory::validation, "lattice vectors are linearly dependent");
  }
  coordinate_map_ = inverse(columns);
}

RVec LatticeBasis::coordinates(const RVec& v) const {
  require_dim(v, dim(), "lattice coordinates");
  return coordinate_map_.apply(v);
}

bool LatticeBasis::contains(const RVec& v) const {
  for (const auto& c : coordinates(v)) {
    if (c.get_den() != 1) return false;
  }
  return true;
}

RVec bracket(const LieAlgebra& algebra, const RVec& x, const RVec& y) {
  const std::size_t n = algebra.dim();
  require_dim(x, n, "bracket");
  require_dim(y, n, "bracket");
  RVec out = zero_vector(n);
  for (const auto& [key, c] : algebra.structure()) {
    const auto [i, j] = key;
    // [x, y] picks up (x_i y_j - x_j y_i) [e_i, e_j]
    const Rational w = x[i] * y[j] - x[j] * y[i];
    if (sgn(w) == 0) continue;
    for (std::size_t k = 0; k < n; ++k) {
      if (sgn(c[k]) != 0) out[k] += w * c[k];
    }
  }
  return out;
}

ValidationReport validate(const LieAlgebra& algebra) {
  const std::size_t n = algebra.dim();
  ValidationReport report;
  report.max_residual = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        const RVec ei = unit_vector(n, i), ej = unit_vector(n, j), ek = unit_vector(n, k);
        RVec sum = bracket(algebra, ei, algebra.basis_bracket(j, k));
        sum = add(sum, bracket(algebra, ej, algebra.basis_bracket(k, i)));
        sum = add(sum, bracket(algebra, ek, algebra.basis_bracket(i, j)));
        const Rational r = max_abs(sum);
        if (r > report.max_residual) {
          report.max_residual = r;
          report.worst = std::array<std::size_t, 3>{i, j, k};
        }
      }
  report.pass = sgn(report.max_residual) == 0;
  return report;
}

namespace {

Subspace bracket_with_algebra(const LieAlgebra& algebra, const Subspace& s) {
  const std::size_t n = algebra.dim();
  std::vector<RVec> spanning;
  for (std::size_t i = 0; i < n; ++i) {
    const RVec ei = unit_vector(n, i);
    for (const auto& b : s.basis()) {
      RVec v = bracket(algebra, ei, b);
      if (!is_zero(v)) spanning.push_back(std::move(v));
    }
  }
  return Subspace(n, spanning);
}

}  // namespace

CentralSeries lower_central_series(const LieAlgebra& algebra) {
  const std::size_t n = algebra.dim();
  std::vector<RVec> full;
  for (std::size_t i = 0; i < n; ++i) full.push_back(unit_vector(n, i));
  Subspace term(n, full);
  CentralSeries series;
  series.dims.push_back(term.dim());
  while (true) {
    Subspace next = bracket_with_algebra(algebra, term);
    series.dims.push_back(next.dim());
    if (next.dim() == 0) {
      series.step = series.dims.size() - 1;
      return series;
    }
    if (next.dim() == term.dim()) return series;  // stabilized above zero
    term = std::move(next);
  }
}

Subspace derived_algebra(const LieAlgebra& algebra) {
  std::vector<RVec> spanning;
  for (const auto& [key, c] : algebra.structure()) spanning.push_back(c);
  return Subspace(algebra.dim(), spanning);
}

RMatrix ad_matrix(const LieAlgebra& algebra, const RVec& x) {
  const std::size_t n = algebra.dim();
  require_dim(x, n, "ad_matrix");
  RMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const RVec col = bracket(algebra, x, unit_vector(n, j));
    for (std::size_t i = 0; i < n; ++i) m(i, j) = col[i];
  }
  return m;
}

Rational coboundary(const LieAlgebra& algebra, const TwoForm& sigma, std::size_t a,
                    std::size_t b, std::size_t c) {
  const std::size_t n = algebra.dim();
  const RVec ea = unit_vector(n, a), eb = unit_vector(n, b), ec = unit_vector(n, c);
  return -sigma(algebra.basis_bracket(a, b), ec) - sigma(algebra.basis_bracket(b, c), ea) -
         sigma(algebra.basis_bracket(c, a), eb);
}

CocycleReport is_cocycle(const LieAlgebra& algebra, const TwoForm& sigma) {
  const std::size_t n = algebra.dim();
  if (sigma.dim() != n) fail(ErrorCategory::validation, "2-form dimension does not match algebra");
  CocycleReport report;
  report.max_residual = 0;
  report.worst_value = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        const Rational v = coboundary(algebra, sigma, i, j, k);
        if (abs(v) > report.max_residual) {
          report.max_residual = abs(v);
          report.worst_value = v;
          report.worst = std::array<std::size_t, 3>{i, j, k};
        }
      }
  report.closed = sgn(report.max_residual) == 0;
  return report;
}

bool vanishes_on_derived(const LieAlgebra& algebra, const TwoForm& sigma) {
  const std::size_t n = algebra.dim();
  if (sigma.dim() != n) fail(ErrorCategory::validation, "2-form dimension does not match algebra");
  const Subspace derived = derived_algebra(algebra);
  for (const auto& d : derived.basis()) {
    for (std::size_t v = 0; v < n; ++v) {
      if (sgn(sigma(d, unit_vector(n, v))) != 0) return false;
    }
  }
  return true;
}

RVec bch_unchecked(const LieAlgebra& algebra, const RVec& x, const RVec& y) {
  const RVec xy = bracket(algebra, x, y);
  RVec out = add(x, y);
  if (is_zero(xy)) return out;
  out = add(out, scale(Rational(1, 2), xy));
  const RVec third = subtract(bracket(algebra, x, xy), bracket(algebra, y, xy));
  return add(out, scale(Rational(1, 12), third));
}

RVec bch(const LieAlgebra& algebra, const RVec& x, const RVec& y) {
  require_dim(x, algebra.dim(), "bch");
  require_dim(y, algebra.dim(), "bch");
  const CentralSeries series = lower_central_series(algebra);
  if (!series.step) {
    fail(ErrorCategory::unsupported_step, "bch requires a nilpotent algebra");
  }
  if (*series.step > 3) {
    fail(ErrorCategory::unsupported_step,
         "bch is exact only up to step 3 (algebra has step " + std::to_string(*series.step) + ")");
  }
  return bch_unchecked(algebra, x, y);
}

}  // namespace nilmag
