#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "nilmag/rational.hpp"

namespace nilmag {

/// Finite-dimensional Lie algebra given by exact structure constants.
///
/// Only brackets [e_i, e_j] with i < j are stored; [e_j, e_i] is their
/// negative and [e_i, e_i] = 0, so antisymmetry holds by construction.
/// Convention: [e_i, e_j] = sum_k c_ij^k e_k.
class LieAlgebra {
 public:
  using Key = std::pair<std::size_t, std::size_t>;
  using StructureMap = std::map<Key, RVec>;

  LieAlgebra(std::vector<std::string> labels, StructureMap structure);

  static LieAlgebra abelian(std::vector<std::string> labels);

  std::size_t dim() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const StructureMap& structure() const { return structure_; }

  std::optional<std::size_t> index_of(const std::string& label) const;

  /// [e_i, e_j] for any ordered pair.
  RVec basis_bracket(std::size_t i, std::size_t j) const;

  bool operator==(const LieAlgebra&) const = default;

 private:
  std::vector<std::string> labels_;
  StructureMap structure_;  // zero brackets are not stored
};

/// Gram matrix of a left-invariant metric in the algebra basis.
class InnerProduct {
 public:
  explicit InnerProduct(RMatrix gram);
  static InnerProduct identity(std::size_t n);

  std::size_t dim() const { return gram_.rows(); }
  const RMatrix& gram() const { return gram_; }
  const RMatrix& inverse_gram() const { return inverse_; }

  bool operator==(const InnerProduct& other) const { return gram_ == other.gram_; }

 private:
  RMatrix gram_;
  RMatrix inverse_;
};

/// Skew bilinear form sigma(e_i, e_j).
class TwoForm {
 public:
  explicit TwoForm(RMatrix matrix);
  static TwoForm zero(std::size_t n);

  /// Sets sigma(e_i, e_j) = value and sigma(e_j, e_i) = -value.
  static TwoForm from_entries(std::size_t n,
                              const std::vector<std::tuple<std::size_t, std::size_t, Rational>>& entries);

  std::size_t dim() const { return matrix_.rows(); }
  const RMatrix& matrix() const { return matrix_; }
  Rational operator()(const RVec& x, const RVec& y) const;
  bool is_zero() const;

  bool operator==(const TwoForm& other) const { return matrix_ == other.matrix_; }

 private:
  RMatrix matrix_;
};

/// Subspace of Q^n stored by its reduced echelon basis (canonical).
class Subspace {
 public:
  Subspace(std::size_t ambient_dim, const std::vector<RVec>& spanning);

  std::size_t ambient_dim() const { return ambient_dim_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<RVec>& basis() const { return basis_; }
  bool contains(const RVec& v) const;
  bool contains(const Subspace& other) const;

  bool operator==(const Subspace&) const = default;

 private:
  std::size_t ambient_dim_;
  std::vector<RVec> basis_;
};

/// Basis of the lattice L (Z-span of log Gamma).
class LatticeBasis {
 public:
  explicit LatticeBasis(std::vector<RVec> vectors);

  std::size_t dim() const { return vectors_.size(); }
  const std::vector<RVec>& vectors() const { return vectors_; }

  /// Coordinates of v in this basis (exact).
  RVec coordinates(const RVec& v) const;
  /// True iff v lies in the Z-span of the basis.
  bool contains(const RVec& v) const;

  bool operator==(const LatticeBasis& other) const { return vectors_ == other.vectors_; }

 private:
  std::vector<RVec> vectors_;
  RMatrix coordinate_map_;  // inverse of the column matrix of vectors_
};

RVec bracket(const LieAlgebra& algebra, const RVec& x, const RVec& y);

struct ValidationReport {
  Rational max_residual;                              // max |Jacobi sum| entry
  std::optional<std::array<std::size_t, 3>> worst;    // triple attaining it, if nonzero
  bool pass = false;
};

ValidationReport validate(const LieAlgebra& algebra);

struct CentralSeries {
  std::vector<std::size_t> dims;     // g, [g,g], [g,[g,g]], ... ending at 0 or a repeat
  std::optional<std::size_t> step;   // nullopt when not nilpotent
};

CentralSeries lower_central_series(const LieAlgebra& algebra);
Subspace derived_algebra(const LieAlgebra& algebra);

/// Matrix of y -> [x, y]; column j is [x, e_j].
RMatrix ad_matrix(const LieAlgebra& algebra, const RVec& x);

struct CocycleReport {
  bool closed = false;
  Rational max_residual;
  /// Signed d(sigma) value at the first triple of maximal magnitude.
  Rational worst_value;
  std::optional<std::array<std::size_t, 3>> worst;
};

/// d sigma(a,b,c) = -sigma([a,b],c) - sigma([b,c],a) - sigma([c,a],b).
Rational coboundary(const LieAlgebra& algebra, const TwoForm& sigma,
                    std::size_t a, std::size_t b, std::size_t c);
CocycleReport is_cocycle(const LieAlgebra& algebra, const TwoForm& sigma);

bool vanishes_on_derived(const LieAlgebra& algebra, const TwoForm& sigma);

/// log(exp(x) exp(y)), exact for nilpotency step <= 3.
/// Throws unsupported-step for deeper or non-nilpotent algebras.
RVec bch(const LieAlgebra& algebra, const RVec& x, const RVec& y);

/// As bch() but without re-deriving the nilpotency step; the caller
/// guarantees step <= 3.
RVec bch_unchecked(const LieAlgebra& algebra, const RVec& x, const RVec& y);

void require_dim(const RVec& v, std::size_t n, const char* what);

}  // namespace nilmag
