#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nilmag/liealg.hpp"

namespace nilmag {

/// Left-invariant magnetic system (algebra, metric, closed 2-form) with an
/// optional lattice and the default field-strength multiplier c.
class MagneticSystem {
 public:
  /// Throws a validation Error when sigma is not closed or dimensions differ.
  MagneticSystem(LieAlgebra algebra, InnerProduct metric, TwoForm sigma,
                 std::optional<LatticeBasis> lattice = std::nullopt,
                 double field_strength = 1.0);

  const LieAlgebra& algebra() const { return algebra_; }
  const InnerProduct& metric() const { return metric_; }
  const TwoForm& sigma() const { return sigma_; }
  const std::optional<LatticeBasis>& lattice() const { return lattice_; }
  double field_strength() const { return field_strength_; }
  std::size_t dim() const { return algebra_.dim(); }

 private:
  LieAlgebra algebra_;
  InnerProduct metric_;
  TwoForm sigma_;
  std::optional<LatticeBasis> lattice_;
  double field_strength_;
};

/// Central extension g~ = g + RW with {X,Y} = [X',Y'] + sigma(X',Y') W.
/// W is the last coordinate; the metric makes W a unit vector orthogonal to g.
class ExtendedSystem {
 public:
  ExtendedSystem(LieAlgebra algebra, InnerProduct metric, MagneticSystem base);

  const LieAlgebra& algebra() const { return algebra_; }
  const InnerProduct& metric() const { return metric_; }
  const MagneticSystem& base() const { return base_; }
  std::size_t w_index() const { return algebra_.dim() - 1; }
  std::size_t dim() const { return algebra_.dim(); }

 private:
  LieAlgebra algebra_;
  InnerProduct metric_;
  MagneticSystem base_;
};

ExtendedSystem extend(const MagneticSystem& m);

/// Minimal k >= 1 with k * sigma(l_i, l_j) integral on the lattice basis.
Integer rationality_k(const MagneticSystem& m);

/// Base lattice vectors (zero W part) plus W / (12 k^2).
LatticeBasis extended_lattice(const MagneticSystem& m, const Integer& k);

struct ClosureResult {
  bool closed = true;
  std::size_t words_checked = 0;
  /// Letters of the first failing word: +i is generator i, -(i+1) its inverse.
  std::vector<int> counterexample_word;
  RVec counterexample_value;
};

/// Checks that every BCH product of generators and inverses with word length
/// up to max_word_len stays in the Z-span of the generators.
ClosureResult verify_lattice_closure(const ExtendedSystem& ext, const LatticeBasis& gens,
                                     std::size_t max_word_len = 3);

struct MomentSplit {
  Eigen::VectorXd base;  // restriction to g
  double c = 0.0;        // p_W = lambda(W), the moment level
};

MomentSplit split_moment(const ExtendedSystem& ext, const Eigen::VectorXd& lam);
Eigen::VectorXd join_moment(const ExtendedSystem& ext, const Eigen::VectorXd& base, double c);

}  // namespace nilmag
