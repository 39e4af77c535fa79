#include "nilmag/magext.hpp"

#include <cmath>
#include <string>

#include "nilmag/error.hpp"

namespace nilmag {

MagneticSystem::MagneticSystem(LieAlgebra algebra, InnerProduct metric, TwoForm sigma,
                               std::optional<LatticeBasis> lattice, double field_strength)
    : algebra_(std::move(algebra)),
      metric_(std::move(metric)),
      sigma_(std::move(sigma)),
      lattice_(std::move(lattice)),
      field_strength_(field_strength) {
  const std::size_t n = algebra_.dim();
  if (metric_.dim() != n) fail(ErrorCategory::validation, "metric dimension does not match algebra");
  if (sigma_.dim() != n) fail(ErrorCategory::validation, "2-form dimension does not match algebra");
  if (lattice_ && lattice_->dim() != n) {
    fail(ErrorCategory::validation, "lattice dimension does not match algebra");
  }
  const CocycleReport closed = is_cocycle(algebra_, sigma_);
  if (!closed.closed) {
    const auto& l = algebra_.labels();
    const auto& t = *closed.worst;
    fail(ErrorCategory::validation, "sigma is not closed: d(sigma)(" + l[t[0]] + "," + l[t[1]] +
                                        "," + l[t[2]] + ") = " + to_string(closed.worst_value));
  }
  if (!std::isfinite(field_strength_)) fail(ErrorCategory::validation, "field strength must be finite");
}

ExtendedSystem::ExtendedSystem(LieAlgebra algebra, InnerProduct metric, MagneticSystem base)
    : algebra_(std::move(algebra)), metric_(std::move(metric)), base_(std::move(base)) {
  if (algebra_.dim() != base_.dim() + 1 || metric_.dim() != algebra_.dim()) {
    fail(ErrorCategory::validation, "extension must have exactly one more dimension than its base");
  }
}

namespace {

std::string fresh_label(const std::vector<std::string>& labels) {
  std::string candidate = "W";
  for (int suffix = 1;; ++suffix) {
    bool taken = false;
    for (const auto& l : labels) taken = taken || l == candidate;
    if (!taken) return candidate;
    candidate = "W" + std::to_string(suffix);
  }
}

}  // namespace

ExtendedSystem extend(const MagneticSystem& m) {
  const LieAlgebra& g = m.algebra();
  const std::size_t n = g.dim();

  std::vector<std::string> labels = g.labels();
  labels.push_back(fresh_label(labels));

  LieAlgebra::StructureMap structure;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      RVec v = g.basis_bracket(i, j);
      v.push_back(m.sigma().matrix()(i, j));
      if (!is_zero(v)) structure.emplace(LieAlgebra::Key{i, j}, std::move(v));
    }

  RMatrix gram(n + 1, n + 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) gram(i, j) = m.metric().gram()(i, j);
  gram(n, n) = 1;

  return ExtendedSystem(LieAlgebra(std::move(labels), std::move(structure)),
                        InnerProduct(std::move(gram)), m);
}

Integer rationality_k(const MagneticSystem& m) {
  if (!m.lattice()) fail(ErrorCategory::validation, "rationality_k requires a lattice");
  const auto& basis = m.lattice()->vectors();
  Integer k = 1;
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      const Rational v = m.sigma()(basis[i], basis[j]);
      mpz_lcm(k.get_mpz_t(), k.get_mpz_t(), v.get_den_mpz_t());
    }
  return k;
}

LatticeBasis extended_lattice(const MagneticSystem& m, const Integer& k) {
  const Integer expected = rationality_k(m);
  if (k != expected) {
    fail(ErrorCategory::validation, "k mismatch: lattice requires k = " + expected.get_str() +
                                        ", got " + k.get_str());
  }
  const std::size_t n = m.dim();
  std::vector<RVec> vectors;
  for (const auto& v : m.lattice()->vectors()) {
    RVec padded = v;
    padded.push_back(0);
    vectors.push_back(std::move(padded));
  }
  RVec w = zero_vector(n + 1);
  w[n] = Rational(Integer(1), Integer(12 * k * k));
  vectors.push_back(std::move(w));
  return LatticeBasis(std::move(vectors));
}

ClosureResult verify_lattice_closure(const ExtendedSystem& ext, const LatticeBasis& gens,
                                     std::size_t max_word_len) {
  const LieAlgebra& alg = ext.algebra();
  const CentralSeries series = lower_central_series(alg);
  if (!series.step || *series.step > 3) {
    fail(ErrorCategory::unsupported_step, "lattice closure check requires step <= 3");
  }
  if (gens.dim() != alg.dim()) fail(ErrorCategory::validation, "generator dimension mismatch");

  std::vector<RVec> letters;
  std::vector<int> letter_ids;
  for (std::size_t i = 0; i < gens.dim(); ++i) {
    letters.push_back(gens.vectors()[i]);
    letter_ids.push_back(static_cast<int>(i));
    letters.push_back(scale(-1, gens.vectors()[i]));
    letter_ids.push_back(-static_cast<int>(i) - 1);
  }

  ClosureResult result;
  struct Word {
    std::vector<int> ids;
    RVec value;
  };
  std::vector<Word> frontier{{{}, zero_vector(alg.dim())}};
  for (std::size_t len = 1; len <= max_word_len; ++len) {
    std::vector<Word> next;
    next.reserve(frontier.size() * letters.size());
    for (const auto& w : frontier) {
      for (std::size_t l = 0; l < letters.size(); ++l) {
        Word extended{w.ids, bch_unchecked(alg, w.value, letters[l])};
        extended.ids.push_back(letter_ids[l]);
        ++result.words_checked;
        if (!gens.contains(extended.value)) {
          result.closed = false;
          result.counterexample_word = extended.ids;
          result.counterexample_value = extended.value;
          return result;
        }
        next.push_back(std::move(extended));
      }
    }
    frontier = std::move(next);
  }
  return result;
}

MomentSplit split_moment(const ExtendedSystem& ext, const Eigen::VectorXd& lam) {
  if (static_cast<std::size_t>(lam.size()) != ext.dim()) {
    fail(ErrorCategory::validation, "split_moment: dimension mismatch");
  }
  const auto n = static_cast<Eigen::Index>(ext.w_index());
  return MomentSplit{lam.head(n), lam(n)};
}

Eigen::VectorXd join_moment(const ExtendedSystem& ext, const Eigen::VectorXd& base, double c) {
  if (static_cast<std::size_t>(base.size()) + 1 != ext.dim()) {
    fail(ErrorCategory::validation, "join_moment: dimension mismatch");
  }
  Eigen::VectorXd lam(base.size() + 1);
  lam.head(base.size()) = base;
  lam(base.size()) = c;
  return lam;
}

}  // namespace nilmag
