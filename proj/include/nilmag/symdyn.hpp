#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "nilmag/error.hpp"
#include "nilmag/rational.hpp"

namespace nilmag {

/// 0/1 matrix of allowed transitions i -> j.
class TransitionMatrix {
 public:
  explicit TransitionMatrix(std::vector<std::vector<int>> rows);

  /// Rows of 0/1 digits separated by commas, e.g. "11,10".
  static TransitionMatrix parse(std::string_view text);

  std::size_t size() const { return n_; }
  bool operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j] != 0; }
  std::string to_string() const;

 private:
  std::size_t n_;
  std::vector<std::uint8_t> entries_;
};

struct TransitivityResult {
  bool transitive = false;
  std::optional<std::size_t> witness;  // minimal m with A^m > 0
  std::size_t searched_up_to = 0;      // Wielandt bound (N-1)^2 + 1
};

TransitivityResult is_transitive(const TransitionMatrix& a);

struct EntropyResult {
  /// log of the Perron root; empty when A is nilpotent (entropy -infinity).
  std::optional<double> entropy;
  double spectral_radius = 0.0;
  double power_iteration_radius = 0.0;
  std::optional<double> charpoly_radius;  // computed for N <= 6
};

/// Agreement required between the two spectral-radius routes.
inline constexpr double kSpectralCrossCheckTolerance = 1e-10;
inline constexpr std::size_t kCharpolyCrossCheckMaxSize = 6;

EntropyResult sft_entropy(const TransitionMatrix& a);

/// Perron root via shifted power iteration on each strongly connected block,
/// stopped when the Collatz-Wielandt bounds agree.
double spectral_radius_power(const TransitionMatrix& a);

/// Exact characteristic polynomial det(xI - A), coefficients in increasing degree.
std::vector<Integer> characteristic_polynomial(const TransitionMatrix& a);

/// Largest real root of an integer polynomial via Sturm sequences and exact
/// bisection. Throws when the polynomial has no real root.
double largest_real_root(const std::vector<Integer>& coeffs);

/// trace(A^p): the number of points of period p (not necessarily least).
Integer count_periodic(const TransitionMatrix& a, std::size_t p);

/// Eventually periodic bi-infinite sequence: `left` repeats for indices below
/// the core, `core` occupies [core_start, core_start + |core|), `right` repeats
/// above it. The stored form is canonical: primitive periods, minimal core,
/// and for an empty core the boundary is pushed as far left as the right
/// pattern allows (purely periodic sequences are anchored at index 0).
class SymbolSequence {
 public:
  SymbolSequence(std::vector<int> left, std::int64_t core_start, std::vector<int> core,
                 std::vector<int> right);

  /// value(i) = word[i mod |word|].
  static SymbolSequence periodic(std::vector<int> word);
  static SymbolSequence constant(int symbol) { return periodic({symbol}); }

  int at(std::int64_t i) const;

  const std::vector<int>& left() const { return left_; }
  const std::vector<int>& core() const { return core_; }
  const std::vector<int>& right() const { return right_; }
  std::int64_t core_start() const { return core_start_; }
  std::int64_t core_end() const { return core_start_ + static_cast<std::int64_t>(core_.size()); }
  int max_symbol() const;
  int min_symbol() const;

  bool operator==(const SymbolSequence&) const = default;

 private:
  void canonicalize();

  std::vector<int> left_;
  std::int64_t core_start_;
  std::vector<int> core_;
  std::vector<int> right_;
};

/// omega'_i = omega_{i + steps}.
SymbolSequence shift_apply(const SymbolSequence& w, std::int64_t steps);

bool admissible(const SymbolSequence& w, const TransitionMatrix& a);

struct MetricValue {
  double value = 0.0;
  double error_bound = 0.0;  // |true - value| <= error_bound <= tol
};

/// sum_n |w1_n - w2_n| / lam^|n|, truncated once the geometric tail is below tol.
MetricValue d_lambda(const SymbolSequence& w1, const SymbolSequence& w2, double lam, double tol);

/// Shortest admissible word starting with `from` and ending with `to`
/// (overlap not allowed), or nullopt when `to` is unreachable.
std::optional<std::vector<int>> connecting_word(const TransitionMatrix& a, const std::vector<int>& from,
                                                const std::vector<int>& to);

/// Roof function depending only on the symbol at index 0.
template <class Real>
struct RoofFunction {
  std::vector<Real> values;

  const Real& at(int symbol) const {
    if (symbol < 0 || static_cast<std::size_t>(symbol) >= values.size()) {
      fail(ErrorCategory::validation, "roof function has no value for symbol");
    }
    return values[static_cast<std::size_t>(symbol)];
  }
};

template <class Real>
struct SuspensionPoint {
  SymbolSequence sequence;
  Real height;  // 0 <= height < roof(sequence_0)
};

/// Flow for time t on the suspension: (x, s + tau(x)) ~ (shift(x), s).
template <class Real>
SuspensionPoint<Real> suspension_evolve(const SuspensionPoint<Real>& pt, const Real& t,
                                        const RoofFunction<Real>& tau) {
  for (const auto& v : tau.values) {
    if (!(v > 0)) fail(ErrorCategory::validation, "roof values must be positive");
  }
  SymbolSequence seq = pt.sequence;
  Real s = pt.height + t;
  if (pt.height < 0 || !(pt.height < tau.at(seq.at(0)))) {
    fail(ErrorCategory::validation, "suspension height outside [0, roof)");
  }
  while (true) {
    if (!(s < tau.at(seq.at(0)))) {
      s -= tau.at(seq.at(0));
      seq = shift_apply(seq, 1);
    } else if (s < 0) {
      seq = shift_apply(seq, -1);
      s += tau.at(seq.at(0));
    } else {
      break;
    }
  }
  return SuspensionPoint<Real>{std::move(seq), s};
}

}  // namespace nilmag
