#include "nilmag/symdyn.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>

namespace nilmag {

TransitionMatrix::TransitionMatrix(std::vector<std::vector<int>> rows) : n_(rows.size()) {
  if (n_ < 2) fail(ErrorCategory::validation, "transition matrix needs at least 2 symbols");
  entries_.reserve(n_ * n_);
  for (const auto& row : rows) {
    if (row.size() != n_) fail(ErrorCategory::validation, "transition matrix must be square");
    for (int v : row) {
      if (v != 0 && v != 1) fail(ErrorCategory::validation, "transition matrix entries must be 0 or 1");
      entries_.push_back(static_cast<std::uint8_t>(v));
    }
  }
}

TransitionMatrix TransitionMatrix::parse(std::string_view text) {
  std::vector<std::vector<int>> rows(1);
  for (char ch : text) {
    if (ch == ',') {
      rows.emplace_back();
    } else if (ch == '0' || ch == '1') {
      rows.back().push_back(ch - '0');
    } else if (ch != ' ') {
      fail(ErrorCategory::parse, "matrix rows must be 0/1 digits separated by commas");
    }
  }
  return TransitionMatrix(std::move(rows));
}

std::string TransitionMatrix::to_string() const {
  std::string out;
  for (std::size_t i = 0; i < n_; ++i) {
    if (i > 0) out += ',';
    for (std::size_t j = 0; j < n_; ++j) out += (*this)(i, j) ? '1' : '0';
  }
  return out;
}

namespace {

using BoolMatrix = std::vector<std::uint8_t>;

BoolMatrix bool_product(const BoolMatrix& x, const BoolMatrix& y, std::size_t n) {
  BoolMatrix out(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      if (!x[i * n + k]) continue;
      for (std::size_t j = 0; j < n; ++j) out[i * n + j] |= y[k * n + j];
    }
  return out;
}

BoolMatrix to_bool(const TransitionMatrix& a) {
  const std::size_t n = a.size();
  BoolMatrix m(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i * n + j] = a(i, j) ? 1 : 0;
  return m;
}

}  // namespace

TransitivityResult is_transitive(const TransitionMatrix& a) {
  const std::size_t n = a.size();
  TransitivityResult result;
  result.searched_up_to = (n - 1) * (n - 1) + 1;
  const BoolMatrix base = to_bool(a);
  BoolMatrix power = base;
  for (std::size_t m = 1; m <= result.searched_up_to; ++m) {
    if (std::all_of(power.begin(), power.end(), [](std::uint8_t v) { return v != 0; })) {
      result.transitive = true;
      result.witness = m;
      return result;
    }
    power = bool_product(power, base, n);
  }
  return result;
}

namespace {

/// Strongly connected components by transitive closure (N is small).
std::vector<std::vector<std::size_t>> strong_components(const TransitionMatrix& a) {
  const std::size_t n = a.size();
  BoolMatrix reach = to_bool(a);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i * n + k])
        for (std::size_t j = 0; j < n; ++j) reach[i * n + j] |= reach[k * n + j];
  std::vector<int> component(n, -1);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (component[i] >= 0) continue;
    std::vector<std::size_t> members{i};
    component[i] = static_cast<int>(out.size());
    for (std::size_t j = i + 1; j < n; ++j) {
      if (component[j] < 0 && reach[i * n + j] && reach[j * n + i]) {
        component[j] = static_cast<int>(out.size());
        members.push_back(j);
      }
    }
    out.push_back(std::move(members));
  }
  return out;
}

double block_radius(const TransitionMatrix& a, const std::vector<std::size_t>& members) {
  const std::size_t m = members.size();
  bool has_edge = false;
  for (auto i : members)
    for (auto j : members) has_edge = has_edge || a(i, j);
  if (!has_edge) return 0.0;  // single state without a loop

  // Irreducible block B; B + I is primitive with Perron root rho(B) + 1.
  std::vector<double> x(m, 1.0), y(m);
  double lo = 0.0, hi = 0.0;
  for (int iter = 0; iter < 1000000; ++iter) {
    for (std::size_t r = 0; r < m; ++r) {
      double acc = x[r];
      for (std::size_t c = 0; c < m; ++c) {
        if (a(members[r], members[c])) acc += x[c];
      }
      y[r] = acc;
    }
    lo = y[0] / x[0];
    hi = lo;
    for (std::size_t r = 1; r < m; ++r) {
      const double q = y[r] / x[r];
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
    const double norm = *std::max_element(y.begin(), y.end());
    for (std::size_t r = 0; r < m; ++r) x[r] = y[r] / norm;
    if (hi - lo <= 1e-15 * hi) break;
  }
  return 0.5 * (lo + hi) - 1.0;
}

using Poly = std::vector<Rational>;  // increasing degree, no trailing zeros

void trim(Poly& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

Poly derivative(const Poly& p) {
  Poly d;
  for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
  trim(d);
  return d;
}

Poly remainder(Poly num, const Poly& den) {
  trim(num);
  while (num.size() >= den.size() && !num.empty()) {
    const Rational f = num.back() / den.back();
    const std::size_t shift = num.size() - den.size();
    for (std::size_t i = 0; i < den.size(); ++i) num[shift + i] -= f * den[i];
    num.pop_back();
    trim(num);
  }
  return num;
}

Poly quotient(Poly num, const Poly& den) {
  trim(num);
  if (num.size() < den.size()) return {};
  Poly q(num.size() - den.size() + 1);
  while (num.size() >= den.size() && !num.empty()) {
    const Rational f = num.back() / den.back();
    const std::size_t shift = num.size() - den.size();
    q[shift] = f;
    for (std::size_t i = 0; i < den.size(); ++i) num[shift + i] -= f * den[i];
    num.pop_back();
    trim(num);
  }
  trim(q);
  return q;
}

Poly poly_gcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = remainder(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

Rational evaluate(const Poly& p, const Rational& x) {
  Rational acc = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * x + *it;
  return acc;
}

int variations(const std::vector<int>& signs) {
  int count = 0, prev = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++count;
    prev = s;
  }
  return count;
}

}  // namespace

double spectral_radius_power(const TransitionMatrix& a) {
  double rho = 0.0;
  for (const auto& block : strong_components(a)) rho = std::max(rho, block_radius(a, block));
  return rho;
}

std::vector<Integer> characteristic_polynomial(const TransitionMatrix& a) {
  // Faddeev-LeVerrier; every division by k is exact over the integers.
  const std::size_t n = a.size();
  std::vector<Integer> c(n + 1);
  c[n] = 1;
  std::vector<Integer> m(n * n, 0);  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<Integer> next(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        Integer acc = 0;
        for (std::size_t l = 0; l < n; ++l) {
          if (a(i, l)) acc += m[l * n + j];
        }
        next[i * n + j] = acc;
      }
      next[i * n + i] += c[n - k + 1];
    }
    Integer trace = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l)
        if (a(i, l)) trace += next[l * n + i];
    c[n - k] = -trace / static_cast<long>(k);
    m = std::move(next);
  }
  return c;
}

double largest_real_root(const std::vector<Integer>& coeffs) {
  Poly p;
  for (const auto& c : coeffs) p.emplace_back(c);
  trim(p);
  if (p.size() < 2) fail(ErrorCategory::validation, "polynomial has no roots");

  const Poly square_free = quotient(p, poly_gcd(p, derivative(p)));
  std::vector<Poly> sturm{square_free, derivative(square_free)};
  while (sturm.back().size() > 1) {
    Poly r = remainder(sturm[sturm.size() - 2], sturm.back());
    if (r.empty()) break;
    for (auto& x : r) x = -x;
    sturm.push_back(std::move(r));
  }

  const auto roots_above = [&](const Rational& x) {
    std::vector<int> at_x, at_inf;
    for (const auto& s : sturm) {
      at_x.push_back(sgn(evaluate(s, x)));
      at_inf.push_back(sgn(s.back()));
    }
    return variations(at_x) - variations(at_inf);
  };

  // Cauchy bound on root magnitudes.
  Rational bound = 0;
  for (std::size_t i = 0; i + 1 < square_free.size(); ++i) {
    bound = std::max(bound, Rational(abs(square_free[i] / square_free.back())));
  }
  bound += 1;
  Rational lo = -bound, hi = bound;
  if (roots_above(lo) == 0) fail(ErrorCategory::validation, "polynomial has no real root");
  // Invariant: a root lies in (lo, hi] and none above hi.
  const Rational width_target = Rational(1, Integer(1) << 70) * (1 + bound);
  while (hi - lo > width_target) {
    Rational mid = (lo + hi) / 2;
    if (roots_above(mid) > 0) {
      lo = mid;
    } else if (sgn(evaluate(square_free, mid)) == 0) {
      return mid.get_d();  // exact largest root
    } else {
      hi = mid;
    }
  }
  return Rational((lo + hi) / 2).get_d();
}

EntropyResult sft_entropy(const TransitionMatrix& a) {
  EntropyResult result;
  result.power_iteration_radius = spectral_radius_power(a);
  result.spectral_radius = result.power_iteration_radius;
  if (a.size() <= kCharpolyCrossCheckMaxSize) {
    const double root = largest_real_root(characteristic_polynomial(a));
    result.charpoly_radius = root;
    if (std::abs(root - result.power_iteration_radius) > kSpectralCrossCheckTolerance) {
      fail(ErrorCategory::validation, "spectral radius cross-check failed: power iteration " +
                                          std::to_string(result.power_iteration_radius) +
                                          " vs characteristic root " + std::to_string(root));
    }
    result.spectral_radius = root;
  }
  if (result.spectral_radius > 0.0) result.entropy = std::log(result.spectral_radius);
  return result;
}

Integer count_periodic(const TransitionMatrix& a, std::size_t p) {
  if (p == 0) fail(ErrorCategory::validation, "period must be at least 1");
  const std::size_t n = a.size();
  using IMat = std::vector<Integer>;
  const auto mul = [n](const IMat& x, const IMat& y) {
    IMat out(n * n, 0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        if (x[i * n + k] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) out[i * n + j] += x[i * n + k] * y[k * n + j];
      }
    return out;
  };
  IMat base(n * n), result(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    result[i * n + i] = 1;
    for (std::size_t j = 0; j < n; ++j) base[i * n + j] = a(i, j) ? 1 : 0;
  }
  for (std::size_t e = p; e > 0; e >>= 1) {
    if (e & 1) result = mul(result, base);
    if (e > 1) base = mul(base, base);
  }
  Integer trace = 0;
  for (std::size_t i = 0; i < n; ++i) trace += result[i * n + i];
  return trace;
}

namespace {

std::int64_t floor_mod(std::int64_t x, std::int64_t m) {
  const std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

void make_primitive(std::vector<int>& word) {
  const std::size_t p = word.size();
  for (std::size_t d = 1; d < p; ++d) {
    if (p % d != 0) continue;
    bool periodic = true;
    for (std::size_t i = d; i < p && periodic; ++i) periodic = word[i] == word[i - d];
    if (periodic) {
      word.resize(d);
      return;
    }
  }
}

void rotate_right(std::vector<int>& w) { std::rotate(w.rbegin(), w.rbegin() + 1, w.rend()); }
void rotate_left(std::vector<int>& w) { std::rotate(w.begin(), w.begin() + 1, w.end()); }

}  // namespace

SymbolSequence::SymbolSequence(std::vector<int> left, std::int64_t core_start,
                               std::vector<int> core, std::vector<int> right)
    : left_(std::move(left)), core_start_(core_start), core_(std::move(core)), right_(std::move(right)) {
  if (left_.empty() || right_.empty()) fail(ErrorCategory::validation, "periods must be non-empty");
  for (const auto* w : {&left_, &core_, &right_}) {
    for (int s : *w) {
      if (s < 0) fail(ErrorCategory::validation, "symbols must be non-negative");
    }
  }
  canonicalize();
}

SymbolSequence SymbolSequence::periodic(std::vector<int> word) {
  auto copy = word;
  return SymbolSequence(std::move(copy), 0, {}, std::move(word));
}

void SymbolSequence::canonicalize() {
  make_primitive(left_);
  make_primitive(right_);

  bool changed = true;
  while (changed) {
    changed = false;
    if (!core_.empty() && core_.back() == right_.back()) {
      rotate_right(right_);
      core_.pop_back();
      changed = true;
    }
    if (!core_.empty() && core_.front() == left_.front()) {
      rotate_left(left_);
      core_.erase(core_.begin());
      ++core_start_;
      changed = true;
    }
  }
  if (!core_.empty()) return;

  if (left_ == right_) {
    // Purely periodic: anchor the boundary at index 0.
    const auto p = static_cast<std::int64_t>(right_.size());
    std::vector<int> anchored(right_.size());
    for (std::int64_t j = 0; j < p; ++j) {
      anchored[static_cast<std::size_t>(j)] = right_[static_cast<std::size_t>(floor_mod(j - core_start_, p))];
    }
    left_ = anchored;
    right_ = std::move(anchored);
    core_start_ = 0;
    return;
  }

  const std::size_t limit = std::lcm(left_.size(), right_.size()) + 1;
  for (std::size_t guard = 0; guard < limit && left_.back() == right_.back(); ++guard) {
    rotate_right(right_);
    rotate_right(left_);
    --core_start_;
  }
}

int SymbolSequence::at(std::int64_t i) const {
  if (i < core_start_) {
    return left_[static_cast<std::size_t>(floor_mod(i - core_start_, static_cast<std::int64_t>(left_.size())))];
  }
  if (i >= core_end()) {
    return right_[static_cast<std::size_t>(floor_mod(i - core_end(), static_cast<std::int64_t>(right_.size())))];
  }
  return core_[static_cast<std::size_t>(i - core_start_)];
}

int SymbolSequence::max_symbol() const {
  int m = 0;
  for (const auto* w : {&left_, &core_, &right_})
    for (int s : *w) m = std::max(m, s);
  return m;
}

int SymbolSequence::min_symbol() const {
  int m = left_.front();
  for (const auto* w : {&left_, &core_, &right_})
    for (int s : *w) m = std::min(m, s);
  return m;
}

SymbolSequence shift_apply(const SymbolSequence& w, std::int64_t steps) {
  return SymbolSequence(w.left(), w.core_start() - steps, w.core(), w.right());
}

bool admissible(const SymbolSequence& w, const TransitionMatrix& a) {
  if (static_cast<std::size_t>(w.max_symbol()) >= a.size()) return false;
  const std::int64_t from = w.core_start() - static_cast<std::int64_t>(w.left().size()) - 1;
  const std::int64_t to = w.core_end() + static_cast<std::int64_t>(w.right().size()) + 1;
  for (std::int64_t i = from; i < to; ++i) {
    if (!a(static_cast<std::size_t>(w.at(i)), static_cast<std::size_t>(w.at(i + 1)))) return false;
  }
  return true;
}

MetricValue d_lambda(const SymbolSequence& w1, const SymbolSequence& w2, double lam, double tol) {
  if (!(lam > 1.0)) fail(ErrorCategory::validation, "d_lambda needs lambda > 1");
  if (!(tol > 0.0)) fail(ErrorCategory::validation, "d_lambda needs a positive tolerance");
  const double spread = std::max(w1.max_symbol(), w2.max_symbol()) -
                        std::min(w1.min_symbol(), w2.min_symbol());
  // Tail beyond |n| > M is at most 2 * spread * lam^-M / (lam - 1).
  std::int64_t m = 0;
  double tail = 2.0 * spread / (lam - 1.0);
  while (tail > tol) {
    ++m;
    tail /= lam;
  }
  double sum = std::abs(w1.at(0) - w2.at(0));
  double weight = 1.0;
  for (std::int64_t n = 1; n <= m; ++n) {
    weight /= lam;
    sum += weight * (std::abs(w1.at(n) - w2.at(n)) + std::abs(w1.at(-n) - w2.at(-n)));
  }
  return MetricValue{sum, tail};
}

std::optional<std::vector<int>> connecting_word(const TransitionMatrix& a, const std::vector<int>& from,
                                                const std::vector<int>& to) {
  if (from.empty() || to.empty()) fail(ErrorCategory::validation, "connecting_word needs non-empty words");
  const std::size_t n = a.size();
  std::vector<int> parent(n, -2);
  std::deque<std::size_t> queue;
  const auto start = static_cast<std::size_t>(from.back());
  const auto goal = static_cast<std::size_t>(to.front());
  if (start >= n || goal >= n) return std::nullopt;
  // BFS over symbols reachable in >= 1 step from the end of `from`.
  for (std::size_t j = 0; j < n; ++j) {
    if (a(start, j) && parent[j] == -2) {
      parent[j] = -1;
      queue.push_back(j);
    }
  }
  while (!queue.empty() && parent[goal] == -2) {
    const std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t j = 0; j < n; ++j) {
      if (a(v, j) && parent[j] == -2) {
        parent[j] = static_cast<int>(v);
        queue.push_back(j);
      }
    }
  }
  if (parent[goal] == -2) return std::nullopt;
  std::vector<int> bridge;
  for (int v = static_cast<int>(goal); v != -1; v = parent[static_cast<std::size_t>(v)]) bridge.push_back(v);
  std::reverse(bridge.begin(), bridge.end());  // bridge.back() == goal
  std::vector<int> word = from;
  word.insert(word.end(), bridge.begin(), bridge.end() - 1);
  word.insert(word.end(), to.begin(), to.end());
  return word;
}

}  // namespace nilmag
