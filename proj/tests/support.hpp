#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "nilmag/liealg.hpp"
#include "nilmag/magext.hpp"
#include "nilmag/scenarios.hpp"

namespace testing_support {

using namespace nilmag;

using Bracket = std::tuple<std::size_t, std::size_t, std::size_t, Rational>;

inline LieAlgebra make_algebra(std::vector<std::string> labels, const std::vector<Bracket>& brackets) {
  const std::size_t n = labels.size();
  LieAlgebra::StructureMap map;
  for (const auto& [i, j, k, c] : brackets) {
    auto [it, inserted] = map.try_emplace(LieAlgebra::Key{i, j}, zero_vector(n));
    it->second[k] += c;
  }
  return LieAlgebra(std::move(labels), std::move(map));
}

// paper5d basis order (U, V, X, Y, Z).
inline constexpr std::size_t U = 0, V = 1, X = 2, Y = 3, Z = 4, W = 5;

inline LieAlgebra paper5d_algebra() {
  return make_algebra({"U", "V", "X", "Y", "Z"}, {{X, Y, Z, 1}, {V, Y, U, -1}});
}

inline TwoForm paper_sigma() { return TwoForm::from_entries(5, {{X, U, 1}, {Z, V, 1}}); }

inline LieAlgebra heisenberg_algebra() { return make_algebra({"X", "Y", "Z"}, {{0, 1, 2, 1}}); }

inline LieAlgebra so3_algebra() {
  return make_algebra({"X", "Y", "Z"}, {{0, 1, 2, 1}, {1, 2, 0, 1}, {0, 2, 1, -1}});
}

inline MagneticSystem builtin(const std::string& name) { return load_scenario(name).system; }
inline ExtendedSystem t4ext() { return *load_scenario("t4ext").extension; }

inline Rational random_rational(std::mt19937_64& rng, int span = 5, int max_den = 4) {
  std::uniform_int_distribution<int> num(-span, span), den(1, max_den);
  Rational q(num(rng), den(rng));
  q.canonicalize();
  return q;
}

inline RVec random_rvec(std::mt19937_64& rng, std::size_t n) {
  RVec v(n);
  for (auto& x : v) x = random_rational(rng);
  return v;
}

inline RVec e(std::size_t n, std::size_t i) { return unit_vector(n, i); }

}  // namespace testing_support
