#include <gtest/gtest.h>

#include <cmath>

#include "nilmag/error.hpp"
#include "nilmag/orbits.hpp"
#include "support.hpp"

using namespace nilmag;
using namespace testing_support;

namespace {

DualState state(std::initializer_list<std::pair<std::size_t, double>> entries) {
  DualState lam = DualState::Zero(6);
  for (const auto& [i, v] : entries) lam(static_cast<Eigen::Index>(i)) = v;
  return lam;
}

ErrorCategory category_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const nilmag::Error& err) {
    return err.category();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCategory::parse;
}

}  // namespace

TEST(Casimirs, Examples) {
  Casimirs k = casimirs_t4(state({{W, 1}}));
  EXPECT_EQ(k.k1, 1);
  EXPECT_EQ(k.k2, 0);
  k = casimirs_t4(state({{W, 1}, {Y, 5}}));
  EXPECT_EQ(k.k1, 1);
  EXPECT_EQ(k.k2, 5);
  k = casimirs_t4(state({}));
  EXPECT_EQ(k.k1, 0);
  EXPECT_EQ(k.k2, 0);
  k = casimirs_t4(state({{W, 2}, {Y, 3}, {Z, 4}, {U, 0.5}}));
  EXPECT_EQ(k.k2, 2 * 3 - 4 * 0.5);
  EXPECT_EQ(category_of([] { casimirs_t4(DualState::Zero(5)); }), ErrorCategory::validation);
}

TEST(Casimirs, ExactDerivativeAlongFieldVanishes) {
  // dK1 = e_W, dK2 = p_Y e_W + p_W e_Y - p_U e_Z - p_Z e_U.
  const ExtendedSystem ext = t4ext();
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const RVec p = random_rvec(rng, 6);
    const RVec f = euler_field_exact(ext.algebra(), ext.metric(), p);
    EXPECT_EQ(f[W], 0);
    EXPECT_EQ(p[Y] * f[W] + p[W] * f[Y] - p[U] * f[Z] - p[Z] * f[U], 0);
  }
}

TEST(Casimirs, DriftAlongTrajectories) {
  const ExtendedSystem ext = t4ext();
  const FieldSpec spec = FieldSpec::geodesic(ext);
  const std::vector<Observable> obs = {{"K1", [](const DualState& l) { return casimirs_t4(l).k1; }},
                                       {"K2", [](const DualState& l) { return casimirs_t4(l).k2; }}};
  for (std::uint64_t seed : {0u, 1u, 2u}) {
    const Trajectory traj = integrate(spec, orbit_sample(1, 5, seed), {1e-3, 100.0, 100000}, obs);
    EXPECT_EQ(traj.drifts.at("K1"), 0.0);
    EXPECT_LE(traj.drifts.at("K2"), 1e-7) << seed;
  }
}

TEST(Alpha, Examples) {
  EXPECT_EQ(alpha(1, 1), std::complex<double>(0, 0));
  const auto a = alpha(1, 5);
  EXPECT_NEAR(a.real(), std::sqrt(2.0 / 3.0), 1e-15);
  EXPECT_EQ(a.imag(), 0);
  EXPECT_NEAR(a.real(), 0.81650, 1e-5);
  const auto i = alpha(1, 0);
  EXPECT_EQ(i.real(), 0);
  EXPECT_EQ(i.imag(), 1);
  EXPECT_EQ(category_of([] { alpha(1, -1); }), ErrorCategory::validation);
  EXPECT_EQ(category_of([] { alpha(2, -4); }), ErrorCategory::validation);
}

TEST(Alpha, SquareAndPositivity) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int trial = 0; trial < 200; ++trial) {
    const double k1 = u(rng), k2 = u(rng);
    const auto a = alpha(k1, k2);
    const std::complex<double> expected((k2 - k1 * k1) / (k2 + k1 * k1), 0);
    EXPECT_LE(std::abs(a * a - expected), 1e-12 * std::max(1.0, std::abs(expected)));
    // Beyond the pole (k2 < -k1^2) the ratio is positive again, so the
    // real-positive characterization only holds on the side k2 > -k1^2.
    if (k2 + k1 * k1 > 0) {
      EXPECT_EQ(a.real() > 0 && a.imag() == 0, k2 > k1 * k1);
    }
  }
  const auto beyond = alpha(1, -4);
  EXPECT_NEAR(beyond.real(), std::sqrt(5.0 / 3.0), 1e-15);
  EXPECT_EQ(beyond.imag(), 0);
}

TEST(OrbitSpec, RegularFlagAndPole) {
  for (double k1 : {-2.0, -1.0, 0.0, 1.0, 3.0})
    for (double k2 : {-4.0, -1.0, 0.0, 2.0}) {
      const OrbitSpec spec = make_orbit_spec(k1, k2);
      EXPECT_EQ(spec.regular, k1 * k2 != 0);
      EXPECT_EQ(spec.alpha.has_value(), k2 + k1 * k1 != 0);
      if (spec.alpha) {
        EXPECT_EQ(*spec.alpha, alpha(k1, k2));
      }
    }
}

TEST(OrbitSample, HitsTheOrbit) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    for (auto [k1, k2] : {std::pair{1.0, 5.0}, {-0.5, 3.0}, {2.0, -1.0}, {1.0, 500.0}}) {
      const DualState lam = orbit_sample(k1, k2, seed);
      const Casimirs k = casimirs_t4(lam);
      EXPECT_EQ(k.k1, k1);
      EXPECT_LE(std::abs(k.k2 - k2), 1e-12 * std::max(1.0, std::abs(k2)));
      for (std::size_t i : {U, V, X, Z}) EXPECT_LE(std::abs(lam(static_cast<Eigen::Index>(i))), kOrbitSampleHalfWidth);
      EXPECT_GE(hamiltonian(t4ext().metric(), lam), k2 - 1e-12 * std::abs(k2));
      // alpha depends on the orbit only.
      const Casimirs again = casimirs_t4(lam);
      EXPECT_LE(std::abs(alpha(again.k1, again.k2) - alpha(k1, k2)), 1e-12);
    }
  }
}

TEST(OrbitSample, Deterministic) {
  EXPECT_EQ(orbit_sample(1, 5, 42), orbit_sample(1, 5, 42));
  EXPECT_NE(orbit_sample(1, 5, 42), orbit_sample(1, 5, 43));
  EXPECT_EQ(category_of([] { orbit_sample(0, 5, 0); }), ErrorCategory::validation);
  EXPECT_EQ(category_of([] { orbit_sample(1, NAN, 0); }), ErrorCategory::validation);
}

TEST(Levels, Examples) {
  EXPECT_EQ(level_spec(1, 1).b, 1);
  EXPECT_EQ(level_spec(2, 3).b, 6.5);
  EXPECT_EQ(k2_for_target_speed(3), 5);
  EXPECT_EQ(speed_from_energy(13, 1), 5);
  EXPECT_EQ(category_of([] { level_spec(0, 1); }), ErrorCategory::validation);
  EXPECT_EQ(category_of([] { level_spec(1, -1); }), ErrorCategory::validation);
  EXPECT_EQ(category_of([] { k2_for_target_speed(0); }), ErrorCategory::validation);
  EXPECT_EQ(category_of([] { speed_from_energy(0.2, 1); }), ErrorCategory::validation);
}

TEST(Levels, SpeedReachesTarget) {
  const InnerProduct metric = t4ext().metric();
  for (double target : {1.0, 3.0, 10.0, 31.0}) {
    const double k2 = k2_for_target_speed(target);
    EXPECT_NEAR(std::sqrt(2 * k2 - 1), target, 1e-12 * target);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const double b = hamiltonian(metric, orbit_sample(1, k2, seed));
      EXPECT_GE(speed_from_energy(b, 1.0), target * (1 - 1e-12));
    }
  }
}
