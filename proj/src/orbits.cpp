#include "nilmag/orbits.hpp"

#include <cmath>
#include <random>

#include "nilmag/error.hpp"

namespace nilmag {

Casimirs casimirs_t4(const DualState& lam) {
  if (static_cast<std::size_t>(lam.size()) != t4::kDim) {
    fail(ErrorCategory::validation, "casimirs_t4 expects a 6-dimensional state");
  }
  using namespace t4;
  return Casimirs{lam(kW), lam(kW) * lam(kY) - lam(kZ) * lam(kU)};
}

std::complex<double> alpha(double k1, double k2) {
  const double den = k2 + k1 * k1;
  if (den == 0.0) fail(ErrorCategory::validation, "alpha has a pole at k2 + k1^2 = 0");
  return std::sqrt(std::complex<double>((k2 - k1 * k1) / den, 0.0));
}

OrbitSpec make_orbit_spec(double k1, double k2) {
  OrbitSpec spec{k1, k2, std::nullopt, k1 * k2 != 0.0};
  if (k2 + k1 * k1 != 0.0) spec.alpha = alpha(k1, k2);
  return spec;
}

DualState orbit_sample(double k1, double k2, std::uint64_t seed) {
  if (k1 == 0.0) fail(ErrorCategory::validation, "orbit_sample needs k1 != 0 to solve for p_Y");
  if (!std::isfinite(k1) || !std::isfinite(k2)) {
    fail(ErrorCategory::validation, "orbit_sample needs finite Casimir values");
  }
  using namespace t4;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-kOrbitSampleHalfWidth, kOrbitSampleHalfWidth);
  DualState lam(kDim);
  lam(kU) = coord(rng);
  lam(kZ) = coord(rng);
  lam(kX) = coord(rng);
  lam(kV) = coord(rng);
  lam(kW) = k1;
  lam(kY) = (k2 + lam(kZ) * lam(kU)) / k1;
  return lam;
}

LevelSpec level_spec(double c, double d) {
  if (!(c > 0.0) || !(d > 0.0)) fail(ErrorCategory::validation, "level_spec needs c, d > 0");
  return LevelSpec{c, d, 0.5 * (d * d + c * c)};
}

double k2_for_target_speed(double target_speed) {
  if (!(target_speed > 0.0)) fail(ErrorCategory::validation, "target speed must be positive");
  return 0.5 * (target_speed * target_speed + 1.0);
}

double speed_from_energy(double b, double c) {
  if (!(b > 0.0)) fail(ErrorCategory::validation, "energy must be positive");
  const double d2 = 2.0 * b - c * c;
  if (d2 < 0.0) fail(ErrorCategory::validation, "energy is below the moment level c^2 / 2");
  return std::sqrt(d2);
}

}  // namespace nilmag
