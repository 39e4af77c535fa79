#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <utility>

#include "nilmag/euler.hpp"

namespace nilmag {

// Coadjoint-orbit bookkeeping for the six-dimensional extension t4 with basis
// order (U, V, X, Y, Z, W): [X,Y] = Z, [Y,V] = U, [X,U] = W, [Z,V] = W.
namespace t4 {
inline constexpr std::size_t kU = 0, kV = 1, kX = 2, kY = 3, kZ = 4, kW = 5;
inline constexpr std::size_t kDim = 6;
}  // namespace t4

struct Casimirs {
  double k1 = 0.0;  // p_W
  double k2 = 0.0;  // p_W p_Y - p_Z p_U
};

Casimirs casimirs_t4(const DualState& lam);

/// Principal square root of (k2 - k1^2) / (k2 + k1^2). Pole error when the
/// denominator vanishes.
std::complex<double> alpha(double k1, double k2);

struct OrbitSpec {
  double k1 = 0.0;
  double k2 = 0.0;
  std::optional<std::complex<double>> alpha;  // empty on the pole k2 = -k1^2
  bool regular = false;                       // k1 * k2 != 0
};

OrbitSpec make_orbit_spec(double k1, double k2);

/// Free coordinates of orbit samples are drawn uniformly from this interval.
inline constexpr double kOrbitSampleHalfWidth = 2.0;

/// State on the orbit K = (k1, k2): p_W = k1, p_U, p_Z, p_X, p_V uniform
/// (seeded, drawn in that order), p_Y solved from the K2 equation.
DualState orbit_sample(double k1, double k2, std::uint64_t seed);

/// Energy bookkeeping: moment level c, base speed d, extension energy
/// b = (d^2 + c^2) / 2.
struct LevelSpec {
  double c = 0.0;
  double d = 0.0;
  double b = 0.0;
};

LevelSpec level_spec(double c, double d);

/// k2 with sqrt(2 k2 - 1) = D on the k1 = 1 orbit family.
double k2_for_target_speed(double target_speed);

/// Base speed d = sqrt(2b - c^2) for extension energy b at moment level c.
double speed_from_energy(double b, double c = 1.0);

}  // namespace nilmag
