#pragma once

#include <cstddef>
#include <cstdint>

// Every default used by the CLI and the acceptance runs.
namespace nilmag::defaults {

inline constexpr double kStep = 1e-3;
inline constexpr double kIntegrateTEnd = 10.0;
inline constexpr std::size_t kSampleStride = 10;

inline constexpr double kLyapunovTEnd = 1000.0;
inline constexpr double kRenormInterval = 1.0;
inline constexpr double kTransientFraction = 0.1;

inline constexpr double kSweepTEnd = 1000.0;

inline constexpr std::uint64_t kSeed = 0;
inline constexpr double kFieldStrength = 1.0;

// Orbit used when a t4-shaped run gives no (k1, k2).
inline constexpr double kOrbitK1 = 1.0;
inline constexpr double kOrbitK2 = 5.0;

inline constexpr std::size_t kClosureWordLength = 3;
inline constexpr std::size_t kMaxPeriod = 8;

// Calibration thresholds for the MLE-based regime checks.
inline constexpr double kPositiveMle = 0.01;
inline constexpr double kZeroMle = 0.02;

}  // namespace nilmag::defaults
