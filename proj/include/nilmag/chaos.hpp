#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nilmag/euler.hpp"

namespace nilmag {

struct LyapunovConfig {
  double step = 1e-3;
  double renorm_interval = 1.0;
  double transient_fraction = 0.1;
  std::uint64_t seed = 0;  // initial tangent direction
  /// Re-run at step / 2 and compare (the `converged` flag).
  bool check_convergence = true;
};

/// Relative change under step halving below which a run counts as converged.
inline constexpr double kConvergenceTolerance = 0.30;

struct LyapunovReport {
  double mle = 0.0;
  std::optional<std::vector<double>> spectrum;  // descending
  double fit_start = 0.0;
  double fit_end = 0.0;
  double renorm_interval = 1.0;
  double step = 0.0;
  double t_end = 0.0;
  std::uint64_t seed = 0;
  bool converged = false;
  std::optional<double> refined_mle;    // same run at step / 2
  std::optional<double> trace_average;  // time average of tr J over the fit window
};

/// Seeded direction used as the first tangent vector.
Eigen::VectorXd seeded_unit_vector(std::size_t n, std::uint64_t seed);

/// Largest Lyapunov exponent by the Benettin two-trajectory method with
/// periodic renormalization of one tangent vector.
LyapunovReport mle_benettin(const FieldSpec& spec, const DualState& lam0, double t_end,
                            const LyapunovConfig& cfg = {});

/// Full spectrum by QR re-orthonormalization of a tangent frame. The first
/// frame vector matches the Benettin tangent for the same seed.
LyapunovReport lyapunov_spectrum(const FieldSpec& spec, const DualState& lam0, double t_end,
                                 const LyapunovConfig& cfg = {});

bool is_converged(double mle, double refined_mle);

enum class GridKind {
  orbit,   // (k1, k2) on the t4 extension
  energy,  // (c, energy) for a magnetic base system
};

struct GridPoint {
  double a = 0.0;  // k1 or c
  double b = 0.0;  // k2 or energy
};

struct SweepScenario {
  GridKind kind = GridKind::orbit;
  std::function<FieldSpec(const GridPoint&)> spec_for;
  std::function<DualState(const GridPoint&, std::uint64_t seed)> initial_state;
};

/// (k1, k2) grid on a t4-shaped extension: geodesic Euler field, orbit_sample states.
SweepScenario orbit_sweep(const ExtendedSystem& ext);
SweepScenario orbit_sweep(const FieldSpec& t4_geodesic);

/// (c, energy) grid: magnetic field of strength c, seeded direction scaled to
/// base Hamiltonian value `energy`.
SweepScenario energy_sweep(const MagneticSystem& m);

struct SweepRow {
  GridPoint point;
  std::uint64_t seed = 0;
  double t_end = 0.0;
  double step = 0.0;
  std::optional<LyapunovReport> report;
  std::string error;  // set when the point failed (e.g. divergence)
};

/// One row per (grid point, seed), ordered by grid index then seed
/// regardless of how many worker threads are used.
std::vector<SweepRow> sweep(const SweepScenario& scenario, const std::vector<GridPoint>& grid,
                            double t_end, const std::vector<std::uint64_t>& seeds,
                            const LyapunovConfig& cfg, unsigned threads = 0);

}  // namespace nilmag
