#include "nilmag/chaos.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "nilmag/error.hpp"
#include "nilmag/orbits.hpp"
#include "nilmag/rk4.hpp"

namespace nilmag {

Eigen::VectorXd seeded_unit_vector(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  do {
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
  } while (v.norm() == 0.0);
  return v / v.norm();
}

bool is_converged(double mle, double refined_mle) {
  const double diff = std::abs(mle - refined_mle);
  return diff == 0.0 || diff < kConvergenceTolerance * std::abs(refined_mle);
}

namespace {

void validate_run(const FieldSpec& spec, const DualState& lam0, double t_end,
                  const LyapunovConfig& cfg) {
  if (static_cast<std::size_t>(lam0.size()) != spec.dim()) {
    fail(ErrorCategory::validation, "initial state dimension mismatch");
  }
  require_finite(lam0, "lyapunov");
  if (!(cfg.step > 0.0) || !(t_end > 0.0) || cfg.step > t_end) {
    fail(ErrorCategory::validation, "lyapunov needs 0 < step <= t_end");
  }
  if (!(cfg.renorm_interval >= cfg.step)) {
    fail(ErrorCategory::validation, "renormalization interval must be at least one step");
  }
  if (!(cfg.transient_fraction >= 0.0 && cfg.transient_fraction < 1.0)) {
    fail(ErrorCategory::validation, "transient fraction must lie in [0, 1)");
  }
}

/// Shared driver: integrates the base state jointly with `cols` tangent
/// vectors (a column-major block in the augmented state) and calls
/// `renormalize(frame)` at every renormalization time; it returns the
/// per-vector log growth of that interval.
template <class Renormalize>
LyapunovReport run_tangent_dynamics(const FieldSpec& spec, const DualState& lam0, double t_end,
                                    const LyapunovConfig& cfg, Eigen::MatrixXd frame,
                                    Renormalize&& renormalize, bool want_trace) {
  const Eigen::Index n = lam0.size();
  const Eigen::Index cols = frame.cols();
  const StepSchedule schedule(cfg.step, t_end);
  const long long renorm_every =
      std::max<long long>(1, std::llround(cfg.renorm_interval / cfg.step));
  const double transient_end = cfg.transient_fraction * t_end;

  Eigen::VectorXd y(n + n * cols);
  y.head(n) = lam0;
  y.tail(n * cols) = Eigen::Map<const Eigen::VectorXd>(frame.data(), n * cols);

  Eigen::MatrixXd jac(n, n);
  FieldSpec::Scratch scratch(spec.dim());
  const auto rhs = [&](const Eigen::VectorXd& s, Eigen::VectorXd& out) {
    spec.velocity_into(s.data(), out.data(), scratch);
    if (cols == 1) {
      spec.jacobian_apply_into(s.data(), s.data() + n, out.data() + n, scratch);
    } else {
      spec.jacobian_into(s.head(n), jac);
      Eigen::Map<Eigen::MatrixXd>(out.data() + n, n, cols).noalias() =
          jac * Eigen::Map<const Eigen::MatrixXd>(s.data() + n, n, cols);
    }
  };

  std::vector<double> acc(static_cast<std::size_t>(cols), 0.0);
  std::optional<double> fit_start;
  if (transient_end <= 0.0) fit_start = 0.0;
  double fit_end = 0.0;

  double trace_integral = 0.0;
  double prev_trace = 0.0;
  if (want_trace) {
    spec.jacobian_into(lam0, jac);
    prev_trace = jac.trace();
  }

  Rk4Workspace work(y.size());
  double t = 0.0;
  const long long total = schedule.total_steps();
  for (long long i = 0; i < total; ++i) {
    const double h = schedule.size_of(i);
    rk4_step(rhs, y, h, work);
    if (!y.allFinite()) {
      throw DivergenceError("trajectory diverged after t = " + std::to_string(t), t);
    }
    t = schedule.time_after(i);

    if (want_trace) {
      spec.jacobian_into(y.head(n), jac);
      const double tr = jac.trace();
      if (fit_start) trace_integral += 0.5 * h * (prev_trace + tr);
      prev_trace = tr;
    }

    const bool last = i + 1 == total;
    if ((i + 1) % renorm_every != 0 && !last) continue;

    Eigen::Map<Eigen::MatrixXd> block(y.data() + n, n, cols);
    Eigen::MatrixXd current = block;
    const std::vector<double> growth = renormalize(current);
    block = current;
    if (fit_start) {
      for (std::size_t c = 0; c < acc.size(); ++c) acc[c] += growth[c];
      fit_end = t;
    } else if (t >= transient_end) {
      fit_start = t;
      fit_end = t;
    }
  }

  if (!fit_start || fit_end <= *fit_start) {
    fail(ErrorCategory::validation, "fit window is empty; increase t_end");
  }

  LyapunovReport report;
  const double window = fit_end - *fit_start;
  std::vector<double> exponents(acc.size());
  for (std::size_t c = 0; c < acc.size(); ++c) exponents[c] = acc[c] / window;
  report.mle = *std::max_element(exponents.begin(), exponents.end());
  if (cols > 1) {
    std::sort(exponents.begin(), exponents.end(), std::greater<>());
    report.spectrum = exponents;
  }
  report.fit_start = *fit_start;
  report.fit_end = fit_end;
  report.renorm_interval = static_cast<double>(renorm_every) * cfg.step;
  report.step = cfg.step;
  report.t_end = t_end;
  report.seed = cfg.seed;
  if (want_trace) report.trace_average = trace_integral / window;
  return report;
}

LyapunovReport benettin_once(const FieldSpec& spec, const DualState& lam0, double t_end,
                             const LyapunovConfig& cfg) {
  const Eigen::VectorXd v0 = seeded_unit_vector(spec.dim(), cfg.seed);
  // Growth is measured against the norm at the start of the interval, computed
  // the same way, so an unchanged tangent contributes exactly zero.
  double start_norm = v0.norm();
  const auto renorm = [&start_norm](Eigen::MatrixXd& w) {
    const double end_norm = w.col(0).norm();
    const double growth = std::log(end_norm) - std::log(start_norm);
    w.col(0) /= end_norm;
    start_norm = w.col(0).norm();
    return std::vector<double>{growth};
  };
  return run_tangent_dynamics(spec, lam0, t_end, cfg, Eigen::MatrixXd(v0), renorm, false);
}

LyapunovReport spectrum_once(const FieldSpec& spec, const DualState& lam0, double t_end,
                             const LyapunovConfig& cfg) {
  const auto n = static_cast<Eigen::Index>(spec.dim());
  const Eigen::VectorXd v0 = seeded_unit_vector(spec.dim(), cfg.seed);

  // Complete v0 to an orthonormal frame with seeded directions.
  Eigen::MatrixXd seedframe(n, n);
  seedframe.col(0) = v0;
  std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index c = 1; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r) seedframe(r, c) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr0(seedframe);
  Eigen::MatrixXd frame = qr0.householderQ() * Eigen::MatrixXd::Identity(n, n);
  frame.col(0) = v0;  // Q's first column is +-v0 up to rounding

  Eigen::VectorXd start_norms(n);
  for (Eigen::Index c = 0; c < n; ++c) start_norms(c) = frame.col(c).norm();

  const auto renorm = [&](Eigen::MatrixXd& w) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(w);
    const Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
    Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    std::vector<double> growth(static_cast<std::size_t>(n));
    for (Eigen::Index c = 0; c < n; ++c) {
      const double rcc = r(c, c);
      growth[static_cast<std::size_t>(c)] = std::log(std::abs(rcc)) - std::log(start_norms(c));
      if (rcc < 0.0) q.col(c) = -q.col(c);
    }
    w = q;
    for (Eigen::Index c = 0; c < n; ++c) start_norms(c) = w.col(c).norm();
    return growth;
  };
  return run_tangent_dynamics(spec, lam0, t_end, cfg, frame, renorm, true);
}

template <class Once>
LyapunovReport with_convergence(Once&& once, const FieldSpec& spec, const DualState& lam0,
                                double t_end, const LyapunovConfig& cfg) {
  validate_run(spec, lam0, t_end, cfg);
  LyapunovReport report = once(spec, lam0, t_end, cfg);
  if (cfg.check_convergence) {
    LyapunovConfig refined = cfg;
    refined.step = cfg.step / 2.0;
    refined.check_convergence = false;
    const LyapunovReport fine = once(spec, lam0, t_end, refined);
    report.refined_mle = fine.mle;
    report.converged = is_converged(report.mle, fine.mle);
  }
  return report;
}

}  // namespace

LyapunovReport mle_benettin(const FieldSpec& spec, const DualState& lam0, double t_end,
                            const LyapunovConfig& cfg) {
  return with_convergence(benettin_once, spec, lam0, t_end, cfg);
}

LyapunovReport lyapunov_spectrum(const FieldSpec& spec, const DualState& lam0, double t_end,
                                 const LyapunovConfig& cfg) {
  return with_convergence(spectrum_once, spec, lam0, t_end, cfg);
}

SweepScenario orbit_sweep(const FieldSpec& t4_geodesic) {
  if (t4_geodesic.dim() != t4::kDim || t4_geodesic.is_magnetic()) {
    fail(ErrorCategory::validation, "orbit sweep needs the geodesic field of a 6-dimensional t4 extension");
  }
  SweepScenario s;
  s.kind = GridKind::orbit;
  s.spec_for = [t4_geodesic](const GridPoint&) { return t4_geodesic; };
  s.initial_state = [](const GridPoint& p, std::uint64_t seed) {
    return orbit_sample(p.a, p.b, seed);
  };
  return s;
}

SweepScenario orbit_sweep(const ExtendedSystem& ext) { return orbit_sweep(FieldSpec::geodesic(ext)); }

SweepScenario energy_sweep(const MagneticSystem& m) {
  SweepScenario s;
  s.kind = GridKind::energy;
  s.spec_for = [m](const GridPoint& p) { return FieldSpec::magnetic(m, p.a); };
  s.initial_state = [m](const GridPoint& p, std::uint64_t seed) {
    if (!(p.b > 0.0)) fail(ErrorCategory::validation, "sweep energy must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(-kOrbitSampleHalfWidth, kOrbitSampleHalfWidth);
    DualState lam(static_cast<Eigen::Index>(m.dim()));
    do {
      for (Eigen::Index i = 0; i < lam.size(); ++i) lam(i) = coord(rng);
    } while (lam.squaredNorm() == 0.0);
    return DualState(lam * std::sqrt(p.b / hamiltonian(m.metric(), lam)));
  };
  return s;
}

std::vector<SweepRow> sweep(const SweepScenario& scenario, const std::vector<GridPoint>& grid,
                            double t_end, const std::vector<std::uint64_t>& seeds,
                            const LyapunovConfig& cfg, unsigned threads) {
  if (grid.empty() || seeds.empty()) fail(ErrorCategory::validation, "sweep needs a grid point and a seed");
  std::vector<SweepRow> rows(grid.size() * seeds.size());
  for (std::size_t g = 0; g < grid.size(); ++g)
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      SweepRow& row = rows[g * seeds.size() + s];
      row.point = grid[g];
      row.seed = seeds[s];
      row.t_end = t_end;
      row.step = cfg.step;
    }

  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (std::size_t idx = next++; idx < rows.size(); idx = next++) {
      SweepRow& row = rows[idx];
      try {
        LyapunovConfig run = cfg;
        run.seed = row.seed;
        const FieldSpec spec = scenario.spec_for(row.point);
        const DualState lam0 = scenario.initial_state(row.point, row.seed);
        row.report = mle_benettin(spec, lam0, t_end, run);
      } catch (const Error& e) {
        row.error = std::string(category_name(e.category())) + ": " + e.what();
      }
    }
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(rows.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return rows;
}

}  // namespace nilmag
