#pragma once

#include <Eigen/Dense>

namespace nilmag {

/// Scratch buffers for one classical RK4 step on a fixed-size state.
struct Rk4Workspace {
  explicit Rk4Workspace(Eigen::Index n) : k1(n), k2(n), k3(n), k4(n), tmp(n) {}
  Eigen::VectorXd k1, k2, k3, k4, tmp;
};

/// Advances y by one step of size h. `rhs(y, out)` writes dy/dt into out.
template <class Rhs>
void rk4_step(Rhs&& rhs, Eigen::VectorXd& y, double h, Rk4Workspace& w) {
  rhs(y, w.k1);
  w.tmp = y + (0.5 * h) * w.k1;
  rhs(w.tmp, w.k2);
  w.tmp = y + (0.5 * h) * w.k2;
  rhs(w.tmp, w.k3);
  w.tmp = y + h * w.k3;
  rhs(w.tmp, w.k4);
  y += (h / 6.0) * (w.k1 + 2.0 * w.k2 + 2.0 * w.k3 + w.k4);
}

/// Step schedule covering [0, t_end]: full steps of size `step` followed by
/// at most one shorter closing step. Times are i * step, never accumulated.
struct StepSchedule {
  StepSchedule(double step, double t_end);

  long long full_steps = 0;
  double last_step = 0.0;  // 0 when t_end is a whole number of steps
  double step = 0.0;
  double t_end = 0.0;

  long long total_steps() const { return full_steps + (last_step > 0.0 ? 1 : 0); }
  double time_after(long long i) const;
  double size_of(long long i) const { return i < full_steps ? step : last_step; }
};

}  // namespace nilmag
