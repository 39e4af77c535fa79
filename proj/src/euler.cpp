#include "nilmag/euler.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nilmag/error.hpp"
#include "nilmag/rk4.hpp"

namespace nilmag {

StepSchedule::StepSchedule(double step_, double t_end_) : step(step_), t_end(t_end_) {
  const double ratio = t_end / step;
  const long long nearest = std::llround(ratio);
  if (std::abs(static_cast<double>(nearest) - ratio) <= 1e-9 * std::max(1.0, ratio)) {
    full_steps = nearest;
    last_step = 0.0;
  } else {
    full_steps = static_cast<long long>(std::floor(ratio));
    last_step = t_end - static_cast<double>(full_steps) * step;
  }
}

double StepSchedule::time_after(long long i) const {
  if (i < full_steps) return static_cast<double>(i + 1) * step;
  return t_end;
}

void require_finite(const DualState& lam, const char* what) {
  if (!lam.allFinite()) fail(ErrorCategory::validation, std::string(what) + ": non-finite state");
}

namespace {

Eigen::MatrixXd to_eigen(const RMatrix& m) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j).get_d();
  return out;
}

void require_size(const Eigen::VectorXd& v, std::size_t n, const char* what) {
  if (static_cast<std::size_t>(v.size()) != n) {
    fail(ErrorCategory::validation, std::string(what) + ": dimension mismatch");
  }
}

}  // namespace

// The hot kernels multiply by small, mostly-zero matrices; Eigen's dynamic
// GEMV dispatch dominates the cost at these sizes.
FieldSpec::Sparse FieldSpec::sparsify(const Eigen::MatrixXd& m) {
  Sparse out;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0.0) out.push_back(Entry{i, j, m(i, j)});
  return out;
}

void FieldSpec::accumulate(const Sparse& a, double sign, const double* x, double* y) {
  for (const Entry& e : a) y[e.row] += sign * e.value * x[e.col];
}

FieldSpec::FieldSpec(LieAlgebra algebra, InnerProduct metric, std::optional<MagneticTerm> magnetic)
    : algebra_(std::move(algebra)), metric_(std::move(metric)), magnetic_(std::move(magnetic)) {
  const std::size_t n = algebra_.dim();
  if (metric_.dim() != n) fail(ErrorCategory::validation, "metric dimension does not match algebra");
  inverse_gram_ = to_eigen(metric_.inverse_gram());
  for (const auto& [key, vec] : algebra_.structure()) {
    for (std::size_t k = 0; k < n; ++k) {
      if (sgn(vec[k]) == 0) continue;
      terms_.push_back(Term{static_cast<Eigen::Index>(key.first),
                            static_cast<Eigen::Index>(key.second),
                            static_cast<Eigen::Index>(k), vec[k].get_d()});
    }
  }
  const auto en = static_cast<Eigen::Index>(n);
  magnetic_matrix_ = Eigen::MatrixXd::Zero(en, en);
  magnetic_jacobian_ = Eigen::MatrixXd::Zero(en, en);
  if (magnetic_) {
    if (magnetic_->sigma.dim() != n) {
      fail(ErrorCategory::validation, "2-form dimension does not match algebra");
    }
    if (!std::isfinite(magnetic_->c)) fail(ErrorCategory::validation, "field strength must be finite");
    if (!is_cocycle(algebra_, magnetic_->sigma).closed) {
      fail(ErrorCategory::validation, "magnetic 2-form is not closed");
    }
    magnetic_matrix_ = magnetic_->c * to_eigen(magnetic_->sigma.matrix());
    magnetic_jacobian_ = -magnetic_matrix_ * inverse_gram_;
  }
  inverse_gram_nz_ = sparsify(inverse_gram_);
  magnetic_matrix_nz_ = sparsify(magnetic_matrix_);
  magnetic_jacobian_nz_ = sparsify(magnetic_jacobian_);
}

FieldSpec FieldSpec::geodesic(const MagneticSystem& m) {
  return FieldSpec(m.algebra(), m.metric());
}

FieldSpec FieldSpec::magnetic(const MagneticSystem& m, double c) {
  return FieldSpec(m.algebra(), m.metric(), MagneticTerm{m.sigma(), c});
}

FieldSpec FieldSpec::geodesic(const ExtendedSystem& ext) {
  return FieldSpec(ext.algebra(), ext.metric());
}

void FieldSpec::sharp_into(ConstVec lam, Vec out) const {
  out.noalias() = inverse_gram_ * lam;
}

void FieldSpec::velocity_into(ConstVec lam, Vec out) const {
  Scratch scratch(dim());
  velocity_into(lam.data(), out.data(), scratch);
}

void FieldSpec::velocity_into(const double* lam, double* out, Scratch& scratch) const {
  double* v = scratch.v.data();
  std::fill_n(v, dim(), 0.0);
  accumulate(inverse_gram_nz_, 1.0, lam, v);
  std::fill_n(out, dim(), 0.0);
  for (const Term& t : terms_) {
    out[t.j] += t.coef * v[t.i] * lam[t.k];
    out[t.i] -= t.coef * v[t.j] * lam[t.k];
  }
  if (magnetic_) accumulate(magnetic_matrix_nz_, -1.0, v, out);
}

void FieldSpec::jacobian_into(ConstVec lam, Eigen::MatrixXd& out) const {
  const Eigen::VectorXd v = inverse_gram_ * lam;
  out = magnetic_jacobian_;
  for (const Term& t : terms_) {
    out.row(t.j) += (t.coef * lam(t.k)) * inverse_gram_.row(t.i);
    out(t.j, t.k) += t.coef * v(t.i);
    out.row(t.i) -= (t.coef * lam(t.k)) * inverse_gram_.row(t.j);
    out(t.i, t.k) -= t.coef * v(t.j);
  }
}

void FieldSpec::jacobian_apply_into(ConstVec lam, ConstVec w, Vec out) const {
  Scratch scratch(dim());
  jacobian_apply_into(lam.data(), w.data(), out.data(), scratch);
}

void FieldSpec::jacobian_apply_into(const double* lam, const double* w, double* out, Scratch& scratch) const {
  double* v = scratch.v.data();
  double* gw = scratch.gw.data();
  std::fill_n(v, dim(), 0.0);
  std::fill_n(gw, dim(), 0.0);
  accumulate(inverse_gram_nz_, 1.0, lam, v);
  accumulate(inverse_gram_nz_, 1.0, w, gw);
  std::fill_n(out, dim(), 0.0);
  for (const Term& t : terms_) {
    out[t.j] += t.coef * (gw[t.i] * lam[t.k] + v[t.i] * w[t.k]);
    out[t.i] -= t.coef * (gw[t.j] * lam[t.k] + v[t.j] * w[t.k]);
  }
  if (magnetic_) accumulate(magnetic_jacobian_nz_, 1.0, w, out);
}

Eigen::VectorXd sharp(const InnerProduct& metric, const DualState& lam) {
  require_size(lam, metric.dim(), "sharp");
  return to_eigen(metric.inverse_gram()) * lam;
}

DualState euler_field(const FieldSpec& spec, const DualState& lam) {
  if (spec.is_magnetic()) {
    fail(ErrorCategory::validation, "euler_field expects a spec without magnetic term");
  }
  return vector_field(spec, lam);
}

DualState magnetic_euler_field(const FieldSpec& spec, const DualState& lam) {
  if (!spec.is_magnetic()) {
    fail(ErrorCategory::validation, "magnetic_euler_field expects a magnetic term");
  }
  return vector_field(spec, lam);
}

DualState vector_field(const FieldSpec& spec, const DualState& lam) {
  require_size(lam, spec.dim(), "vector_field");
  DualState out(lam.size());
  spec.velocity_into(lam, out);
  return out;
}

Eigen::MatrixXd field_jacobian(const FieldSpec& spec, const DualState& lam) {
  require_size(lam, spec.dim(), "field_jacobian");
  Eigen::MatrixXd out(lam.size(), lam.size());
  spec.jacobian_into(lam, out);
  return out;
}

double hamiltonian(const InnerProduct& metric, const DualState& lam) {
  require_size(lam, metric.dim(), "hamiltonian");
  return 0.5 * lam.dot(sharp(metric, lam));
}

RVec sharp_exact(const InnerProduct& metric, const RVec& lam) {
  require_dim(lam, metric.dim(), "sharp_exact");
  return metric.inverse_gram().apply(lam);
}

RVec euler_field_exact(const LieAlgebra& algebra, const InnerProduct& metric, const RVec& lam,
                       const TwoForm* sigma, const Rational& c) {
  const std::size_t n = algebra.dim();
  require_dim(lam, n, "euler_field_exact");
  const RVec dh = sharp_exact(metric, lam);
  RVec out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const RVec ej = unit_vector(n, j);
    out[j] = dot(lam, bracket(algebra, dh, ej));
    if (sigma != nullptr) out[j] += c * (*sigma)(dh, ej);
  }
  return out;
}

Rational hamiltonian_exact(const InnerProduct& metric, const RVec& lam) {
  return Rational(1, 2) * dot(lam, sharp_exact(metric, lam));
}

void IntegratorConfig::validate() const {
  if (!(step > 0.0) || !std::isfinite(step)) fail(ErrorCategory::validation, "step must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) fail(ErrorCategory::validation, "t_end must be positive");
  if (step > t_end) fail(ErrorCategory::validation, "step must not exceed t_end");
  if (sample_stride == 0) fail(ErrorCategory::validation, "sample_stride must be positive");
}

Trajectory integrate(const FieldSpec& spec, const DualState& lam0, const IntegratorConfig& cfg,
                     const std::vector<Observable>& observables) {
  cfg.validate();
  require_size(lam0, spec.dim(), "integrate");
  require_finite(lam0, "integrate");

  const StepSchedule schedule(cfg.step, cfg.t_end);
  FieldSpec::Scratch scratch(spec.dim());
  const auto rhs = [&spec, &scratch](const Eigen::VectorXd& y, Eigen::VectorXd& out) {
    spec.velocity_into(y.data(), out.data(), scratch);
  };

  Trajectory traj;
  std::vector<double> initial(observables.size());
  std::vector<double> max_drift(observables.size(), 0.0);
  for (std::size_t o = 0; o < observables.size(); ++o) initial[o] = observables[o].fn(lam0);

  Eigen::VectorXd y = lam0;
  Rk4Workspace work(y.size());
  traj.times.push_back(0.0);
  traj.states.push_back(y);

  double t = 0.0;
  const long long total = schedule.total_steps();
  for (long long i = 0; i < total; ++i) {
    rk4_step(rhs, y, schedule.size_of(i), work);
    if (!y.allFinite()) {
      throw DivergenceError("trajectory diverged after t = " + std::to_string(t), t);
    }
    t = schedule.time_after(i);
    for (std::size_t o = 0; o < observables.size(); ++o) {
      const double drift =
          std::abs(observables[o].fn(y) - initial[o]) / std::max(1.0, std::abs(initial[o]));
      if (drift > max_drift[o]) max_drift[o] = drift;
    }
    const bool last = i + 1 == total;
    if ((i + 1) % static_cast<long long>(cfg.sample_stride) == 0 || last) {
      traj.times.push_back(t);
      traj.states.push_back(y);
    }
  }
  for (std::size_t o = 0; o < observables.size(); ++o) {
    traj.drifts[observables[o].name] = max_drift[o];
  }
  return traj;
}

}  // namespace nilmag
