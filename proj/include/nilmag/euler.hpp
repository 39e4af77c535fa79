#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nilmag/liealg.hpp"
#include "nilmag/magext.hpp"

namespace nilmag {

/// Point of the dual Lie algebra in the coordinates p_i = lambda(e_i).
using DualState = Eigen::VectorXd;

void require_finite(const DualState& lam, const char* what);

struct MagneticTerm {
  TwoForm sigma;
  double c = 1.0;
};

/// Data of a left-invariant Hamiltonian h = 1/2 <lambda, lambda> on g*,
/// optionally with the magnetic term c * sigma.
class FieldSpec {
 public:
  FieldSpec(LieAlgebra algebra, InnerProduct metric,
            std::optional<MagneticTerm> magnetic = std::nullopt);

  static FieldSpec geodesic(const MagneticSystem& m);
  static FieldSpec magnetic(const MagneticSystem& m, double c);
  static FieldSpec geodesic(const ExtendedSystem& ext);

  std::size_t dim() const { return algebra_.dim(); }
  const LieAlgebra& algebra() const { return algebra_; }
  const InnerProduct& metric() const { return metric_; }
  const std::optional<MagneticTerm>& magnetic_term() const { return magnetic_; }
  bool is_magnetic() const { return magnetic_.has_value(); }

  using ConstVec = Eigen::Ref<const Eigen::VectorXd>;
  using Vec = Eigen::Ref<Eigen::VectorXd>;

  /// Reusable buffers for the pointer kernels; size them with dim().
  struct Scratch {
    explicit Scratch(std::size_t n) : v(n), gw(n) {}
    std::vector<double> v, gw;
  };

  // Float kernels. Output buffers must already have size dim().
  void sharp_into(ConstVec lam, Vec out) const;
  void velocity_into(ConstVec lam, Vec out) const;
  void velocity_into(const double* lam, double* out, Scratch& scratch) const;
  void jacobian_into(ConstVec lam, Eigen::MatrixXd& out) const;
  /// J(lam) * v without forming J.
  void jacobian_apply_into(ConstVec lam, ConstVec v, Vec out) const;
  void jacobian_apply_into(const double* lam, const double* v, double* out, Scratch& scratch) const;

 private:
  struct Term {
    Eigen::Index i, j, k;  // [e_i, e_j] has coefficient `coef` on e_k, i < j
    double coef;
  };
  struct Entry {
    Eigen::Index row, col;
    double value;
  };
  using Sparse = std::vector<Entry>;  // nonzeros in row-major order

  static Sparse sparsify(const Eigen::MatrixXd& m);
  static void accumulate(const Sparse& a, double sign, const double* x, double* y);

  LieAlgebra algebra_;
  InnerProduct metric_;
  std::optional<MagneticTerm> magnetic_;
  Eigen::MatrixXd inverse_gram_;
  std::vector<Term> terms_;
  Eigen::MatrixXd magnetic_matrix_;  // c * sigma
  Eigen::MatrixXd magnetic_jacobian_;  // constant part: -c * sigma * G^-1
  Sparse inverse_gram_nz_, magnetic_matrix_nz_, magnetic_jacobian_nz_;
};

/// G^-1 lambda: the differential of h at lambda viewed as an algebra element.
Eigen::VectorXd sharp(const InnerProduct& metric, const DualState& lam);

/// Component on e_j: lambda([dh, e_j]). Requires a spec without magnetic term.
DualState euler_field(const FieldSpec& spec, const DualState& lam);

/// Component on e_j: lambda([dh, e_j]) + c sigma(dh, e_j). Requires a magnetic term.
DualState magnetic_euler_field(const FieldSpec& spec, const DualState& lam);

/// Whichever of the two fields the FieldSpec describes.
DualState vector_field(const FieldSpec& spec, const DualState& lam);

Eigen::MatrixXd field_jacobian(const FieldSpec& spec, const DualState& lam);

double hamiltonian(const InnerProduct& metric, const DualState& lam);

// Exact counterparts used for pointwise conservation checks.
RVec sharp_exact(const InnerProduct& metric, const RVec& lam);
RVec euler_field_exact(const LieAlgebra& algebra, const InnerProduct& metric, const RVec& lam,
                       const TwoForm* sigma = nullptr, const Rational& c = 0);
Rational hamiltonian_exact(const InnerProduct& metric, const RVec& lam);

struct IntegratorConfig {
  double step = 1e-3;
  double t_end = 1.0;
  std::size_t sample_stride = 1;

  void validate() const;
};

struct Observable {
  std::string name;
  std::function<double(const DualState&)> fn;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DualState> states;
  /// Max over all steps of |O(t) - O(0)| / max(1, |O(0)|), keyed by name.
  std::map<std::string, double> drifts;
};

/// Fixed-step classical RK4. Throws DivergenceError on a non-finite state.
Trajectory integrate(const FieldSpec& spec, const DualState& lam0, const IntegratorConfig& cfg,
                     const std::vector<Observable>& observables = {});

}  // namespace nilmag
