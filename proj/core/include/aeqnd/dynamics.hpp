#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <vector>

#include "aeqnd/state_space.hpp"

namespace aeqnd {

inline constexpr std::size_t kMaxDynamicsDimension = 256;

class DensityMatrix {
 public:
  DensityMatrix(SpacePtr space, Eigen::MatrixXcd rho);
  static DensityMatrix pure(SpacePtr space, const Eigen::VectorXcd& psi);
  static DensityMatrix maximally_mixed(SpacePtr space);

  const SpacePtr& space() const { return space_; }
  const Eigen::MatrixXcd& matrix() const { return rho_; }
  std::size_t dimension() const { return static_cast<std::size_t>(rho_.rows()); }

  double trace() const;
  double purity() const;
  double hermiticity_error() const;
  double min_eigenvalue() const;
  cd expectation(const OperatorMatrix& op) const;

  // Unit trace (trace_tol), Hermitian (1e-12), eigenvalues >= -1e-9.
  void validate(double trace_tol = 1e-10) const;

 private:
  SpacePtr space_;
  Eigen::MatrixXcd rho_;
};

// <psi|rho|psi>. Throws on dimension mismatch.
double fidelity(const DensityMatrix& rho, const Eigen::VectorXcd& psi);

struct Dissipator {
  double rate = 0.0;  // rad/us
  OperatorMatrix op;  // dimensionless
};

struct StepControl {
  double tolerance = 1e-8;      // allowed change under step halving
  std::size_t initial_steps = 0;  // 0: estimate from the generator norm
  std::size_t max_steps = std::size_t{1} << 24;
};

struct LindbladProblem {
  OperatorMatrix hamiltonian;
  std::vector<Dissipator> dissipators;
  double t_final = 0.0;  // us
  StepControl control;
  // Convergence is measured on <target|rho|target> when set, otherwise on the
  // largest entry change of the final state.
  std::optional<Eigen::VectorXcd> target;

  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  std::size_t steps = 0;  // RK4 steps of the accepted run
  double max_trace_drift = 0.0;
  double last_change = 0.0;  // metric change at the accepted halving
};

// RK4 on d rho/dt = -i(H_eff rho - rho H_eff^dagger) + sum_k G_k L_k rho L_k^dagger,
// H_eff = H - (i/2) sum_k G_k L_k^dagger L_k. Step count doubles until the
// convergence metric changes by less than control.tolerance. Samples default
// to {t_final}; the trace is never renormalised.
Trajectory evolve(const LindbladProblem& problem, const DensityMatrix& rho0,
                  std::vector<double> sample_times = {});

// Single run with exactly `steps` uniform RK4 steps over [0, t_final].
Trajectory evolve_fixed(const LindbladProblem& problem, const DensityMatrix& rho0,
                        std::size_t steps, std::vector<double> sample_times = {});

// Ground-state fidelity after decay of sum_m c_m |e_m> with level shifts
// deltas_m into sum_m c_m |g_m>, for t -> infinity:
//   sum_mm' |c_m|^2 |c_m'|^2 Gamma^2 / (Gamma^2 + (delta_m - delta_m')^2).
// Empty weights mean the equal superposition. Weights must be normalised.
double coherence_transfer_fidelity(const std::vector<double>& deltas, double gamma,
                                   const std::vector<cd>& weights = {});

// Same at finite time t:
//   Re sum |c_m|^2 |c_m'|^2 Gamma/(Gamma + i D)(1 - exp(-(Gamma + i D) t)).
double coherence_transfer_fidelity_at(const std::vector<double>& deltas, double gamma,
                                      double t, const std::vector<cd>& weights = {});

// Columns: t_us, fidelity, trace, purity.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const Eigen::VectorXcd& psi);

}  // namespace aeqnd
