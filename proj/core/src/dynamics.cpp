#include "aeqnd/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "aeqnd/csv.hpp"
#include "aeqnd/errors.hpp"

namespace aeqnd {
namespace {

using Eigen::MatrixXcd;
constexpr cd kI(0.0, 1.0);

struct Generator {
  MatrixXcd h_eff;
  MatrixXcd h_eff_adj;
  std::vector<MatrixXcd> jumps;  // sqrt(rate) * L
  double norm_estimate = 0.0;

  MatrixXcd apply(const MatrixXcd& rho) const {
    MatrixXcd out = -kI * (h_eff * rho - rho * h_eff_adj);
    for (const auto& l : jumps) out.noalias() += l * rho * l.adjoint();
    return out;
  }
};

Generator build_generator(const LindbladProblem& p) {
  const auto d = p.hamiltonian.m.rows();
  Generator g;
  // The identity part of H drops out of the commutator.
  const cd shift = p.hamiltonian.m.trace() / static_cast<double>(d);
  g.h_eff = p.hamiltonian.m - shift * MatrixXcd::Identity(d, d);
  double jump_norm = 0.0;
  for (const auto& diss : p.dissipators) {
    if (diss.rate == 0.0) continue;
    const MatrixXcd l = std::sqrt(diss.rate) * diss.op.m;
    g.h_eff -= 0.5 * kI * (l.adjoint() * l);
    g.jumps.push_back(l);
    jump_norm += l.squaredNorm();
  }
  g.h_eff_adj = g.h_eff.adjoint();
  g.norm_estimate = 2.0 * g.h_eff.norm() + jump_norm;
  return g;
}

std::vector<double> normalised_samples(std::vector<double> t, double t_final) {
  if (t.empty()) t.push_back(t_final);
  for (double x : t) {
    if (!(x >= 0.0) || x > t_final * (1.0 + 1e-12)) {
      throw InvalidArgument("sample time outside [0, t_final]");
    }
  }
  std::sort(t.begin(), t.end());
  t.erase(std::unique(t.begin(), t.end()), t.end());
  return t;
}

Trajectory run(const LindbladProblem& p, const Generator& g, const DensityMatrix& rho0,
               const std::vector<double>& samples, std::size_t steps) {
  Trajectory traj;
  traj.steps = 0;
  MatrixXcd rho = rho0.matrix();
  double t = 0.0;
  for (double ts : samples) {
    const double span = ts - t;
    if (span > 0.0) {
      const auto n = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::ceil(static_cast<double>(steps) * span / p.t_final -
                                                1e-9)));
      const double h = span / static_cast<double>(n);
      for (std::size_t k = 0; k < n; ++k) {
        const MatrixXcd k1 = g.apply(rho);
        const MatrixXcd k2 = g.apply(rho + (0.5 * h) * k1);
        const MatrixXcd k3 = g.apply(rho + (0.5 * h) * k2);
        const MatrixXcd k4 = g.apply(rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        traj.max_trace_drift =
            std::max(traj.max_trace_drift, std::abs(rho.trace().real() - 1.0));
      }
      traj.steps += n;
      t = ts;
    }
    traj.times.push_back(ts);
    traj.states.emplace_back(rho0.space(), rho);
  }
  if (!rho.allFinite()) throw NumericalError("integration diverged (non-finite state)");
  return traj;
}

double metric_change(const LindbladProblem& p, const Trajectory& a, const Trajectory& b) {
  const auto& ra = a.states.back().matrix();
  const auto& rb = b.states.back().matrix();
  if (p.target) {
    const auto& psi = *p.target;
    return std::abs((psi.adjoint() * ra * psi)(0, 0).real() -
                    (psi.adjoint() * rb * psi)(0, 0).real());
  }
  return (ra - rb).cwiseAbs().maxCoeff();
}

std::vector<double> weights_sq(const std::vector<cd>& weights, std::size_t n) {
  std::vector<double> w(n, 1.0 / static_cast<double>(n));
  if (weights.empty()) return w;
  if (weights.size() != n) throw InvalidArgument("weights and deltas differ in length");
  double total = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    w[k] = std::norm(weights[k]);
    total += w[k];
  }
  if (std::abs(total - 1.0) > 1e-9) throw InvalidArgument("weights must be normalised");
  return w;
}

}  // namespace

DensityMatrix::DensityMatrix(SpacePtr space, MatrixXcd rho)
    : space_(std::move(space)), rho_(std::move(rho)) {
  if (!space_ || rho_.rows() != rho_.cols() ||
      static_cast<std::size_t>(rho_.rows()) != space_->dimension()) {
    throw InvalidArgument("density matrix shape does not match its space");
  }
}

DensityMatrix DensityMatrix::pure(SpacePtr space, const Eigen::VectorXcd& psi) {
  return DensityMatrix(std::move(space), psi * psi.adjoint());
}

DensityMatrix DensityMatrix::maximally_mixed(SpacePtr space) {
  const auto d = static_cast<Eigen::Index>(space->dimension());
  return DensityMatrix(std::move(space),
                       MatrixXcd::Identity(d, d) / static_cast<double>(d));
}

double DensityMatrix::trace() const { return rho_.trace().real(); }

double DensityMatrix::purity() const { return (rho_ * rho_).trace().real(); }

double DensityMatrix::hermiticity_error() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const MatrixXcd herm = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

cd DensityMatrix::expectation(const OperatorMatrix& op) const {
  if (!same_space(op.rows, space_) || !same_space(op.cols, space_)) {
    throw InvalidArgument("expectation: space mismatch");
  }
  return (op.m * rho_).trace();
}

void DensityMatrix::validate(double trace_tol) const {
  if (std::abs(trace() - 1.0) > trace_tol) throw InvalidArgument("density matrix trace != 1");
  if (hermiticity_error() > 1e-12) throw InvalidArgument("density matrix not Hermitian");
  if (min_eigenvalue() < -1e-9) throw InvalidArgument("density matrix not positive");
}

double fidelity(const DensityMatrix& rho, const Eigen::VectorXcd& psi) {
  if (static_cast<std::size_t>(psi.size()) != rho.dimension()) {
    throw InvalidArgument("fidelity: dimension mismatch");
  }
  return (psi.adjoint() * rho.matrix() * psi)(0, 0).real();
}

void LindbladProblem::validate() const {
  if (!hamiltonian.rows || !hamiltonian.square()) {
    throw InvalidArgument("Hamiltonian must be a square operator");
  }
  if (hamiltonian.rows->dimension() > kMaxDynamicsDimension) {
    throw InvalidArgument("dimension " + std::to_string(hamiltonian.rows->dimension()) +
                          " exceeds cap " + std::to_string(kMaxDynamicsDimension));
  }
  if (hamiltonian.hermiticity_error() > 1e-12) {
    throw InvalidArgument("Hamiltonian is not Hermitian");
  }
  if (!(t_final > 0.0) || !std::isfinite(t_final)) throw InvalidArgument("t_final must be > 0");
  for (const auto& d : dissipators) {
    if (!(d.rate >= 0.0)) throw InvalidArgument("dissipator rates must be >= 0");
    if (!same_space(d.op.rows, hamiltonian.rows) || !same_space(d.op.cols, hamiltonian.rows)) {
      throw InvalidArgument("jump operator space differs from the Hamiltonian's");
    }
  }
  if (target && static_cast<std::size_t>(target->size()) != hamiltonian.rows->dimension()) {
    throw InvalidArgument("target state dimension mismatch");
  }
}

Trajectory evolve_fixed(const LindbladProblem& problem, const DensityMatrix& rho0,
                        std::size_t steps, std::vector<double> sample_times) {
  problem.validate();
  if (!same_space(rho0.space(), problem.hamiltonian.rows)) {
    throw InvalidArgument("initial state space differs from the Hamiltonian's");
  }
  rho0.validate();
  if (steps == 0) throw InvalidArgument("steps must be >= 1");
  const Generator g = build_generator(problem);
  return run(problem, g, rho0, normalised_samples(std::move(sample_times), problem.t_final),
             steps);
}

Trajectory evolve(const LindbladProblem& problem, const DensityMatrix& rho0,
                  std::vector<double> sample_times) {
  problem.validate();
  if (!same_space(rho0.space(), problem.hamiltonian.rows)) {
    throw InvalidArgument("initial state space differs from the Hamiltonian's");
  }
  rho0.validate();
  const Generator g = build_generator(problem);
  const auto samples = normalised_samples(std::move(sample_times), problem.t_final);
  std::size_t n = problem.control.initial_steps;
  if (n == 0) {
    n = std::max<std::size_t>(
        8, static_cast<std::size_t>(std::ceil(0.5 * problem.t_final * g.norm_estimate)));
  }
  Trajectory coarse = run(problem, g, rho0, samples, n);
  while (true) {
    n *= 2;
    if (n > problem.control.max_steps) {
      throw NumericalError("step-size underflow: no convergence within " +
                           std::to_string(problem.control.max_steps) + " steps");
    }
    Trajectory fine = run(problem, g, rho0, samples, n);
    const double change = metric_change(problem, coarse, fine);
    fine.last_change = change;
    if (change < problem.control.tolerance) return fine;
    coarse = std::move(fine);
  }
}

double coherence_transfer_fidelity(const std::vector<double>& deltas, double gamma,
                                   const std::vector<cd>& weights) {
  if (!(gamma > 0.0)) throw InvalidArgument("Gamma must be > 0");
  if (deltas.empty()) throw InvalidArgument("need at least one level");
  const auto w = weights_sq(weights, deltas.size());
  double f = 0.0;
  for (std::size_t m = 0; m < deltas.size(); ++m) {
    for (std::size_t k = 0; k < deltas.size(); ++k) {
      const double d = deltas[m] - deltas[k];
      f += w[m] * w[k] * gamma * gamma / (gamma * gamma + d * d);
    }
  }
  return f;
}

double coherence_transfer_fidelity_at(const std::vector<double>& deltas, double gamma,
                                      double t, const std::vector<cd>& weights) {
  if (!(gamma > 0.0)) throw InvalidArgument("Gamma must be > 0");
  if (deltas.empty()) throw InvalidArgument("need at least one level");
  const auto w = weights_sq(weights, deltas.size());
  cd f = 0.0;
  for (std::size_t m = 0; m < deltas.size(); ++m) {
    for (std::size_t k = 0; k < deltas.size(); ++k) {
      const cd z(gamma, deltas[m] - deltas[k]);
      f += w[m] * w[k] * (gamma / z) * (1.0 - std::exp(-z * t));
    }
  }
  return f.real();
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const Eigen::VectorXcd& psi) {
  write_csv_row(os, std::vector<std::string>{"t_us", "fidelity", "trace", "purity"});
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const auto& s = traj.states[i];
    write_csv_row(os, std::vector<double>{traj.times[i], fidelity(s, psi), s.trace(),
                                          s.purity()});
  }
}

}  // namespace aeqnd
