#pragma once

#include <vector>

#include "aeqnd/state_space.hpp"

namespace aeqnd {

// A (I.J) + Q [3(I.J)^2 + 3/2 (I.J) - I(I+1)J(J+1)] / (2IJ(2I-1)(2J-1)),
// in the uncoupled basis of `m`. Restricted manifolds are returned in the
// coupled basis since their uncoupled basis is incomplete.
OperatorMatrix hyperfine_hamiltonian(const Manifold& m);

// Block-diagonal hyperfine Hamiltonian over every block of `space`.
OperatorMatrix hyperfine_hamiltonian(const SpacePtr& space);

struct HyperfineLevel {
  HalfInt F;
  double energy;  // rad/us
};

// One entry per kept F, descending F. Energies from the closed-form diagonal.
std::vector<HyperfineLevel> hyperfine_levels(const Manifold& m);
double hyperfine_energy(const Manifold& m, HalfInt F);

enum class AngularOp { kFz, kFplus, kFminus, kF2, kIdotJ, kJz, kIz };

OperatorMatrix angular_momentum_operator(const SpacePtr& space, AngularOp which);

// Spin-j matrices in descending-m order.
Eigen::MatrixXcd spin_z(HalfInt j);
Eigen::MatrixXcd spin_plus(HalfInt j);
Eigen::MatrixXcd spin_minus(HalfInt j);

// Unitary taking uncoupled amplitudes to coupled ones when `to` is kCoupled
// (entries <F M | J mJ; I mI>), or its inverse when `to` is kUncoupled.
// Acts blockwise; J = 0 or I = 0 blocks are identity.
OperatorMatrix basis_transform(const std::vector<Manifold>& manifolds, Basis to);

// Re-express an operator on a space whose blocks all share one basis.
OperatorMatrix change_basis(const OperatorMatrix& op, Basis to);

// Projector onto hyperfine level F of a coupled single-manifold space.
OperatorMatrix level_projector(const SpacePtr& coupled_space, HalfInt F);

// Embedding of a single block into a larger space (rows: big, cols: block).
OperatorMatrix embed_block(const SpacePtr& big, std::size_t block);

}  // namespace aeqnd
