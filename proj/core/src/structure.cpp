#include "aeqnd/structure.hpp"

#include <cmath>

#include "aeqnd/angmom.hpp"
#include "aeqnd/errors.hpp"
#include "aeqnd/linalg.hpp"

namespace aeqnd {
namespace {

using Eigen::Index;
using Eigen::MatrixXcd;

template <class T>
Index idx(T n) {
  return static_cast<Index>(n);
}

// Q / (2IJ(2I-1)(2J-1)); zero when the quadrupole term is absent.
double reduced_quadrupole(const Manifold& m) {
  if (!m.has_quadrupole()) return 0.0;
  const double I = m.I.value();
  const double J = m.J.value();
  return m.Q / (2.0 * I * J * (2.0 * I - 1.0) * (2.0 * J - 1.0));
}

MatrixXcd uncoupled_hyperfine(const Manifold& m) {
  const int dJ = multiplicity(m.J);
  const int dI = multiplicity(m.I);
  MatrixXcd h = MatrixXcd::Zero(idx(dJ * dI), idx(dJ * dI));
  if (!m.has_dipole()) return h;
  const MatrixXcd IJ = kron(spin_z(m.J), spin_z(m.I)) +
                       0.5 * (kron(spin_plus(m.J), spin_minus(m.I)) +
                              kron(spin_minus(m.J), spin_plus(m.I)));
  h += m.A * IJ;
  const double qp = reduced_quadrupole(m);
  if (qp != 0.0) {
    const MatrixXcd one = MatrixXcd::Identity(h.rows(), h.cols());
    h += qp * (3.0 * IJ * IJ + 1.5 * IJ - jj1(m.I) * jj1(m.J) * one);
  }
  return h;
}

// Rows: coupled states of m (all F), cols: uncoupled states.
MatrixXcd coupling_unitary(const Manifold& m) {
  const int dJ = multiplicity(m.J);
  const int dI = multiplicity(m.I);
  MatrixXcd u = MatrixXcd::Zero(idx(dJ * dI), idx(dJ * dI));
  Index row = 0;
  for (HalfInt F : m.allowed_f()) {
    for (HalfInt M = F; M >= -F; M -= 1, ++row) {
      Index col = 0;
      for (HalfInt mJ = m.J; mJ >= -m.J; mJ -= 1) {
        for (HalfInt mI = m.I; mI >= -m.I; mI -= 1, ++col) {
          if (mJ + mI == M) u(row, col) = clebsch_gordan(m.J, mJ, m.I, mI, F, M);
        }
      }
    }
  }
  return u;
}

MatrixXcd coupled_diagonal(const Manifold& m, double (*f)(const Manifold&, HalfInt)) {
  const int d = m.dimension();
  MatrixXcd out = MatrixXcd::Zero(idx(d), idx(d));
  Index i = 0;
  for (HalfInt F : m.allowed_f()) {
    const double v = f(m, F);
    for (int k = 0; k < multiplicity(F); ++k, ++i) out(i, i) = v;
  }
  return out;
}

double idotj_value(const Manifold& m, HalfInt F) {
  return 0.5 * (jj1(F) - jj1(m.I) - jj1(m.J));
}

double f2_value(const Manifold&, HalfInt F) { return jj1(F); }

MatrixXcd coupled_ladder(const Manifold& m, int direction) {
  const int d = m.dimension();
  MatrixXcd out = MatrixXcd::Zero(idx(d), idx(d));
  Index start = 0;
  for (HalfInt F : m.allowed_f()) {
    const MatrixXcd s = direction > 0 ? spin_plus(F) : spin_minus(F);
    out.block(start, start, s.rows(), s.cols()) = s;
    start += s.rows();
  }
  return out;
}

MatrixXcd coupled_fz(const Manifold& m) {
  const int d = m.dimension();
  MatrixXcd out = MatrixXcd::Zero(idx(d), idx(d));
  Index start = 0;
  for (HalfInt F : m.allowed_f()) {
    const MatrixXcd s = spin_z(F);
    out.block(start, start, s.rows(), s.cols()) = s;
    start += s.rows();
  }
  return out;
}

MatrixXcd block_operator(const StateSpace::Block& b, AngularOp which) {
  const Manifold& m = b.manifold;
  const MatrixXcd oneJ = MatrixXcd::Identity(multiplicity(m.J), multiplicity(m.J));
  const MatrixXcd oneI = MatrixXcd::Identity(multiplicity(m.I), multiplicity(m.I));
  auto uncoupled = [&](AngularOp op) -> MatrixXcd {
    switch (op) {
      case AngularOp::kFz:
        return kron(spin_z(m.J), oneI) + kron(oneJ, spin_z(m.I));
      case AngularOp::kFplus:
        return kron(spin_plus(m.J), oneI) + kron(oneJ, spin_plus(m.I));
      case AngularOp::kFminus:
        return kron(spin_minus(m.J), oneI) + kron(oneJ, spin_minus(m.I));
      case AngularOp::kJz:
        return kron(spin_z(m.J), oneI);
      case AngularOp::kIz:
        return kron(oneJ, spin_z(m.I));
      case AngularOp::kIdotJ:
        return kron(spin_z(m.J), spin_z(m.I)) +
               0.5 * (kron(spin_plus(m.J), spin_minus(m.I)) +
                      kron(spin_minus(m.J), spin_plus(m.I)));
      case AngularOp::kF2: {
        const MatrixXcd fz = kron(spin_z(m.J), oneI) + kron(oneJ, spin_z(m.I));
        const MatrixXcd fp = kron(spin_plus(m.J), oneI) + kron(oneJ, spin_plus(m.I));
        const MatrixXcd fm = kron(spin_minus(m.J), oneI) + kron(oneJ, spin_minus(m.I));
        return fz * fz + 0.5 * (fp * fm + fm * fp);
      }
    }
    return {};
  };
  if (b.basis == Basis::kUncoupled) return uncoupled(which);
  switch (which) {
    case AngularOp::kFz:
      return coupled_fz(m);
    case AngularOp::kFplus:
      return coupled_ladder(m, +1);
    case AngularOp::kFminus:
      return coupled_ladder(m, -1);
    case AngularOp::kF2:
      return coupled_diagonal(m, f2_value);
    case AngularOp::kIdotJ:
      return coupled_diagonal(m, idotj_value);
    case AngularOp::kJz:
    case AngularOp::kIz: {
      if (m.restricted()) {
        throw InvalidArgument("J_z / I_z mix F levels; unavailable on restricted manifold " +
                              m.key);
      }
      const MatrixXcd u = coupling_unitary(m);
      return u * uncoupled(which) * u.adjoint();
    }
  }
  return {};
}

MatrixXcd spin_ladder(HalfInt j, int direction) {
  const int d = multiplicity(j);
  MatrixXcd out = MatrixXcd::Zero(idx(d), idx(d));
  for (int i = 0; i < d; ++i) {
    const double m = j.value() - i;
    if (direction > 0 && i > 0) {
      out(i - 1, i) = std::sqrt(jj1(j) - m * (m + 1.0));
    } else if (direction < 0 && i + 1 < d) {
      out(i + 1, i) = std::sqrt(jj1(j) - m * (m - 1.0));
    }
  }
  return out;
}

}  // namespace

MatrixXcd spin_z(HalfInt j) {
  const int d = multiplicity(j);
  MatrixXcd out = MatrixXcd::Zero(idx(d), idx(d));
  for (int i = 0; i < d; ++i) out(i, i) = j.value() - i;
  return out;
}

MatrixXcd spin_plus(HalfInt j) { return spin_ladder(j, +1); }
MatrixXcd spin_minus(HalfInt j) { return spin_ladder(j, -1); }

double hyperfine_energy(const Manifold& m, HalfInt F) {
  if (!triangle(m.J, m.I, F)) {
    throw InvalidArgument("F=" + F.str() + " not in manifold " + m.key);
  }
  if (!m.has_dipole()) return 0.0;
  const double ij = idotj_value(m, F);
  return m.A * ij +
         reduced_quadrupole(m) * (3.0 * ij * ij + 1.5 * ij - jj1(m.I) * jj1(m.J));
}

std::vector<HyperfineLevel> hyperfine_levels(const Manifold& m) {
  std::vector<HyperfineLevel> out;
  for (HalfInt F : m.allowed_f()) out.push_back({F, hyperfine_energy(m, F)});
  return out;
}

OperatorMatrix hyperfine_hamiltonian(const Manifold& m) {
  if (m.restricted()) {
    return OperatorMatrix(StateSpace::single(m, Basis::kCoupled),
                          coupled_diagonal(m, hyperfine_energy));
  }
  return OperatorMatrix(StateSpace::single(m, Basis::kUncoupled), uncoupled_hyperfine(m));
}

OperatorMatrix hyperfine_hamiltonian(const SpacePtr& space) {
  OperatorMatrix out(space);
  for (const auto& b : space->blocks()) {
    MatrixXcd h;
    if (b.manifold.restricted()) {
      h = coupled_diagonal(b.manifold, hyperfine_energy);
    } else if (b.basis == Basis::kUncoupled) {
      h = uncoupled_hyperfine(b.manifold);
    } else {
      const MatrixXcd u = coupling_unitary(b.manifold);
      h = u * uncoupled_hyperfine(b.manifold) * u.adjoint();
    }
    out.m.block(idx(b.offset), idx(b.offset), h.rows(), h.cols()) = h;
  }
  return out;
}

OperatorMatrix angular_momentum_operator(const SpacePtr& space, AngularOp which) {
  OperatorMatrix out(space);
  for (const auto& b : space->blocks()) {
    const MatrixXcd blk = block_operator(b, which);
    out.m.block(idx(b.offset), idx(b.offset), blk.rows(), blk.cols()) = blk;
  }
  return out;
}

OperatorMatrix basis_transform(const std::vector<Manifold>& manifolds, Basis to) {
  std::vector<std::pair<Manifold, Basis>> src;
  std::vector<std::pair<Manifold, Basis>> dst;
  const Basis from = to == Basis::kCoupled ? Basis::kUncoupled : Basis::kCoupled;
  for (const Manifold& m : manifolds) {
    src.emplace_back(m, from);
    dst.emplace_back(m, to);
  }
  const SpacePtr src_space = StateSpace::make(src);
  const SpacePtr dst_space = StateSpace::make(dst);
  MatrixXcd t = MatrixXcd::Zero(idx(dst_space->dimension()),
                                idx(src_space->dimension()));
  for (const auto& b : dst_space->blocks()) {
    const MatrixXcd u = coupling_unitary(b.manifold);
    t.block(idx(b.offset), idx(b.offset), u.rows(), u.cols()) =
        to == Basis::kCoupled ? u : MatrixXcd(u.adjoint());
  }
  return OperatorMatrix(dst_space, src_space, t);
}

OperatorMatrix change_basis(const OperatorMatrix& op, Basis to) {
  if (!op.square()) throw InvalidArgument("change_basis needs a square operator");
  std::vector<Manifold> manifolds;
  const auto& blocks = op.rows->blocks();
  for (const auto& b : blocks) {
    if (b.basis != blocks.front().basis) {
      throw InvalidArgument("change_basis needs blocks sharing one basis");
    }
    manifolds.push_back(b.manifold);
  }
  if (blocks.front().basis == to) return op;
  const OperatorMatrix t = basis_transform(manifolds, to);
  return OperatorMatrix(t.rows, t.rows, t.m * op.m * t.m.adjoint());
}

OperatorMatrix level_projector(const SpacePtr& coupled_space, HalfInt F) {
  if (coupled_space->blocks().size() != 1 ||
      coupled_space->block(0).basis != Basis::kCoupled) {
    throw InvalidArgument("level_projector needs a single coupled manifold");
  }
  OperatorMatrix p(coupled_space);
  const auto& states = coupled_space->states();
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].F == F) p.m(idx(i), idx(i)) = 1.0;
  }
  return p;
}

OperatorMatrix embed_block(const SpacePtr& big, std::size_t block) {
  const auto& b = big->block(block);
  const SpacePtr small = StateSpace::single(b.manifold, b.basis);
  MatrixXcd e = MatrixXcd::Zero(idx(big->dimension()),
                                idx(b.dimension));
  e.block(idx(b.offset), 0, idx(b.dimension),
          idx(b.dimension)) =
      MatrixXcd::Identity(idx(b.dimension),
                          idx(b.dimension));
  return OperatorMatrix(big, small, e);
}

}  // namespace aeqnd
