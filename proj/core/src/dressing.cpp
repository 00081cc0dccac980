#include "aeqnd/lightmatter.hpp"

#include <cmath>

#include "aeqnd/errors.hpp"
#include "aeqnd/linalg.hpp"
#include "aeqnd/structure.hpp"

namespace aeqnd {
namespace {

using Eigen::Index;
using Eigen::MatrixXcd;

Index ix(std::size_t i) { return static_cast<Index>(i); }

void require_mj0_block(const StateSpace& space) {
  if (space.blocks().empty()) throw InvalidArgument("empty space");
  const auto& b = space.block(0);
  if (b.basis != Basis::kUncoupled || !b.manifold.J.is_integer() ||
      b.manifold.J.twice() == 0) {
    throw InvalidArgument("block 0 must be an uncoupled manifold with integer J >= 1");
  }
}

// Eigenvector columns picked per M_I of block 0 (descending M_I).
std::vector<Index> pick_mj0_states(const StateSpace& space, const Spectrum& spec) {
  const Manifold& a = space.block(0).manifold;
  std::vector<Index> picks;
  for (HalfInt mI = a.I; mI >= -a.I; mI -= 1) {
    const Index t = ix(space.index_uncoupled(0, 0, mI));
    Index best = 0;
    double best_w = -1.0;
    for (Index n = 0; n < spec.vectors.cols(); ++n) {
      const double w = std::norm(spec.vectors(t, n));
      if (w > best_w + 1e-15) {
        best_w = w;
        best = n;
      }
    }
    picks.push_back(best);
  }
  return picks;
}

}  // namespace

OperatorMatrix dressing_hamiltonian(const Manifold& a, const Manifold& b, double rabi,
                                    DressingModel model) {
  if (a.J != HalfInt(1) || b.J != HalfInt(0) || a.I != b.I) {
    throw InvalidArgument("dressing needs a J=1 manifold and a J=0 partner with equal I");
  }
  if (!(rabi >= 0.0)) throw InvalidArgument("rabi must be >= 0");
  const SpacePtr space = StateSpace::make({{a, Basis::kUncoupled}, {b, Basis::kUncoupled}});
  OperatorMatrix h(space);
  const MatrixXcd hf = hyperfine_hamiltonian(a).m;
  h.m.topLeftCorner(hf.rows(), hf.cols()) = hf;
  for (HalfInt mI = a.I; mI >= -a.I; mI -= 1) {
    const Index plus = ix(space->index_uncoupled(0, 1, mI));
    const Index minus = ix(space->index_uncoupled(0, -1, mI));
    if (model == DressingModel::kResolved) {
      h.m(plus, plus) += 0.5 * rabi;
      h.m(minus, minus) -= 0.5 * rabi;
    } else {
      const Index bi = ix(space->index_uncoupled(1, 0, mI));
      const double g = rabi / (2.0 * std::sqrt(2.0));
      h.m(minus, bi) += g;
      h.m(bi, minus) += g;
      h.m(plus, bi) -= g;
      h.m(bi, plus) -= g;
    }
  }
  return h;
}

std::vector<DressedLevel> dressed_mj0_levels(const OperatorMatrix& h) {
  require_mj0_block(*h.rows);
  const Spectrum spec = eigh(h.m);
  const auto picks = pick_mj0_states(*h.rows, spec);
  const Manifold& a = h.rows->block(0).manifold;
  std::vector<DressedLevel> out;
  std::size_t k = 0;
  for (HalfInt mI = a.I; mI >= -a.I; mI -= 1, ++k) {
    const Index n = picks[k];
    const Index t = ix(h.rows->index_uncoupled(0, 0, mI));
    out.push_back({mI, spec.values(n), std::norm(spec.vectors(t, n)),
                   static_cast<std::size_t>(n)});
  }
  return out;
}

Eigen::MatrixXd dressed_overlap_matrix(const OperatorMatrix& h) {
  require_mj0_block(*h.rows);
  const Spectrum spec = eigh(h.m);
  const auto picks = pick_mj0_states(*h.rows, spec);
  const Manifold& a = h.rows->block(0).manifold;
  const Index n = ix(picks.size());
  Eigen::MatrixXd o(n, n);
  for (Index r = 0; r < n; ++r) {
    Index col = 0;
    for (HalfInt mI = a.I; mI >= -a.I; mI -= 1, ++col) {
      o(r, col) = std::norm(spec.vectors(ix(h.rows->index_uncoupled(0, 0, mI)), picks[r]));
    }
  }
  return o;
}

double reduced_quadrupole_constant(const Manifold& a) {
  if (!a.has_quadrupole()) return 0.0;
  const double I = a.I.value();
  const double J = a.J.value();
  return a.Q / (2.0 * I * J * (2.0 * I - 1.0) * (2.0 * J - 1.0));
}

std::vector<PerturbativeShift> perturbative_shifts(const Manifold& a, double rabi) {
  if (a.J != HalfInt(1)) throw InvalidArgument("perturbative_shifts needs J = 1");
  if (!(rabi > 0.0)) throw InvalidArgument("perturbative_shifts needs rabi > 0");
  const SpacePtr space = StateSpace::single(a, Basis::kUncoupled);
  const MatrixXcd h = hyperfine_hamiltonian(a).m;
  const double s = 0.5 * rabi;
  const double qp = reduced_quadrupole_constant(a);
  const double ii = jj1(a.I);
  const double jj = jj1(a.J);
  std::vector<PerturbativeShift> out;
  for (HalfInt mI = a.I; mI >= -a.I; mI -= 1) {
    const double m = mI.value();
    const double first = qp * (1.5 * jj * (ii - m * m) - ii * jj);
    const Index i0 = ix(space->index_uncoupled(0, 0, mI));
    double second = 0.0;
    for (HalfInt mp = a.I; mp >= -a.I; mp -= 1) {
      second -= std::norm(h(ix(space->index_uncoupled(0, 1, mp)), i0)) / s;
      second += std::norm(h(ix(space->index_uncoupled(0, -1, mp)), i0)) / s;
    }
    out.push_back({mI, first, second});
  }
  return out;
}

std::vector<double> light_shift_profile(const LaserCoupling& c) {
  if (!c.lower.J.is_integer() || c.lower.restricted()) {
    throw InvalidArgument("light_shift_profile needs a complete integer-J lower manifold");
  }
  if (c.rabi == 0.0) throw InvalidArgument("light_shift_profile needs rabi > 0");
  const OperatorMatrix v = change_basis(light_shift_operator(c), Basis::kUncoupled);
  const double v0 = c.rabi * c.rabi / (4.0 * c.detuning);
  std::vector<double> out;
  for (HalfInt mI = c.lower.I; mI >= -c.lower.I; mI -= 1) {
    const Index i = ix(v.rows->index_uncoupled(0, 0, mI));
    out.push_back(v.m(i, i).real() / v0);
  }
  return out;
}

std::array<double, 3> fit_even_quartic(const std::vector<double>& m,
                                       const std::vector<double>& values) {
  if (m.size() != values.size() || m.size() < 3) {
    throw InvalidArgument("quartic fit needs >= 3 matching samples");
  }
  Eigen::MatrixXd a(ix(m.size()), 3);
  Eigen::VectorXd y(ix(m.size()));
  for (std::size_t k = 0; k < m.size(); ++k) {
    const double x2 = m[k] * m[k];
    a(ix(k), 0) = 1.0;
    a(ix(k), 1) = x2;
    a(ix(k), 2) = x2 * x2;
    y(ix(k)) = values[k];
  }
  const Eigen::Vector3d c = a.colPivHouseholderQr().solve(y);
  return {c(0), c(1), c(2)};
}

}  // namespace aeqnd
