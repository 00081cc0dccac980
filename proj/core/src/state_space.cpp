#include "aeqnd/state_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "aeqnd/errors.hpp"

namespace aeqnd {

std::vector<HalfInt> Manifold::allowed_f() const {
  std::vector<HalfInt> out;
  if (restricted()) {
    out = f_levels;
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
  }
  for (HalfInt F = J + I; F >= abs(J - I); F -= 1) out.push_back(F);
  return out;
}

int Manifold::dimension() const {
  int d = 0;
  for (HalfInt F : allowed_f()) d += multiplicity(F);
  return d;
}

void Manifold::validate() const {
  if (J.twice() < 0 || I.twice() < 0) {
    throw InvalidArgument("manifold " + key + ": negative J or I");
  }
  if (Gamma < 0.0 || !std::isfinite(Gamma)) {
    throw InvalidArgument("manifold " + key + ": Gamma must be >= 0");
  }
  if (!std::isfinite(A) || !std::isfinite(Q)) {
    throw InvalidArgument("manifold " + key + ": non-finite hyperfine constant");
  }
  for (HalfInt F : f_levels) {
    if (!triangle(J, I, F)) {
      throw InvalidArgument("manifold " + key + ": F=" + F.str() +
                            " not allowed for J=" + J.str() + ", I=" + I.str());
    }
  }
}

StateSpace::StateSpace(std::vector<std::pair<Manifold, Basis>> blocks) {
  std::size_t offset = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const Manifold& m = blocks[b].first;
    const Basis basis = blocks[b].second;
    m.validate();
    if (basis == Basis::kUncoupled && m.restricted()) {
      throw InvalidArgument("manifold " + m.key +
                            " keeps a subset of F levels; only the coupled basis is complete");
    }
    const std::size_t start = states_.size();
    if (basis == Basis::kCoupled) {
      for (HalfInt F : m.allowed_f()) {
        for (HalfInt M = F; M >= -F; M -= 1) {
          states_.push_back({b, basis, F, M, {}, {}});
        }
      }
    } else {
      for (HalfInt mJ = m.J; mJ >= -m.J; mJ -= 1) {
        for (HalfInt mI = m.I; mI >= -m.I; mI -= 1) {
          states_.push_back({b, basis, {}, mJ + mI, mJ, mI});
        }
      }
    }
    blocks_.push_back({m, basis, offset, states_.size() - start});
    offset = states_.size();
  }
}

SpacePtr StateSpace::make(std::vector<std::pair<Manifold, Basis>> blocks) {
  return std::make_shared<const StateSpace>(std::move(blocks));
}

SpacePtr StateSpace::single(const Manifold& m, Basis b) { return make({{m, b}}); }

SpacePtr StateSpace::generic(std::size_t dimension) {
  if (dimension == 0) throw InvalidArgument("empty state space");
  Manifold m;
  m.key = "generic";
  m.label = "generic";
  m.J = 0;
  m.I = HalfInt::from_twice(static_cast<int>(dimension) - 1);
  return make({{m, Basis::kUncoupled}});
}

std::size_t StateSpace::index_coupled(std::size_t block, HalfInt F, HalfInt M) const {
  const Block& b = blocks_.at(block);
  for (std::size_t i = b.offset; i < b.offset + b.dimension; ++i) {
    const BasisState& s = states_[i];
    if (s.basis == Basis::kCoupled && s.F == F && s.M == M) return i;
  }
  throw InvalidArgument("no coupled state F=" + F.str() + " M=" + M.str() + " in " +
                        b.manifold.key);
}

std::size_t StateSpace::index_uncoupled(std::size_t block, HalfInt mJ, HalfInt mI) const {
  const Block& b = blocks_.at(block);
  if (b.basis != Basis::kUncoupled || !valid_pair(b.manifold.J, mJ) ||
      !valid_pair(b.manifold.I, mI)) {
    throw InvalidArgument("no uncoupled state mJ=" + mJ.str() + " mI=" + mI.str() +
                          " in " + b.manifold.key);
  }
  const int row = (b.manifold.J - mJ).as_int();
  const int col = (b.manifold.I - mI).as_int();
  return b.offset + static_cast<std::size_t>(row * multiplicity(b.manifold.I) + col);
}

std::string StateSpace::label(std::size_t index) const {
  const BasisState& s = states_.at(index);
  std::ostringstream os;
  os << blocks_[s.block].manifold.key;
  if (s.basis == Basis::kCoupled) {
    os << "|F=" << s.F << ",M=" << s.M << ">";
  } else {
    os << "|mJ=" << s.mJ << ",mI=" << s.mI << ">";
  }
  return os.str();
}

bool StateSpace::same_as(const StateSpace& other) const {
  if (blocks_.size() != other.blocks_.size()) return false;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    const Block& a = blocks_[i];
    const Block& b = other.blocks_[i];
    if (a.basis != b.basis || a.dimension != b.dimension || a.manifold.key != b.manifold.key ||
        a.manifold.J != b.manifold.J || a.manifold.I != b.manifold.I ||
        a.manifold.allowed_f() != b.manifold.allowed_f()) {
      return false;
    }
  }
  return true;
}

bool same_space(const SpacePtr& a, const SpacePtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return a->same_as(*b);
}

OperatorMatrix::OperatorMatrix(SpacePtr space)
    : rows(space),
      cols(space),
      m(Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(space->dimension()),
                               static_cast<Eigen::Index>(space->dimension()))) {}

OperatorMatrix::OperatorMatrix(SpacePtr space, Eigen::MatrixXcd matrix)
    : OperatorMatrix(space, space, std::move(matrix)) {}

OperatorMatrix::OperatorMatrix(SpacePtr row_space, SpacePtr col_space,
                               Eigen::MatrixXcd matrix)
    : rows(std::move(row_space)), cols(std::move(col_space)), m(std::move(matrix)) {
  if (!rows || !cols || m.rows() != static_cast<Eigen::Index>(rows->dimension()) ||
      m.cols() != static_cast<Eigen::Index>(cols->dimension())) {
    throw InvalidArgument("operator shape does not match its spaces");
  }
}

bool OperatorMatrix::square() const { return same_space(rows, cols); }

OperatorMatrix OperatorMatrix::adjoint() const {
  return OperatorMatrix(cols, rows, m.adjoint());
}

double OperatorMatrix::hermiticity_error() const {
  if (m.rows() != m.cols()) return INFINITY;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.adjoint()).cwiseAbs().maxCoeff() / scale;
}

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (!same_space(a.cols, b.rows)) throw InvalidArgument("operator product: space mismatch");
  return OperatorMatrix(a.rows, b.cols, a.m * b.m);
}

OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b) {
  if (!same_space(a.rows, b.rows) || !same_space(a.cols, b.cols)) {
    throw InvalidArgument("operator sum: space mismatch");
  }
  return OperatorMatrix(a.rows, a.cols, a.m + b.m);
}

OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b) {
  return a + cd(-1.0) * b;
}

OperatorMatrix operator*(cd s, const OperatorMatrix& a) {
  return OperatorMatrix(a.rows, a.cols, s * a.m);
}

}  // namespace aeqnd
