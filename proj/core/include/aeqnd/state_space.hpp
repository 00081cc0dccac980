#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "aeqnd/halfint.hpp"

namespace aeqnd {

using cd = std::complex<double>;

enum class Basis { kCoupled, kUncoupled };

// An electronic level. Frequencies in rad/us.
struct Manifold {
  std::string key;    // registry key, e.g. "1P1"
  std::string label;  // e.g. "5s5p 1P1"
  std::string role;   // e.g. "singlet"
  HalfInt J;
  HalfInt I;
  double A = 0.0;
  double Q = 0.0;
  double Gamma = 0.0;
  double energy_offset = 0.0;
  // Hyperfine levels kept in the model. Empty means every F in |J-I|..J+I.
  std::vector<HalfInt> f_levels;

  bool restricted() const { return !f_levels.empty(); }
  // Kept F values, descending.
  std::vector<HalfInt> allowed_f() const;
  int dimension() const;
  bool has_dipole() const { return J.twice() > 0 && I.twice() > 0; }
  bool has_quadrupole() const { return J.twice() >= 2 && I.twice() >= 2; }
  void validate() const;
};

struct BasisState {
  std::size_t block = 0;
  Basis basis = Basis::kCoupled;
  HalfInt F;   // coupled only
  HalfInt M;   // total projection in both bases
  HalfInt mJ;  // uncoupled only
  HalfInt mI;  // uncoupled only
};

// Ordered direct sum of manifolds, each in one representation.
// Coupled blocks: descending F, then descending M_F.
// Uncoupled blocks: descending M_J, then descending M_I (Kronecker J (x) I).
class StateSpace {
 public:
  struct Block {
    Manifold manifold;
    Basis basis;
    std::size_t offset;
    std::size_t dimension;
  };

  explicit StateSpace(std::vector<std::pair<Manifold, Basis>> blocks);

  static std::shared_ptr<const StateSpace> make(
      std::vector<std::pair<Manifold, Basis>> blocks);
  static std::shared_ptr<const StateSpace> single(const Manifold& m, Basis b);
  // Unstructured d-level space, for test problems.
  static std::shared_ptr<const StateSpace> generic(std::size_t dimension);

  std::size_t dimension() const { return states_.size(); }
  const std::vector<Block>& blocks() const { return blocks_; }
  const Block& block(std::size_t i) const { return blocks_.at(i); }
  const std::vector<BasisState>& states() const { return states_; }

  std::size_t index_coupled(std::size_t block, HalfInt F, HalfInt M) const;
  std::size_t index_uncoupled(std::size_t block, HalfInt mJ, HalfInt mI) const;
  std::string label(std::size_t index) const;

  bool same_as(const StateSpace& other) const;

 private:
  std::vector<Block> blocks_;
  std::vector<BasisState> states_;
};

using SpacePtr = std::shared_ptr<const StateSpace>;

// Dense complex operator from `cols` space into `rows` space.
struct OperatorMatrix {
  SpacePtr rows;
  SpacePtr cols;
  Eigen::MatrixXcd m;

  OperatorMatrix() = default;
  explicit OperatorMatrix(SpacePtr space);
  OperatorMatrix(SpacePtr space, Eigen::MatrixXcd matrix);
  OperatorMatrix(SpacePtr row_space, SpacePtr col_space, Eigen::MatrixXcd matrix);

  bool square() const;
  SpacePtr space() const { return rows; }
  OperatorMatrix adjoint() const;
  // max |H - H^dagger| / max(1, max|H|).
  double hermiticity_error() const;
};

bool same_space(const SpacePtr& a, const SpacePtr& b);

OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator+(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator-(const OperatorMatrix& a, const OperatorMatrix& b);
OperatorMatrix operator*(cd s, const OperatorMatrix& a);

}  // namespace aeqnd
