#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "aeqnd/angmom.hpp"
#include "aeqnd/linalg.hpp"
#include "aeqnd/species.hpp"
#include "aeqnd/structure.hpp"
#include "aeqnd/units.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace aeqnd;

namespace {

Manifold sr(const std::string& key) { return species_registry("Sr87").manifold(key); }

Manifold make_manifold(HalfInt J, HalfInt I, double a_mhz, double q_mhz) {
  Manifold m;
  m.key = "x";
  m.label = "x";
  m.role = "test";
  m.J = J;
  m.I = I;
  m.A = mhz(a_mhz);
  m.Q = mhz(q_mhz);
  return m;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Hyperfine, SrSingletLevels) {
  const Manifold p = sr("1P1");
  const Spectrum s = eigh(hyperfine_hamiltonian(p).m);
  ASSERT_EQ(s.values.size(), 30);
  // Ascending: F=9/2 (10), F=11/2 (12), F=7/2 (8).
  const double expect[3] = {-22.6, -5.55, 36.575};
  const int counts[3] = {10, 12, 8};
  int k = 0;
  for (int level = 0; level < 3; ++level) {
    for (int n = 0; n < counts[level]; ++n, ++k) {
      EXPECT_NEAR(to_mhz(s.values(k)), expect[level], 1e-9);
    }
  }
  for (HalfInt F : {half(7), half(9), half(11)}) {
    EXPECT_NEAR(to_mhz(hyperfine_energy(p, F)),
                oracle::lande_energy(-3.4, 39.0, HalfInt(1), half(9), F), 1e-12);
  }
}

TEST(Hyperfine, GroundManifoldIsZero) {
  const OperatorMatrix h = hyperfine_hamiltonian(sr("1S0"));
  EXPECT_EQ(h.m.rows(), 10);
  EXPECT_EQ(max_abs(h.m), 0.0);
}

TEST(Hyperfine, MatchesUncoupledOracleEntrywise) {
  gen::Source s(3);
  for (int trial = 0; trial < 60; ++trial) {
    const HalfInt J = s.j(6);
    const HalfInt I = s.j(11);
    const double a = s.real(-300, 300), q = s.real(-50, 50);
    const Manifold m = make_manifold(J, I, a, q);
    const Eigen::MatrixXcd ref = oracle::hyperfine_uncoupled(mhz(a), mhz(q), J, I);
    EXPECT_LT(max_abs(hyperfine_hamiltonian(m).m - ref), 1e-10 * std::max(1.0, max_abs(ref)))
        << "J=" << J << " I=" << I;
  }
}

TEST(Hyperfine, EigenvaluesMatchLandeForm) {
  gen::Source s(4);
  for (int trial = 0; trial < 60; ++trial) {
    const HalfInt J = HalfInt::from_twice(s.integer(2, 6));
    const HalfInt I = HalfInt::from_twice(s.integer(2, 11));
    const Manifold m = make_manifold(J, I, s.real(-300, 300), s.real(-50, 50));
    const Spectrum sp = eigh(hyperfine_hamiltonian(m).m);
    std::vector<double> expect;
    for (HalfInt F = abs(J - I); F <= J + I; F += 1) {
      for (int k = 0; k < multiplicity(F); ++k) {
        expect.push_back(oracle::lande_energy(m.A, m.Q, J, I, F));
      }
    }
    std::sort(expect.begin(), expect.end());
    double scale = 1.0;
    for (double e : expect) scale = std::max(scale, std::abs(e));
    for (std::size_t k = 0; k < expect.size(); ++k) {
      EXPECT_NEAR(sp.values(static_cast<Eigen::Index>(k)), expect[k], 1e-9 * scale);
    }
  }
}

TEST(Hyperfine, WeightedTraceVanishes) {
  for (const char* key : {"1P1", "3P1"}) {
    const Manifold m = sr(key);
    double sum = 0.0;
    for (const auto& lv : hyperfine_levels(m)) sum += multiplicity(lv.F) * lv.energy;
    EXPECT_NEAR(sum, 0.0, 1e-9) << key;
  }
}

TEST(Hyperfine, CommutesWithFzAndF2) {
  const Manifold m = sr("3P1");
  const SpacePtr space = StateSpace::single(m, Basis::kUncoupled);
  const Eigen::MatrixXcd h = hyperfine_hamiltonian(space).m;
  const double scale = max_abs(h);
  for (AngularOp op : {AngularOp::kFz, AngularOp::kF2}) {
    const Eigen::MatrixXcd f = angular_momentum_operator(space, op).m;
    EXPECT_LT(max_abs(h * f - f * h), 1e-12 * scale * max_abs(f));
  }
}

TEST(Hyperfine, RestrictedManifoldIsDiagonal) {
  const Manifold d = sr("5s15d_1D2");
  ASSERT_TRUE(d.restricted());
  const OperatorMatrix h = hyperfine_hamiltonian(d);
  EXPECT_EQ(h.m.rows(), 14);
  EXPECT_LT(max_abs(h.m - Eigen::MatrixXcd(h.m.diagonal().asDiagonal())), 1e-15);
}

TEST(AngularOps, GroundFzIsDiagonalDescending) {
  const SpacePtr g = StateSpace::single(sr("1S0"), Basis::kCoupled);
  const Eigen::MatrixXcd fz = angular_momentum_operator(g, AngularOp::kFz).m;
  for (int k = 0; k < 10; ++k) EXPECT_DOUBLE_EQ(fz(k, k).real(), 4.5 - k);
  EXPECT_EQ(max_abs(fz - Eigen::MatrixXcd(fz.diagonal().asDiagonal())), 0.0);
}

TEST(AngularOps, CommutatorAndStretchState) {
  for (Basis b : {Basis::kCoupled, Basis::kUncoupled}) {
    const SpacePtr s = StateSpace::single(sr("1P1"), b);
    const Eigen::MatrixXcd fz = angular_momentum_operator(s, AngularOp::kFz).m;
    const Eigen::MatrixXcd fp = angular_momentum_operator(s, AngularOp::kFplus).m;
    const Eigen::MatrixXcd fm = angular_momentum_operator(s, AngularOp::kFminus).m;
    EXPECT_LT(max_abs(fz * fp - fp * fz - fp), 1e-12);
    EXPECT_LT(max_abs(fp * fm - fm * fp - 2.0 * fz), 1e-12);
  }
  const SpacePtr g = StateSpace::single(sr("1S0"), Basis::kCoupled);
  const Eigen::MatrixXcd fp = angular_momentum_operator(g, AngularOp::kFplus).m;
  EXPECT_EQ(fp.col(static_cast<Eigen::Index>(g->index_coupled(0, half(9), half(9)))).norm(), 0.0);
}

TEST(BasisTransform, KnownEntryAndUnitarity) {
  const Manifold p = sr("1P1");
  const OperatorMatrix u = basis_transform({p}, Basis::kCoupled);
  const SpacePtr cs = u.rows;
  const SpacePtr us = u.cols;
  const auto r = static_cast<Eigen::Index>(cs->index_coupled(0, half(11), half(9)));
  const auto c = static_cast<Eigen::Index>(us->index_uncoupled(0, 0, half(9)));
  EXPECT_NEAR(u.m(r, c).real(), std::sqrt(2.0 / 11.0), 1e-14);
  EXPECT_LT(max_abs(u.m * u.m.adjoint() - Eigen::MatrixXcd::Identity(30, 30)), 1e-12);
}

TEST(BasisTransform, EntriesAreOracleCG) {
  const Manifold m = sr("3P1");
  const OperatorMatrix u = basis_transform({m}, Basis::kCoupled);
  for (std::size_t r = 0; r < u.rows->dimension(); ++r) {
    const BasisState& f = u.rows->states()[r];
    for (std::size_t c = 0; c < u.cols->dimension(); ++c) {
      const BasisState& x = u.cols->states()[c];
      const double ref = oracle::cg(m.J, x.mJ, m.I, x.mI, f.F, f.M);
      EXPECT_NEAR(u.m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)).real(), ref,
                  1e-12);
    }
  }
}

TEST(BasisTransform, JZeroIsIdentity) {
  const OperatorMatrix u = basis_transform({sr("1S0")}, Basis::kCoupled);
  EXPECT_EQ(max_abs(u.m - Eigen::MatrixXcd::Identity(10, 10)), 0.0);
}

TEST(BasisTransform, ChangeBasisDiagonalisesHyperfine) {
  const OperatorMatrix hc = change_basis(hyperfine_hamiltonian(sr("1P1")), Basis::kCoupled);
  EXPECT_LT(max_abs(hc.m - Eigen::MatrixXcd(hc.m.diagonal().asDiagonal())), 1e-12);
  const SpacePtr cs = hc.rows;
  const auto k = static_cast<Eigen::Index>(cs->index_coupled(0, half(7), half(-3)));
  EXPECT_NEAR(to_mhz(hc.m(k, k).real()), 36.575, 1e-12);
}

TEST(StateSpace, DimensionsAndOrdering) {
  const SpacePtr s = StateSpace::make(
      {{sr("1S0"), Basis::kCoupled}, {sr("1P1"), Basis::kCoupled}, {sr("1P1"), Basis::kUncoupled}});
  EXPECT_EQ(s->dimension(), 70u);
  EXPECT_EQ(s->states()[10].F, half(11));
  EXPECT_EQ(s->states()[10].M, half(11));
  EXPECT_EQ(s->states()[22].F, half(9));
  EXPECT_EQ(s->states()[40].mJ, HalfInt(1));
  EXPECT_EQ(s->states()[40].mI, half(9));
  EXPECT_EQ(s->states()[41].mI, half(7));
  EXPECT_EQ(s->index_uncoupled(2, 0, half(9)), 50u);
}

TEST(LevelProjector, IsAProjectorOfRank2FPlus1) {
  const SpacePtr cs = StateSpace::single(sr("1P1"), Basis::kCoupled);
  const Eigen::MatrixXcd p = level_projector(cs, half(9)).m;
  EXPECT_LT(max_abs(p * p - p), 1e-15);
  EXPECT_NEAR(p.trace().real(), 10.0, 1e-15);
}
