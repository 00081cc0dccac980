#include <gtest/gtest.h>

#include <cmath>

#include "aeqnd/diagnostics.hpp"
#include "aeqnd/errors.hpp"
#include "aeqnd/lightmatter.hpp"
#include "aeqnd/linalg.hpp"
#include "aeqnd/species.hpp"
#include "aeqnd/structure.hpp"
#include "aeqnd/units.hpp"
#include "generators.hpp"
#include "oracles.hpp"

using namespace aeqnd;

namespace {

const Species& sr() {
  static const Species s = species_registry("Sr87");
  return s;
}

LaserCoupling probe(double detuning_mhz, double rabi_mhz = 50.0,
                    Polarization pol = Polarization::pi()) {
  LaserCoupling c;
  c.lower = sr().manifold("1S0");
  c.upper = sr().manifold("1P1");
  c.rabi = mhz(rabi_mhz);
  c.detuning = mhz(detuning_mhz);
  c.polarization = pol;
  return c;
}

oracle::FarDetunedLaser oracle_laser(const LaserCoupling& c) {
  oracle::FarDetunedLaser l;
  l.Jp = c.upper.J;
  l.I = c.upper.I;
  l.A = c.upper.A;
  l.Q = c.upper.Q;
  l.gamma = c.upper.Gamma;
  l.rabi = c.rabi;
  l.detuning = c.detuning;
  l.eps = c.polarization.q;
  if (c.reference_level) {
    l.reference_energy = oracle::lande_energy(c.upper.A, c.upper.Q, c.upper.J, c.upper.I,
                                              *c.reference_level);
  }
  return l;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

double eig_spread(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  return spread(es.eigenvalues());
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct Quiet {
  Quiet() { set_warning_sink(nullptr); }
  ~Quiet() { set_warning_sink([](const std::string& m) { std::fprintf(stderr, "%s\n", m.c_str()); }); }
};

}  // namespace

TEST(Polarization, SphericalUnitsAndNorm) {
  const Eigen::Vector3cd ep = spherical_unit(+1);
  EXPECT_NEAR(std::abs(ep(0) + 1.0 / std::sqrt(2.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(ep(1) - cd(0, -1.0 / std::sqrt(2.0))), 0.0, 1e-15);
  const Polarization x = Polarization::cartesian(1, 0, 0);
  EXPECT_NEAR(x.norm(), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(x.to_cartesian()(0) - 1.0), 0.0, 1e-15);
  LaserCoupling c = probe(1e4);
  c.polarization.q = {cd(1), cd(1), cd(0)};
  EXPECT_THROW(c.validate(), InvalidArgument);
  c.polarization = Polarization::pi();
  c.rabi = -1.0;
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(Dipole, SpinlessLowerHasUnitEntries) {
  Manifold g, e;
  g.key = "g";
  e.key = "e";
  e.J = 1;
  for (int q = -1; q <= 1; ++q) {
    const Eigen::MatrixXcd d = dipole_coupling(g, e, q).m;
    ASSERT_EQ(d.rows(), 3);
    ASSERT_EQ(d.cols(), 1);
    EXPECT_NEAR(d.cwiseAbs().sum(), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(d(1 - q, 0)), 1.0, 1e-15);
  }
}

TEST(Dipole, DecayRateUniformity) {
  Eigen::MatrixXd total = Eigen::MatrixXd::Zero(30, 1);
  for (int q = -1; q <= 1; ++q) {
    const Eigen::MatrixXcd d = dipole_coupling(sr().manifold("1S0"), sr().manifold("1P1"), q).m;
    total += d.cwiseAbs2().rowwise().sum();
  }
  for (int k = 0; k < 30; ++k) EXPECT_NEAR(total(k), 1.0, 1e-12);
}

TEST(Dipole, MatchesUncoupledConstruction) {
  // |<e|D_q|g>| against an electronic-only dipole dressed by the oracle CG
  // transform; elementwise up to one global sign per (J, J') pair.
  const Manifold g = sr().manifold("1S0");
  const Manifold e = sr().manifold("3P1");
  for (int q = -1; q <= 1; ++q) {
    const Eigen::MatrixXcd d = dipole_coupling(g, e, q).m;
    const Eigen::MatrixXcd du = oracle::dipole_uncoupled(g.J, e.J, e.I, q);
    const OperatorMatrix u = basis_transform({e}, Basis::kCoupled);
    const Eigen::MatrixXcd ref = u.m * du;
    const double sign = (d.cwiseProduct(ref.conjugate())).sum().real() >= 0 ? 1.0 : -1.0;
    EXPECT_LT(max_abs(d - sign * ref), 1e-12);
  }
}

TEST(Dipole, QuadrupoleDressingChain) {
  const Manifold a = sr().manifold("1P1");
  const Manifold d = sr().manifold("5s15d_1D2");
  const OperatorMatrix dc = dipole_coupling(a, d, 0);
  const OperatorMatrix u = basis_transform({a}, Basis::kCoupled);
  const Eigen::MatrixXcd du = dc.m * u.m;  // lower in uncoupled basis
  const SpacePtr lower_u = u.cols;
  for (HalfInt M = half(9); M >= half(-9); M -= 1) {
    const double m = M.value();
    const double expect =
        0.5 * std::sqrt((169 - 4 * m * m) / 78.0) * 0.5 * std::sqrt((121 - 4 * m * m) / 55.0);
    const auto r = static_cast<Eigen::Index>(dc.rows->index_coupled(0, half(13), M));
    const auto c = static_cast<Eigen::Index>(lower_u->index_uncoupled(0, 0, M));
    EXPECT_NEAR(du(r, c).real(), expect, 1e-12) << M;
    EXPECT_NEAR(du(r, c).imag(), 0.0, 1e-15);
  }
}

TEST(Dipole, RejectsForbiddenPairs) {
  EXPECT_THROW(dipole_coupling(sr().manifold("1S0"), sr().manifold("3P0"), 0), InvalidArgument);
  EXPECT_THROW(dipole_coupling(sr().manifold("1S0"), sr().manifold("5s15d_1D2"), 0), InvalidArgument);
}

TEST(LightShift, MatchesUncoupledOracle) {
  gen::Source s(17);
  for (int trial = 0; trial < 25; ++trial) {
    const double det = (s.integer(0, 1) ? 1 : -1) * s.log_real(200.0, 1e5);
    Polarization pol;
    pol.q = {cd(s.real(-1, 1), s.real(-1, 1)), cd(s.real(-1, 1), s.real(-1, 1)),
             cd(s.real(-1, 1), s.real(-1, 1))};
    const double n = pol.norm();
    for (auto& z : pol.q) z /= n;
    LaserCoupling c = probe(det, s.real(1, 100), pol);
    if (trial % 2) {
      c.upper = sr().manifold("3P1");
      c.reference_level = half(9);
    }
    const Eigen::MatrixXcd v = light_shift_operator(c).m;
    const Eigen::MatrixXcd ref = oracle::light_shift_uncoupled(oracle_laser(c));
    EXPECT_LT(max_abs(v - ref), 1e-10 * max_abs(ref)) << trial;
    EXPECT_LT(max_abs(v - v.adjoint()), 1e-12 * max_abs(v));
    const auto w = jump_operators(c);
    const auto wr = oracle::jump_ops_uncoupled(oracle_laser(c));
    for (int q = 0; q < 3; ++q) EXPECT_LT(max_abs(w[q].m - wr[q]), 1e-10 * max_abs(wr[1])) << trial;
  }
}

TEST(LightShift, FarDetunedIsMostlyScalar) {
  double max_delta = 0.0;
  for (const auto& lv : excited_levels(probe(1e4))) max_delta = std::max(max_delta, std::abs(lv.delta));
  const double d1 = 100.0 * to_mhz(max_delta);
  auto tensor_ratio = [](double det) {
    const Eigen::MatrixXcd v = light_shift_operator(probe(det)).m;
    const double scalar = v.trace().real() / static_cast<double>(v.rows());
    return eig_spread(v) / std::abs(scalar);
  };
  const double r1 = tensor_ratio(d1);
  const double r2 = tensor_ratio(2 * d1);
  EXPECT_LT(r1, 0.01);
  EXPECT_NEAR(r1 / r2, 2.0, 0.02);
}

TEST(LightShift, SpinlessScalarCase) {
  Manifold g, e;
  g.key = "g";
  e.key = "e";
  e.J = 1;
  LaserCoupling c;
  c.lower = g;
  c.upper = e;
  c.rabi = 3.0;
  c.detuning = 70.0;
  const Eigen::MatrixXcd v = light_shift_operator(c).m;
  ASSERT_EQ(v.rows(), 1);
  EXPECT_DOUBLE_EQ(v(0, 0).real(), 9.0 / 280.0);
}

TEST(LightShift, ResonanceIsAnError) {
  Quiet q;
  LaserCoupling c = probe(5.0);
  c.reference_level = half(9);
  EXPECT_THROW(light_shift_operator(c), ResonanceError);
  EXPECT_NO_THROW(light_shift_operator(c, LightShiftOptions{true}));
  // Exact resonance is singular and stays an error even when forced.
  c.detuning = 0.0;
  EXPECT_THROW(light_shift_operator(c, LightShiftOptions{true}), ResonanceError);
}

TEST(LightShift, QuarticProfileIsTheCGProduct) {
  LaserCoupling c;
  c.lower = sr().manifold("1P1");
  c.upper = sr().manifold("5s15d_1D2");
  c.rabi = 1.0;
  c.detuning = mhz(4350);
  const auto prof = light_shift_profile(c);
  std::vector<double> ms;
  for (int k = 0; k < 10; ++k) {
    const double m = 4.5 - k;
    ms.push_back(m);
    EXPECT_NEAR(prof[k], (169 - 4 * m * m) * (121 - 4 * m * m) / (16.0 * 78.0 * 55.0), 1e-12);
  }
  const auto fit = fit_even_quartic(ms, prof);
  EXPECT_NEAR(fit[0], 0.298, 1e-3);
  EXPECT_NEAR(fit[1], -0.0169, 1e-3);
  EXPECT_NEAR(fit[2], 0.000233, 1e-3);
  // Closed-form polynomial coefficients.
  EXPECT_NEAR(fit[0], 169.0 * 121.0 / 68640.0, 1e-12);
  EXPECT_NEAR(fit[1], -4.0 * 290.0 / 68640.0, 1e-12);
  EXPECT_NEAR(fit[2], 16.0 / 68640.0, 1e-12);
}

TEST(JumpOperators, RayleighLeadingTerm) {
  auto distance = [](double det) {
    const LaserCoupling c = probe(det);
    const auto w = jump_operators(c);
    const double lead = 0.5 * c.rabi / c.detuning;
    return max_abs(w[1].m - lead * Eigen::MatrixXcd::Identity(10, 10));
  };
  const double r = distance(1e4) / distance(1e5);
  EXPECT_NEAR(std::log10(r), 2.0, 0.05);
}

TEST(JumpOperators, PumpingAndRayleighScaling) {
  std::vector<double> det, pump, rayl;
  for (int k = 0; k <= 10; ++k) {
    const double d = 1e4 * std::pow(10.0, k / 10.0);
    const auto w = jump_operators(probe(d));
    det.push_back(d);
    pump.push_back(w[0].m.squaredNorm() + w[2].m.squaredNorm());
    rayl.push_back(w[1].m.squaredNorm());
  }
  EXPECT_NEAR(slope(det, pump), -4.0, 0.05);
  EXPECT_NEAR(slope(det, rayl), -2.0, 0.05);
}

TEST(JumpOperators, TotalRateIsUniformAndLeadingOrder) {
  const LaserCoupling c = probe(2e4);
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(10, 10);
  for (const auto& w : jump_operators(c)) total += w.m.adjoint() * w.m;
  const double lead = rayleigh_rate(c);
  double max_delta = 0.0;
  for (const auto& lv : excited_levels(c)) max_delta = std::max(max_delta, std::abs(lv.delta));
  for (int k = 0; k < 10; ++k) {
    EXPECT_NEAR(c.upper.Gamma * total(k, k).real() / lead, 1.0, 3.0 * max_delta / c.detuning);
  }
  EXPECT_NEAR(exposure_time(c, 100.0), 100.0 / lead, 1e-12 / lead);
}

TEST(Decomposition, SingletSumRules) {
  const auto d = irreducible_decomposition(probe(1e4));
  ASSERT_EQ(d.F.size(), 3u);
  double sum_c2 = 0.0;
  for (double x : d.C2) sum_c2 += x;
  EXPECT_LT(std::abs(sum_c2), 1e-10);
  EXPECT_LT(std::abs(d.gamma[2]), 1e-10);
  EXPECT_LT(d.reconstruction_error, 1e-10);
  for (double x : d.C2) EXPECT_GT(std::abs(x), 1e-3);
}

TEST(Decomposition, YbHasNoTensorPart) {
  const Species yb = species_registry("Yb171");
  LaserCoupling c;
  c.lower = yb.manifold("1S0");
  c.upper = yb.manifold("1P1");
  c.rabi = mhz(50);
  c.detuning = mhz(1e4);
  const auto d = irreducible_decomposition(c);
  for (double x : d.C2) EXPECT_EQ(x, 0.0);
  EXPECT_LT(d.reconstruction_error, 1e-10);
}

TEST(Decomposition, RequiresSpinlessLower) {
  LaserCoupling c;
  c.lower = sr().manifold("1P1");
  c.upper = sr().manifold("5s15d_1D2");
  c.rabi = 1.0;
  c.detuning = mhz(4350);
  EXPECT_THROW(irreducible_decomposition(c), InvalidArgument);
}

TEST(Decomposition, TruncatedJumpOperatorsConvergeCubically) {
  auto residual = [](double det) {
    const LaserCoupling c = probe(det);
    const auto exact = jump_operators(c);
    const auto approx = truncated_jump_operators(c, irreducible_decomposition(c));
    double r = 0.0;
    for (int q = 0; q < 3; ++q) r = std::max(r, max_abs(exact[q].m - approx[q].m));
    return r;
  };
  std::vector<double> det, res;
  for (double d : {1e4, 2e4, 4e4, 8e4}) {
    det.push_back(d);
    res.push_back(residual(d));
  }
  EXPECT_NEAR(slope(det, res), -3.0, 0.1);
}
