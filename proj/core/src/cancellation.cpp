#include <cmath>
#include <cstdint>

#include <boost/math/tools/minima.hpp>
#include <Eigen/Eigenvalues>

#include "aeqnd/errors.hpp"
#include "aeqnd/lightmatter.hpp"
#include "aeqnd/linalg.hpp"
#include "aeqnd/structure.hpp"

namespace aeqnd {
namespace {

constexpr int kBrentBits = 40;
constexpr std::uintmax_t kBrentMaxIter = 200;

double eigen_spread(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return spread(solver.eigenvalues());
}

}  // namespace

TripletCancellation cancel_triplet_lightshift(const LaserCoupling& probe,
                                              const LaserCoupling& triplet) {
  if (probe.lower.key != triplet.lower.key || probe.lower.I != triplet.lower.I) {
    throw InvalidArgument("probe and triplet couplings must share the lower manifold");
  }
  TripletCancellation out;
  const Eigen::MatrixXcd vp = light_shift_operator(probe).m;
  out.probe_spread = eigen_spread(vp);
  out.residual_spread = out.probe_spread;
  const double scale = vp.size() ? vp.cwiseAbs().maxCoeff() : 0.0;
  if (probe.rabi == 0.0 || out.probe_spread <= 1e-14 * scale) return out;

  LaserCoupling unit = triplet;
  unit.rabi = 1.0;
  const Eigen::MatrixXcd vu = light_shift_operator(unit).m;
  const double su = eigen_spread(vu);
  if (!(su > 0.0)) throw NumericalError("triplet coupling produces no differential shift");

  auto objective = [&](double rabi) {
    ++out.evaluations;
    return eigen_spread(vp + (rabi * rabi) * vu);
  };
  const double hi = 4.0 * std::sqrt(out.probe_spread / su);
  std::uintmax_t iters = kBrentMaxIter;
  const auto [x, fx] =
      boost::math::tools::brent_find_minima(objective, 0.0, hi, kBrentBits, iters);
  if (!(fx < out.probe_spread)) {
    throw NumericalError("no minimum in bracket [0, " + std::to_string(hi) +
                         "]: the triplet shift does not oppose the probe tensor shift");
  }
  out.rabi = x;
  out.residual_spread = fx;
  return out;
}

QuadrupolePoint evaluate_quadrupole_point(const QuadrupoleSetup& s, double rabi_ad,
                                          double detuning_ad) {
  OperatorMatrix h = dressing_hamiltonian(s.a, s.b, s.rabi_ab, s.model);
  if (rabi_ad > 0.0) {
    LaserCoupling ad;
    ad.lower = s.a;
    ad.upper = s.d;
    ad.rabi = rabi_ad;
    ad.detuning = detuning_ad;
    ad.polarization = Polarization::pi();
    const OperatorMatrix v = change_basis(light_shift_operator(ad), Basis::kUncoupled);
    h.m.topLeftCorner(v.m.rows(), v.m.cols()) += v.m;
  }
  QuadrupolePoint p;
  p.rabi_ad = rabi_ad;
  p.detuning_ad = rabi_ad > 0.0 ? detuning_ad : 0.0;
  p.levels = dressed_mj0_levels(h);
  std::vector<double> e;
  for (const auto& lv : p.levels) e.push_back(lv.energy);
  p.spread = spread(e);
  return p;
}

QuadrupoleCancellation cancel_quadrupole_shift(const QuadrupoleSetup& s,
                                               double detuning_magnitude) {
  if (!(detuning_magnitude > 0.0)) throw InvalidArgument("detuning magnitude must be > 0");
  QuadrupoleCancellation out;
  out.before = evaluate_quadrupole_point(s, 0.0, 0.0);
  out.after = out.before;

  LaserCoupling unit;
  unit.lower = s.a;
  unit.upper = s.d;
  unit.rabi = 1.0;
  unit.detuning = detuning_magnitude;
  const double c_range = spread(light_shift_profile(unit));
  if (!(c_range > 0.0)) throw NumericalError("tensor level produces no M_I-dependent shift");

  // Light shift amplitude Omega^2/(4|Delta|) up to 4x the undressed spread per
  // unit of profile range.
  const double s_hi = 4.0 * out.before.spread / c_range;
  const double hi = std::sqrt(4.0 * detuning_magnitude * s_hi);
  if (!(hi > 0.0)) {
    out.message = "undressed spread is already zero";
    return out;
  }

  for (double sign : {+1.0, -1.0}) {
    const double det = sign * detuning_magnitude;
    auto objective = [&](double rabi) {
      ++out.evaluations;
      return evaluate_quadrupole_point(s, rabi, det).spread;
    };
    std::uintmax_t iters = kBrentMaxIter;
    const auto [x, fx] =
        boost::math::tools::brent_find_minima(objective, 0.0, hi, kBrentBits, iters);
    if (fx < out.after.spread) out.after = evaluate_quadrupole_point(s, x, det);
    if (iters >= kBrentMaxIter) {
      out.converged = false;
      out.message = "Brent search hit the iteration limit";
    }
  }
  if (out.after.rabi_ad == 0.0) {
    out.converged = false;
    out.message = "no spread reduction found for either detuning sign";
  } else if (out.after.rabi_ad > (1.0 - 1e-6) * hi) {
    out.converged = false;
    out.message = "optimum at the upper bracket edge";
  }
  return out;
}

}  // namespace aeqnd
