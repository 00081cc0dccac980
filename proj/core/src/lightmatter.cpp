#include "aeqnd/lightmatter.hpp"

#include <cmath>
#include <sstream>

#include "aeqnd/angmom.hpp"
#include "aeqnd/diagnostics.hpp"
#include "aeqnd/errors.hpp"
#include "aeqnd/structure.hpp"
#include "aeqnd/units.hpp"

namespace aeqnd {
namespace {

using Eigen::MatrixXcd;
constexpr cd kI(0.0, 1.0);

std::string mhz_str(double omega) {
  std::ostringstream os;
  os << to_mhz(omega) << " MHz";
  return os.str();
}

double levi_civita(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0.0;
  return ((j - i + 3) % 3 == 1 && (k - j + 3) % 3 == 1) ? 1.0 : -1.0;
}

struct CartesianOps {
  std::array<MatrixXcd, 3> D;  // D_x, D_y, D_z (upper <- lower)
  std::array<MatrixXcd, 3> F;  // F_x, F_y, F_z on lower
  std::array<std::array<MatrixXcd, 3>, 3> S;  // rank-2 basis
};

CartesianOps cartesian_ops(const LaserCoupling& c) {
  CartesianOps ops;
  const MatrixXcd dm = dipole_coupling(c.lower, c.upper, -1).m;
  const MatrixXcd d0 = dipole_coupling(c.lower, c.upper, 0).m;
  const MatrixXcd dp = dipole_coupling(c.lower, c.upper, +1).m;
  const double r = 1.0 / std::sqrt(2.0);
  ops.D[0] = r * (dm - dp);
  ops.D[1] = kI * r * (dm + dp);
  ops.D[2] = d0;

  const SpacePtr low = StateSpace::single(c.lower, Basis::kCoupled);
  const MatrixXcd fp = angular_momentum_operator(low, AngularOp::kFplus).m;
  const MatrixXcd fm = angular_momentum_operator(low, AngularOp::kFminus).m;
  ops.F[0] = 0.5 * (fp + fm);
  ops.F[1] = -0.5 * kI * (fp - fm);
  ops.F[2] = angular_momentum_operator(low, AngularOp::kFz).m;

  const auto n = static_cast<Eigen::Index>(low->dimension());
  MatrixXcd f2 = MatrixXcd::Zero(n, n);
  for (const auto& f : ops.F) f2 += f * f;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      ops.S[i][j] = 0.5 * (ops.F[i] * ops.F[j] + ops.F[j] * ops.F[i]);
      if (i == j) ops.S[i][j] -= f2 / 3.0;
    }
  }
  return ops;
}

// a0 delta_ij + i a1 eps_ijk F_k + a2 S_ij.
std::array<std::array<MatrixXcd, 3>, 3> tensor_from(const CartesianOps& ops, cd a0, cd a1,
                                                    cd a2) {
  const auto n = ops.F[0].rows();
  std::array<std::array<MatrixXcd, 3>, 3> t;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      MatrixXcd x = a2 * ops.S[i][j];
      if (i == j) x += a0 * MatrixXcd::Identity(n, n);
      for (int k = 0; k < 3; ++k) {
        const double e = levi_civita(i, j, k);
        if (e != 0.0) x += kI * a1 * e * ops.F[k];
      }
      t[i][j] = x;
    }
  }
  return t;
}

// sum_ij conj(e_q)_i eps_j X_ij
MatrixXcd contract(const std::array<std::array<MatrixXcd, 3>, 3>& x, int q,
                   const Eigen::Vector3cd& eps) {
  const Eigen::Vector3cd e = spherical_unit(q);
  MatrixXcd out = MatrixXcd::Zero(x[0][0].rows(), x[0][0].cols());
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) out += std::conj(e(i)) * eps(j) * x[i][j];
  }
  return out;
}

void check_resonances(const LaserCoupling& c, const std::vector<ExcitedLevel>& levels,
                      bool force) {
  const double g = c.upper.Gamma;
  for (const auto& lv : levels) {
    const double d = std::abs(lv.detuning);
    if (d == 0.0 || (d < 0.5 * g && !force)) {
      throw ResonanceError(c.lower.key + " -> " + c.upper.key + " F'=" + lv.F.str() +
                           ": detuning " + mhz_str(lv.detuning) + " within Gamma/2");
    }
    if (d < 10.0 * g) {
      warn(c.lower.key + " -> " + c.upper.key + " F'=" + lv.F.str() + ": |detuning| " +
           mhz_str(d) + " is not >> Gamma");
    }
  }
}

}  // namespace

Polarization Polarization::cartesian(cd x, cd y, cd z) {
  const Eigen::Vector3cd v(x, y, z);
  Polarization p;
  for (int q = -1; q <= 1; ++q) {
    p.q[static_cast<std::size_t>(q + 1)] = spherical_unit(q).dot(v);  // conj(e_q) . v
  }
  return p;
}

double Polarization::norm() const {
  return std::sqrt(std::norm(q[0]) + std::norm(q[1]) + std::norm(q[2]));
}

Eigen::Vector3cd Polarization::to_cartesian() const {
  Eigen::Vector3cd v = Eigen::Vector3cd::Zero();
  for (int k = -1; k <= 1; ++k) v += component(k) * spherical_unit(k);
  return v;
}

Eigen::Vector3cd spherical_unit(int q) {
  const double r = 1.0 / std::sqrt(2.0);
  switch (q) {
    case +1:
      return Eigen::Vector3cd(-r, -r * kI, 0.0);
    case 0:
      return Eigen::Vector3cd(0.0, 0.0, 1.0);
    case -1:
      return Eigen::Vector3cd(r, -r * kI, 0.0);
    default:
      throw InvalidArgument("spherical index must be -1, 0 or +1");
  }
}

void LaserCoupling::validate() const {
  if (!(rabi >= 0.0) || !std::isfinite(rabi)) throw InvalidArgument("rabi must be >= 0");
  if (!std::isfinite(detuning)) throw InvalidArgument("detuning must be finite");
  if (std::abs(polarization.norm() - 1.0) > 1e-12) {
    throw InvalidArgument("polarization must have unit norm");
  }
  if (reference_level && !triangle(upper.J, upper.I, *reference_level)) {
    throw InvalidArgument("reference level F'=" + reference_level->str() + " not in " +
                          upper.key);
  }
}

std::vector<ExcitedLevel> excited_levels(const LaserCoupling& c) {
  const double ref = c.reference_level ? hyperfine_energy(c.upper, *c.reference_level) : 0.0;
  std::vector<ExcitedLevel> out;
  for (const auto& lv : hyperfine_levels(c.upper)) {
    const double det = c.detuning - (lv.energy - ref);
    out.push_back({lv.F, lv.energy, det, det - c.detuning});
  }
  return out;
}

OperatorMatrix dipole_coupling(const Manifold& lower, const Manifold& upper, int q) {
  if (q < -1 || q > 1) throw InvalidArgument("spherical index must be -1, 0 or +1");
  if (!triangle(lower.J, upper.J, 1) || lower.I != upper.I) {
    throw InvalidArgument("dipole-forbidden pair " + lower.key + " (J=" + lower.J.str() +
                          ") -> " + upper.key + " (J=" + upper.J.str() + ")");
  }
  const SpacePtr rows = StateSpace::single(upper, Basis::kCoupled);
  const SpacePtr cols = StateSpace::single(lower, Basis::kCoupled);
  MatrixXcd d = MatrixXcd::Zero(static_cast<Eigen::Index>(rows->dimension()),
                                static_cast<Eigen::Index>(cols->dimension()));
  const auto& us = rows->states();
  const auto& ls = cols->states();
  for (std::size_t r = 0; r < us.size(); ++r) {
    for (std::size_t k = 0; k < ls.size(); ++k) {
      if (us[r].M != ls[k].M + q) continue;
      const double o = oscillator_strength(upper.J, us[r].F, lower.J, ls[k].F, lower.I);
      if (o == 0.0) continue;
      d(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) =
          o * clebsch_gordan(1, q, ls[k].F, ls[k].M, us[r].F, us[r].M);
    }
  }
  return OperatorMatrix(rows, cols, d);
}

OperatorMatrix polarized_dipole(const LaserCoupling& c) {
  OperatorMatrix out = c.polarization.component(-1) * dipole_coupling(c.lower, c.upper, -1);
  for (int q = 0; q <= 1; ++q) {
    if (c.polarization.component(q) != cd(0.0)) {
      out = out + c.polarization.component(q) * dipole_coupling(c.lower, c.upper, q);
    }
  }
  return out;
}

OperatorMatrix light_shift_operator(const LaserCoupling& c, LightShiftOptions opts) {
  c.validate();
  const auto levels = excited_levels(c);
  check_resonances(c, levels, opts.force);
  const OperatorMatrix d = polarized_dipole(c);
  OperatorMatrix v(d.cols);
  for (const auto& lv : levels) {
    const OperatorMatrix p = level_projector(d.rows, lv.F);
    v.m += (c.rabi * c.rabi / (4.0 * lv.detuning)) * (d.m.adjoint() * p.m * d.m);
  }
  return v;
}

std::array<OperatorMatrix, 3> jump_operators(const LaserCoupling& c) {
  c.validate();
  const auto levels = excited_levels(c);
  check_resonances(c, levels, false);
  for (const auto& lv : levels) {
    if (std::abs(lv.detuning) < 10.0 * c.rabi) {
      warn(c.lower.key + " -> " + c.upper.key + ": |detuning| " + mhz_str(lv.detuning) +
           " is not >> Rabi frequency; adiabatic elimination is marginal");
    }
  }
  const OperatorMatrix d = polarized_dipole(c);
  std::array<OperatorMatrix, 3> w;
  for (int q = -1; q <= 1; ++q) {
    const MatrixXcd dq = dipole_coupling(c.lower, c.upper, q).m;
    OperatorMatrix acc(d.cols);
    for (const auto& lv : levels) {
      const OperatorMatrix p = level_projector(d.rows, lv.F);
      const cd amp = (0.5 * c.rabi) / cd(lv.detuning, 0.5 * c.upper.Gamma);
      acc.m += amp * (dq.adjoint() * p.m * d.m);
    }
    w[static_cast<std::size_t>(q + 1)] = acc;
  }
  return w;
}

double rayleigh_rate(const LaserCoupling& c) {
  if (c.detuning == 0.0) throw InvalidArgument("Rayleigh rate needs a nonzero detuning");
  return c.upper.Gamma * c.rabi * c.rabi / (4.0 * c.detuning * c.detuning);
}

double exposure_time(const LaserCoupling& c, double photons) {
  const double r = rayleigh_rate(c);
  if (!(r > 0.0)) throw InvalidArgument("exposure time needs a nonzero scattering rate");
  return photons / r;
}

IrreducibleDecomposition irreducible_decomposition(const LaserCoupling& c) {
  if (c.lower.J.twice() != 0) {
    throw InvalidArgument("irreducible_decomposition supports J_lower = 0 only");
  }
  const CartesianOps ops = cartesian_ops(c);
  const SpacePtr up = StateSpace::single(c.upper, Basis::kCoupled);
  const double dim = static_cast<double>(ops.F[0].rows());

  double f_norm = 0.0;
  for (const auto& f : ops.F) f_norm += (f * f).trace().real();
  double s_norm = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) s_norm += (ops.S[i][j].adjoint() * ops.S[i][j]).trace().real();
  }

  IrreducibleDecomposition out;
  for (const auto& lv : excited_levels(c)) {
    const MatrixXcd p = level_projector(up, lv.F).m;
    std::array<std::array<MatrixXcd, 3>, 3> t;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) t[i][j] = ops.D[i].adjoint() * p * ops.D[j];
    }
    const double c0 = (t[0][0] + t[1][1] + t[2][2]).trace().real() / (3.0 * dim);

    double c1 = 0.0;
    if (f_norm > 1e-12) {
      cd acc = 0.0;
      for (int k = 0; k < 3; ++k) {
        MatrixXcd vk = MatrixXcd::Zero(t[0][0].rows(), t[0][0].cols());
        for (int i = 0; i < 3; ++i) {
          for (int j = 0; j < 3; ++j) {
            const double e = levi_civita(i, j, k);
            if (e != 0.0) vk += e * t[i][j];
          }
        }
        acc += (ops.F[k] * vk).trace();
      }
      c1 = (acc / (2.0 * kI * f_norm)).real();
    }

    double c2 = 0.0;
    if (s_norm > 1e-12) {
      cd acc = 0.0;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) acc += (ops.S[i][j].adjoint() * t[i][j]).trace();
      }
      c2 = (acc / s_norm).real();
    }

    const auto rebuilt = tensor_from(ops, c0, c1, c2);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        out.reconstruction_error = std::max(
            out.reconstruction_error, (t[i][j] - rebuilt[i][j]).cwiseAbs().maxCoeff());
      }
    }
    out.F.push_back(lv.F);
    out.C0.push_back(c0);
    out.C1.push_back(c1);
    out.C2.push_back(c2);
    out.deltas.push_back(lv.delta);
  }
  for (std::size_t k = 0; k < out.F.size(); ++k) {
    const std::array<double, 3> ck = {out.C0[k], out.C1[k], out.C2[k]};
    for (int r = 0; r < 3; ++r) {
      out.beta[r] += ck[r] * out.deltas[k];
      out.gamma[r] += 0.5 * c.upper.Gamma * ck[r];
    }
  }
  return out;
}

std::array<OperatorMatrix, 3> truncated_jump_operators(const LaserCoupling& c,
                                                       const IrreducibleDecomposition& d) {
  const CartesianOps ops = cartesian_ops(c);
  std::array<double, 3> sum{};
  for (std::size_t k = 0; k < d.F.size(); ++k) {
    sum[0] += d.C0[k];
    sum[1] += d.C1[k];
    sum[2] += d.C2[k];
  }
  const auto lead = tensor_from(ops, sum[0], sum[1], sum[2]);
  const auto corr = tensor_from(ops, cd(d.beta[0], d.gamma[0]), cd(d.beta[1], d.gamma[1]),
                                cd(d.beta[2], d.gamma[2]));
  const Eigen::Vector3cd eps = c.polarization.to_cartesian();
  const SpacePtr low = StateSpace::single(c.lower, Basis::kCoupled);
  const double D = c.detuning;
  std::array<OperatorMatrix, 3> w;
  for (int q = -1; q <= 1; ++q) {
    const MatrixXcd m =
        (0.5 * c.rabi) * (contract(lead, q, eps) / D - contract(corr, q, eps) / (D * D));
    w[static_cast<std::size_t>(q + 1)] = OperatorMatrix(low, m);
  }
  return w;
}

}  // namespace aeqnd
