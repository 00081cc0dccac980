#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "aeqnd/halfint.hpp"
#include "aeqnd/state_space.hpp"

namespace aeqnd {

// Spherical components (e_-1, e_0, e_+1) with e_+1 = -(x + iy)/sqrt2.
struct Polarization {
  std::array<cd, 3> q{cd(0), cd(1), cd(0)};

  static Polarization pi() { return {{cd(0), cd(1), cd(0)}}; }
  static Polarization sigma_plus() { return {{cd(0), cd(0), cd(1)}}; }
  static Polarization sigma_minus() { return {{cd(1), cd(0), cd(0)}}; }
  static Polarization cartesian(cd x, cd y, cd z);

  cd component(int spherical_q) const { return q.at(static_cast<std::size_t>(spherical_q + 1)); }
  double norm() const;
  Eigen::Vector3cd to_cartesian() const;
};

// Cartesian form of the spherical unit vector e_q.
Eigen::Vector3cd spherical_unit(int q);

struct LaserCoupling {
  Manifold lower;
  Manifold upper;
  double rabi = 0.0;      // rad/us, unit reduced dipole
  double detuning = 0.0;  // rad/us, omega_L - omega_0
  Polarization polarization = Polarization::pi();
  // Detuning measured from this upper level; hyperfine-free line centre when empty.
  std::optional<HalfInt> reference_level;

  void validate() const;
};

struct ExcitedLevel {
  HalfInt F;
  double energy;    // hyperfine energy of F'
  double detuning;  // Delta_F' = Delta - (E_F' - E_ref)
  double delta;     // Delta_F' - Delta
};

std::vector<ExcitedLevel> excited_levels(const LaserCoupling& c);

// Raising component D_q from lower (coupled) to upper (coupled):
//   <F' M+q | D_q | F M> = O^{J'F'}_{JF} <F' M+q | 1 q; F M>.
OperatorMatrix dipole_coupling(const Manifold& lower, const Manifold& upper, int q);

// sum_q eps_q D_q.
OperatorMatrix polarized_dipole(const LaserCoupling& c);

struct LightShiftOptions {
  bool force = false;  // allow |Delta_F'| < Gamma/2
};

// sum_F' Omega^2/(4 Delta_F') (eps.D)^dagger P_F' (eps.D), on lower (coupled).
OperatorMatrix light_shift_operator(const LaserCoupling& c, LightShiftOptions opts = {});

// W_q = sum_F' (Omega/2)/(Delta_F' + i Gamma/2) D_q^dagger P_F' (eps.D), index q+1.
// The dissipator rate is c.upper.Gamma.
std::array<OperatorMatrix, 3> jump_operators(const LaserCoupling& c);

// Leading-order Rayleigh rate Gamma Omega^2 / (4 Delta^2).
double rayleigh_rate(const LaserCoupling& c);
// T_N = N / R.
double exposure_time(const LaserCoupling& c, double photons);

struct IrreducibleDecomposition {
  std::vector<HalfInt> F;  // excited levels, descending
  std::vector<double> C0, C1, C2;
  std::vector<double> deltas;
  std::array<double, 3> beta{};
  std::array<double, 3> gamma{};
  // max entry of |T - reconstruction| over all F', i, j.
  double reconstruction_error = 0.0;
};

// Rank decomposition of T_ij = D_i^dagger P_F' D_j on the lower manifold:
//   T_ij = C0 delta_ij + i C1 eps_ijk F_k + C2 [(F_i F_j + F_j F_i)/2 - delta_ij F^2/3].
// Needs J_lower = 0.
IrreducibleDecomposition irreducible_decomposition(const LaserCoupling& c);

// W_q to order 1/Delta^2 from the decomposition:
//   (Omega/2) [ (1/Delta) sum C - (1/Delta^2)(beta + i gamma) ] contracted with e_q*, eps.
std::array<OperatorMatrix, 3> truncated_jump_operators(const LaserCoupling& c,
                                                       const IrreducibleDecomposition& d);

// ---- AC-Stark dressing of the 1P1 manifold ----

enum class DressingModel {
  // M_J = +1 at +Omega/2, M_J = -1 at -Omega/2; b is a spectator.
  kResolved,
  // (Omega/2sqrt2)(|a,-1><b| - |a,+1><b| + h.c.); leaves a dark M_J combination
  // degenerate with M_J = 0.
  kLinearX,
};

// H_hf(a) + H_int on {a uncoupled, b uncoupled}.
OperatorMatrix dressing_hamiltonian(const Manifold& a, const Manifold& b, double rabi,
                                    DressingModel model = DressingModel::kResolved);

struct DressedLevel {
  HalfInt mI;
  double energy;   // rad/us
  double overlap;  // |<n|a, M_J=0, M_I>|^2
  std::size_t eigen_index;
};

// For each M_I of block 0 (descending), the eigenstate with the largest
// |M_J = 0, M_I> weight.
std::vector<DressedLevel> dressed_mj0_levels(const OperatorMatrix& h);

// |<n_k | a, 0, M_I>|^2 for the selected eigenstates (rows) and every M_I (cols).
Eigen::MatrixXd dressed_overlap_matrix(const OperatorMatrix& h);

struct PerturbativeShift {
  HalfInt mI;
  double first;   // <0,M|H_hf|0,M>
  double second;  // resolved-model second order, level shift Omega/2
};

// Needs J_a = 1 and rabi > 0.
std::vector<PerturbativeShift> perturbative_shifts(const Manifold& a, double rabi);

// Q/(2IJ(2I-1)(2J-1)), zero when the quadrupole term is absent.
double reduced_quadrupole_constant(const Manifold& a);

// <M_J=0, M_I| V | M_J=0, M_I> / (Omega^2/(4 Delta)) for each M_I, descending.
std::vector<double> light_shift_profile(const LaserCoupling& c);

// Least squares c0 + c2 M^2 + c4 M^4.
std::array<double, 3> fit_even_quartic(const std::vector<double>& m,
                                       const std::vector<double>& values);

// ---- cancellation solvers ----

struct TripletCancellation {
  double rabi = 0.0;             // Omega_gc
  double residual_spread = 0.0;  // spread(V_probe + V_triplet)
  double probe_spread = 0.0;     // spread(V_probe)
  int evaluations = 0;
};

// 1-D Brent search on Omega_gc in [0, 4 Omega_0], Omega_0 = sqrt(s_p / s_u) with
// s_p the probe spread and s_u the unit-Rabi triplet spread. triplet.rabi is ignored.
TripletCancellation cancel_triplet_lightshift(const LaserCoupling& probe,
                                              const LaserCoupling& triplet);

struct QuadrupoleSetup {
  Manifold a;  // 1P1
  Manifold b;  // excited 1S0 (dressing partner)
  Manifold d;  // 1D2, F' = 13/2 only
  double rabi_ab = 0.0;
  DressingModel model = DressingModel::kResolved;
};

struct QuadrupolePoint {
  double rabi_ad = 0.0;
  double detuning_ad = 0.0;
  std::vector<DressedLevel> levels;
  double spread = 0.0;
};

QuadrupolePoint evaluate_quadrupole_point(const QuadrupoleSetup& s, double rabi_ad,
                                          double detuning_ad);

struct QuadrupoleCancellation {
  QuadrupolePoint before;  // Omega_ad = 0
  QuadrupolePoint after;
  bool converged = true;
  int evaluations = 0;
  std::string message;
};

// The single F' = 13/2 level makes V_ad depend on Omega_ad^2/Delta_ad only, so
// |Delta_ad| is held at `detuning_magnitude` and Omega_ad is searched (Brent)
// for each sign of Delta_ad; the better sign wins.
QuadrupoleCancellation cancel_quadrupole_shift(const QuadrupoleSetup& s,
                                               double detuning_magnitude);

}  // namespace aeqnd
