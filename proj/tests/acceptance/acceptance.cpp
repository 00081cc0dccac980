// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aeqnd/angmom.hpp"
#include "aeqnd/diagnostics.hpp"
#include "aeqnd/dynamics.hpp"
#include "aeqnd/lightmatter.hpp"
#include "aeqnd/linalg.hpp"
#include "aeqnd/protocols.hpp"
#include "aeqnd/species.hpp"
#include "aeqnd/structure.hpp"
#include "aeqnd/units.hpp"
#include "oracles.hpp"

using namespace aeqnd;

namespace {

// Tolerances, fixed here and nowhere else.
constexpr double kAngmomTol = 1e-12;
constexpr double kHyperfineTolMHz = 1e-6;
constexpr double kSpreadLowMHz = 50.0;
constexpr double kSpreadHighMHz = 70.0;
constexpr double kSumRuleTol = 1e-10;
constexpr double kPumpSlope = -4.0;
constexpr double kRayleighSlope = -2.0;
constexpr double kSlopeTol = 0.05;
constexpr double kLeakageRatio = 10.0;
constexpr double kLeakageRatioRelTol = 0.2;
constexpr double kLeakageSlope = -2.0;
constexpr double kLeakageSlopeTol = 0.1;
constexpr double kLeakageAsymptoteMHz = 1e4;  // slope fit over delta >= this
constexpr double kMinOverlap = 0.99;
constexpr double kMaxPtDeviation = 0.02;
constexpr double kCoherenceTol = 1e-3;
constexpr double kQuarticFitTol = 1e-3;
constexpr double kQuarticExactTol = 1e-12;
constexpr double kQuenchMinFidelity = 0.99;
constexpr double kQuenchOracleTol = 1e-4;
constexpr int kQuenchRandomSpectra = 20;

struct Verdict {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
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

std::string csv_body(const ScenarioOutput& out) {
  std::ostringstream os;
  for (const auto& t : out.tables) t.write_csv(os);
  return os.str();
}

Verdict angmom_suite() {
  double stretch = 0.0, cg_orth = 0.0, sixj_orth = 0.0, sum_rule = 0.0;
  for (int tj = 0; tj <= 13; ++tj) {
    const HalfInt j = half(tj);
    for (HalfInt m = j; m >= -j; m -= 1) {
      const double jv = j.value(), mv = m.value();
      const double expect = std::sqrt(((jv + 1) * (jv + 1) - mv * mv) / ((2 * jv + 1) * (jv + 1)));
      stretch = std::max(stretch, std::abs(clebsch_gordan(1, 0, j, m, j + 1, m) - expect));
    }
  }
  for (int t1 = 0; t1 <= 13; ++t1) {
    for (int t2 = 0; t2 <= 13; ++t2) {
      const HalfInt j1 = half(t1), j2 = half(t2);
      const int d = (t1 + 1) * (t2 + 1);
      Eigen::MatrixXd u = Eigen::MatrixXd::Zero(d, d);
      int row = 0;
      for (HalfInt J = j1 + j2; J >= aeqnd::abs(j1 - j2); J -= 1) {
        for (HalfInt M = J; M >= -J; M -= 1, ++row) {
          int col = 0;
          for (HalfInt m1 = j1; m1 >= -j1; m1 -= 1) {
            for (HalfInt m2 = j2; m2 >= -j2; m2 -= 1, ++col) {
              u(row, col) = clebsch_gordan(j1, m1, j2, m2, J, M);
            }
          }
        }
      }
      cg_orth = std::max(cg_orth,
                         (u.transpose() * u - Eigen::MatrixXd::Identity(d, d)).cwiseAbs().maxCoeff());
    }
  }
  // 6j orthogonality on a deterministic sample of j <= 13/2 quadruples.
  std::mt19937_64 rng(20260);
  std::uniform_int_distribution<int> pick(0, 13);
  for (int trial = 0; trial < 400; ++trial) {
    const HalfInt j1 = half(pick(rng)), j2 = half(pick(rng)), j3 = half(pick(rng)),
                  j4 = half(pick(rng));
    for (HalfInt e = aeqnd::abs(j1 - j4); e <= j1 + j4; e += 1) {
      if (!triangle(j3, j2, e)) continue;
      for (HalfInt ep = aeqnd::abs(j1 - j4); ep <= j1 + j4; ep += 1) {
        if (!triangle(j3, j2, ep)) continue;
        double sum = 0.0;
        for (HalfInt x = aeqnd::abs(j1 - j2); x <= j1 + j2; x += 1) {
          sum += (x.twice() + 1) * (e.twice() + 1) * wigner6j(j1, j2, x, j3, j4, e) *
                 wigner6j(j1, j2, x, j3, j4, ep);
        }
        sixj_orth = std::max(sixj_orth, std::abs(sum - (e == ep ? 1.0 : 0.0)));
      }
    }
  }
  for (int tJ = 0; tJ <= 8; ++tJ) {
    for (int dJ = -1; dJ <= 1; ++dJ) {
      const HalfInt J = half(tJ);
      const HalfInt Jp = J + HalfInt(dJ);
      if (Jp.twice() < 0 || (J.twice() == 0 && Jp.twice() == 0)) continue;
      for (int tI = 0; tI <= 13; ++tI) {
        const HalfInt I = half(tI);
        for (HalfInt Fp = aeqnd::abs(Jp - I); Fp <= Jp + I; Fp += 1) {
          double sum = 0.0;
          for (HalfInt F = aeqnd::abs(J - I); F <= J + I; F += 1) {
            const double o = oscillator_strength(Jp, Fp, J, F, I);
            sum += o * o;
          }
          sum_rule = std::max(sum_rule, std::abs(sum - 1.0));
        }
      }
    }
  }
  Verdict v;
  v.pass = stretch <= kAngmomTol && cg_orth <= kAngmomTol && sixj_orth <= kAngmomTol &&
           sum_rule <= kAngmomTol;
  v.detail = "stretch " + fmt("%.1e", stretch) + ", CG orth " + fmt("%.1e", cg_orth) +
             ", 6j orth " + fmt("%.1e", sixj_orth) + ", sum rule " + fmt("%.1e", sum_rule);
  return v;
}

Verdict hyperfine_spectrum() {
  const Manifold p = species_registry("Sr87").manifold("1P1");
  const Spectrum s = eigh(hyperfine_hamiltonian(p).m);
  const int counts[3] = {10, 12, 8};
  const HalfInt fs[3] = {half(9), half(11), half(7)};
  double worst = 0.0;
  int k = 0;
  std::string levels;
  for (int level = 0; level < 3; ++level) {
    const double expect = oracle::lande_energy(-3.4, 39.0, HalfInt(1), half(9), fs[level]);
    levels += (levels.empty() ? "" : ", ") + fmt("%.4f", to_mhz(s.values(k)));
    for (int n = 0; n < counts[level]; ++n, ++k) {
      worst = std::max(worst, std::abs(to_mhz(s.values(k)) - expect));
    }
  }
  const double total = to_mhz(s.values(s.values.size() - 1) - s.values(0));
  Verdict v;
  v.pass = worst <= kHyperfineTolMHz && total >= kSpreadLowMHz && total <= kSpreadHighMHz;
  v.detail = "levels {" + levels + "} MHz, max dev " + fmt("%.1e", worst) + " MHz, spread " +
             fmt("%.3f", total) + " MHz";
  return v;
}

LaserCoupling sr_probe(double detuning_mhz) {
  const Species sp = species_registry("Sr87");
  LaserCoupling c;
  c.lower = sp.manifold("1S0");
  c.upper = sp.manifold("1P1");
  c.rabi = mhz(50.0);
  c.detuning = mhz(detuning_mhz);
  return c;
}

Verdict polarizability_sum_rules() {
  const auto d = irreducible_decomposition(sr_probe(1e4));
  double sum_c2 = 0.0;
  for (double x : d.C2) sum_c2 += x;
  Verdict v;
  v.pass = std::abs(sum_c2) <= kSumRuleTol && std::abs(d.gamma[2]) <= kSumRuleTol;
  v.detail = "sum C2 " + fmt("%.1e", sum_c2) + ", gamma2 " + fmt("%.1e", d.gamma[2]);
  return v;
}

Verdict jump_operator_scaling() {
  std::vector<double> det, pump, rayl;
  for (int k = 0; k <= 10; ++k) {
    const double d = 1e4 * std::pow(10.0, k / 10.0);
    const auto w = jump_operators(sr_probe(d));
    det.push_back(d);
    pump.push_back(w[0].m.squaredNorm() + w[2].m.squaredNorm());
    rayl.push_back(w[1].m.squaredNorm());
  }
  const double sp = log_slope(det, pump), sr = log_slope(det, rayl);
  Verdict v;
  v.pass = std::abs(sp - kPumpSlope) <= kSlopeTol && std::abs(sr - kRayleighSlope) <= kSlopeTol;
  v.detail = "|W+-|^2 slope " + fmt("%.4f", sp) + ", |W0|^2 slope " + fmt("%.4f", sr);
  return v;
}

struct LeakageFit {
  double ratio = 0.0;
  double slope = 0.0;
};

LeakageFit fit_leakage(const SweepResult& t, const std::string& prefix) {
  const auto d = t.column("delta_ga_MHz");
  const auto n10 = t.column(prefix + "N10");
  const auto n100 = t.column(prefix + "N100");
  LeakageFit f;
  f.ratio = t.rows.back()[n100] / t.rows.back()[n10];
  std::vector<double> x, y;
  for (const auto& r : t.rows) {
    if (r[d] >= kLeakageAsymptoteMHz) {
      x.push_back(r[d]);
      y.push_back(r[n10]);
    }
  }
  f.slope = log_slope(x, y);
  return f;
}

ScenarioOutput leakage_run;  // reused by the determinism check

Verdict leakage_sweep_shape() {
  leakage_run = run_scenario(default_config(Scenario::kLeakageSweep), 1);
  const auto& t = leakage_run.tables.at(0);
  const LeakageFit full = fit_leakage(t, "infidelity_");
  const LeakageFit singlet = fit_leakage(t, "infidelity_singlet_");
  Verdict v;
  v.pass = std::abs(full.ratio / kLeakageRatio - 1.0) <= kLeakageRatioRelTol &&
           std::abs(full.slope - kLeakageSlope) <= kLeakageSlopeTol;
  v.detail = "N100/N10 " + fmt("%.3f", full.ratio) + ", slope " + fmt("%.3f", full.slope) +
             " [singlet channel only: ratio " + fmt("%.3f", singlet.ratio) + ", slope " +
             fmt("%.3f", singlet.slope) + "]";
  return v;
}

Verdict dressing_overlap() {
  const auto out = run_scenario(default_config(Scenario::kDressingSpectrum), 1);
  const auto& p = out.summary["points"][0];
  const double ov = p["min_overlap"].get<double>();
  const double dev = p["relative_pt_deviation"].get<double>();
  Verdict v;
  v.pass = ov >= kMinOverlap && dev <= kMaxPtDeviation;
  v.detail = "min overlap " + fmt("%.5f", ov) + ", PT deviation " + fmt("%.4f", dev * 100) +
             "% of spread";
  return v;
}

Verdict coherence_transfer() {
  ScenarioConfig c = default_config(Scenario::kTwoLevelCoherence);
  c.grid = SweepGrid{"delta_over_gamma", 0.0, 2.0, 3, false};
  const auto out = run_scenario(c, 1);
  const auto& t = out.tables.at(0);
  const double expect[3] = {0.0, 0.25, 0.40};
  double worst = 0.0;
  std::string got;
  for (int k = 0; k < 3; ++k) {
    const double inf = t.rows[k][t.column("infidelity")];
    worst = std::max(worst, std::abs(inf - expect[k]));
    got += (got.empty() ? "" : ", ") + fmt("%.6f", inf);
  }
  Verdict v;
  v.pass = worst <= kCoherenceTol;
  v.detail = "infidelity {" + got + "}, max dev " + fmt("%.1e", worst);
  return v;
}

Verdict quartic_light_shift() {
  const auto out = run_scenario(default_config(Scenario::kQuadrupoleCancellation), 1);
  const auto& f = out.summary["quartic_fit"];
  const double c0 = f[0], c2 = f[1], c4 = f[2];
  const double fit_dev = std::max({std::abs(c0 - 0.298), std::abs(c2 + 0.0169), std::abs(c4 - 0.000233)});
  const double exact = std::max({std::abs(c0 - 169.0 * 121.0 / 68640.0),
                                 std::abs(c2 + 1160.0 / 68640.0), std::abs(c4 - 16.0 / 68640.0)});
  Verdict v;
  v.pass = fit_dev <= kQuarticFitTol && exact <= kQuarticExactTol;
  v.detail = "fit (" + fmt("%.7f", c0) + ", " + fmt("%.7f", c2) + ", " + fmt("%.8f", c4) +
             "), vs empirical fit " + fmt("%.1e", fit_dev) + ", vs CG product " + fmt("%.1e", exact);
  return v;
}

Verdict quench_decay_fidelity() {
  const auto out = run_scenario(default_config(Scenario::kQuenchDecay), 1);
  const double fid = out.summary["final_fidelity"].get<double>();

  std::mt19937_64 rng(97);
  std::uniform_int_distribution<int> levels(2, 10);
  std::uniform_real_distribution<double> shift(-3.0, 3.0);
  const double gamma = mhz(30.0);
  double worst = 0.0;
  for (int trial = 0; trial < kQuenchRandomSpectra; ++trial) {
    std::vector<double> deltas(static_cast<std::size_t>(levels(rng)));
    for (double& d : deltas) d = shift(rng) * gamma;
    const double t = 10.0 / gamma;
    QuenchModel q = build_quench_model(deltas, gamma, t);
    q.problem.control.tolerance = 1e-10;
    const Trajectory traj = evolve(q.problem, q.initial);
    const double sim = fidelity(traj.states.back(), q.target);
    worst = std::max({worst, std::abs(sim - coherence_transfer_fidelity_at(deltas, gamma, t)),
                      std::abs(sim - oracle::coherence_transfer_direct(deltas, gamma, t))});
  }
  Verdict v;
  v.pass = fid >= kQuenchMinFidelity && worst <= kQuenchOracleTol;
  v.detail = "F(10/Gamma) " + fmt("%.5f", fid) + ", max |sim - oracle| over " +
             std::to_string(kQuenchRandomSpectra) + " random spectra " + fmt("%.1e", worst);
  return v;
}

Verdict determinism() {
  std::string mismatched;
  for (Scenario s : all_scenarios()) {
    const ScenarioConfig c = default_config(s);
    const std::string one = s == Scenario::kLeakageSweep ? csv_body(leakage_run)
                                                         : csv_body(run_scenario(c, 1));
    const std::string four = csv_body(run_scenario(c, 4));
    if (one != four) mismatched += (mismatched.empty() ? "" : ", ") + scenario_name(s);
  }
  Verdict v;
  v.pass = mismatched.empty();
  v.detail = mismatched.empty()
                 ? "all " + std::to_string(all_scenarios().size()) + " scenarios identical at 1 vs 4 workers"
                 : "differs: " + mismatched;
  return v;
}

}  // namespace

int main() {
  set_warning_sink(nullptr);
  struct Criterion {
    const char* name;
    std::function<Verdict()> check;
  };
  const std::vector<Criterion> criteria = {
      {"angular-momentum identities", angmom_suite},
      {"Sr 1P1 hyperfine spectrum", hyperfine_spectrum},
      {"polarizability sum rules", polarizability_sum_rules},
      {"jump-operator scaling", jump_operator_scaling},
      {"leakage sweep shape", leakage_sweep_shape},
      {"dressing overlap and PT accuracy", dressing_overlap},
      {"two-level coherence transfer", coherence_transfer},
      {"quartic light shift", quartic_light_shift},
      {"quench decay", quench_decay_fidelity},
      {"worker-count determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!v.pass) ++failures;
    std::printf("criterion %2zu %s  %s: %s (%.1f s)\n", i + 1, v.pass ? "PASS" : "FAIL",
                criteria[i].name, v.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
