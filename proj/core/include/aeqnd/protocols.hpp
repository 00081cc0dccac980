#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "aeqnd/dynamics.hpp"
#include "aeqnd/scenario_config.hpp"

namespace aeqnd {

struct SweepResult {
  std::string name;  // file stem
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void write_csv(std::ostream& os) const;
  std::size_t column(const std::string& name) const;
};

struct ScenarioOutput {
  std::vector<SweepResult> tables;  // tables[0] is <scenario>.csv
  nlohmann::json summary;
  double wall_time_s = 0.0;
};

// Each driver is deterministic in its config; `workers` only changes speed.
ScenarioOutput leakage_sweep(const ScenarioConfig& cfg, int workers = 1);
ScenarioOutput dressing_spectrum(const ScenarioConfig& cfg, int workers = 1);
ScenarioOutput two_level_coherence(const ScenarioConfig& cfg, int workers = 1);
ScenarioOutput quadrupole_cancellation(const ScenarioConfig& cfg, int workers = 1);
ScenarioOutput quench_decay(const ScenarioConfig& cfg, int workers = 1);
ScenarioOutput cooling_cycle(const ScenarioConfig& cfg, int workers = 1);
ScenarioOutput yb_variants(const ScenarioConfig& cfg, int workers = 1);

ScenarioOutput run_scenario(const ScenarioConfig& cfg, int workers = 1);

// Config, resolved species tables, code version, wall time, summary.
nlohmann::json scenario_metadata(const ScenarioConfig& cfg, const ScenarioOutput& out);

// ---- building blocks shared with tests ----

struct CoolingState {
  enum class Electronic { kGround, kClock, kExcited };
  Electronic electronic = Electronic::kGround;
  int n = 0;
  double eta = 0.0;
  void validate() const;
};

struct CoolingStep {
  int cycle;
  double mean_n;
  double p_ground;  // P(n = 0)
  double fidelity;
};

// Ideal-pulse bookkeeping: each cycle maps n -> n-1 for n > 0 and scatters one
// photon, which multiplies the stored coherence by `per_cycle_fidelity` and adds
// one quantum with probability eta^2. n = 0 is dark to the red sideband.
std::vector<CoolingStep> run_cooling_cycles(const CoolingState& start, int cycles,
                                            double per_cycle_fidelity);

struct QuenchModel {
  LindbladProblem problem;
  DensityMatrix initial;
  Eigen::VectorXcd target;
};

// 2N-level decay: excited levels with shifts `deltas`, equal superposition,
// L = sum_m |g,m><e,m| at rate gamma.
QuenchModel build_quench_model(const std::vector<double>& deltas, double gamma, double t_final);

// Shift sets used by quench/cooling, per M_I descending (rad/us).
std::vector<double> quench_shifts(const ScenarioConfig& cfg, nlohmann::json* info = nullptr);

// Leakage run for a single detuning; returns infidelity per photon count.
struct LeakagePoint {
  double detuning = 0.0;
  double triplet_rabi = 0.0;
  double probe_spread = 0.0;
  double residual_spread = 0.0;
  double rate = 0.0;
  std::vector<double> exposure;
  std::vector<double> infidelity;          // all dissipators
  std::vector<double> infidelity_singlet;  // singlet jump operators only
  double trace_drift = 0.0;
};

LeakagePoint leakage_point(const Species& sp, double detuning, const ScenarioConfig& cfg);

// Mean |M_J = 0| overlap of the dressed M_J = 0 branch.
double mean_dressed_overlap(const Species& sp, double rabi, DressingModel model);

// Smallest Rabi frequency with 1 - mean overlap <= deficit (log bisection).
double rabi_for_overlap_deficit(const Species& sp, double deficit, DressingModel model);

}  // namespace aeqnd
