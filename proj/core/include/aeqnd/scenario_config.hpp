#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "aeqnd/lightmatter.hpp"
#include "aeqnd/species.hpp"

namespace aeqnd {

enum class Scenario {
  kLeakageSweep,
  kDressingSpectrum,
  kTwoLevelCoherence,
  kQuadrupoleCancellation,
  kQuenchDecay,
  kCoolingCycle,
  kYbVariants,
};

std::string scenario_name(Scenario s);  // "leakage_sweep", ...
Scenario parse_scenario(const std::string& name);
std::vector<Scenario> all_scenarios();

struct SweepGrid {
  std::string parameter;
  double min = 0.0;
  double max = 0.0;
  int points = 0;
  bool log = false;

  // Ascending; endpoints exact.
  std::vector<double> values() const;
  void validate(const std::string& where) const;
};

// Which level shifts feed the quench / cooling scenarios.
enum class ShiftSource { kOptimized, kPreset, kDressed, kFirstOrder, kZero };
std::string shift_source_name(ShiftSource s);
ShiftSource parse_shift_source(const std::string& name);

struct ScenarioConfig {
  Scenario scenario = Scenario::kLeakageSweep;
  std::string species = "Sr87";
  // Resolved tables for every species in use, keyed by id.
  std::map<std::string, Species> tables;
  std::optional<SweepGrid> grid;
  std::optional<SweepGrid> leakage_grid;  // yb_variants only
  std::vector<int> photon_counts;
  std::map<std::string, double> params;
  DressingModel dressing_model = DressingModel::kResolved;
  ShiftSource shifts = ShiftSource::kOptimized;

  const Species& table(const std::string& id) const;
  const Species& primary() const { return table(species); }
  double param(const std::string& key) const;
  void validate() const;
};

// Defaults for a scenario: grid, parameters, species tables from the registry.
ScenarioConfig default_config(Scenario s);

// Unknown keys and malformed values raise ConfigError with the dotted path.
// A top-level "run" object (written to meta files) is ignored.
ScenarioConfig config_from_json(const nlohmann::json& j);
ScenarioConfig load_config_file(const std::string& path);
nlohmann::json config_to_json(const ScenarioConfig& cfg);

// Dotted-path override: "params.omega_ga_MHz=20", "grid.points=5",
// "sr87.1P1.Q_MHz=0", "photon_counts=10,100", "dressing_model=linear_x".
// Parameter names may also be given bare ("omega_ga_MHz=20").
void apply_override(ScenarioConfig& cfg, const std::string& key, const std::string& value);
void apply_override(ScenarioConfig& cfg, const std::string& assignment);

std::string dressing_model_name(DressingModel m);
DressingModel parse_dressing_model(const std::string& name);

}  // namespace aeqnd
