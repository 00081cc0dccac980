#include "aeqnd/scenario_config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "aeqnd/errors.hpp"

namespace aeqnd {
namespace {

using nlohmann::json;

struct ScenarioInfo {
  Scenario id;
  const char* name;
};

constexpr ScenarioInfo kScenarios[] = {
    {Scenario::kLeakageSweep, "leakage_sweep"},
    {Scenario::kDressingSpectrum, "dressing_spectrum"},
    {Scenario::kTwoLevelCoherence, "two_level_coherence"},
    {Scenario::kQuadrupoleCancellation, "quadrupole_cancellation"},
    {Scenario::kQuenchDecay, "quench_decay"},
    {Scenario::kCoolingCycle, "cooling_cycle"},
    {Scenario::kYbVariants, "yb_variants"},
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::optional<double> parse_number(const std::string& text) {
  if (text.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (*end != '\0') return std::nullopt;
  return v;
}

double read_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where, "expected a finite number");
  return x;
}

std::string read_string(const json& v, const std::string& where) {
  if (!v.is_string()) throw ConfigError(where, "expected a string");
  return v.get<std::string>();
}

void set_grid_field(SweepGrid& g, const std::string& field, const json& v,
                    const std::string& where) {
  if (field == "parameter") {
    g.parameter = read_string(v, where);
  } else if (field == "min") {
    g.min = read_number(v, where);
  } else if (field == "max") {
    g.max = read_number(v, where);
  } else if (field == "points") {
    const double p = read_number(v, where);
    if (p != std::floor(p) || std::abs(p) > 1e7) throw ConfigError(where, "expected an integer");
    g.points = static_cast<int>(p);
  } else if (field == "spacing") {
    const std::string s = read_string(v, where);
    if (s != "log" && s != "linear") throw ConfigError(where, "expected \"log\" or \"linear\"");
    g.log = s == "log";
  } else {
    throw ConfigError(where, "unknown grid field");
  }
}

json grid_json(const SweepGrid& g) {
  return {{"parameter", g.parameter},
          {"min", g.min},
          {"max", g.max},
          {"points", g.points},
          {"spacing", g.log ? "log" : "linear"}};
}

std::vector<int> read_counts(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where, "expected an array of integers");
  std::vector<int> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string at = where + "[" + std::to_string(i) + "]";
    const double x = read_number(v[i], at);
    if (x != std::floor(x) || x > 1e9) throw ConfigError(at, "expected an integer");
    out.push_back(static_cast<int>(x));
  }
  return out;
}

const ScenarioInfo& info(Scenario s) {
  for (const auto& i : kScenarios) {
    if (i.id == s) return i;
  }
  throw InvalidArgument("unknown scenario");
}

json value_json(const std::string& text) {
  if (auto v = parse_number(text)) return *v;
  return text;
}

void ensure_table(ScenarioConfig& cfg, const std::string& id, const std::string& where) {
  if (cfg.tables.count(id)) return;
  try {
    cfg.tables.emplace(id, species_registry(id));
  } catch (const InvalidArgument& e) {
    throw ConfigError(where, e.what());
  }
}

}  // namespace

std::string scenario_name(Scenario s) { return info(s).name; }

Scenario parse_scenario(const std::string& name) {
  for (const auto& i : kScenarios) {
    if (name == i.name) return i.id;
  }
  throw ConfigError("scenario", "unknown scenario '" + name + "'");
}

std::vector<Scenario> all_scenarios() {
  std::vector<Scenario> out;
  for (const auto& i : kScenarios) out.push_back(i.id);
  return out;
}

std::string shift_source_name(ShiftSource s) {
  switch (s) {
    case ShiftSource::kOptimized:
      return "optimized";
    case ShiftSource::kPreset:
      return "preset";
    case ShiftSource::kDressed:
      return "dressed";
    case ShiftSource::kFirstOrder:
      return "first_order";
    case ShiftSource::kZero:
      return "zero";
  }
  return "optimized";
}

ShiftSource parse_shift_source(const std::string& name) {
  for (ShiftSource s : {ShiftSource::kOptimized, ShiftSource::kPreset, ShiftSource::kDressed,
                        ShiftSource::kFirstOrder, ShiftSource::kZero}) {
    if (shift_source_name(s) == name) return s;
  }
  throw ConfigError("shifts",
                    "expected one of optimized, preset, dressed, first_order, zero");
}

std::string dressing_model_name(DressingModel m) {
  return m == DressingModel::kResolved ? "resolved" : "linear_x";
}

DressingModel parse_dressing_model(const std::string& name) {
  if (name == "resolved") return DressingModel::kResolved;
  if (name == "linear_x") return DressingModel::kLinearX;
  throw ConfigError("dressing_model", "expected \"resolved\" or \"linear_x\"");
}

std::vector<double> SweepGrid::values() const {
  std::vector<double> v;
  if (points <= 0) return v;
  if (points == 1) return {min};
  for (int i = 0; i < points; ++i) {
    double x;
    if (i == 0) {
      x = min;
    } else if (i == points - 1) {
      x = max;
    } else if (log) {
      x = min * std::pow(max / min, static_cast<double>(i) / (points - 1));
    } else {
      x = min + (static_cast<double>(i) * (max - min)) / (points - 1);
    }
    v.push_back(x);
  }
  return v;
}

void SweepGrid::validate(const std::string& where) const {
  if (points < 1) throw ConfigError(where + ".points", "grid must have at least one point");
  if (!std::isfinite(min) || !std::isfinite(max)) {
    throw ConfigError(where, "grid bounds must be finite");
  }
  if (min > max) throw ConfigError(where + ".min", "min exceeds max");
  if (log && !(min > 0.0)) throw ConfigError(where + ".min", "log spacing needs min > 0");
  if (points == 1 && min != max) {
    throw ConfigError(where + ".points", "a single-point grid needs min == max");
  }
}

const Species& ScenarioConfig::table(const std::string& id) const {
  auto it = tables.find(id);
  if (it == tables.end()) throw ConfigError("species", "no table for species '" + id + "'");
  return it->second;
}

double ScenarioConfig::param(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end()) throw ConfigError("params." + key, "missing parameter");
  return it->second;
}

void ScenarioConfig::validate() const {
  const ScenarioConfig defaults = default_config(scenario);
  table(species);
  if (defaults.grid) {
    if (!grid) throw ConfigError("grid", "missing");
    grid->validate("grid");
    if (grid->parameter != defaults.grid->parameter) {
      throw ConfigError("grid.parameter", "expected '" + defaults.grid->parameter + "'");
    }
  } else if (grid) {
    throw ConfigError("grid", "scenario " + scenario_name(scenario) + " takes no grid");
  }
  if (defaults.leakage_grid) {
    if (!leakage_grid) throw ConfigError("leakage_grid", "missing");
    leakage_grid->validate("leakage_grid");
    if (leakage_grid->parameter != defaults.leakage_grid->parameter) {
      throw ConfigError("leakage_grid.parameter",
                        "expected '" + defaults.leakage_grid->parameter + "'");
    }
  }
  if (!defaults.photon_counts.empty() && photon_counts.empty()) {
    throw ConfigError("photon_counts", "need at least one photon count");
  }
  for (std::size_t i = 0; i < photon_counts.size(); ++i) {
    if (photon_counts[i] < 1) {
      throw ConfigError("photon_counts[" + std::to_string(i) + "]", "must be >= 1");
    }
  }
  for (const auto& [k, v] : params) {
    if (!std::isfinite(v)) throw ConfigError("params." + k, "must be finite");
  }
  if (scenario == Scenario::kCoolingCycle) {
    const double eta = param("eta");
    if (!(eta >= 0.0 && eta < 1.0)) throw ConfigError("params.eta", "need 0 <= eta < 1");
    if (param("n0") < 0 || param("n0") != std::floor(param("n0"))) {
      throw ConfigError("params.n0", "need a non-negative integer");
    }
    if (param("cycles") < 0 || param("cycles") != std::floor(param("cycles"))) {
      throw ConfigError("params.cycles", "need a non-negative integer");
    }
  }
  if (params.count("samples") && param("samples") < 2) {
    throw ConfigError("params.samples", "need at least 2 samples");
  }
}

ScenarioConfig default_config(Scenario s) {
  ScenarioConfig c;
  c.scenario = s;
  const std::map<std::string, double> quadrupole = {{"omega_ab_MHz", 1000.0},
                                                    {"delta_ad_MHz", 4350.0},
                                                    {"preset_omega_ad_MHz", 106.0},
                                                    {"preset_delta_ad_MHz", 4350.0}};
  switch (s) {
    case Scenario::kLeakageSweep:
      c.grid = SweepGrid{"delta_ga_MHz", 1e3, 1e5, 25, true};
      c.photon_counts = {10, 100};
      c.params = {{"omega_ga_MHz", 50.0},
                  {"triplet_detuning_MHz", 635.0},
                  {"triplet_reference_F", 4.5},
                  {"tolerance", 1e-11}};
      break;
    case Scenario::kDressingSpectrum:
      c.grid = SweepGrid{"omega_ab_MHz", 1000.0, 1000.0, 1, false};
      break;
    case Scenario::kTwoLevelCoherence:
      c.grid = SweepGrid{"delta_over_gamma", 0.0, 3.0, 31, false};
      c.params = {{"gamma_MHz", 32.0}, {"t_final_over_gamma", 10.0}, {"tolerance", 1e-10}};
      break;
    case Scenario::kQuadrupoleCancellation:
      c.params = quadrupole;
      break;
    case Scenario::kQuenchDecay:
      c.params = quadrupole;
      c.params["t_final_over_gamma"] = 10.0;
      c.params["samples"] = 101.0;
      c.params["tolerance"] = 1e-10;
      break;
    case Scenario::kCoolingCycle:
      c.params = quadrupole;
      c.params["n0"] = 5.0;
      c.params["eta"] = 0.0;
      c.params["cycles"] = 5.0;
      c.params["per_cycle_fidelity"] = -1.0;  // negative: from the quench closed form
      break;
    case Scenario::kYbVariants:
      c.species = "Yb171";
      c.grid = SweepGrid{"omega_MHz", 1e2, 1e5, 31, true};
      c.leakage_grid = SweepGrid{"delta_ga_MHz", 1e4, 1e6, 25, true};
      c.photon_counts = {10, 100};
      c.params = {{"omega_ga_MHz", 50.0}, {"overlap_deficit", 1e-3}, {"tolerance", 1e-11}};
      c.tables.emplace("Sr87", species_registry("Sr87"));
      break;
  }
  c.tables.emplace(c.species, species_registry(c.species));
  return c;
}

ScenarioConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("", "config must be a JSON object");
  static const std::vector<std::string> known = {
      "scenario", "species",  "species_data",   "grid",   "leakage_grid", "photon_counts",
      "params",   "dressing_model", "shifts", "run"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      throw ConfigError(it.key(), "unknown key");
    }
  }
  if (!j.contains("scenario")) throw ConfigError("scenario", "missing");
  ScenarioConfig c = default_config(parse_scenario(read_string(j.at("scenario"), "scenario")));

  if (j.contains("species")) {
    c.species = read_string(j.at("species"), "species");
    const bool supplied = j.contains("species_data") && j.at("species_data").is_object() &&
                          j.at("species_data").contains(c.species);
    if (!supplied) ensure_table(c, c.species, "species");
  }
  if (j.contains("species_data")) {
    const json& sd = j.at("species_data");
    if (!sd.is_object()) throw ConfigError("species_data", "expected an object keyed by id");
    for (auto it = sd.begin(); it != sd.end(); ++it) {
      const std::string where = "species_data." + it.key();
      Species sp = species_from_json(*it, where);
      if (sp.id != it.key()) throw ConfigError(where + ".id", "must equal '" + it.key() + "'");
      c.tables.insert_or_assign(it.key(), std::move(sp));
    }
  }
  auto read_grid = [&](const char* key, std::optional<SweepGrid>& g) {
    if (!j.contains(key)) return;
    const json& gj = j.at(key);
    if (!gj.is_object()) throw ConfigError(key, "expected an object");
    if (!g) throw ConfigError(key, "scenario " + scenario_name(c.scenario) + " takes no grid");
    for (auto it = gj.begin(); it != gj.end(); ++it) {
      set_grid_field(*g, it.key(), *it, std::string(key) + "." + it.key());
    }
  };
  read_grid("grid", c.grid);
  read_grid("leakage_grid", c.leakage_grid);
  if (j.contains("photon_counts")) c.photon_counts = read_counts(j.at("photon_counts"), "photon_counts");
  if (j.contains("params")) {
    const json& pj = j.at("params");
    if (!pj.is_object()) throw ConfigError("params", "expected an object");
    for (auto it = pj.begin(); it != pj.end(); ++it) {
      const std::string where = "params." + it.key();
      if (!c.params.count(it.key())) throw ConfigError(where, "unknown parameter");
      c.params[it.key()] = read_number(*it, where);
    }
  }
  if (j.contains("dressing_model")) {
    c.dressing_model = parse_dressing_model(read_string(j.at("dressing_model"), "dressing_model"));
  }
  if (j.contains("shifts")) c.shifts = parse_shift_source(read_string(j.at("shifts"), "shifts"));
  c.validate();
  return c;
}

ScenarioConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open config file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path, std::string("malformed JSON: ") + e.what());
  }
  return config_from_json(j);
}

json config_to_json(const ScenarioConfig& c) {
  json j;
  j["scenario"] = scenario_name(c.scenario);
  j["species"] = c.species;
  json sd = json::object();
  for (const auto& [id, sp] : c.tables) sd[id] = species_to_json(sp);
  j["species_data"] = sd;
  if (c.grid) j["grid"] = grid_json(*c.grid);
  if (c.leakage_grid) j["leakage_grid"] = grid_json(*c.leakage_grid);
  if (!c.photon_counts.empty()) j["photon_counts"] = c.photon_counts;
  json p = json::object();
  for (const auto& [k, v] : c.params) p[k] = v;
  j["params"] = p;
  j["dressing_model"] = dressing_model_name(c.dressing_model);
  j["shifts"] = shift_source_name(c.shifts);
  return j;
}

void apply_override(ScenarioConfig& c, const std::string& key, const std::string& value) {
  std::vector<std::string> parts;
  std::stringstream ss(key);
  for (std::string seg; std::getline(ss, seg, '.');) parts.push_back(seg);
  if (parts.empty() || parts[0].empty()) throw ConfigError(key, "empty override key");

  const std::string& head = parts[0];
  if (parts.size() == 1) {
    if (head == "species") {
      c.species = value;
      ensure_table(c, value, key);
      return;
    }
    if (head == "photon_counts") {
      std::vector<int> counts;
      std::stringstream vs(value);
      for (std::string item; std::getline(vs, item, ',');) {
        const auto n = parse_number(item);
        if (!n || *n != std::floor(*n)) throw ConfigError(key, "expected integers, e.g. 10,100");
        counts.push_back(static_cast<int>(*n));
      }
      c.photon_counts = counts;
      return;
    }
    if (head == "dressing_model") {
      c.dressing_model = parse_dressing_model(value);
      return;
    }
    if (head == "shifts") {
      c.shifts = parse_shift_source(value);
      return;
    }
    if (head == "scenario") throw ConfigError(key, "the scenario is fixed by the subcommand");
    if (c.params.count(head)) {
      const auto v = parse_number(value);
      if (!v) throw ConfigError(key, "expected a number");
      c.params[head] = *v;
      return;
    }
    throw ConfigError(key, "unknown override key");
  }
  if (head == "params" && parts.size() == 2) {
    if (!c.params.count(parts[1])) throw ConfigError(key, "unknown parameter");
    const auto v = parse_number(value);
    if (!v) throw ConfigError(key, "expected a number");
    c.params[parts[1]] = *v;
    return;
  }
  if ((head == "grid" || head == "leakage_grid") && parts.size() == 2) {
    auto& g = head == "grid" ? c.grid : c.leakage_grid;
    if (!g) throw ConfigError(key, "scenario " + scenario_name(c.scenario) + " takes no " + head);
    set_grid_field(*g, parts[1], value_json(value), key);
    return;
  }
  if (parts.size() == 3) {
    std::string id;
    for (const auto& [tid, sp] : c.tables) {
      if (lower(tid) == lower(head)) id = tid;
    }
    if (id.empty()) {
      for (const auto& rid : registered_species()) {
        if (lower(rid) == lower(head)) id = rid;
      }
      if (!id.empty()) ensure_table(c, id, key);
    }
    if (!id.empty()) {
      set_manifold_field(c.tables.at(id), parts[1], parts[2], value_json(value), key);
      return;
    }
  }
  throw ConfigError(key, "unknown override key");
}

void apply_override(ScenarioConfig& c, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError(assignment, "override must look like KEY=VALUE");
  }
  apply_override(c, assignment.substr(0, eq), assignment.substr(eq + 1));
}

}  // namespace aeqnd
