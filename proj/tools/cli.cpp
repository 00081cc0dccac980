#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"

#include "aeqnd/csv.hpp"
#include "aeqnd/errors.hpp"
#include "aeqnd/protocols.hpp"
#include "aeqnd/species.hpp"
#include "aeqnd/sweep.hpp"

namespace aeqnd::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Common {
  std::string config;
  std::string out = ".";
  int workers = 1;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "JSON config file")->check(CLI::ExistingFile);
  sub->add_option("--out", c.out, "output directory (created if missing)");
  sub->add_option("--workers", c.workers, "sweep worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--set", c.overrides, "KEY=VALUE override (repeatable)");
}

fs::path prepare_out(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (!fs::is_directory(p)) throw ConfigError("--out", "cannot create directory " + dir);
  return p;
}

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  f << body;
  if (!f) throw ConfigError("--out", "cannot write " + path.string());
}

ScenarioConfig resolve_config(Scenario s, const Common& c) {
  ScenarioConfig cfg;
  if (c.config.empty()) {
    cfg = default_config(s);
  } else {
    std::ifstream f(c.config);
    json j;
    try {
      j = json::parse(f);
    } catch (const json::parse_error& e) {
      throw ConfigError(c.config, std::string("invalid JSON: ") + e.what());
    }
    if (j.is_object() && !j.contains("scenario")) j["scenario"] = scenario_name(s);
    cfg = config_from_json(j);
    if (cfg.scenario != s) {
      throw ConfigError("scenario", "config is for '" + scenario_name(cfg.scenario) +
                                        "', subcommand runs '" + scenario_name(s) + "'");
    }
  }
  for (const auto& o : c.overrides) apply_override(cfg, o);
  cfg.validate();
  return cfg;
}

void emit(const ScenarioConfig& cfg, const ScenarioOutput& res, const fs::path& dir,
          std::ostream& out) {
  for (const auto& t : res.tables) {
    std::ostringstream body;
    t.write_csv(body);
    write_file(dir / (t.name + ".csv"), body.str());
    out << "wrote " << (dir / (t.name + ".csv")).string() << " (" << t.rows.size()
        << " rows)\n";
  }
  const std::string stem = scenario_name(cfg.scenario);
  write_file(dir / (stem + ".meta.json"), scenario_metadata(cfg, res).dump(2) + "\n");
  out << "wrote " << (dir / (stem + ".meta.json")).string() << "\n";
}


void run_species(const std::string& id, const Common& c, std::ostream& out) {
  ScenarioConfig cfg = default_config(Scenario::kLeakageSweep);
  cfg.species = id;
  if (!c.config.empty()) {
    Species sp = load_species_file(c.config);
    cfg.tables.insert_or_assign(sp.id, sp);
    cfg.species = sp.id;
  } else if (!cfg.tables.count(id)) {
    cfg.tables.insert_or_assign(id, species_registry(id));
  }
  for (const auto& o : c.overrides) apply_override(cfg, o);
  const Species& sp = cfg.primary();

  std::ostringstream body;
  write_csv_row(body, std::vector<std::string>{"key", "label", "role", "J", "I", "A_MHz", "Q_MHz",
                                               "Gamma_MHz", "energy_offset_MHz", "F_levels"});
  const json j = species_to_json(sp);
  for (const auto& m : j.at("manifolds")) {
    auto num = [](const json& v) { return format_double(v.get<double>()); };
    auto txt = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    std::string fl;
    if (m.contains("F_levels")) {
      for (const auto& f : m.at("F_levels")) fl += (fl.empty() ? "" : " ") + txt(f);
    }
    write_csv_row(body, std::vector<std::string>{
                            m.at("key"), m.at("label"), m.at("role"), txt(m.at("J")),
                            txt(m.at("I")), num(m.at("A_MHz")), num(m.at("Q_MHz")),
                            num(m.at("Gamma_MHz")), num(m.at("energy_offset_MHz")), fl});
  }
  out << body.str();
  const fs::path dir = prepare_out(c.out);
  write_file(dir / "species.csv", body.str());
  write_file(dir / "species.meta.json", j.dump(2) + "\n");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"aeqnd: coherence-preserving leakage detection and cooling simulations"};
  app.name("aeqnd");
  app.require_subcommand(1);

  const std::map<std::string, std::pair<Scenario, std::string>> scenarios = {
      {"leakage-sweep", {Scenario::kLeakageSweep, "leakage infidelity vs probe detuning"}},
      {"dressing-spectrum", {Scenario::kDressingSpectrum, "dressed M_J=0 branch of 1P1"}},
      {"two-level", {Scenario::kTwoLevelCoherence, "two-level coherence transfer"}},
      {"cancel-quadrupole",
       {Scenario::kQuadrupoleCancellation, "cancel the residual quadrupole shift"}},
      {"quench-decay", {Scenario::kQuenchDecay, "decay of a dressed superposition"}},
      {"cooling-cycle", {Scenario::kCoolingCycle, "sideband cooling bookkeeping"}},
      {"yb", {Scenario::kYbVariants, "171Yb dressing and leakage"}},
  };

  Common common;
  std::string species_id = "Sr87";
  std::optional<double> gamma_mhz;
  std::optional<double> delta_over_gamma;

  auto* species = app.add_subcommand("species", "print a species table");
  species->add_option("id", species_id, "species id (" + [] {
    std::string s;
    for (const auto& id : registered_species()) s += (s.empty() ? "" : ", ") + id;
    return s;
  }() + ")");
  add_common(species, common);

  std::map<CLI::App*, Scenario> subs;
  for (const auto& [name, entry] : scenarios) {
    auto* sub = app.add_subcommand(name, entry.second);
    add_common(sub, common);
    subs[sub] = entry.first;
    if (entry.first == Scenario::kTwoLevelCoherence) {
      sub->add_option("--gamma-mhz", gamma_mhz, "decay rate Gamma/2pi in MHz");
      sub->add_option("--delta-over-gamma", delta_over_gamma, "single detuning in units of Gamma");
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "aeqnd: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (species->parsed()) {
      run_species(species_id, common, out);
      return kExitOk;
    }
    for (const auto& [sub, scenario] : subs) {
      if (!sub->parsed()) continue;
      ScenarioConfig cfg = resolve_config(scenario, common);
      if (delta_over_gamma) {
        cfg.grid->min = cfg.grid->max = *delta_over_gamma;
        cfg.grid->points = 1;
        cfg.grid->log = false;
      }
      if (gamma_mhz) cfg.params["gamma_MHz"] = *gamma_mhz;
      cfg.validate();
      const fs::path dir = prepare_out(common.out);
      const ScenarioOutput res = run_scenario(cfg, resolve_workers(common.workers));
      emit(cfg, res, dir, out);
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "aeqnd: config error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "aeqnd: error: " << e.what() << "\n";
    return kExitError;
  }
  err << app.help();
  return kExitUsage;
}

}  // namespace aeqnd::cli
