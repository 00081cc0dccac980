#include "aeqnd/protocols.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "aeqnd/csv.hpp"
#include "aeqnd/errors.hpp"
#include "aeqnd/linalg.hpp"
#include "aeqnd/structure.hpp"
#include "aeqnd/sweep.hpp"
#include "aeqnd/units.hpp"

#ifndef AEQND_VERSION
#define AEQND_VERSION "0.0.0"
#endif

namespace aeqnd {
namespace {

using nlohmann::json;

Eigen::VectorXcd equal_superposition(std::size_t n) {
  return Eigen::VectorXcd::Constant(static_cast<Eigen::Index>(n),
                                    cd(1.0 / std::sqrt(static_cast<double>(n))));
}

std::vector<std::string> leakage_columns(const std::vector<int>& counts) {
  std::vector<std::string> c = {"delta_ga_MHz",  "omega_gc_MHz", "probe_spread_MHz",
                                "residual_spread_MHz", "rate_per_us", "trace_drift"};
  for (int n : counts) {
    const std::string s = std::to_string(n);
    c.push_back("exposure_us_N" + s);
    c.push_back("infidelity_N" + s);
    c.push_back("infidelity_singlet_N" + s);
  }
  return c;
}

SweepResult leakage_table(const std::string& name, const Species& sp, const SweepGrid& grid,
                          const ScenarioConfig& cfg, int workers) {
  const auto grid_values = grid.values();
  std::vector<LeakagePoint> points(grid_values.size());
  parallel_for(points.size(), workers, [&](std::size_t i) {
    points[i] = leakage_point(sp, mhz(grid_values[i]), cfg);
  });
  SweepResult t{name, leakage_columns(cfg.photon_counts), {}};
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    std::vector<double> row = {grid_values[i],
                               to_mhz(p.triplet_rabi),
                               to_mhz(p.probe_spread),
                               to_mhz(p.residual_spread),
                               p.rate,
                               p.trace_drift};
    for (std::size_t k = 0; k < cfg.photon_counts.size(); ++k) {
      row.push_back(p.exposure[k]);
      row.push_back(p.infidelity[k]);
      row.push_back(p.infidelity_singlet[k]);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

void require_finite(const SweepResult& t) {
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    for (std::size_t c = 0; c < t.rows[r].size(); ++c) {
      if (!std::isfinite(t.rows[r][c])) {
        throw NumericalError(t.name + ": non-finite value in row " + std::to_string(r) +
                             ", column " + t.columns[c]);
      }
    }
  }
}

QuadrupoleSetup quadrupole_setup(const ScenarioConfig& cfg) {
  const Species& sp = cfg.primary();
  QuadrupoleSetup s;
  s.a = sp.by_role("singlet");
  s.b = sp.by_role("dressing");
  s.d = sp.by_role("tensor");
  s.rabi_ab = mhz(cfg.param("omega_ab_MHz"));
  s.model = cfg.dressing_model;
  return s;
}

std::vector<double> energies(const std::vector<DressedLevel>& levels) {
  std::vector<double> e;
  for (const auto& lv : levels) e.push_back(lv.energy);
  return e;
}

}  // namespace

void SweepResult::write_csv(std::ostream& os) const {
  write_csv_row(os, columns);
  for (const auto& r : rows) write_csv_row(os, r);
}

std::size_t SweepResult::column(const std::string& col) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == col) return i;
  }
  throw InvalidArgument("no column '" + col + "' in " + name);
}

void CoolingState::validate() const {
  if (n < 0) throw InvalidArgument("vibrational quantum number must be >= 0");
  if (!(eta >= 0.0 && eta < 1.0)) throw InvalidArgument("Lamb-Dicke parameter needs 0 <= eta < 1");
}

std::vector<CoolingStep> run_cooling_cycles(const CoolingState& start, int cycles,
                                            double per_cycle_fidelity) {
  start.validate();
  if (cycles < 0) throw InvalidArgument("cycles must be >= 0");
  const std::size_t size = static_cast<std::size_t>(start.n + cycles + 2);
  std::vector<double> p(size, 0.0);
  std::vector<double> w(size, 0.0);  // probability weighted by stored-coherence fidelity
  p[static_cast<std::size_t>(start.n)] = 1.0;
  w[static_cast<std::size_t>(start.n)] = 1.0;
  const double heat = start.eta * start.eta;

  auto record = [&](int cycle) {
    double mean = 0.0;
    double fid = 0.0;
    for (std::size_t n = 0; n < size; ++n) {
      mean += static_cast<double>(n) * p[n];
      fid += w[n];
    }
    return CoolingStep{cycle, mean, p[0], fid};
  };

  std::vector<CoolingStep> out = {record(0)};
  for (int c = 1; c <= cycles; ++c) {
    std::vector<double> np(size, 0.0);
    std::vector<double> nw(size, 0.0);
    np[0] += p[0];
    nw[0] += w[0];
    for (std::size_t n = 1; n < size; ++n) {
      if (p[n] == 0.0 && w[n] == 0.0) continue;
      np[n - 1] += p[n] * (1.0 - heat);
      nw[n - 1] += w[n] * (1.0 - heat) * per_cycle_fidelity;
      if (heat > 0.0) {
        np[n] += p[n] * heat;
        nw[n] += w[n] * heat * per_cycle_fidelity;
      }
    }
    p.swap(np);
    w.swap(nw);
    out.push_back(record(c));
  }
  return out;
}

QuenchModel build_quench_model(const std::vector<double>& deltas, double gamma,
                               double t_final) {
  if (deltas.empty()) throw InvalidArgument("need at least one level");
  if (!(gamma > 0.0)) throw InvalidArgument("Gamma must be > 0");
  const int n = static_cast<int>(deltas.size());
  Manifold e;
  e.key = "e";
  e.label = "excited M_J=0 branch";
  e.J = 0;
  e.I = HalfInt::from_twice(n - 1);
  e.Gamma = gamma;
  Manifold g = e;
  g.key = "g";
  g.label = "ground";
  g.Gamma = 0.0;
  const SpacePtr space = StateSpace::make({{e, Basis::kUncoupled}, {g, Basis::kUncoupled}});

  OperatorMatrix h(space);
  OperatorMatrix l(space);
  for (int m = 0; m < n; ++m) {
    h.m(m, m) = deltas[static_cast<std::size_t>(m)];
    l.m(n + m, m) = 1.0;
  }
  Eigen::VectorXcd psi_e = Eigen::VectorXcd::Zero(2 * n);
  Eigen::VectorXcd psi_g = Eigen::VectorXcd::Zero(2 * n);
  psi_e.head(n) = equal_superposition(static_cast<std::size_t>(n));
  psi_g.tail(n) = equal_superposition(static_cast<std::size_t>(n));

  LindbladProblem problem;
  problem.hamiltonian = h;
  problem.dissipators = {{gamma, l}};
  problem.t_final = t_final;
  problem.target = psi_g;
  return {problem, DensityMatrix::pure(space, psi_e), psi_g};
}

LeakagePoint leakage_point(const Species& sp, double detuning, const ScenarioConfig& cfg) {
  const Manifold& g = sp.by_role("ground");
  const Manifold& a = sp.by_role("singlet");
  LeakagePoint out;
  out.detuning = detuning;

  LaserCoupling probe;
  probe.lower = g;
  probe.upper = a;
  probe.rabi = mhz(cfg.param("omega_ga_MHz"));
  probe.detuning = detuning;
  out.rate = rayleigh_rate(probe);

  OperatorMatrix h = light_shift_operator(probe);
  std::vector<Dissipator> singlet;
  for (const auto& w : jump_operators(probe)) singlet.push_back({a.Gamma, w});
  std::vector<Dissipator> all = singlet;

  const bool cancel = sp.has_role("triplet") && cfg.params.count("triplet_detuning_MHz");
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.m, Eigen::EigenvaluesOnly);
    out.probe_spread = spread(es.eigenvalues());
    out.residual_spread = out.probe_spread;
  }
  if (cancel) {
    const Manifold& c = sp.by_role("triplet");
    LaserCoupling trip;
    trip.lower = g;
    trip.upper = c;
    trip.detuning = mhz(cfg.param("triplet_detuning_MHz"));
    trip.reference_level = HalfInt::from_double(cfg.param("triplet_reference_F"));
    const TripletCancellation res = cancel_triplet_lightshift(probe, trip);
    trip.rabi = res.rabi;
    out.triplet_rabi = res.rabi;
    out.probe_spread = res.probe_spread;
    out.residual_spread = res.residual_spread;
    h = h + light_shift_operator(trip);
    for (const auto& w : jump_operators(trip)) all.push_back({c.Gamma, w});
  }

  std::vector<double> times;
  for (int n : cfg.photon_counts) times.push_back(static_cast<double>(n) / out.rate);
  out.exposure = times;
  const Eigen::VectorXcd psi = equal_superposition(h.rows->dimension());
  const DensityMatrix rho0 = DensityMatrix::pure(h.rows, psi);

  LindbladProblem problem;
  problem.hamiltonian = h;
  problem.t_final = *std::max_element(times.begin(), times.end());
  problem.control.tolerance = cfg.param("tolerance");
  problem.target = psi;

  auto infidelities = [&](const std::vector<Dissipator>& diss) {
    problem.dissipators = diss;
    const Trajectory traj = evolve(problem, rho0, times);
    out.trace_drift = std::max(out.trace_drift, traj.max_trace_drift);
    std::vector<double> inf;
    for (double t : times) {
      const auto it = std::find(traj.times.begin(), traj.times.end(), t);
      inf.push_back(1.0 - fidelity(traj.states[static_cast<std::size_t>(it - traj.times.begin())], psi));
    }
    return inf;
  };
  out.infidelity = infidelities(all);
  out.infidelity_singlet = cancel ? infidelities(singlet) : out.infidelity;
  return out;
}

double mean_dressed_overlap(const Species& sp, double rabi, DressingModel model) {
  const auto levels = dressed_mj0_levels(
      dressing_hamiltonian(sp.by_role("singlet"), sp.by_role("dressing"), rabi, model));
  double sum = 0.0;
  for (const auto& lv : levels) sum += lv.overlap;
  return sum / static_cast<double>(levels.size());
}

double rabi_for_overlap_deficit(const Species& sp, double deficit, DressingModel model) {
  if (!(deficit > 0.0 && deficit < 1.0)) throw InvalidArgument("deficit must be in (0, 1)");
  double lo = std::log(mhz(1e-3));
  double hi = std::log(mhz(1e8));
  if (1.0 - mean_dressed_overlap(sp, std::exp(hi), model) > deficit) {
    throw NumericalError("overlap deficit not reached below 1e8 MHz");
  }
  if (1.0 - mean_dressed_overlap(sp, std::exp(lo), model) <= deficit) return std::exp(lo);
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (1.0 - mean_dressed_overlap(sp, std::exp(mid), model) <= deficit) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return std::exp(hi);
}

std::vector<double> quench_shifts(const ScenarioConfig& cfg, json* info) {
  const QuadrupoleSetup s = quadrupole_setup(cfg);
  std::vector<double> d;
  json meta;
  switch (cfg.shifts) {
    case ShiftSource::kOptimized: {
      const auto res = cancel_quadrupole_shift(s, mhz(cfg.param("delta_ad_MHz")));
      d = energies(res.after.levels);
      meta = {{"omega_ad_MHz", to_mhz(res.after.rabi_ad)},
              {"delta_ad_MHz", to_mhz(res.after.detuning_ad)},
              {"converged", res.converged}};
      break;
    }
    case ShiftSource::kPreset: {
      const auto p = evaluate_quadrupole_point(s, mhz(cfg.param("preset_omega_ad_MHz")),
                                               mhz(cfg.param("preset_delta_ad_MHz")));
      d = energies(p.levels);
      meta = {{"omega_ad_MHz", to_mhz(p.rabi_ad)}, {"delta_ad_MHz", to_mhz(p.detuning_ad)}};
      break;
    }
    case ShiftSource::kDressed:
      d = energies(evaluate_quadrupole_point(s, 0.0, 0.0).levels);
      break;
    case ShiftSource::kFirstOrder:
      for (const auto& ps : perturbative_shifts(s.a, s.rabi_ab)) d.push_back(ps.first);
      break;
    case ShiftSource::kZero:
      d.assign(static_cast<std::size_t>(multiplicity(s.a.I)), 0.0);
      break;
  }
  meta["source"] = shift_source_name(cfg.shifts);
  meta["spread_MHz"] = to_mhz(spread(d));
  if (info) *info = meta;
  return d;
}

ScenarioOutput leakage_sweep(const ScenarioConfig& cfg, int workers) {
  ScenarioOutput out;
  out.tables.push_back(leakage_table("leakage_sweep", cfg.primary(), *cfg.grid, cfg, workers));
  out.summary = {{"triplet_canceller", cfg.primary().has_role("triplet")}};
  return out;
}

ScenarioOutput dressing_spectrum(const ScenarioConfig& cfg, int workers) {
  const Species& sp = cfg.primary();
  const Manifold& a = sp.by_role("singlet");
  const Manifold& b = sp.by_role("dressing");
  const auto omegas = cfg.grid->values();
  if (omegas.front() <= 0.0) throw ConfigError("grid.min", "omega_ab_MHz must be > 0");

  struct Point {
    std::vector<DressedLevel> levels;
    std::vector<PerturbativeShift> pt;
  };
  std::vector<Point> points(omegas.size());
  parallel_for(points.size(), workers, [&](std::size_t i) {
    const double rabi = mhz(omegas[i]);
    points[i].levels = dressed_mj0_levels(dressing_hamiltonian(a, b, rabi, cfg.dressing_model));
    points[i].pt = perturbative_shifts(a, rabi);
  });

  ScenarioOutput out;
  SweepResult t{"dressing_spectrum",
                {"omega_ab_MHz", "M_I", "exact_MHz", "first_order_MHz", "perturbative_MHz",
                 "overlap"},
                {}};
  json per_point = json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    double min_overlap = 1.0;
    double max_dev = 0.0;
    std::vector<double> exact;
    for (std::size_t k = 0; k < points[i].levels.size(); ++k) {
      const auto& lv = points[i].levels[k];
      const auto& ps = points[i].pt[k];
      const double pt_total = ps.first + ps.second;
      t.rows.push_back({omegas[i], lv.mI.value(), to_mhz(lv.energy), to_mhz(ps.first),
                        to_mhz(pt_total), lv.overlap});
      min_overlap = std::min(min_overlap, lv.overlap);
      max_dev = std::max(max_dev, std::abs(lv.energy - pt_total));
      exact.push_back(lv.energy);
    }
    const double sp_exact = spread(exact);
    per_point.push_back({{"omega_ab_MHz", omegas[i]},
                         {"min_overlap", min_overlap},
                         {"spread_MHz", to_mhz(sp_exact)},
                         {"max_pt_deviation_MHz", to_mhz(max_dev)},
                         {"relative_pt_deviation", sp_exact > 0 ? max_dev / sp_exact : 0.0}});
  }
  out.tables.push_back(std::move(t));
  out.summary = {{"points", per_point}, {"dressing_model", dressing_model_name(cfg.dressing_model)}};
  return out;
}

ScenarioOutput two_level_coherence(const ScenarioConfig& cfg, int workers) {
  const double gamma = mhz(cfg.param("gamma_MHz"));
  if (!(gamma > 0.0)) throw ConfigError("params.gamma_MHz", "must be > 0");
  const double t_final = cfg.param("t_final_over_gamma") / gamma;
  if (!(t_final > 0.0)) throw ConfigError("params.t_final_over_gamma", "must be > 0");
  const auto ratios = cfg.grid->values();
  std::vector<std::vector<double>> rows(ratios.size());
  parallel_for(rows.size(), workers, [&](std::size_t i) {
    const std::vector<double> deltas = {0.0, ratios[i] * gamma};
    QuenchModel q = build_quench_model(deltas, gamma, t_final);
    q.problem.control.tolerance = cfg.param("tolerance");
    const Trajectory traj = evolve(q.problem, q.initial);
    rows[i] = {ratios[i], 1.0 - fidelity(traj.states.back(), q.target),
               1.0 - coherence_transfer_fidelity_at(deltas, gamma, t_final),
               1.0 - coherence_transfer_fidelity(deltas, gamma), traj.max_trace_drift};
  });
  ScenarioOutput out;
  out.tables.push_back({"two_level_coherence",
                        {"delta_over_gamma", "infidelity", "infidelity_closed_form",
                         "infidelity_asymptotic", "trace_drift"},
                        rows});
  out.summary = {{"gamma_MHz", cfg.param("gamma_MHz")}, {"t_final_us", t_final}};
  return out;
}

ScenarioOutput quadrupole_cancellation(const ScenarioConfig& cfg, int /*workers*/) {
  const QuadrupoleSetup s = quadrupole_setup(cfg);
  const auto res = cancel_quadrupole_shift(s, mhz(cfg.param("delta_ad_MHz")));
  const auto preset = evaluate_quadrupole_point(s, mhz(cfg.param("preset_omega_ad_MHz")),
                                                mhz(cfg.param("preset_delta_ad_MHz")));
  LaserCoupling unit;
  unit.lower = s.a;
  unit.upper = s.d;
  unit.rabi = 1.0;
  unit.detuning = mhz(cfg.param("delta_ad_MHz"));
  const auto profile = light_shift_profile(unit);

  SweepResult t{"quadrupole_cancellation",
                {"M_I", "before_MHz", "optimized_MHz", "preset_MHz", "profile"},
                {}};
  std::vector<double> ms;
  for (std::size_t k = 0; k < res.before.levels.size(); ++k) {
    ms.push_back(res.before.levels[k].mI.value());
    t.rows.push_back({ms.back(), to_mhz(res.before.levels[k].energy),
                      to_mhz(res.after.levels[k].energy), to_mhz(preset.levels[k].energy),
                      profile[k]});
  }
  const auto fit = fit_even_quartic(ms, profile);
  ScenarioOutput out;
  out.tables.push_back(std::move(t));
  out.summary = {
      {"optimizer",
       {{"omega_ad_MHz", to_mhz(res.after.rabi_ad)},
        {"delta_ad_MHz", to_mhz(res.after.detuning_ad)},
        {"spread_before_MHz", to_mhz(res.before.spread)},
        {"spread_after_MHz", to_mhz(res.after.spread)},
        {"reduction", res.after.spread > 0 ? res.before.spread / res.after.spread : INFINITY},
        {"converged", res.converged},
        {"message", res.message},
        {"evaluations", res.evaluations}}},
      {"preset",
       {{"omega_ad_MHz", cfg.param("preset_omega_ad_MHz")},
        {"delta_ad_MHz", cfg.param("preset_delta_ad_MHz")},
        {"spread_MHz", to_mhz(preset.spread)}}},
      {"quartic_fit", {fit[0], fit[1], fit[2]}},
      {"first_order_spread_MHz", [&] {
         std::vector<double> f;
         for (const auto& ps : perturbative_shifts(s.a, s.rabi_ab)) f.push_back(ps.first);
         return to_mhz(spread(f));
       }()}};
  return out;
}

ScenarioOutput quench_decay(const ScenarioConfig& cfg, int /*workers*/) {
  json info;
  const auto deltas = quench_shifts(cfg, &info);
  const double gamma = cfg.primary().by_role("singlet").Gamma;
  const double t_final = cfg.param("t_final_over_gamma") / gamma;
  if (!(t_final > 0.0)) throw ConfigError("params.t_final_over_gamma", "must be > 0");
  const int samples = static_cast<int>(cfg.param("samples"));
  std::vector<double> times;
  for (int k = 0; k < samples; ++k) {
    times.push_back(k == samples - 1 ? t_final : (k * t_final) / (samples - 1));
  }
  QuenchModel q = build_quench_model(deltas, gamma, t_final);
  q.problem.control.tolerance = cfg.param("tolerance");
  const Trajectory traj = evolve(q.problem, q.initial, times);

  SweepResult t{"quench_decay", {"t_us", "fidelity", "trace", "purity", "closed_form"}, {}};
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const auto& s = traj.states[i];
    t.rows.push_back({traj.times[i], fidelity(s, q.target), s.trace(), s.purity(),
                      coherence_transfer_fidelity_at(deltas, gamma, traj.times[i])});
  }
  ScenarioOutput out;
  out.summary = {{"shifts", info},
                 {"final_fidelity", t.rows.back()[1]},
                 {"closed_form_final", t.rows.back()[4]},
                 {"asymptotic_fidelity", coherence_transfer_fidelity(deltas, gamma)},
                 {"steps", traj.steps},
                 {"max_trace_drift", traj.max_trace_drift}};
  out.tables.push_back(std::move(t));
  return out;
}

ScenarioOutput cooling_cycle(const ScenarioConfig& cfg, int /*workers*/) {
  double per_cycle = cfg.param("per_cycle_fidelity");
  json info;
  if (per_cycle < 0.0) {
    const auto deltas = quench_shifts(cfg, &info);
    per_cycle = coherence_transfer_fidelity(deltas, cfg.primary().by_role("singlet").Gamma);
  } else if (per_cycle > 1.0) {
    throw ConfigError("params.per_cycle_fidelity", "must be <= 1 (negative: compute)");
  }
  CoolingState start;
  start.n = static_cast<int>(cfg.param("n0"));
  start.eta = cfg.param("eta");
  const auto steps = run_cooling_cycles(start, static_cast<int>(cfg.param("cycles")), per_cycle);
  SweepResult t{"cooling_cycle", {"cycle", "mean_n", "p_ground", "fidelity"}, {}};
  for (const auto& s : steps) {
    t.rows.push_back({static_cast<double>(s.cycle), s.mean_n, s.p_ground, s.fidelity});
  }
  ScenarioOutput out;
  out.tables.push_back(std::move(t));
  out.summary = {{"per_cycle_fidelity", per_cycle}, {"shifts", info}};
  return out;
}

ScenarioOutput yb_variants(const ScenarioConfig& cfg, int workers) {
  const Species& yb = cfg.primary();
  const Species& sr = cfg.table("Sr87");
  const auto omegas = cfg.grid->values();
  std::vector<std::vector<double>> rows(omegas.size());
  parallel_for(rows.size(), workers, [&](std::size_t i) {
    const double rabi = mhz(omegas[i]);
    rows[i] = {omegas[i], mean_dressed_overlap(yb, rabi, cfg.dressing_model),
               mean_dressed_overlap(sr, rabi, cfg.dressing_model)};
  });

  ScenarioOutput out;
  out.tables.push_back({"yb_variants", {"omega_MHz", "overlap_" + yb.id, "overlap_" + sr.id}, rows});
  out.tables.push_back(leakage_table("yb_leakage", yb, *cfg.leakage_grid, cfg, workers));

  LaserCoupling probe;
  probe.lower = yb.by_role("ground");
  probe.upper = yb.by_role("singlet");
  probe.rabi = mhz(cfg.param("omega_ga_MHz"));
  probe.detuning = mhz(cfg.leakage_grid->values().front());
  const auto dec = irreducible_decomposition(probe);
  double max_c2 = 0.0;
  for (double c2 : dec.C2) max_c2 = std::max(max_c2, std::abs(c2));

  const double deficit = cfg.param("overlap_deficit");
  out.summary = {
      {"max_abs_C2", max_c2},
      {"overlap_deficit", deficit},
      {"rabi_for_deficit_MHz",
       {{yb.id, to_mhz(rabi_for_overlap_deficit(yb, deficit, cfg.dressing_model))},
        {sr.id, to_mhz(rabi_for_overlap_deficit(sr, deficit, cfg.dressing_model))}}}};
  return out;
}

ScenarioOutput run_scenario(const ScenarioConfig& cfg, int workers) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  ScenarioOutput out;
  switch (cfg.scenario) {
    case Scenario::kLeakageSweep:
      out = leakage_sweep(cfg, workers);
      break;
    case Scenario::kDressingSpectrum:
      out = dressing_spectrum(cfg, workers);
      break;
    case Scenario::kTwoLevelCoherence:
      out = two_level_coherence(cfg, workers);
      break;
    case Scenario::kQuadrupoleCancellation:
      out = quadrupole_cancellation(cfg, workers);
      break;
    case Scenario::kQuenchDecay:
      out = quench_decay(cfg, workers);
      break;
    case Scenario::kCoolingCycle:
      out = cooling_cycle(cfg, workers);
      break;
    case Scenario::kYbVariants:
      out = yb_variants(cfg, workers);
      break;
  }
  for (const auto& t : out.tables) require_finite(t);
  out.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

json scenario_metadata(const ScenarioConfig& cfg, const ScenarioOutput& out) {
  json j = config_to_json(cfg);
  json tables = json::array();
  for (const auto& t : out.tables) {
    tables.push_back({{"file", t.name + ".csv"}, {"columns", t.columns}, {"rows", t.rows.size()}});
  }
  j["run"] = {{"code_version", AEQND_VERSION},
              {"wall_time_s", out.wall_time_s},
              {"tables", tables},
              {"summary", out.summary}};
  return j;
}

}  // namespace aeqnd
