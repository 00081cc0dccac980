#include "aeqnd/species.hpp"

#include <cmath>
#include <fstream>
#include <utility>

#include "aeqnd/errors.hpp"
#include "aeqnd/units.hpp"

namespace aeqnd {
namespace {

using nlohmann::json;

Manifold make(std::string key, std::string label, std::string role, HalfInt J, HalfInt I,
              double A_mhz, double Q_mhz, double gamma_mhz, double offset_mhz,
              std::vector<HalfInt> f_levels = {}) {
  Manifold m;
  m.key = std::move(key);
  m.label = std::move(label);
  m.role = std::move(role);
  m.J = J;
  m.I = I;
  m.A = mhz(A_mhz);
  m.Q = mhz(Q_mhz);
  m.Gamma = mhz(gamma_mhz);
  m.energy_offset = mhz(offset_mhz);
  m.f_levels = std::move(f_levels);
  return m;
}

// Energy offsets are approximate term energies (bookkeeping only).
Species strontium87() {
  const HalfInt I = half(9);
  Species s{"Sr87", I, {}};
  s.manifolds = {
      make("1S0", "5s2 1S0", "ground", 0, I, 0, 0, 0, 0),
      make("1P1", "5s5p 1P1", "singlet", 1, I, -3.4, 39.0, 32.0, 6.5050e8),
      // 3P1 constants from hyperfine spectroscopy; not used by acceptance gates.
      make("3P1", "5s5p 3P1", "triplet", 1, I, -260.084, -35.658, 0.0075, 4.3483e8),
      make("3P0", "5s5p 3P0", "clock", 0, I, 0, 0, 0, 4.2923e8),
      make("5s6s_1S0", "5s6s 1S0", "dressing", 0, I, 0, 0, 18.5, 9.1712e8),
      make("5s15d_1D2", "5s15d 1D2", "tensor", 2, I, 0, 0, 0.05, 1.3600e9, {half(13)}),
  };
  return s;
}

Species ytterbium171() {
  const HalfInt I = half(1);
  Species s{"Yb171", I, {}};
  s.manifolds = {
      make("1S0", "6s2 1S0", "ground", 0, I, 0, 0, 0, 0),
      make("1P1", "6s6p 1P1", "singlet", 1, I, -213.3, 0, 29.1, 7.5152e8),
      make("6s7s_1S0", "6s7s 1S0", "dressing", 0, I, 0, 0, 10.0, 9.8017e8),
      make("3P0", "6s6p 3P0", "clock", 0, I, 0, 0, 0, 5.1829e8),
  };
  return s;
}

HalfInt read_half(const json& v, const std::string& where) {
  try {
    if (v.is_string()) return HalfInt::parse(v.get<std::string>());
    if (v.is_number()) return HalfInt::from_double(v.get<double>());
  } catch (const InvalidArgument& e) {
    throw ConfigError(where, e.what());
  }
  throw ConfigError(where, "expected a half-integer (e.g. \"9/2\" or 4.5)");
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

std::string join(const std::string& a, const std::string& b) {
  return a.empty() ? b : a + "." + b;
}

json half_json(HalfInt h) { return h.str(); }

}  // namespace

const Manifold& Species::manifold(const std::string& key) const {
  for (const Manifold& m : manifolds) {
    if (m.key == key) return m;
  }
  throw InvalidArgument("species " + id + " has no manifold '" + key + "'");
}

Manifold& Species::manifold(const std::string& key) {
  return const_cast<Manifold&>(std::as_const(*this).manifold(key));
}

const Manifold& Species::by_role(const std::string& role) const {
  for (const Manifold& m : manifolds) {
    if (m.role == role) return m;
  }
  throw InvalidArgument("species " + id + " has no manifold with role '" + role + "'");
}

bool Species::has_role(const std::string& role) const {
  for (const Manifold& m : manifolds) {
    if (m.role == role) return true;
  }
  return false;
}

std::vector<std::string> registered_species() { return {"Sr87", "Yb171"}; }

Species species_registry(const std::string& species_id) {
  if (species_id == "Sr87") return strontium87();
  if (species_id == "Yb171") return ytterbium171();
  throw InvalidArgument("unknown species id '" + species_id + "' (known: Sr87, Yb171)");
}

void set_manifold_field(Species& s, const std::string& key, const std::string& field,
                        const json& value, const std::string& where) {
  Manifold* m = nullptr;
  for (Manifold& candidate : s.manifolds) {
    if (candidate.key == key) m = &candidate;
  }
  if (m == nullptr) throw ConfigError(where, "unknown manifold '" + key + "'");
  if (field == "A_MHz") {
    m->A = mhz(read_number(value, where));
  } else if (field == "Q_MHz") {
    m->Q = mhz(read_number(value, where));
  } else if (field == "Gamma_MHz") {
    const double g = read_number(value, where);
    if (g < 0) throw ConfigError(where, "Gamma_MHz must be >= 0");
    m->Gamma = mhz(g);
  } else if (field == "energy_offset_MHz") {
    m->energy_offset = mhz(read_number(value, where));
  } else if (field == "J") {
    m->J = read_half(value, where);
  } else if (field == "I") {
    m->I = read_half(value, where);
  } else if (field == "label") {
    m->label = read_string(value, where);
  } else if (field == "role") {
    m->role = read_string(value, where);
  } else {
    throw ConfigError(where, "unknown manifold field '" + field + "'");
  }
}

Species species_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where, "expected an object");
  Species s;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k != "id" && k != "I" && k != "manifolds") {
      throw ConfigError(join(where, k), "unknown key");
    }
  }
  if (!j.contains("id")) throw ConfigError(join(where, "id"), "missing");
  if (!j.contains("I")) throw ConfigError(join(where, "I"), "missing");
  if (!j.contains("manifolds")) throw ConfigError(join(where, "manifolds"), "missing");
  s.id = read_string(j.at("id"), join(where, "id"));
  s.I = read_half(j.at("I"), join(where, "I"));
  const json& arr = j.at("manifolds");
  if (!arr.is_array() || arr.empty()) {
    throw ConfigError(join(where, "manifolds"), "expected a non-empty array");
  }
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string at = join(where, "manifolds[" + std::to_string(i) + "]");
    const json& e = arr[i];
    if (!e.is_object()) throw ConfigError(at, "expected an object");
    Manifold m;
    m.I = s.I;
    if (!e.contains("key")) throw ConfigError(join(at, "key"), "missing");
    if (!e.contains("J")) throw ConfigError(join(at, "J"), "missing");
    m.key = read_string(e.at("key"), join(at, "key"));
    m.label = m.key;
    s.manifolds.push_back(m);
    for (auto it = e.begin(); it != e.end(); ++it) {
      const std::string& field = it.key();
      if (field == "key") continue;
      if (field == "F_levels") {
        if (!it->is_array()) throw ConfigError(join(at, field), "expected an array");
        for (std::size_t f = 0; f < it->size(); ++f) {
          s.manifolds.back().f_levels.push_back(
              read_half((*it)[f], join(at, field) + "[" + std::to_string(f) + "]"));
        }
        continue;
      }
      set_manifold_field(s, m.key, field, *it, join(at, field));
    }
    try {
      s.manifolds.back().validate();
    } catch (const InvalidArgument& ex) {
      throw ConfigError(at, ex.what());
    }
  }
  return s;
}

json species_to_json(const Species& s) {
  json arr = json::array();
  for (const Manifold& m : s.manifolds) {
    json e = {{"key", m.key},
              {"label", m.label},
              {"role", m.role},
              {"J", half_json(m.J)},
              {"I", half_json(m.I)},
              {"A_MHz", to_mhz_roundtrip(m.A)},
              {"Q_MHz", to_mhz_roundtrip(m.Q)},
              {"Gamma_MHz", to_mhz_roundtrip(m.Gamma)},
              {"energy_offset_MHz", to_mhz_roundtrip(m.energy_offset)}};
    if (m.restricted()) {
      json f = json::array();
      for (HalfInt F : m.f_levels) f.push_back(half_json(F));
      e["F_levels"] = f;
    }
    arr.push_back(e);
  }
  return {{"id", s.id}, {"I", half_json(s.I)}, {"manifolds", arr}};
}

Species load_species_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), "cannot open species file");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string(), std::string("malformed JSON: ") + e.what());
  }
  return species_from_json(j);
}

}  // namespace aeqnd
