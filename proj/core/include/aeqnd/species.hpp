#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "aeqnd/state_space.hpp"

namespace aeqnd {

struct Species {
  std::string id;
  HalfInt I;
  std::vector<Manifold> manifolds;

  const Manifold& manifold(const std::string& key) const;
  Manifold& manifold(const std::string& key);
  // First manifold with the given role; throws when absent.
  const Manifold& by_role(const std::string& role) const;
  bool has_role(const std::string& role) const;
};

// Built-in species: "Sr87", "Yb171". Throws InvalidArgument on unknown ids.
Species species_registry(const std::string& species_id);
std::vector<std::string> registered_species();

// Species file (JSON). `where` prefixes error paths.
Species species_from_json(const nlohmann::json& j, const std::string& where = "");
nlohmann::json species_to_json(const Species& s);
Species load_species_file(const std::filesystem::path& path);

// Sets one manifold field from a /2pi MHz or quantum-number value.
// field in {A_MHz, Q_MHz, Gamma_MHz, energy_offset_MHz, J, I, label, role}.
void set_manifold_field(Species& s, const std::string& key, const std::string& field,
                        const nlohmann::json& value, const std::string& where);

}  // namespace aeqnd
