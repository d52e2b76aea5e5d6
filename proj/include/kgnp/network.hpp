#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "kgnp/kg_store.hpp"
#include "kgnp/program.hpp"

namespace kgnp {

class Engine;

namespace toml {
class Table;
}

struct DatasetConfig {
  std::string name = "dataset";
  std::string csv;
  DatasetSchema schema = DatasetSchema::cardio();
  std::size_t sample = 0;  // 0: every record
  std::uint64_t seed = 0;
};

struct SpaceConfig {
  std::string name;
  std::string file;
};

/// Everything a network file names, loaded and cross-checked.
struct NetworkConfig {
  KGNetwork network;
  std::shared_ptr<const Program> session;  // null when the file names none
  std::optional<DatasetConfig> dataset;
  std::vector<SpaceConfig> spaces;
};

/// Keys: entity_blocklist, deny_read, deny_statistics, lpp_only,
/// function_blocklist, loop_caps (table of rule name or "*" to a cap).
AccessPolicy policy_from_toml(const toml::Table& t);

/// Relative paths resolve against `base_dir`.
NetworkConfig network_from_toml(const toml::Table& t, const std::string& base_dir);
NetworkConfig load_network(const std::string& path);

/// Loads the dataset and spaces into the engine's session state.
void attach(Engine& engine, const NetworkConfig& config);

}  // namespace kgnp
