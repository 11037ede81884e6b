#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "epim/grid.hpp"

// JSON type used by command implementations for manifests/reports.
#include "json.hpp"

namespace epim::cli {

// Exit code 1: bad flags, unknown keys, malformed config values.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exit code 2: unreadable/unwritable paths, malformed input data.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flat key=value configuration: documented defaults overlaid by an optional
// config file and then by command-line flags. Unknown keys are usage errors.
class RunConfig {
 public:
  static RunConfig load(const std::string& path);  // "" = defaults only
  static void print_defaults(std::ostream& os);

  void set(const std::string& key, const std::string& value);

  const std::string& str(const std::string& key) const;
  double num(const std::string& key) const;
  int inum(const std::string& key) const;
  std::uint64_t seed_of(const std::string& key) const;
  bool flag(const std::string& key) const;
  std::vector<double> nums(const std::string& key) const;
  std::vector<std::string> strs(const std::string& key) const;

  // Sorted key=value view of the effective configuration and its FNV-1a
  // hash; the hash goes into every manifest for provenance.
  std::string canonical() const;
  std::string hash_hex() const;

 private:
  std::map<std::string, std::string> kv_;
};

// Shared command plumbing.
Grid1D config_grid(const RunConfig& cfg);
std::string out_path(const RunConfig& cfg, const std::string& filename);  // creates out_dir
void write_manifest(const RunConfig& cfg, const std::string& command,
                    const nlohmann::ordered_json& parameters,
                    const std::vector<std::string>& files, const std::string& filename);

int cmd_figure(const RunConfig& cfg, const std::string& figure_id);
int cmd_ware(const RunConfig& cfg);
int cmd_monitor(const RunConfig& cfg, const std::string& source);
int cmd_simulate(const RunConfig& cfg, const std::string& check);

}  // namespace epim::cli
