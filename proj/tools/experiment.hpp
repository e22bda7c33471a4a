#ifndef PHMM_TOOLS_EXPERIMENT_HPP_
#define PHMM_TOOLS_EXPERIMENT_HPP_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "config.hpp"
#include "phmm/parallel.hpp"

namespace phmm::cli {

using Cell = std::variant<std::string, double, std::int64_t>;

struct Table {
  std::string suffix;  // appended to the config name: "<name><suffix>.csv"
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Extra `# key: value` header lines.
  std::vector<std::pair<std::string, std::string>> notes;
};

struct ExperimentResult {
  std::vector<Table> tables;
  std::string summary;
};

/// A validated config, ready to run.
struct Experiment {
  std::string name;
  std::string description;
  std::string analysis;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  std::function<ExperimentResult(WorkerPool*)> run;
};

/// Validates `cfg` completely (unknown keys included) without running
/// anything. Throws ConfigError.
Experiment plan_experiment(const std::string& name, const ConfigFile& cfg);

/// Shortest round-trip formatting; identical on every run.
std::string format_cell(const Cell& c);

struct OutputOptions {
  std::filesystem::path dir;
  bool json = false;
  std::string tool_version;
  std::string timestamp;  // written on its own header line
};

/// Writes every table as CSV (and JSON when requested); returns the paths.
std::vector<std::filesystem::path> write_outputs(const Experiment& ex, const ExperimentResult& res,
                                                 const OutputOptions& opt);

struct BundledConfig {
  std::string_view name;
  std::string_view text;
};

/// Configs compiled into the tool, sorted by name.
std::span<const BundledConfig> bundled_configs();

}  // namespace phmm::cli

#endif  // PHMM_TOOLS_EXPERIMENT_HPP_
