#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "experiment.hpp"
#include "phmm/types.hpp"

#ifndef PHMM_VERSION
#define PHMM_VERSION "dev"
#endif

namespace phmm::cli {

namespace {

constexpr const char* kOutDirEnv = "PHMM_OUT_DIR";

struct LoadedConfig {
  std::string name;
  std::string text;
};

std::optional<LoadedConfig> load_config(const std::string& ref) {
  namespace fs = std::filesystem;
  if (fs::is_regular_file(ref)) {
    std::ifstream in(ref, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return LoadedConfig{fs::path(ref).stem().string(), ss.str()};
  }
  for (const auto& b : bundled_configs()) {
    if (b.name == ref) return LoadedConfig{std::string(b.name), std::string(b.text)};
  }
  return std::nullopt;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string describe(const BundledConfig& b) {
  try {
    return ConfigFile::parse(std::string(b.text)).get_string("output", "description", "");
  } catch (const ConfigError&) {
    return "(unreadable)";
  }
}

int list_experiments(bool json, std::ostream& out) {
  if (json) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& b : bundled_configs()) {
      arr.push_back({{"name", b.name}, {"description", describe(b)}});
    }
    out << arr.dump(1) << "\n";
    return 0;
  }
  std::size_t width = 0;
  for (const auto& b : bundled_configs()) width = std::max(width, b.name.size());
  for (const auto& b : bundled_configs()) {
    out << b.name << std::string(width + 2 - b.name.size(), ' ') << describe(b) << "\n";
  }
  return 0;
}

struct RunArgs {
  std::string config;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  unsigned workers = 0;
  bool json = false;
};

int run_experiment(const RunArgs& a, std::ostream& out, std::ostream& err) {
  const auto loaded = load_config(a.config);
  if (!loaded) {
    err << "error: '" << a.config << "' is neither a config file nor a bundled config (see `phmm list`)\n";
    return 2;
  }
  Experiment ex;
  try {
    ConfigFile cfg = ConfigFile::parse(loaded->text);
    if (a.seed_set) cfg.set("run", "seed", std::to_string(a.seed));
    ex = plan_experiment(loaded->name, cfg);
  } catch (const ConfigError& e) {
    err << "config error in " << loaded->name << ": " << e.what() << "\n";
    return 2;
  }

  std::string dir = a.out_dir;
  if (dir.empty()) {
    const char* env = std::getenv(kOutDirEnv);
    dir = env != nullptr && *env != '\0' ? env : "out";
  }

  try {
    WorkerPool pool(a.workers);
    const auto t0 = std::chrono::steady_clock::now();
    const ExperimentResult res = ex.run(&pool);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const auto paths = write_outputs(ex, res, {dir, a.json, PHMM_VERSION, utc_timestamp()});
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.2f", wall);
    out << ex.name << ": " << ex.analysis << " in " << secs << " s (" << res.summary << ") ->";
    for (const auto& p : paths) out << " " << p.string();
    out << "\n";
    return 0;
  } catch (const IntegrationError& e) {
    err << "numerical failure in " << ex.name << ": " << e.what() << " [t=" << e.time
        << ", step=" << e.step << ", macro=" << e.macro_index << ", micro=" << e.micro_index
        << ", replica=" << e.replica << "]\n";
    return 1;
  } catch (const std::exception& e) {
    err << "failure in " << ex.name << ": " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fast-slow SDE experiments: direct, HMM and parallel HMM integrators", "phmm"};
  app.require_subcommand(1, 1);

  RunArgs ra;
  auto* run = app.add_subcommand("run", "Run a config file or a bundled config by name");
  run->add_option("config", ra.config, "Config path or bundled name")->required();
  run->add_option("--out", ra.out_dir, std::string("Output directory (default $") + kOutDirEnv + " or ./out)");
  auto* seed = run->add_option("--seed", ra.seed, "Override [run] seed");
  run->add_option("--workers", ra.workers, "Worker threads (0 = hardware concurrency)");
  run->add_flag("--json", ra.json, "Also write JSON mirrors of the CSV files");

  bool list_json = false;
  auto* list = app.add_subcommand("list", "List bundled configs");
  list->add_flag("--json", list_json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, x;
    const int code = app.exit(e, o, x);
    out << o.str();
    err << x.str();
    if (code == 0) return 0;
    err << app.help();
    return 2;
  }

  if (list->parsed()) return list_experiments(list_json, out);
  ra.seed_set = seed->count() > 0;
  return run_experiment(ra, out, err);
}

}  // namespace phmm::cli
