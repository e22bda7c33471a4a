#ifndef PHMM_TOOLS_CONFIG_HPP_
#define PHMM_TOOLS_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace phmm::cli {

/// Bad config file or bad value; `line` is 0 when no line applies.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line(line) {}
  int line;
};

/// Flat sectioned key-value file:
///
///   # comment
///   [section]
///   key = value        ; trailing comments start with '#'
///
/// Keys must be unique within a section. Readers mark the keys they use;
/// check_all_used() then rejects anything left over.
class ConfigFile {
 public:
  struct Entry {
    std::string value;
    int line = 0;
  };

  static ConfigFile parse(const std::string& text);

  /// Replaces or inserts section.key (used for command-line overrides).
  void set(const std::string& section, const std::string& key, const std::string& value);

  bool has(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& section) const;

  std::string get_string(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& section, const std::string& key) const;
  std::int64_t get_int(const std::string& section, const std::string& key,
                       std::int64_t fallback) const;
  std::uint64_t get_uint(const std::string& section, const std::string& key,
                         std::uint64_t fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
  /// Comma-separated lists.
  std::vector<double> get_doubles(const std::string& section, const std::string& key) const;
  std::vector<std::int64_t> get_ints(const std::string& section, const std::string& key) const;
  std::vector<std::string> get_strings(const std::string& section, const std::string& key) const;

  /// Throws ConfigError naming the first unread key (or unused section).
  void check_all_used() const;

  /// "section.key=value" lines in sorted order; hashed into the outputs.
  std::string canonical() const;
  std::uint64_t hash() const;

  int line_of(const std::string& section, const std::string& key) const;

 private:
  const Entry& require(const std::string& section, const std::string& key) const;
  const Entry* find(const std::string& section, const std::string& key) const;

  std::map<std::string, std::map<std::string, Entry>> sections_;
  mutable std::set<std::pair<std::string, std::string>> used_;
};

}  // namespace phmm::cli

#endif  // PHMM_TOOLS_CONFIG_HPP_
