#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace phmm::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_name(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_' || c == '-';
  });
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(trim(item));
  return out;
}

std::string where(const std::string& section, const std::string& key) {
  return "[" + section + "] " + key;
}

double to_double(const std::string& text, const std::string& what, int line) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end || text.empty()) {
    throw ConfigError(what + ": expected a number, got '" + text + "'", line);
  }
  return v;
}

std::int64_t to_int(const std::string& text, const std::string& what, int line) {
  std::int64_t v = 0;
  const char* end = text.data() + text.size();
  auto [p, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || p != end || text.empty()) {
    throw ConfigError(what + ": expected an integer, got '" + text + "'", line);
  }
  return v;
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text) {
  ConfigFile cfg;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("unterminated section header '" + s + "'", line);
      section = trim(s.substr(1, s.size() - 2));
      if (!valid_name(section)) throw ConfigError("bad section name '" + section + "'", line);
      cfg.sections_[section];
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value', got '" + s + "'", line);
    if (section.empty()) throw ConfigError("key outside of any [section]", line);
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (!valid_name(key)) throw ConfigError("bad key name '" + key + "'", line);
    auto& sec = cfg.sections_[section];
    if (sec.count(key) != 0) {
      throw ConfigError("duplicate key " + where(section, key) + " (first set on line " +
                            std::to_string(sec[key].line) + ")",
                        line);
    }
    sec[key] = Entry{value, line};
  }
  return cfg;
}

void ConfigFile::set(const std::string& section, const std::string& key, const std::string& value) {
  auto& e = sections_[section][key];
  e.value = value;
}

const ConfigFile::Entry* ConfigFile::find(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  auto k = s->second.find(key);
  if (k == s->second.end()) return nullptr;
  used_.insert({section, key});
  return &k->second;
}

const ConfigFile::Entry& ConfigFile::require(const std::string& section, const std::string& key) const {
  const Entry* e = find(section, key);
  if (e == nullptr) throw ConfigError("missing required key " + where(section, key));
  return *e;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) != 0;
}

bool ConfigFile::has_section(const std::string& section) const {
  return sections_.count(section) != 0;
}

int ConfigFile::line_of(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return 0;
  auto k = s->second.find(key);
  return k == s->second.end() ? 0 : k->second.line;
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key) const {
  const auto& e = require(section, key);
  if (e.value.empty()) throw ConfigError(where(section, key) + ": empty value", e.line);
  return e.value;
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key,
                                   const std::string& fallback) const {
  const Entry* e = find(section, key);
  return e == nullptr ? fallback : e->value;
}

double ConfigFile::get_double(const std::string& section, const std::string& key) const {
  const auto& e = require(section, key);
  return to_double(e.value, where(section, key), e.line);
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
  const Entry* e = find(section, key);
  return e == nullptr ? fallback : to_double(e->value, where(section, key), e->line);
}

std::int64_t ConfigFile::get_int(const std::string& section, const std::string& key) const {
  const auto& e = require(section, key);
  return to_int(e.value, where(section, key), e.line);
}

std::int64_t ConfigFile::get_int(const std::string& section, const std::string& key,
                                 std::int64_t fallback) const {
  const Entry* e = find(section, key);
  return e == nullptr ? fallback : to_int(e->value, where(section, key), e->line);
}

std::uint64_t ConfigFile::get_uint(const std::string& section, const std::string& key,
                                   std::uint64_t fallback) const {
  const Entry* e = find(section, key);
  if (e == nullptr) return fallback;
  std::uint64_t v = 0;
  const char* end = e->value.data() + e->value.size();
  auto [p, ec] = std::from_chars(e->value.data(), end, v);
  if (ec != std::errc() || p != end || e->value.empty()) {
    throw ConfigError(where(section, key) + ": expected a nonnegative integer, got '" + e->value + "'",
                      e->line);
  }
  return v;
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key, bool fallback) const {
  const Entry* e = find(section, key);
  if (e == nullptr) return fallback;
  if (e->value == "true" || e->value == "yes" || e->value == "1") return true;
  if (e->value == "false" || e->value == "no" || e->value == "0") return false;
  throw ConfigError(where(section, key) + ": expected true or false, got '" + e->value + "'", e->line);
}

std::vector<double> ConfigFile::get_doubles(const std::string& section, const std::string& key) const {
  const auto& e = require(section, key);
  std::vector<double> out;
  for (const auto& item : split_list(e.value)) out.push_back(to_double(item, where(section, key), e.line));
  if (out.empty()) throw ConfigError(where(section, key) + ": empty list", e.line);
  return out;
}

std::vector<std::int64_t> ConfigFile::get_ints(const std::string& section, const std::string& key) const {
  const auto& e = require(section, key);
  std::vector<std::int64_t> out;
  for (const auto& item : split_list(e.value)) out.push_back(to_int(item, where(section, key), e.line));
  if (out.empty()) throw ConfigError(where(section, key) + ": empty list", e.line);
  return out;
}

std::vector<std::string> ConfigFile::get_strings(const std::string& section,
                                                 const std::string& key) const {
  const auto& e = require(section, key);
  auto out = split_list(e.value);
  for (const auto& s : out) {
    if (s.empty()) throw ConfigError(where(section, key) + ": empty list item", e.line);
  }
  return out;
}

void ConfigFile::check_all_used() const {
  for (const auto& [section, keys] : sections_) {
    if (keys.empty()) continue;
    for (const auto& [key, entry] : keys) {
      if (used_.count({section, key}) == 0) {
        throw ConfigError("unknown key " + where(section, key), entry.line);
      }
    }
  }
}

std::string ConfigFile::canonical() const {
  std::string out;
  for (const auto& [section, keys] : sections_) {
    for (const auto& [key, entry] : keys) out += section + "." + key + "=" + entry.value + "\n";
  }
  return out;
}

std::uint64_t ConfigFile::hash() const {
  // FNV-1a, 64 bit.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace phmm::cli
