#pragma once
// Strict INI-style configuration: [section] headers, key = value lines,
// '#'/';' full-line comments. Every key must be consumed by a reader;
// anything left over is a ConfigError, never a silent ignore. Duplicate
// keys are rejected at parse time.

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "infogeom/errors.hpp"
#include "infogeom/text.hpp"

namespace infogeom {

namespace detail {
inline std::string trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}
}  // namespace detail

class Config {
 public:
  static Config from_text(const std::string& text) {
    Config cfg;
    std::string section;
    size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
      size_t nl = text.find('\n', pos);
      std::string line =
          detail::trim(text.substr(pos, nl == std::string::npos ? nl : nl - pos));
      pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
      ++line_no;
      if (line.empty() || line[0] == '#' || line[0] == ';') continue;
      if (line.front() == '[') {
        if (line.back() != ']' || line.size() < 3)
          throw ConfigError("config line " + std::to_string(line_no) + ": bad section header");
        section = detail::trim(line.substr(1, line.size() - 2));
        if (section.empty())
          throw ConfigError("config line " + std::to_string(line_no) + ": empty section name");
        continue;
      }
      size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw ConfigError("config line " + std::to_string(line_no) +
                          ": expected key = value, got '" + line + "'");
      std::string key = detail::trim(line.substr(0, eq));
      std::string value = detail::trim(line.substr(eq + 1));
      if (key.empty())
        throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
      if (cfg.find(section, key))
        throw ConfigError("config line " + std::to_string(line_no) + ": duplicate key '" +
                          qualified(section, key) + "'");
      cfg.entries_.push_back({section, key, value, line_no, false});
    }
    return cfg;
  }

  static Config from_file(const std::filesystem::path& path) {
    return from_text(read_text_file(path));
  }

  bool has(const std::string& section, const std::string& key) const {
    return const_cast<Config*>(this)->find(section, key) != nullptr;
  }

  std::string get_string(const std::string& section, const std::string& key) {
    Entry* e = find(section, key);
    if (!e) throw ConfigError("missing required config key '" + qualified(section, key) + "'");
    e->consumed = true;
    return e->value;
  }

  std::string get_string_or(const std::string& section, const std::string& key,
                            const std::string& fallback) {
    Entry* e = find(section, key);
    if (!e) return fallback;
    e->consumed = true;
    return e->value;
  }

  double get_double(const std::string& section, const std::string& key) {
    return to_double(section, key, get_string(section, key));
  }

  double get_double_or(const std::string& section, const std::string& key, double fallback) {
    Entry* e = find(section, key);
    if (!e) return fallback;
    e->consumed = true;
    return to_double(section, key, e->value);
  }

  long long get_int_or(const std::string& section, const std::string& key, long long fallback) {
    Entry* e = find(section, key);
    if (!e) return fallback;
    e->consumed = true;
    long long v = 0;
    auto res = std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
    if (res.ec != std::errc() || res.ptr != e->value.data() + e->value.size())
      throw ConfigError("config key '" + qualified(section, key) + "' is not an integer: '" +
                        e->value + "'");
    return v;
  }

  std::uint64_t get_u64_or(const std::string& section, const std::string& key,
                           std::uint64_t fallback) {
    Entry* e = find(section, key);
    if (!e) return fallback;
    e->consumed = true;
    std::uint64_t v = 0;
    auto res = std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
    if (res.ec != std::errc() || res.ptr != e->value.data() + e->value.size())
      throw ConfigError("config key '" + qualified(section, key) +
                        "' is not an unsigned integer: '" + e->value + "'");
    return v;
  }

  bool get_bool_or(const std::string& section, const std::string& key, bool fallback) {
    Entry* e = find(section, key);
    if (!e) return fallback;
    e->consumed = true;
    if (e->value == "true" || e->value == "1") return true;
    if (e->value == "false" || e->value == "0") return false;
    throw ConfigError("config key '" + qualified(section, key) + "' is not a bool: '" +
                      e->value + "'");
  }

  // All remaining entries of one section, consumed; used for open-schema
  // sections like tolerance overrides.
  std::vector<std::pair<std::string, std::string>> consume_section(const std::string& section) {
    std::vector<std::pair<std::string, std::string>> out;
    for (auto& e : entries_)
      if (!e.consumed && e.section == section) {
        e.consumed = true;
        out.emplace_back(e.key, e.value);
      }
    return out;
  }

  // Strictness gate: every key present in the file must have been read.
  void require_fully_consumed() const {
    std::string unknown;
    for (const auto& e : entries_)
      if (!e.consumed) {
        if (!unknown.empty()) unknown += ", ";
        unknown += "'" + qualified(e.section, e.key) + "' (line " + std::to_string(e.line) + ")";
      }
    if (!unknown.empty()) throw ConfigError("unknown config keys: " + unknown);
  }

 private:
  struct Entry {
    std::string section, key, value;
    int line = 0;
    bool consumed = false;
  };

  static std::string qualified(const std::string& section, const std::string& key) {
    return section.empty() ? key : section + "." + key;
  }

  double to_double(const std::string& section, const std::string& key,
                   const std::string& value) const {
    try {
      return parse_double(value);
    } catch (const IoError&) {
      throw ConfigError("config key '" + qualified(section, key) + "' is not a number: '" +
                        value + "'");
    }
  }

  Entry* find(const std::string& section, const std::string& key) {
    for (auto& e : entries_)
      if (e.section == section && e.key == key) return &e;
    return nullptr;
  }

  std::vector<Entry> entries_;
};

}  // namespace infogeom
