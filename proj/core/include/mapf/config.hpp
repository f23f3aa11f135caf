#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "mapf/types.hpp"

namespace mapf {

using ConfigValue = std::variant<bool, int64_t, double, std::string>;

// Flat key/value config parsed from an INI/TOML-style text: `# comments`,
// `[section]` headers, and `key = value` lines. Section names prefix the key
// as "section.key". Values are quoted strings, booleans, integers, floats,
// or bare words (kept as strings).
class ConfigMap {
 public:
  static ConfigMap parse(const std::string& text);
  static ConfigMap load(const std::string& path);

  // "key=value" as accepted on the command line; the value is typed by the
  // same rules as file values.
  void apply_override(const std::string& assignment);
  void set(const std::string& key, ConfigValue value);

  bool has(const std::string& key) const;

  std::string get_string(const std::string& key,
                         const std::string& fallback) const;
  int64_t get_int(const std::string& key, int64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  std::vector<std::string> keys() const;

  // Sorted `key = value` lines; equal configs render identically, so the
  // hash below is stable across key order and formatting noise.
  std::string canonical() const;
  uint64_t hash() const;

 private:
  std::map<std::string, ConfigValue> values_;
};

ConfigValue parse_config_value(const std::string& raw);
std::string render_config_value(const ConfigValue& v);

}  // namespace mapf
