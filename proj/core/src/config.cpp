#include "mapf/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace mapf {
namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Cuts an unquoted # comment; a # inside a quoted string stays.
std::string strip_comment(const std::string& line) {
  bool in_quote = false;
  for (size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (c == '"' && (i == 0 || line[i - 1] != '\\')) in_quote = !in_quote;
    if (c == '#' && !in_quote) return line.substr(0, i);
  }
  return line;
}

std::string unquote(const std::string& raw) {
  std::string out;
  out.reserve(raw.size());
  for (size_t i = 1; i + 1 < raw.size(); ++i) {
    char c = raw[i];
    if (c == '\\' && i + 2 < raw.size()) {
      char n = raw[++i];
      switch (n) {
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        default:
          throw SpecInvalidError(std::string("bad escape \\") + n +
                                 " in config string");
      }
    } else {
      out += c;
    }
  }
  return out;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

bool valid_key(const std::string& key) {
  if (key.empty()) return false;
  for (char c : key)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.' &&
        c != '-')
      return false;
  return true;
}

}  // namespace

ConfigValue parse_config_value(const std::string& raw_in) {
  std::string raw = trim(raw_in);
  if (raw.empty()) throw SpecInvalidError("empty config value");

  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"')
      throw SpecInvalidError("unterminated string: " + raw);
    return unquote(raw);
  }
  if (raw == "true") return true;
  if (raw == "false") return false;

  errno = 0;
  char* end = nullptr;
  long long as_int = std::strtoll(raw.c_str(), &end, 10);
  if (errno == 0 && end && *end == '\0')
    return static_cast<int64_t>(as_int);

  errno = 0;
  double as_double = std::strtod(raw.c_str(), &end);
  if (errno == 0 && end && *end == '\0') return as_double;

  return raw;  // bare word
}

std::string render_config_value(const ConfigValue& v) {
  if (std::holds_alternative<bool>(v))
    return std::get<bool>(v) ? "true" : "false";
  if (std::holds_alternative<int64_t>(v))
    return std::to_string(std::get<int64_t>(v));
  if (std::holds_alternative<double>(v)) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", std::get<double>(v));
    std::string s = buf;
    if (s.find_first_of(".eEnif") == std::string::npos) s += ".0";
    return s;
  }
  return quote(std::get<std::string>(v));
}

ConfigMap ConfigMap::parse(const std::string& text) {
  ConfigMap cfg;
  std::istringstream in(text);
  std::string line, section;
  size_t lineno = 0;

  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw SpecInvalidError("config line " + std::to_string(lineno) +
                               ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!valid_key(section))
        throw SpecInvalidError("config line " + std::to_string(lineno) +
                               ": bad section name");
      continue;
    }

    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw SpecInvalidError("config line " + std::to_string(lineno) +
                             ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    if (!valid_key(key))
      throw SpecInvalidError("config line " + std::to_string(lineno) +
                             ": bad key");
    if (!section.empty()) key = section + "." + key;
    cfg.values_[key] = parse_config_value(line.substr(eq + 1));
  }
  return cfg;
}

ConfigMap ConfigMap::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open config: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

void ConfigMap::apply_override(const std::string& assignment) {
  size_t eq = assignment.find('=');
  if (eq == std::string::npos)
    throw SpecInvalidError("override must be key=value: " + assignment);
  std::string key = trim(assignment.substr(0, eq));
  if (!valid_key(key))
    throw SpecInvalidError("bad override key: " + assignment);
  values_[key] = parse_config_value(assignment.substr(eq + 1));
}

void ConfigMap::set(const std::string& key, ConfigValue value) {
  if (!valid_key(key)) throw SpecInvalidError("bad config key: " + key);
  values_[key] = std::move(value);
}

bool ConfigMap::has(const std::string& key) const {
  return values_.count(key) != 0;
}

std::string ConfigMap::get_string(const std::string& key,
                                  const std::string& fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (!std::holds_alternative<std::string>(it->second))
    throw SpecInvalidError("config key " + key + " is not a string");
  return std::get<std::string>(it->second);
}

int64_t ConfigMap::get_int(const std::string& key, int64_t fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (!std::holds_alternative<int64_t>(it->second))
    throw SpecInvalidError("config key " + key + " is not an integer");
  return std::get<int64_t>(it->second);
}

double ConfigMap::get_double(const std::string& key, double fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (std::holds_alternative<int64_t>(it->second))
    return static_cast<double>(std::get<int64_t>(it->second));
  if (!std::holds_alternative<double>(it->second))
    throw SpecInvalidError("config key " + key + " is not a number");
  return std::get<double>(it->second);
}

bool ConfigMap::get_bool(const std::string& key, bool fallback) const {
  auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  if (!std::holds_alternative<bool>(it->second))
    throw SpecInvalidError("config key " + key + " is not a boolean");
  return std::get<bool>(it->second);
}

std::vector<std::string> ConfigMap::keys() const {
  std::vector<std::string> out;
  out.reserve(values_.size());
  for (const auto& [k, v] : values_) out.push_back(k);
  return out;
}

std::string ConfigMap::canonical() const {
  std::string out;
  for (const auto& [k, v] : values_) {
    out += k;
    out += " = ";
    out += render_config_value(v);
    out += '\n';
  }
  return out;
}

uint64_t ConfigMap::hash() const { return fnv1a_str(canonical()); }

}  // namespace mapf
