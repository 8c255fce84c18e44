// Copyright 2026 The polabh Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef POLABH_CONFIG_HPP
#define POLABH_CONFIG_HPP

// Flat run configuration: one `dotted.key = value` per line, `#` starts a
// comment. Every key a command reads is recorded with its resolved value so
// the full configuration, defaults included, can be echoed and hashed.

#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include "polabh/errors.hpp"

namespace polabh::config {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

/// 17 significant digits, scientific notation.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

class RunConfig {
 public:
  RunConfig() = default;

  static RunConfig parse(std::string_view text, const std::string& source = "<config>") {
    RunConfig c;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const std::string body = trim(line);
      if (body.empty()) continue;
      const auto eq = body.find('=');
      if (eq == std::string::npos)
        throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
      c.set(trim(std::string_view(body).substr(0, eq)), trim(std::string_view(body).substr(eq + 1)),
            source + ":" + std::to_string(lineno));
    }
    return c;
  }

  static RunConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
  }

  /// Sets or overrides a raw value.
  void set(const std::string& key, const std::string& value, const std::string& where = "override") {
    if (key.empty()) throw ConfigError(where + ": empty key");
    for (char ch : key)
      if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '_'))
        throw ConfigError(where + ": invalid key '" + key + "'");
    raw_[key] = value;
  }

  bool contains(const std::string& key) const { return raw_.count(key) != 0; }

  double get_double(const std::string& key, double fallback) {
    const auto it = raw_.find(key);
    double v = fallback;
    if (it != raw_.end()) v = parse_double(key, it->second);
    resolved_[key] = format_double(v);
    return v;
  }

  long get_int(const std::string& key, long fallback) {
    const auto it = raw_.find(key);
    long v = fallback;
    if (it != raw_.end()) {
      const auto& s = it->second;
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ConfigError("key '" + key + "': '" + s + "' is not an integer");
    }
    resolved_[key] = std::to_string(v);
    return v;
  }

  bool get_bool(const std::string& key, bool fallback) {
    const auto it = raw_.find(key);
    bool v = fallback;
    if (it != raw_.end()) {
      if (it->second == "true") v = true;
      else if (it->second == "false") v = false;
      else throw ConfigError("key '" + key + "': expected true or false, got '" + it->second + "'");
    }
    resolved_[key] = v ? "true" : "false";
    return v;
  }

  std::string get_string(const std::string& key, const std::string& fallback) {
    const auto it = raw_.find(key);
    std::string v = it != raw_.end() ? it->second : fallback;
    resolved_[key] = v;
    return v;
  }

  std::string get_choice(const std::string& key, const std::string& fallback, const std::set<std::string>& allowed) {
    const std::string v = get_string(key, fallback);
    if (!allowed.count(v)) {
      std::string list;
      for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
      throw ConfigError("key '" + key + "': '" + v + "' is not one of {" + list + "}");
    }
    return v;
  }

  /// Throws on any key present in the input that no getter asked for.
  void reject_unknown() const {
    for (const auto& [k, v] : raw_)
      if (!resolved_.count(k)) throw ConfigError("unknown config key '" + k + "'");
  }

  /// Sorted `key = value` lines of every resolved key.
  std::string resolved_text() const {
    std::string out;
    for (const auto& [k, v] : resolved_) out += k + " = " + v + "\n";
    return out;
  }

  std::string hash() const { return hex64(fnv1a(resolved_text())); }

 private:
  static double parse_double(const std::string& key, const std::string& s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty())
      throw ConfigError("key '" + key + "': '" + s + "' is not a number");
    return v;
  }

  std::map<std::string, std::string> raw_;
  std::map<std::string, std::string> resolved_;
};

}  // namespace polabh::config

#endif  // POLABH_CONFIG_HPP
