#pragma once

#include <cstdio>
#include <map>
#include <sstream>
#include <string>

#include "wavesys/errors.hpp"

// Flat `key = value` run configuration shared by the command line and config
// files. A RunConfig names one operation (command), its parameters as text,
// and the output disposition; render/parse round-trip exactly.

namespace wavesys {

struct RunConfig {
  std::string command;
  std::map<std::string, std::string> params;
  std::string output_path;
  std::string format = "csv";

  bool operator==(const RunConfig&) const = default;
};

// Canonical floating-point text: 17 significant digits, round-trips doubles.
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline std::string render_config(const RunConfig& c) {
  std::ostringstream os;
  os << "command = " << c.command << "\n";
  os << "format = " << c.format << "\n";
  if (!c.output_path.empty()) os << "output = " << c.output_path << "\n";
  for (const auto& [key, value] : c.params)
    os << key << " = " << value << "\n";
  return os.str();
}

namespace detail {
inline std::string trim(const std::string& s) {
  const std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}
}  // namespace detail

inline RunConfig parse_config_text(const std::string& text) {
  RunConfig c;
  bool has_command = false;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw DomainError("config line " + std::to_string(lineno) +
                        ": expected `key = value`");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty())
      throw DomainError("config line " + std::to_string(lineno) +
                        ": empty key");
    if (key == "command") {
      c.command = value;
      has_command = true;
    } else if (key == "format") {
      c.format = value;
    } else if (key == "output") {
      c.output_path = value;
    } else {
      if (c.params.count(key))
        throw DomainError("config line " + std::to_string(lineno) +
                          ": duplicate key `" + key + "`");
      c.params[key] = value;
    }
  }
  if (!has_command) throw DomainError("config: missing `command` key");
  if (c.format != "csv" && c.format != "json")
    throw DomainError("config: format must be csv or json");
  return c;
}

}  // namespace wavesys
