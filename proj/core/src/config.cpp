#include "trapnet/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <system_error>

#include "trapnet/errors.hpp"

namespace trapnet {
namespace {

std::string trim(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

}  // namespace

KeyValues parse_key_values(std::istream& in) {
  KeyValues values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    values[key] = value;
  }
  return values;
}

KeyValues read_key_values(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_key_values(in);
}

void write_key_values(std::ostream& out, const KeyValues& values) {
  for (const auto& [key, value] : values) out << key << " = " << value << '\n';
}

std::string format_double(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

double parse_double(const std::string& text, const std::string& key) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto result = std::from_chars(text.data(), end, value);
  if (result.ec != std::errc() || result.ptr != end) {
    throw ConfigError("key '" + key + "': cannot parse '" + text + "' as a number");
  }
  return value;
}

int parse_int(const std::string& text, const std::string& key) {
  int value = 0;
  const char* end = text.data() + text.size();
  const auto result = std::from_chars(text.data(), end, value);
  if (result.ec != std::errc() || result.ptr != end) {
    throw ConfigError("key '" + key + "': cannot parse '" + text + "' as an integer");
  }
  return value;
}

KeyValues to_config(const NetworkSpec& spec) {
  return {
      {"kind", std::string(to_string(spec.kind))},
      {"N", std::to_string(spec.branches)},
      {"L", std::to_string(spec.length)},
      {"J", format_double(spec.hopping)},
      {"delta", format_double(spec.defect)},
      {"gamma_trap", format_double(spec.trap_rate)},
      {"eps0", format_double(spec.site_energy)},
  };
}

NetworkSpec spec_from_config(const KeyValues& values, NetworkSpec defaults) {
  NetworkSpec spec = defaults;
  auto lookup = [&](const char* key) -> const std::string* {
    const auto it = values.find(key);
    return it == values.end() ? nullptr : &it->second;
  };
  if (const auto* v = lookup("kind")) spec.kind = parse_topology(*v);
  if (const auto* v = lookup("N")) spec.branches = parse_int(*v, "N");
  if (const auto* v = lookup("L")) spec.length = parse_int(*v, "L");
  if (const auto* v = lookup("J")) spec.hopping = parse_double(*v, "J");
  if (const auto* v = lookup("delta")) spec.defect = parse_double(*v, "delta");
  if (const auto* v = lookup("gamma_trap")) spec.trap_rate = parse_double(*v, "gamma_trap");
  if (const auto* v = lookup("eps0")) spec.site_energy = parse_double(*v, "eps0");
  return spec;
}

}  // namespace trapnet
