#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "trapnet/network.hpp"

namespace trapnet {

/// Flat `key = value` configuration block. Blank lines and `#` comments are
/// ignored; keys are case-sensitive.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(std::istream& in);
KeyValues read_key_values(const std::filesystem::path& path);
void write_key_values(std::ostream& out, const KeyValues& values);

/// Keys: kind, N, L, J, delta, gamma_trap, eps0.
KeyValues to_config(const NetworkSpec& spec);

/// Reads the NetworkSpec keys present in `values` on top of `defaults`.
/// Other keys are left for the caller.
NetworkSpec spec_from_config(const KeyValues& values, NetworkSpec defaults = {});

/// Shortest decimal text that round-trips to the same double.
std::string format_double(double value);

double parse_double(const std::string& text, const std::string& key);
int parse_int(const std::string& text, const std::string& key);

}  // namespace trapnet
