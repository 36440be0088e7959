#pragma once

#include "binapprox/experiment.hpp"

#include <istream>
#include <string>

namespace binapprox {

/// Reads a flat `key = value` file. Blank lines and text after `#` are
/// ignored, list values are comma separated. Unknown keys, duplicate keys
/// and malformed values throw ConfigError with the origin and line number.
/// The result is validated before it is returned.
ExperimentConfig parse_config(std::istream& in, const std::string& origin = "<config>");

ExperimentConfig load_config(const std::string& path);

}  // namespace binapprox
