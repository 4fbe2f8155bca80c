#pragma once

#include "kinktrap/integrator.hpp"
#include "kinktrap/scattering.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace kinktrap::cli {

using KeyValues = std::map<std::string, std::string>;

/// Every key accepted in a configuration file or as a --flag.
const std::vector<std::string>& known_keys();

/// Flat `key = value` text. Blank lines and lines starting with '#' are
/// skipped. Unknown keys, duplicates and malformed lines throw ConfigError.
KeyValues parse_config_text(std::istream& in, const std::string& origin);
KeyValues parse_config_file(const std::string& path);

/// Fully resolved run configuration. Defaults reproduce the reference
/// parameter set k=1, alpha=1, n=2, A=2, beta=1.
struct RunConfig {
    Scenario scenario;
    IntegratorConfig integrator;
    double v_min = 0.05;
    double v_max = 0.30;
    double dv = 0.001;
    unsigned workers = 0;
    std::optional<std::string> out;

    int refine = 5;
    int depth = 1;
    double seed_delta = 1e-9;
    double sample_interval = 1.0;
    long long stride = 1000;
    double horizon = 200.0;
    double amplitude = 0.05;

    /// Canonical string of a key's effective value, as it would be typed.
    std::string value_of(const std::string& key) const;
};

/// Applies defaults, then file values, then flag values (flags win).
/// center/halfwidth, when given, set v_min/v_max.
RunConfig resolve(const KeyValues& file_values, const KeyValues& flag_values);

} // namespace kinktrap::cli
