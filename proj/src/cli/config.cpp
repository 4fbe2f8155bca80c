#include "config.hpp"

#include "format.hpp"
#include "kinktrap/errors.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace kinktrap::cli {

const std::vector<std::string>& known_keys()
{
    static const std::vector<std::string> keys = {
        "k", "alpha", "n", "A", "beta",
        "v0", "launch_offset", "separation", "t_max", "exit_radius",
        "dt", "scheme", "max_steps",
        "v_min", "v_max", "dv", "center", "halfwidth", "refine", "depth",
        "seed_delta", "sample_interval", "stride", "horizon", "amplitude",
        "workers", "out",
    };
    return keys;
}

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

bool is_known(const std::string& key)
{
    const auto& keys = known_keys();
    return std::find(keys.begin(), keys.end(), key) != keys.end();
}

template <class T>
T parse_number(const std::string& key, const std::string& text)
{
    T value{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last)
        throw ConfigError("invalid value for " + key + ": '" + text + "'");
    return value;
}

} // namespace

KeyValues parse_config_text(std::istream& in, const std::string& origin)
{
    KeyValues kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        const std::string where = origin + ":" + std::to_string(lineno);
        if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value'");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (!is_known(key)) throw ConfigError(where + ": unknown key '" + key + "'");
        if (value.empty()) throw ConfigError(where + ": missing value for '" + key + "'");
        if (!kv.emplace(key, value).second) throw ConfigError(where + ": duplicate key '" + key + "'");
    }
    return kv;
}

KeyValues parse_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    return parse_config_text(in, path);
}

RunConfig resolve(const KeyValues& file_values, const KeyValues& flag_values)
{
    KeyValues merged = file_values;
    for (const auto& [k, v] : flag_values) {
        if (!is_known(k)) throw ConfigError("unknown key '" + k + "'");
        merged[k] = v;
    }

    RunConfig c;
    auto num = [&](const char* key, auto& target) {
        const auto it = merged.find(key);
        if (it != merged.end())
            target = parse_number<std::remove_reference_t<decltype(target)>>(key, it->second);
    };
    ModelParams& p = c.scenario.params;
    num("k", p.k);
    num("alpha", p.alpha);
    num("n", p.n);
    num("A", p.A);
    num("beta", p.beta);
    num("v0", c.scenario.v0);
    num("launch_offset", c.scenario.launch_offset);
    num("t_max", c.scenario.t_max);
    num("exit_radius", c.scenario.exit_radius);
    if (auto it = merged.find("separation"); it != merged.end() && it->second != "auto")
        c.scenario.separation = parse_number<double>("separation", it->second);
    num("dt", c.integrator.dt);
    num("max_steps", c.integrator.max_steps);
    if (auto it = merged.find("scheme"); it != merged.end()) {
        const auto s = parse_scheme(it->second);
        if (!s) throw ConfigError("scheme must be 'verlet' or 'rk4', got '" + it->second + "'");
        c.integrator.scheme = *s;
    }
    num("v_min", c.v_min);
    num("v_max", c.v_max);
    num("dv", c.dv);
    const bool has_center = merged.count("center") != 0;
    const bool has_halfwidth = merged.count("halfwidth") != 0;
    if (has_center != has_halfwidth) throw ConfigError("center and halfwidth must be given together");
    if (has_center) {
        double center = 0.0, halfwidth = 0.0;
        num("center", center);
        num("halfwidth", halfwidth);
        if (!(halfwidth > 0.0)) throw ConfigError("halfwidth must be positive");
        c.v_min = center - halfwidth;
        c.v_max = center + halfwidth;
    }
    num("refine", c.refine);
    num("depth", c.depth);
    num("seed_delta", c.seed_delta);
    num("sample_interval", c.sample_interval);
    num("stride", c.stride);
    num("horizon", c.horizon);
    num("amplitude", c.amplitude);
    num("workers", c.workers);
    if (auto it = merged.find("out"); it != merged.end()) c.out = it->second;

    if (c.stride < 1) throw ConfigError("stride must be at least 1");
    if (!(c.horizon > 0.0)) throw ConfigError("horizon must be positive");
    c.scenario.params.validate();
    c.integrator.validate();
    return c;
}

std::string RunConfig::value_of(const std::string& key) const
{
    const ModelParams& p = scenario.params;
    if (key == "k") return fmt(p.k);
    if (key == "alpha") return fmt(p.alpha);
    if (key == "n") return fmt(static_cast<long long>(p.n));
    if (key == "A") return fmt(p.A);
    if (key == "beta") return fmt(p.beta);
    if (key == "v0") return fmt(scenario.v0);
    if (key == "launch_offset") return fmt(scenario.launch_offset);
    if (key == "separation") return scenario.separation ? fmt(*scenario.separation) : "auto";
    if (key == "t_max") return fmt(scenario.t_max);
    if (key == "exit_radius") return fmt(scenario.exit_radius);
    if (key == "dt") return fmt(integrator.dt);
    if (key == "scheme") return std::string(to_string(integrator.scheme));
    if (key == "max_steps") return fmt(integrator.max_steps);
    if (key == "v_min") return fmt(v_min);
    if (key == "v_max") return fmt(v_max);
    if (key == "dv") return fmt(dv);
    if (key == "refine") return fmt(static_cast<long long>(refine));
    if (key == "depth") return fmt(static_cast<long long>(depth));
    if (key == "seed_delta") return fmt(seed_delta);
    if (key == "sample_interval") return fmt(sample_interval);
    if (key == "stride") return fmt(stride);
    if (key == "horizon") return fmt(horizon);
    if (key == "amplitude") return fmt(amplitude);
    if (key == "workers") return fmt(static_cast<long long>(workers));
    if (key == "out") return out.value_or("-");
    throw ConfigError("unknown key '" + key + "'");
}

} // namespace kinktrap::cli
