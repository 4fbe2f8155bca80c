#include "kinktrap/integrator.hpp"

#include "kinktrap/errors.hpp"

#include <cmath>

namespace kinktrap {

std::string_view to_string(Scheme s)
{
    return s == Scheme::VelocityVerlet ? "verlet" : "rk4";
}

std::optional<Scheme> parse_scheme(std::string_view s)
{
    if (s == "verlet" || s == "velocity-verlet") return Scheme::VelocityVerlet;
    if (s == "rk4") return Scheme::RK4;
    return std::nullopt;
}

std::string_view to_string(StopReason r)
{
    return r == StopReason::TimeLimit ? "time-limit" : "exit-radius";
}

void IntegratorConfig::validate() const
{
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
    if (max_steps <= 0) throw ConfigError("max_steps must be positive");
    if (!(coincidence_floor >= 0.0)) throw ConfigError("coincidence_floor must be non-negative");
}

long long steps_for(double elapsed, double dt)
{
    if (!(elapsed > 0.0)) return 0;
    // Tolerate representation error so that 1.0 / 1e-3 gives 1000 steps, not 1001.
    auto n = static_cast<long long>(std::ceil(elapsed / dt - 1e-9));
    if (static_cast<double>(n) * dt < elapsed) ++n;
    return n;
}

State step(const State& s, const ModelParams& p, const IntegratorConfig& cfg)
{
    return step(s, ModelForce{p, cfg.coincidence_floor}, cfg);
}

IntegrationResult integrate(const State& s, const ModelParams& p, const IntegratorConfig& cfg,
                            const StopCondition& stop)
{
    return integrate(s, ModelForce{p, cfg.coincidence_floor}, cfg, stop);
}

} // namespace kinktrap
