#pragma once

#include "kinktrap/integrator.hpp"
#include "kinktrap/model.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace kinktrap {

/// Launch recipe: the pair starts at rest internally (w = 0) with centre of
/// mass at launch_offset moving toward the well at v0.
struct Scenario {
    ModelParams params;
    double v0 = 0.1;
    double launch_offset = -10.0;
    std::optional<double> separation; ///< defaults to equilibrium_separation(params)
    double t_max = 5000.0;
    double exit_radius = 10.0;

    double effective_separation() const;
    /// Throws ConfigError on violated invariants.
    void validate() const;
};

enum class Outcome { Transmitted, Reflected, Trapped, Error };

std::string_view to_string(Outcome o);
std::optional<Outcome> parse_outcome(std::string_view s);

struct OutcomeRecord {
    Outcome outcome = Outcome::Trapped;
    double v_final = 0.0;          ///< CM velocity at exit; 0 for Trapped
    double t_end = 0.0;
    double energy_drift = 0.0;     ///< peak relative energy drift
    double mean_cm_speed_tail = 0.0;
    long long steps = 0;
};

State initial_state(const Scenario& sc);

/// Stop condition used by run_scattering.
StopCondition scattering_stop(const Scenario& sc);

/// Integrates from initial_state until the pair escapes past exit_radius or
/// t_max elapses. Errors: CoincidentParticles, StepBudgetExhausted.
OutcomeRecord run_scattering(const Scenario& sc, const IntegratorConfig& cfg);

/// As above, also passing every state (and its total energy) to observe.
OutcomeRecord run_scattering(const Scenario& sc, const IntegratorConfig& cfg,
                             const std::function<void(const State&, double)>& observe);

} // namespace kinktrap
