#include "kinktrap/scattering.hpp"

#include "kinktrap/errors.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace kinktrap {

namespace {

// Sparse record of R so the tail average needs O(2000) doubles per run
// regardless of run length.
class TailAverager {
public:
    TailAverager(long long expected_steps, double dt)
        : stride_(std::max<long long>(1, expected_steps / 2000)), dt_(dt)
    {
    }

    void record(long long step, double R)
    {
        if (step % stride_ == 0) checkpoints_.push_back(R);
    }

    double mean_velocity(long long final_step, double final_R, double fallback) const
    {
        if (final_step == 0) return fallback;
        const auto tail_start = static_cast<long long>(std::floor(0.9 * static_cast<double>(final_step)));
        long long idx = (tail_start + stride_ - 1) / stride_;
        if (idx * stride_ >= final_step) idx = (final_step - 1) / stride_;
        const long long from = idx * stride_;
        return (final_R - checkpoints_[static_cast<std::size_t>(idx)]) /
               (static_cast<double>(final_step - from) * dt_);
    }

private:
    long long stride_;
    double dt_;
    std::vector<double> checkpoints_;
};

} // namespace

std::string_view to_string(Outcome o)
{
    switch (o) {
    case Outcome::Transmitted: return "Transmitted";
    case Outcome::Reflected: return "Reflected";
    case Outcome::Trapped: return "Trapped";
    case Outcome::Error: return "Error";
    }
    return "Error";
}

std::optional<Outcome> parse_outcome(std::string_view s)
{
    for (Outcome o : {Outcome::Transmitted, Outcome::Reflected, Outcome::Trapped, Outcome::Error})
        if (to_string(o) == s) return o;
    return std::nullopt;
}

double Scenario::effective_separation() const
{
    return separation ? *separation : equilibrium_separation(params);
}

void Scenario::validate() const
{
    params.validate();
    if (!(v0 > 0.0) || !std::isfinite(v0)) throw ConfigError("v0 must be positive");
    if (!(launch_offset < 0.0)) throw ConfigError("launch_offset must be negative");
    if (!(exit_radius > 0.0)) throw ConfigError("exit_radius must be positive");
    if (exit_radius > std::abs(launch_offset))
        throw ConfigError("exit_radius must not exceed |launch_offset|");
    if (!(effective_separation() > 0.0)) throw ConfigError("separation must be positive");
    if (!(t_max >= 0.0) || !std::isfinite(t_max)) throw ConfigError("t_max must be non-negative");
}

State initial_state(const Scenario& sc)
{
    const double half = 0.5 * sc.effective_separation();
    return {0.0, sc.launch_offset - half, sc.v0, sc.launch_offset + half, sc.v0};
}

StopCondition scattering_stop(const Scenario& sc)
{
    return TimeLimit(sc.t_max) | ExitRadius(sc.exit_radius);
}

namespace {

template <class Observer>
OutcomeRecord run_impl(const Scenario& sc, const IntegratorConfig& cfg, Observer&& extra)
{
    sc.validate();
    cfg.validate();

    const State s0 = initial_state(sc);
    TailAverager tail(steps_for(sc.t_max, cfg.dt), cfg.dt);
    long long n = 0;
    auto observe = [&](const State& s, double e) {
        tail.record(n++, 0.5 * (s.x1 + s.x2));
        extra(s, e);
    };
    const IntegrationResult res = integrate(s0, ModelForce{sc.params, cfg.coincidence_floor}, cfg,
                                            scattering_stop(sc), observe);

    const CMState end = to_cm(res.final);
    OutcomeRecord rec;
    rec.t_end = res.final.t;
    rec.energy_drift = res.peak_energy_drift;
    rec.steps = res.steps;
    rec.mean_cm_speed_tail = tail.mean_velocity(res.steps, end.R, end.V);
    if (res.reason == StopReason::ExitRadius) {
        rec.outcome = end.V > 0.0 ? Outcome::Transmitted : Outcome::Reflected;
        rec.v_final = end.V;
    } else {
        rec.outcome = Outcome::Trapped;
        rec.v_final = 0.0;
    }
    return rec;
}

} // namespace

OutcomeRecord run_scattering(const Scenario& sc, const IntegratorConfig& cfg)
{
    return run_impl(sc, cfg, NoObserver{});
}

OutcomeRecord run_scattering(const Scenario& sc, const IntegratorConfig& cfg,
                             const std::function<void(const State&, double)>& observe)
{
    return run_impl(sc, cfg, observe);
}

} // namespace kinktrap
