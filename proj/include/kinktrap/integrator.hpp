#pragma once

#include "kinktrap/errors.hpp"
#include "kinktrap/model.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string_view>
#include <utility>

namespace kinktrap {

enum class Scheme { VelocityVerlet, RK4 };

std::string_view to_string(Scheme s);
/// Parses "verlet"/"velocity-verlet" or "rk4" (case-sensitive).
std::optional<Scheme> parse_scheme(std::string_view s);

struct IntegratorConfig {
    Scheme scheme = Scheme::VelocityVerlet;
    double dt = 1e-4;
    long long max_steps = 100'000'000;
    double coincidence_floor = kCoincidenceFloor;

    void validate() const;
};

/// Declarative stop predicate. Any present bound may fire.
///   TimeLimit(t)   : t - t0 >= t_max (elapsed time since the start)
///   ExitRadius(r)  : |R| >= r while moving outward (R * V > 0)
/// Combine with operator|. max_steps in IntegratorConfig always bounds a run.
struct StopCondition {
    std::optional<double> time_limit;
    std::optional<double> exit_radius;

    bool bounded_in_time() const { return time_limit.has_value(); }
};

inline StopCondition TimeLimit(double t_max) { return {t_max, std::nullopt}; }
inline StopCondition ExitRadius(double r) { return {std::nullopt, r}; }

inline StopCondition operator|(StopCondition a, const StopCondition& b)
{
    if (b.time_limit) a.time_limit = a.time_limit ? std::min(*a.time_limit, *b.time_limit) : *b.time_limit;
    if (b.exit_radius) a.exit_radius = a.exit_radius ? std::min(*a.exit_radius, *b.exit_radius) : *b.exit_radius;
    return a;
}

enum class StopReason { TimeLimit, ExitRadius };

std::string_view to_string(StopReason r);

struct IntegrationResult {
    State final;
    StopReason reason = StopReason::TimeLimit;
    long long steps = 0;
    double initial_energy = 0.0;
    double peak_energy_drift = 0.0; ///< max |E(t) - E(0)| / |E(0)| over the run
};

namespace detail {

template <class Force>
State verlet_step(const State& s, const ForceEval& f0, ForceEval& f1, const Force& force,
                  double dt, double t_new)
{
    const double h = 0.5 * dt;
    const double u1 = s.v1 + h * f0.a1;
    const double u2 = s.v2 + h * f0.a2;
    State out;
    out.t = t_new;
    out.x1 = s.x1 + dt * u1;
    out.x2 = s.x2 + dt * u2;
    f1 = force(out.x1, out.x2);
    out.v1 = u1 + h * f1.a1;
    out.v2 = u2 + h * f1.a2;
    return out;
}

template <class Force>
State rk4_step(const State& s, const ForceEval& f0, ForceEval& f1, const Force& force,
               double dt, double t_new)
{
    const double h = 0.5 * dt;
    // k1
    const double k1x1 = s.v1, k1x2 = s.v2, k1v1 = f0.a1, k1v2 = f0.a2;
    // k2
    const double y2v1 = s.v1 + h * k1v1, y2v2 = s.v2 + h * k1v2;
    const ForceEval e2 = force(s.x1 + h * k1x1, s.x2 + h * k1x2);
    // k3
    const double y3v1 = s.v1 + h * e2.a1, y3v2 = s.v2 + h * e2.a2;
    const ForceEval e3 = force(s.x1 + h * y2v1, s.x2 + h * y2v2);
    // k4
    const double y4v1 = s.v1 + dt * e3.a1, y4v2 = s.v2 + dt * e3.a2;
    const ForceEval e4 = force(s.x1 + dt * y3v1, s.x2 + dt * y3v2);

    const double w = dt / 6.0;
    State out;
    out.t = t_new;
    out.x1 = s.x1 + w * (k1x1 + 2.0 * y2v1 + 2.0 * y3v1 + y4v1);
    out.x2 = s.x2 + w * (k1x2 + 2.0 * y2v2 + 2.0 * y3v2 + y4v2);
    out.v1 = s.v1 + w * (k1v1 + 2.0 * e2.a1 + 2.0 * e3.a1 + e4.a1);
    out.v2 = s.v2 + w * (k1v2 + 2.0 * e2.a2 + 2.0 * e3.a2 + e4.a2);
    f1 = force(out.x1, out.x2);
    return out;
}

} // namespace detail

/// Advances one trajectory step by step, caching the force evaluation at the
/// current positions so that each Verlet step costs a single evaluation.
/// Time is t0 + n * dt, never accumulated.
template <class Force = ModelForce>
class Stepper {
public:
    Stepper(const State& s, Force force, const IntegratorConfig& cfg)
        : force_(std::move(force)), cfg_(cfg), t0_(s.t), state_(s),
          eval_(force_(s.x1, s.x2))
    {
    }

    void advance()
    {
        ForceEval next;
        const double t_new = t0_ + static_cast<double>(steps_ + 1) * cfg_.dt;
        if (cfg_.scheme == Scheme::VelocityVerlet)
            state_ = detail::verlet_step(state_, eval_, next, force_, cfg_.dt, t_new);
        else
            state_ = detail::rk4_step(state_, eval_, next, force_, cfg_.dt, t_new);
        eval_ = next;
        ++steps_;
    }

    const State& state() const { return state_; }
    const ForceEval& eval() const { return eval_; }
    long long steps() const { return steps_; }
    double start_time() const { return t0_; }
    double energy() const
    {
        return 0.5 * (state_.v1 * state_.v1 + state_.v2 * state_.v2) + eval_.potential;
    }

private:
    Force force_;
    IntegratorConfig cfg_;
    double t0_;
    State state_;
    ForceEval eval_;
    long long steps_ = 0;
};

/// One dt advance under cfg.scheme. Errors: CoincidentParticles.
template <class Force>
State step(const State& s, const Force& force, const IntegratorConfig& cfg)
{
    ForceEval f0 = force(s.x1, s.x2);
    ForceEval f1;
    const double t_new = s.t + cfg.dt;
    if (cfg.scheme == Scheme::VelocityVerlet)
        return detail::verlet_step(s, f0, f1, force, cfg.dt, t_new);
    return detail::rk4_step(s, f0, f1, force, cfg.dt, t_new);
}

State step(const State& s, const ModelParams& p, const IntegratorConfig& cfg);

/// Number of steps needed to cover an elapsed time with fixed dt.
long long steps_for(double elapsed, double dt);

/// Observer that ignores every step.
struct NoObserver {
    void operator()(const State&, double /*energy*/) const {}
};

/// Steps until a stop predicate fires. The observer sees the initial state and
/// every accepted step as (state, total energy).
/// Errors: CoincidentParticles, StepBudgetExhausted.
template <class Force, class Observer = NoObserver>
IntegrationResult integrate(const State& s, const Force& force, const IntegratorConfig& cfg,
                            const StopCondition& stop, Observer&& observe = {})
{
    cfg.validate();
    Stepper<Force> stepper(s, force, cfg);
    IntegrationResult res;
    res.initial_energy = stepper.energy();
    observe(stepper.state(), res.initial_energy);

    const long long time_steps =
        stop.time_limit ? steps_for(*stop.time_limit, cfg.dt) : -1;
    const double scale = std::abs(res.initial_energy) > 0.0 ? std::abs(res.initial_energy) : 1.0;

    auto escaped = [&](const State& st) {
        if (!stop.exit_radius) return false;
        const double R = 0.5 * (st.x1 + st.x2);
        const double V = 0.5 * (st.v1 + st.v2);
        return std::abs(R) >= *stop.exit_radius && R * V > 0.0;
    };

    if (time_steps == 0) {
        res.final = stepper.state();
        res.reason = StopReason::TimeLimit;
        return res;
    }
    while (true) {
        if (stepper.steps() >= cfg.max_steps) throw StepBudgetExhausted(cfg.max_steps);
        stepper.advance();
        const double e = stepper.energy();
        const double drift = std::abs(e - res.initial_energy) / scale;
        if (drift > res.peak_energy_drift) res.peak_energy_drift = drift;
        observe(stepper.state(), e);
        if (escaped(stepper.state())) {
            res.reason = StopReason::ExitRadius;
            break;
        }
        if (time_steps > 0 && stepper.steps() >= time_steps) {
            res.reason = StopReason::TimeLimit;
            break;
        }
    }
    res.final = stepper.state();
    res.steps = stepper.steps();
    return res;
}

IntegrationResult integrate(const State& s, const ModelParams& p, const IntegratorConfig& cfg,
                            const StopCondition& stop);

} // namespace kinktrap
