#include "kinktrap/cli.hpp"

#include "config.hpp"
#include "format.hpp"
#include "kinktrap/errors.hpp"
#include "kinktrap/linearized.hpp"
#include "kinktrap/sweep.hpp"
#include "kinktrap/version.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

namespace kinktrap::cli {

namespace {

const std::vector<std::string> kModelKeys = {"k", "alpha", "n", "A", "beta"};
const std::vector<std::string> kScenarioKeys = {"launch_offset", "separation", "t_max", "exit_radius"};
const std::vector<std::string> kIntegratorKeys = {"dt", "scheme", "max_steps"};

std::vector<std::string> concat(std::initializer_list<std::vector<std::string>> parts)
{
    std::vector<std::string> out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

/// Metadata header plus CSV body, flushed to the destination in one piece.
class Report {
public:
    Report(const std::string& command, const std::vector<std::string>& keys, const RunConfig& c)
    {
        body_ << "# kinktrap-version " << kVersion << '\n';
        body_ << "# command: kinktrap " << command;
        for (const auto& k : keys) body_ << " --" << k << ' ' << c.value_of(k);
        body_ << '\n';
    }

    void meta(const std::string& key, const std::string& value)
    {
        body_ << "# " << key << " = " << value << '\n';
    }
    void meta(const std::string& key, double value) { meta(key, fmt(value)); }

    std::ostream& csv() { return body_; }

    void flush(const RunConfig& c, std::ostream& fallback) const
    {
        if (!c.out) {
            fallback << body_.str();
            return;
        }
        std::ofstream f(*c.out, std::ios::binary);
        if (!f) throw ConfigError("cannot open output file " + *c.out);
        f << body_.str();
        if (!f) throw Error("failed writing " + *c.out);
    }

private:
    std::ostringstream body_;
};

void write_sweep_rows(Report& rep, const std::vector<SweepRecord>& rows, bool with_depth)
{
    auto& os = rep.csv();
    os << "v0,outcome,v_final,t_end,energy_drift,steps" << (with_depth ? ",depth" : "") << '\n';
    for (const auto& r : rows) {
        os << fmt(r.v0) << ',' << to_string(r.outcome) << ',' << fmt(r.v_final) << ','
           << fmt(r.t_end) << ',' << fmt(r.energy_drift) << ',' << r.steps;
        if (with_depth) os << ',' << r.depth;
        os << '\n';
    }
}

void sweep_summary(Report& rep, const std::vector<SweepRecord>& rows)
{
    rep.meta("rows", fmt(static_cast<long long>(rows.size())));
    for (Outcome o : {Outcome::Transmitted, Outcome::Reflected, Outcome::Trapped, Outcome::Error}) {
        const auto n = std::count_if(rows.begin(), rows.end(), [&](const SweepRecord& r) { return r.outcome == o; });
        rep.meta(std::string("count_") + std::string(to_string(o)), fmt(static_cast<long long>(n)));
    }
    for (const auto& r : rows)
        if (r.outcome == Outcome::Error) rep.meta("error v0=" + fmt(r.v0), r.error);
}

SweepSpec sweep_spec(const RunConfig& c)
{
    SweepSpec spec;
    spec.scenario = c.scenario;
    spec.v_min = c.v_min;
    spec.v_max = c.v_max;
    spec.dv = c.dv;
    spec.cfg = c.integrator;
    spec.validate();
    return spec;
}

int cmd_simulate(const RunConfig& c, const std::vector<std::string>& keys, std::ostream& out)
{
    c.scenario.validate();
    struct Row {
        State s;
        double e;
    };
    std::vector<Row> rows;
    long long n = 0;
    Row last{};
    const OutcomeRecord rec = run_scattering(c.scenario, c.integrator, [&](const State& s, double e) {
        if (n++ % c.stride == 0) rows.push_back({s, e});
        last = {s, e};
    });
    if (rows.empty() || !(rows.back().s == last.s)) rows.push_back(last);

    Report rep("simulate", keys, c);
    rep.meta("outcome", std::string(to_string(rec.outcome)));
    rep.meta("v_final", rec.v_final);
    rep.meta("t_end", rec.t_end);
    rep.meta("steps", fmt(rec.steps));
    rep.meta("energy_drift", rec.energy_drift);
    rep.meta("mean_cm_speed_tail", rec.mean_cm_speed_tail);
    auto& os = rep.csv();
    os << "t,x1,x2,v1,v2,R,r,E\n";
    for (const auto& r : rows) {
        const CMState cm = to_cm(r.s);
        os << fmt(r.s.t) << ',' << fmt(r.s.x1) << ',' << fmt(r.s.x2) << ',' << fmt(r.s.v1) << ','
           << fmt(r.s.v2) << ',' << fmt(cm.R) << ',' << fmt(cm.r) << ',' << fmt(r.e) << '\n';
    }
    rep.flush(c, out);
    return kSuccess;
}

int cmd_sweep(const RunConfig& c, const std::vector<std::string>& keys, std::ostream& out)
{
    const SweepSpec spec = sweep_spec(c);
    const auto rows = sweep(spec, c.workers);
    Report rep("sweep", keys, c);
    sweep_summary(rep, rows);
    write_sweep_rows(rep, rows, false);
    rep.flush(c, out);
    return kSuccess;
}

int cmd_zoom(const RunConfig& c, const std::vector<std::string>& keys, std::ostream& out)
{
    const SweepSpec spec = sweep_spec(c);
    const ZoomResult z = zoom(spec, c.refine, c.depth, c.workers);
    const auto rows = z.rows();
    Report rep("zoom", keys, c);
    for (int d = 1; d <= c.depth; ++d)
        rep.meta("refined_intervals_depth_" + std::to_string(d), fmt(static_cast<long long>(z.intervals_at(d))));
    sweep_summary(rep, rows);
    write_sweep_rows(rep, rows, true);
    rep.flush(c, out);
    return kSuccess;
}

int cmd_linear_compare(const RunConfig& c, const std::vector<std::string>& keys, std::ostream& out,
                       std::ostream& err)
{
    const ModelParams& p = c.scenario.params;
    const double s_eq = in_well_equilibrium_separation(p);
    // Small CM displacement, separation 0.01 above its in-well equilibrium.
    const CMState start{0.0, c.amplitude, 0.5 * (s_eq + 0.01), 0.0, 0.0};

    std::vector<double> R, r;
    const long long expected = steps_for(c.horizon, c.integrator.dt) + 1;
    R.reserve(static_cast<std::size_t>(expected));
    r.reserve(static_cast<std::size_t>(expected));
    const auto res = integrate(from_cm(start), ModelForce{p, c.integrator.coincidence_floor}, c.integrator,
                               TimeLimit(c.horizon) | ExitRadius(c.scenario.exit_radius),
                               [&](const State& s, double) {
                                   const CMState cm = to_cm(s);
                                   R.push_back(cm.R);
                                   r.push_back(cm.r);
                               });
    if (res.reason == StopReason::ExitRadius) {
        err << "linear-compare: the pair escaped the well instead of oscillating\n";
        return kRuntimeError;
    }
    double omega_R = 0.0, omega_rel = 0.0;
    try {
        omega_R = dominant_frequency(R, c.integrator.dt);
        omega_rel = dominant_frequency(r, c.integrator.dt);
    } catch (const InsufficientOscillations& e) {
        err << "linear-compare: no oscillation to measure (nothing binds the centre of mass): "
            << e.what() << '\n';
        return kRuntimeError;
    }
    const double mean_r = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(r.size());

    Report rep("linear-compare", keys, c);
    const double r0 = equilibrium_separation(p);
    rep.meta("equilibrium_separation", r0);
    rep.meta("in_well_separation", s_eq);
    rep.meta("measured_omega_R", omega_R);
    rep.meta("measured_omega_relative", omega_rel);
    rep.meta("mean_half_separation", mean_r);
    auto& os = rep.csv();
    os << "reading,r_eq,omega_R_predicted,omega_R_measured,omega_R_rel_error,"
          "omega_eps_predicted,omega_rel_measured,omega_eps_rel_error,"
          "omega_eps2_minus_omega_R2,delta_offset_predicted,delta_offset_measured\n";
    struct Reading {
        const char* name;
        double r_eq;
        double measured_shift;
    };
    for (const Reading& rd : {Reading{"r0", r0, 2.0 * mean_r - r0}, Reading{"r0/2", 0.5 * r0, mean_r - 0.5 * r0}}) {
        const LinearizedParams lp = linearize(p, rd.r_eq);
        os << rd.name << ',' << fmt(rd.r_eq) << ',' << fmt(lp.omega_R) << ',' << fmt(omega_R) << ','
           << fmt(std::abs(omega_R - lp.omega_R) / lp.omega_R) << ',' << fmt(lp.omega_eps) << ','
           << fmt(omega_rel) << ',' << fmt(std::abs(omega_rel - lp.omega_eps) / lp.omega_eps) << ','
           << fmt(lp.omega_eps * lp.omega_eps - lp.omega_R * lp.omega_R) << ',' << fmt(lp.delta_offset)
           << ',' << fmt(rd.measured_shift) << '\n';
    }
    rep.flush(c, out);
    return kSuccess;
}

int cmd_sensitivity(const RunConfig& c, const std::vector<std::string>& keys, std::ostream& out)
{
    const DivergenceReport d = sensitivity(c.scenario, c.seed_delta, c.integrator, c.sample_interval);
    Report rep("sensitivity", keys, c);
    rep.meta("metric", DivergenceReport::metric);
    rep.meta("system_scale", d.system_scale);
    rep.meta("fit_window_opens_at_d", d.fit_low);
    rep.meta("fit_window_closes_at_d", d.fit_high);
    rep.meta("window_start", d.window_start);
    rep.meta("window_end", d.window_end);
    rep.meta("window_samples", fmt(static_cast<long long>(d.window_samples)));
    rep.meta("lambda", d.lambda);
    rep.meta("max_growth", d.max_growth);
    rep.meta("t_exceeds_one", d.t_exceeds_one ? fmt(*d.t_exceeds_one) : std::string("never"));
    rep.meta("degenerate_fit", d.degenerate ? "true" : "false");
    if (d.degenerate) rep.meta("degenerate_reason", d.degenerate_reason);
    auto& os = rep.csv();
    os << "t,d\n";
    for (std::size_t i = 0; i < d.times.size(); ++i) os << fmt(d.times[i]) << ',' << fmt(d.distances[i]) << '\n';
    rep.flush(c, out);
    return kSuccess;
}

struct CommandSpec {
    std::string name;
    std::string help;
    std::vector<std::string> keys; ///< echoed into the output header
    std::vector<std::string> extra; ///< accepted but not echoed
};

std::vector<CommandSpec> command_specs()
{
    const auto base = concat({kModelKeys, kScenarioKeys, kIntegratorKeys});
    return {
        {"simulate", "Run one scattering event and write its trajectory",
         concat({base, {"v0", "stride"}}), {"out"}},
        {"sweep", "Scatter over a velocity grid",
         concat({base, {"v_min", "v_max", "dv"}}), {"workers", "out"}},
        {"zoom", "Sweep a window and recursively refine outcome boundaries",
         concat({base, {"v_min", "v_max", "dv", "refine", "depth"}}), {"center", "halfwidth", "workers", "out"}},
        {"linear-compare", "Compare in-well oscillation frequencies with the linearized model",
         concat({kModelKeys, {"exit_radius"}, kIntegratorKeys, {"horizon", "amplitude"}}), {"out"}},
        {"sensitivity", "Measure divergence of two nearby launches",
         concat({base, {"v0", "seed_delta", "sample_interval"}}), {"out"}},
    };
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"kinktrap: scattering of a bound particle pair off a Gaussian well"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string("kinktrap ") + kVersion);

    const auto specs = command_specs();
    std::map<std::string, KeyValues> given; // subcommand -> flag values
    std::map<std::string, std::map<std::string, std::string>> storage;
    std::map<std::string, std::string> config_path;
    std::vector<std::pair<CLI::App*, const CommandSpec*>> subs;
    for (const auto& spec : specs) {
        CLI::App* sub = app.add_subcommand(spec.name, spec.help);
        auto& store = storage[spec.name];
        for (const auto& list : {spec.keys, spec.extra})
            for (const auto& key : list) sub->add_option("--" + key, store[key], key);
        sub->add_option("--config", config_path[spec.name], "flat key = value configuration file");
        subs.emplace_back(sub, &spec);
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kConfigError;
    }

    for (const auto& [sub, spec] : subs) {
        if (!sub->parsed()) continue;
        try {
            KeyValues flags;
            for (const auto& list : {spec->keys, spec->extra})
                for (const auto& key : list)
                    if (sub->get_option("--" + key)->count() > 0) flags[key] = storage[spec->name][key];
            KeyValues file;
            if (sub->get_option("--config")->count() > 0) file = parse_config_file(config_path[spec->name]);
            const RunConfig c = resolve(file, flags);
            if (spec->name == "simulate") return cmd_simulate(c, spec->keys, out);
            if (spec->name == "sweep") return cmd_sweep(c, spec->keys, out);
            if (spec->name == "zoom") return cmd_zoom(c, spec->keys, out);
            if (spec->name == "linear-compare") return cmd_linear_compare(c, spec->keys, out, err);
            return cmd_sensitivity(c, spec->keys, out);
        } catch (const ConfigError& e) {
            err << "kinktrap " << spec->name << ": " << e.what() << '\n';
            return kConfigError;
        } catch (const std::exception& e) {
            err << "kinktrap " << spec->name << ": " << e.what() << '\n';
            return kRuntimeError;
        }
    }
    return kConfigError;
}

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

} // namespace kinktrap::cli
