#include "kinktrap/sweep.hpp"

#include "kinktrap/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <thread>

namespace kinktrap {

namespace {

template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn)
{
    if (workers == 0) workers = default_workers();
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(n, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) fn(i);
        });
    }
}

} // namespace

unsigned default_workers()
{
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

void SweepSpec::validate() const
{
    if (!(dv > 0.0) || !std::isfinite(dv)) throw ConfigError("dv must be positive");
    if (!(v_min < v_max)) throw ConfigError("v_min must be less than v_max");
    if (!(v_min > 0.0)) throw ConfigError("v_min must be positive");
    Scenario probe = scenario;
    probe.v0 = v_min;
    probe.validate();
    cfg.validate();
}

std::size_t SweepSpec::count() const
{
    // A small tolerance keeps v_max on the grid when (v_max - v_min)/dv is an
    // integer up to representation error, e.g. (0.30 - 0.05)/0.001.
    return static_cast<std::size_t>(std::floor((v_max - v_min) / dv + 1e-9)) + 1;
}

SweepRecord sweep_point(const Scenario& scenario, double v0, const IntegratorConfig& cfg)
{
    SweepRecord row;
    row.v0 = v0;
    Scenario sc = scenario;
    sc.v0 = v0;
    try {
        const OutcomeRecord r = run_scattering(sc, cfg);
        row.outcome = r.outcome;
        row.v_final = r.v_final;
        row.t_end = r.t_end;
        row.energy_drift = r.energy_drift;
        row.steps = r.steps;
        row.mean_cm_speed_tail = r.mean_cm_speed_tail;
    } catch (const std::exception& e) {
        row.outcome = Outcome::Error;
        row.error = e.what();
    }
    return row;
}

std::vector<SweepRecord> sweep_points(const Scenario& scenario, const std::vector<double>& speeds,
                                      const IntegratorConfig& cfg, unsigned workers)
{
    std::vector<SweepRecord> out(speeds.size());
    parallel_for(speeds.size(), workers,
                 [&](std::size_t i) { out[i] = sweep_point(scenario, speeds[i], cfg); });
    return out;
}

std::vector<SweepRecord> sweep(const SweepSpec& spec, unsigned workers)
{
    spec.validate();
    std::vector<double> speeds(spec.count());
    for (std::size_t i = 0; i < speeds.size(); ++i) speeds[i] = spec.v_at(i);
    return sweep_points(spec.scenario, speeds, spec.cfg, workers);
}

std::size_t count_alternations(const std::vector<SweepRecord>& rows)
{
    std::size_t n = 0;
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (rows[i].outcome != rows[i - 1].outcome) ++n;
    return n;
}

std::size_t ZoomResult::intervals_at(int depth) const
{
    return static_cast<std::size_t>(std::count_if(
        intervals.begin(), intervals.end(), [&](const ZoomInterval& z) { return z.depth == depth; }));
}

std::vector<SweepRecord> ZoomResult::rows() const
{
    std::vector<SweepRecord> out = base;
    for (auto& r : out) r.depth = 0;
    std::map<std::pair<int, double>, SweepRecord> refined;
    for (const auto& iv : intervals)
        for (const auto& r : iv.records) refined.emplace(std::pair{iv.depth, r.v0}, r);
    for (auto& [key, r] : refined) {
        r.depth = key.first;
        out.push_back(r);
    }
    return out;
}

namespace {

void check_zoom_args(int refinement_factor, int depth)
{
    if (refinement_factor < 2) throw ConfigError("refinement factor must be at least 2");
    if (depth < 1) throw ConfigError("zoom depth must be at least 1");
}

} // namespace

ZoomResult zoom(const SweepSpec& spec, int refinement_factor, int depth, unsigned workers)
{
    check_zoom_args(refinement_factor, depth);
    return zoom_from(spec, sweep(spec, workers), refinement_factor, depth, workers);
}

ZoomResult zoom_from(const SweepSpec& spec, std::vector<SweepRecord> base, int refinement_factor,
                     int depth, unsigned workers)
{
    check_zoom_args(refinement_factor, depth);

    ZoomResult result;
    result.base = std::move(base);

    // Parent sequences scanned at each level: the base sweep first, then the
    // intervals created by the previous level (by index, since the vector grows).
    constexpr std::size_t kBase = static_cast<std::size_t>(-1);
    std::vector<std::size_t> parents{kBase};
    for (int d = 1; d <= depth && !parents.empty(); ++d) {
        std::vector<ZoomInterval> level;
        std::vector<double> speeds;
        std::vector<std::pair<std::size_t, std::size_t>> slots; // (interval, index)
        for (std::size_t p : parents) {
            const auto& rows = p == kBase ? result.base : result.intervals[p].records;
            const double sub = (p == kBase ? spec.dv : result.intervals[p].dv) / refinement_factor;
            for (std::size_t i = 1; i < rows.size(); ++i) {
                const SweepRecord& lo = rows[i - 1];
                const SweepRecord& hi = rows[i];
                if (lo.outcome == hi.outcome) continue;
                ZoomInterval iv;
                iv.depth = d;
                iv.dv = sub;
                iv.records.resize(static_cast<std::size_t>(refinement_factor) + 1);
                iv.records.front() = lo;
                iv.records.back() = hi;
                for (int j = 1; j < refinement_factor; ++j) {
                    speeds.push_back(lo.v0 + j * sub);
                    slots.emplace_back(level.size(), static_cast<std::size_t>(j));
                }
                level.push_back(std::move(iv));
            }
        }
        const std::vector<SweepRecord> computed = sweep_points(spec.scenario, speeds, spec.cfg, workers);
        for (std::size_t k = 0; k < computed.size(); ++k)
            level[slots[k].first].records[slots[k].second] = computed[k];

        parents.clear();
        for (auto& iv : level) {
            for (auto& r : iv.records) r.depth = d;
            parents.push_back(result.intervals.size());
            result.intervals.push_back(std::move(iv));
        }
    }
    return result;
}

namespace {

struct LineFit {
    double slope = 0.0;
    double residual = 0.0; ///< sum of squared residuals
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = y[i] - (my + f.slope * (x[i] - mx));
        f.residual += e * e;
    }
    return f;
}

double phase_distance(const State& a, const State& b)
{
    const double d1 = a.x1 - b.x1, d2 = a.x2 - b.x2, d3 = a.v1 - b.v1, d4 = a.v2 - b.v2;
    return std::sqrt(d1 * d1 + d2 * d2 + d3 * d3 + d4 * d4);
}

} // namespace

DivergenceReport sensitivity(const Scenario& sc, double seed_delta, const IntegratorConfig& cfg,
                             double sample_interval)
{
    if (!(seed_delta >= 0.0) || !std::isfinite(seed_delta))
        throw ConfigError("seed_delta must be non-negative");
    if (!(sample_interval > 0.0)) throw ConfigError("sample_interval must be positive");
    sc.validate();
    cfg.validate();

    Scenario other = sc;
    other.v0 = sc.v0 + seed_delta;
    const ModelForce force{sc.params, cfg.coincidence_floor};
    Stepper<ModelForce> a(initial_state(sc), force, cfg);
    Stepper<ModelForce> b(initial_state(other), force, cfg);

    DivergenceReport rep;
    rep.seed_delta = seed_delta;
    rep.sample_interval = sample_interval;
    rep.system_scale = equilibrium_separation(sc.params);
    rep.fit_low = 10.0 * seed_delta;
    rep.fit_high = 1e-2 * rep.system_scale;

    const long long stride = std::max<long long>(1, std::llround(sample_interval / cfg.dt));
    const long long total = steps_for(sc.t_max, cfg.dt);
    auto sample = [&] {
        const double d = phase_distance(a.state(), b.state());
        rep.times.push_back(a.state().t);
        rep.distances.push_back(d);
        if (!rep.t_exceeds_one && d > 1.0) rep.t_exceeds_one = a.state().t;
    };
    sample();
    while (a.steps() < total) {
        a.advance();
        b.advance();
        if (a.steps() % stride == 0 || a.steps() == total) sample();
    }

    const double peak = *std::max_element(rep.distances.begin(), rep.distances.end());
    rep.max_growth = seed_delta > 0.0 ? peak / seed_delta : 0.0;

    auto flag = [&](std::string why) {
        rep.degenerate = true;
        rep.degenerate_reason = std::move(why);
        return rep;
    };
    if (seed_delta == 0.0) return flag("seed_delta is zero; trajectories coincide");
    if (peak < 100.0 * rep.distances.front())
        return flag("d(t) never grew by 100x within t_max");

    std::size_t lo = 0;
    while (lo < rep.distances.size() && !(rep.distances[lo] > rep.fit_low)) ++lo;
    std::size_t hi = lo;
    while (hi < rep.distances.size() && !(rep.distances[hi] > rep.fit_high)) ++hi;
    if (hi == rep.distances.size()) --hi;
    if (lo >= rep.distances.size() || hi < lo + 2)
        return flag("growth window holds fewer than 3 samples");

    std::vector<double> t, lt, ld;
    for (std::size_t i = lo; i <= hi; ++i) {
        t.push_back(rep.times[i]);
        lt.push_back(std::log(std::max(rep.times[i], sample_interval)));
        ld.push_back(std::log(rep.distances[i]));
    }
    rep.window_start = rep.times[lo];
    rep.window_end = rep.times[hi];
    rep.window_samples = t.size();
    const LineFit expo = least_squares(t, ld);
    const LineFit power = least_squares(lt, ld);
    rep.lambda = expo.slope;
    if (!(expo.slope > 0.0)) return flag("fitted exponent is not positive");
    if (power.residual <= expo.residual)
        return flag("growth is algebraic: ln d fits ln t better than t");
    return rep;
}

} // namespace kinktrap
