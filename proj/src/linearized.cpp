#include "kinktrap/linearized.hpp"

#include "kinktrap/errors.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

namespace kinktrap {

Frequencies linearized_frequencies(const ModelParams& p, double r_eq)
{
    const double well = 2.0 * p.A * p.beta * std::exp(-p.beta * r_eq * r_eq);
    return {std::sqrt(well), std::sqrt(2.0 * p.k + well)};
}

DeltaOffset delta_offset(const ModelParams& p, double r_eq)
{
    if (p.A == 0.0) return {0.0, true};
    return {-r_eq / (1.0 + p.k / (p.A * p.beta) * std::exp(p.beta * r_eq * r_eq)), false};
}

LinearizedParams linearize(const ModelParams& p, double r_eq)
{
    const Frequencies f = linearized_frequencies(p, r_eq);
    return {f.omega_R, f.omega_eps, delta_offset(p, r_eq).value, r_eq};
}

LinearPoint closed_form_trajectory(const CMState& init, const LinearizedParams& lp, double t)
{
    LinearPoint out;
    if (lp.omega_R > 0.0) {
        const double ph = lp.omega_R * t;
        out.R = init.R * std::cos(ph) + init.V / lp.omega_R * std::sin(ph);
    } else {
        out.R = init.R + init.V * t;
    }

    // delta = offset + eps0 cos + (eps0'/w) sin with eps0 = d0 - offset,
    // regrouped so that t = 0 reproduces d0 exactly.
    const double d0 = init.r - lp.r_eq;
    const double ph = lp.omega_eps * t;
    const double c = std::cos(ph);
    out.delta = d0 * c + lp.delta_offset * (1.0 - c) + init.w / lp.omega_eps * std::sin(ph);
    return out;
}

double in_well_equilibrium_separation(const ModelParams& p)
{
    // Outward force on the right particle at x2 = h, x1 = -h. Positive for
    // small h (repulsion wins), non-positive at h = r0/2 for A >= 0.
    auto force = [&](double h) {
        const double s = 2.0 * h;
        return -p.k * s + p.n * p.alpha * s / std::pow(s, p.n + 2) + external_force(h, p);
    };
    double hi = 0.5 * equilibrium_separation(p);
    if (force(hi) >= 0.0) return 2.0 * hi;
    double lo = hi;
    while (force(lo) <= 0.0) lo *= 0.5;
    for (int i = 0; i < 200 && hi - lo > 1e-15 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (force(mid) > 0.0 ? lo : hi) = mid;
    }
    return lo + hi; // 2 * midpoint
}

namespace {

std::vector<double> mean_crossing_times(std::span<const double> x, double dt)
{
    std::vector<double> times;
    if (x.size() < 2) return times;
    const double n = static_cast<double>(x.size());
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double var = 0.0;
    for (double v : x) var += (v - mean) * (v - mean);
    // Hysteresis band: a crossing counts once the signal clears +-band on the
    // other side, which keeps sample noise near the mean from adding crossings.
    const double band = 0.1 * std::sqrt(var / n);

    int side = 0;           // -1 below, +1 above, 0 not yet known
    double last_cross = -1; // time of the latest raw sign change
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - mean;
        if (i > 0) {
            const double p = x[i - 1] - mean;
            if ((p <= 0.0 && d > 0.0) || (p >= 0.0 && d < 0.0)) {
                const double frac = p / (p - d);
                last_cross = (static_cast<double>(i - 1) + frac) * dt;
            }
        }
        const int now = d > band ? 1 : (d < -band ? -1 : 0);
        if (now == 0 || now == side) continue;
        if (side != 0) times.push_back(last_cross);
        side = now;
    }
    return times;
}

} // namespace

std::size_t count_mean_crossings(std::span<const double> samples)
{
    return mean_crossing_times(samples, 1.0).size();
}

double dominant_frequency(std::span<const double> samples, double dt)
{
    const std::vector<double> t = mean_crossing_times(samples, dt);
    if (t.size() < 4) throw InsufficientOscillations(t.size());
    const double half_period = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    return std::numbers::pi / half_period;
}

} // namespace kinktrap
