#pragma once

#include "kinktrap/integrator.hpp"
#include "kinktrap/scattering.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace kinktrap {

/// Velocity grid v_min + i * dv, i = 0 .. floor((v_max - v_min)/dv).
/// template.v0 is ignored.
struct SweepSpec {
    Scenario scenario;
    double v_min = 0.05;
    double v_max = 0.30;
    double dv = 0.001;
    IntegratorConfig cfg;

    void validate() const;
    std::size_t count() const;
    double v_at(std::size_t i) const { return v_min + static_cast<double>(i) * dv; }
};

struct SweepRecord {
    double v0 = 0.0;
    Outcome outcome = Outcome::Error;
    double v_final = 0.0;
    double t_end = 0.0;
    double energy_drift = 0.0;
    long long steps = 0;
    double mean_cm_speed_tail = 0.0;
    int depth = 0;
    std::string error; ///< reason, only for Outcome::Error

    friend bool operator==(const SweepRecord&, const SweepRecord&) = default;
};

/// Scatters at one speed; integrator failures become Outcome::Error rows.
SweepRecord sweep_point(const Scenario& scenario, double v0, const IntegratorConfig& cfg);

/// Number of worker threads used when 0 is requested.
unsigned default_workers();

/// One record per grid point in grid order. workers changes wall time only.
std::vector<SweepRecord> sweep(const SweepSpec& spec, unsigned workers = 0);

/// Runs sweep_point for each speed in parallel, results in input order.
std::vector<SweepRecord> sweep_points(const Scenario& scenario, const std::vector<double>& speeds,
                                      const IntegratorConfig& cfg, unsigned workers = 0);

/// Number of adjacent pairs whose outcome classes differ.
std::size_t count_alternations(const std::vector<SweepRecord>& rows);

struct ZoomInterval {
    int depth = 0;
    double dv = 0.0;
    std::vector<SweepRecord> records; ///< endpoints are the parent's records
};

struct ZoomResult {
    std::vector<SweepRecord> base;
    std::vector<ZoomInterval> intervals; ///< ordered by depth, then v

    std::size_t intervals_at(int depth) const;
    /// Every level's rows, depth-major, v0 ascending, one row per (depth, v0).
    std::vector<SweepRecord> rows() const;
};

/// Sweeps spec, then repeatedly re-sweeps every adjacent pair with differing
/// outcome classes at dv / refinement_factor, down to the given depth.
ZoomResult zoom(const SweepSpec& spec, int refinement_factor, int depth, unsigned workers = 0);

/// Refines an existing sweep instead of recomputing it.
ZoomResult zoom_from(const SweepSpec& spec, std::vector<SweepRecord> base, int refinement_factor,
                     int depth, unsigned workers = 0);

struct DivergenceReport {
    double seed_delta = 0.0;
    double sample_interval = 0.0;
    std::vector<double> times;
    std::vector<double> distances;   ///< Euclidean over (x1, x2, v1, v2)
    std::optional<double> t_exceeds_one;
    double max_growth = 0.0;         ///< max d(t) / seed_delta

    // Fit of ln d(t) = c + lambda t over [window_start, window_end].
    double system_scale = 0.0;       ///< equilibrium separation
    double fit_low = 0.0;            ///< window opens when d > fit_low
    double fit_high = 0.0;           ///< window closes when d > fit_high
    double window_start = 0.0;
    double window_end = 0.0;
    std::size_t window_samples = 0;
    double lambda = 0.0;
    bool degenerate = false;         ///< no exponential growth detected
    std::string degenerate_reason;

    static constexpr const char* metric = "euclidean(x1,x2,v1,v2), unit weights";
};

/// Integrates v0 and v0 + seed_delta side by side for sc.t_max and measures
/// their phase-space separation every sample_interval time units.
/// Throws ConfigError for seed_delta < 0.
DivergenceReport sensitivity(const Scenario& sc, double seed_delta, const IntegratorConfig& cfg,
                             double sample_interval = 1.0);

} // namespace kinktrap
