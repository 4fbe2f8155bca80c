#include "kinktrap/errors.hpp"
#include "kinktrap/sweep.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace kinktrap;

namespace {

SweepSpec short_spec(double v_min, double v_max, double dv)
{
    SweepSpec spec;
    spec.scenario.t_max = 300.0;
    spec.v_min = v_min;
    spec.v_max = v_max;
    spec.dv = dv;
    return spec;
}

} // namespace

TEST_SUITE("sweep") {

TEST_CASE("grid size and exact grid values")
{
    SweepSpec spec;
    CHECK(spec.count() == 251);
    spec.v_min = 0.115;
    spec.v_max = 0.125;
    spec.dv = 0.0002;
    CHECK(spec.count() == 51);
    spec.v_max = 0.1251;
    CHECK(spec.count() == 51);
    for (std::size_t i = 0; i < spec.count(); ++i) CHECK(spec.v_at(i) == 0.115 + static_cast<double>(i) * 0.0002);
}

TEST_CASE("free flight sweep")
{
    SweepSpec spec = short_spec(0.1, 0.2, 0.05);
    spec.scenario.params.A = 0.0;
    spec.scenario.t_max = 5000.0;
    const auto rows = sweep(spec, 2);
    REQUIRE(rows.size() == 3);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].v0 == 0.1 + static_cast<double>(i) * 0.05);
        CHECK(rows[i].outcome == Outcome::Transmitted);
        CHECK(std::abs(rows[i].v_final - rows[i].v0) < 1e-10);
    }
}

TEST_CASE("rows are identical for any worker count")
{
    const SweepSpec spec = short_spec(0.10, 0.14, 0.002);
    const auto one = sweep(spec, 1);
    const auto four = sweep(spec, 4);
    const auto many = sweep(spec, 13);
    CHECK(one == four);
    CHECK(one == many);
    for (std::size_t i = 1; i < one.size(); ++i) CHECK(one[i].v0 > one[i - 1].v0);
}

TEST_CASE("per-point failures become Error rows")
{
    SweepSpec spec = short_spec(0.1, 0.3, 0.1);
    spec.cfg.max_steps = 1000;
    const auto rows = sweep(spec, 2);
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
        CHECK(r.outcome == Outcome::Error);
        CHECK(r.error.find("step budget") != std::string::npos);
    }
}

TEST_CASE("sweep validation")
{
    SweepSpec spec;
    spec.dv = 0.0;
    CHECK_THROWS_AS(sweep(spec), ConfigError);
    spec = {};
    spec.v_max = spec.v_min;
    CHECK_THROWS_AS(sweep(spec), ConfigError);
}

TEST_CASE("zoom: uniform interval needs no refinement")
{
    SweepSpec spec = short_spec(0.1, 0.2, 0.05);
    spec.scenario.params.A = 0.0;
    const ZoomResult z = zoom(spec, 5, 1, 2);
    CHECK(z.intervals_at(1) == 0);
    CHECK(z.rows().size() == 3);
}

TEST_CASE("zoom refines every outcome boundary and keeps shared points identical")
{
    SweepSpec spec = short_spec(0.10, 0.16, 0.01);
    spec.scenario.t_max = 1000.0;
    spec.cfg.dt = 1e-3;
    const ZoomResult z = zoom(spec, 4, 2, 2);
    const std::size_t boundaries = count_alternations(z.base);
    REQUIRE(boundaries > 0);
    CHECK(z.intervals_at(1) == boundaries);

    for (const auto& iv : z.intervals) {
        CHECK(iv.records.size() == 5);
        for (std::size_t j = 1; j < iv.records.size(); ++j) CHECK(iv.records[j].v0 > iv.records[j - 1].v0);
        CHECK(iv.records.front().outcome != iv.records.back().outcome);
    }

    // A speed present at two depths carries the same record at both.
    const auto rows = z.rows();
    for (const auto& a : rows)
        for (const auto& b : rows)
            if (a.v0 == b.v0 && a.depth != b.depth) {
                SweepRecord x = a, y = b;
                x.depth = y.depth = 0;
                CHECK(x == y);
            }
    // Recomputing a refined point reproduces it.
    const SweepRecord& probe = z.intervals.front().records[1];
    SweepRecord again = sweep_point(spec.scenario, probe.v0, spec.cfg);
    again.depth = probe.depth;
    CHECK(again == probe);

    CHECK_THROWS_AS(zoom(spec, 1, 1), ConfigError);
    CHECK_THROWS_AS(zoom(spec, 5, 0), ConfigError);
}

TEST_CASE("sensitivity: free flight is flagged as non-chaotic")
{
    Scenario sc;
    sc.params.A = 0.0;
    sc.v0 = 0.1;
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    const DivergenceReport d = sensitivity(sc, 1e-9, cfg);
    CHECK(d.degenerate);
    // Separation grows linearly: d(t) ~ sqrt(2) * delta * t.
    const double t = d.times[1000];
    CHECK(d.distances[1000] == doctest::Approx(std::sqrt(2.0) * 1e-9 * std::hypot(t, 1.0)).epsilon(1e-4));
}

TEST_CASE("sensitivity: identical launches never separate")
{
    Scenario sc;
    sc.t_max = 200.0;
    IntegratorConfig cfg;
    cfg.dt = 1e-3;
    const DivergenceReport d = sensitivity(sc, 0.0, cfg);
    CHECK(d.degenerate);
    CHECK(std::all_of(d.distances.begin(), d.distances.end(), [](double x) { return x == 0.0; }));
    CHECK_FALSE(d.t_exceeds_one.has_value());
    CHECK_THROWS_AS(sensitivity(sc, -1e-9, cfg), ConfigError);
}

TEST_CASE("sensitivity: a long in-well stay diverges exponentially")
{
    Scenario sc;
    sc.v0 = 0.05 + 36 * 0.001; // trapped on the reference grid
    sc.t_max = 1000.0;
    const DivergenceReport d = sensitivity(sc, 1e-9, IntegratorConfig{});
    CHECK_FALSE(d.degenerate);
    CHECK(d.lambda > 0.0);
    CHECK(d.max_growth > 1e4);
    CHECK(d.window_samples >= 3);
    CHECK(d.window_end > d.window_start);
}

} // TEST_SUITE
