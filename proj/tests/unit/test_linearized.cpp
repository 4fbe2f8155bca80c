#include "kinktrap/errors.hpp"
#include "kinktrap/integrator.hpp"
#include "kinktrap/linearized.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

using namespace kinktrap;

namespace {

struct InWellRun {
    std::vector<double> R, r;
    double dt;
};

// Pair at the well centre at rest, separation 0.01 above its in-well
// equilibrium, centre of mass displaced by `amplitude`.
InWellRun run_in_well(const ModelParams& p, double amplitude, double horizon)
{
    IntegratorConfig cfg;
    const double s_eq = in_well_equilibrium_separation(p);
    const CMState start{0.0, amplitude, 0.5 * (s_eq + 0.01), 0.0, 0.0};
    InWellRun out{{}, {}, cfg.dt};
    integrate(from_cm(start), ModelForce{p}, cfg, TimeLimit(horizon), [&](const State& s, double) {
        const CMState c = to_cm(s);
        out.R.push_back(c.R);
        out.r.push_back(c.r);
    });
    return out;
}

} // namespace

TEST_SUITE("linearized") {

TEST_CASE("closed-form frequencies for the reference parameters")
{
    ModelParams p;
    const double r0 = std::pow(2.0, 0.25);
    const Frequencies f = linearized_frequencies(p, r0);
    // mpmath, 30 digits: sqrt(4 e^-sqrt2), sqrt(2 + 4 e^-sqrt2)
    CHECK(f.omega_R == doctest::Approx(0.98613738279047957569).epsilon(1e-14));
    CHECK(f.omega_eps == doctest::Approx(1.72408437662918830918).epsilon(1e-14));

    p.A = 0.0;
    const Frequencies g = linearized_frequencies(p, r0);
    CHECK(g.omega_R == 0.0);
    CHECK(g.omega_eps == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("omega_eps^2 - omega_R^2 = 2k for every parameter set")
{
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.05, 5.0);
    for (int i = 0; i < 2000; ++i) {
        ModelParams p;
        p.k = u(rng);
        p.A = u(rng);
        p.beta = u(rng);
        const Frequencies f = linearized_frequencies(p, u(rng));
        const double lhs = f.omega_eps * f.omega_eps - f.omega_R * f.omega_R;
        // Squares of rounded square roots: a few ulps of omega_eps^2.
        CHECK(std::abs(lhs - 2.0 * p.k) <= 8.0 * std::numeric_limits<double>::epsilon() * f.omega_eps * f.omega_eps);
        CHECK(f.omega_eps > f.omega_R);
    }
}

TEST_CASE("delta offset")
{
    ModelParams p;
    const double r0 = std::pow(2.0, 0.25);
    const DeltaOffset d = delta_offset(p, r0);
    CHECK_FALSE(d.well_absent);
    CHECK(d.value == doctest::Approx(-0.38905886110278293026).epsilon(1e-14));

    p.A = 1e12;
    CHECK(delta_offset(p, r0).value == doctest::Approx(-r0).epsilon(1e-9));
    p.A = 2.0;
    p.k = 1e6;
    CHECK(std::abs(delta_offset(p, r0).value) < 1e-5);
    p.A = 0.0;
    CHECK(delta_offset(p, r0).well_absent);
    CHECK(delta_offset(p, r0).value == 0.0);
}

TEST_CASE("delta offset is negative and increases toward zero with k")
{
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.05, 4.0);
    for (int i = 0; i < 500; ++i) {
        ModelParams p;
        p.A = u(rng);
        p.beta = u(rng);
        const double r_eq = u(rng);
        double prev = -INFINITY;
        for (double k : {0.1, 0.5, 1.0, 2.0, 8.0}) {
            p.k = k;
            const double v = delta_offset(p, r_eq).value;
            CHECK(v < 0.0);
            CHECK(v > prev);
            prev = v;
        }
    }
}

TEST_CASE("closed-form trajectory")
{
    ModelParams p;
    const LinearizedParams lp = linearize(p, equilibrium_separation(p));
    const CMState init{0.0, 0.07, lp.r_eq + 0.013, 0.02, -0.004};
    const LinearPoint at0 = closed_form_trajectory(init, lp, 0.0);
    CHECK(at0.R == init.R);
    CHECK(at0.delta == init.r - lp.r_eq);

    const CMState still{0.0, 0.07, lp.r_eq + lp.delta_offset, 0.0, 0.0};
    const double period = 2.0 * std::numbers::pi / lp.omega_R;
    CHECK(closed_form_trajectory(still, lp, period).R == doctest::Approx(still.R).epsilon(1e-12));
    // Sitting on the shifted equilibrium, delta does not move.
    CHECK(closed_form_trajectory(still, lp, 3.7).delta == doctest::Approx(lp.delta_offset).epsilon(1e-12));

    const double e0 = 0.5 * init.V * init.V + 0.5 * lp.omega_R * lp.omega_R * init.R * init.R;
    for (double t : {0.3, 1.1, 4.0, 17.5}) {
        const double h = 1e-6;
        const double R = closed_form_trajectory(init, lp, t).R;
        const double V = (closed_form_trajectory(init, lp, t + h).R - closed_form_trajectory(init, lp, t - h).R) / (2 * h);
        CHECK(0.5 * V * V + 0.5 * lp.omega_R * lp.omega_R * R * R == doctest::Approx(e0).epsilon(1e-8));
    }
}

TEST_CASE("dominant frequency of synthetic signals")
{
    const double dt = 1e-3;
    std::vector<double> x;
    for (int i = 0; i < 20000; ++i) x.push_back(std::sin(1.5 * i * dt));
    CHECK(std::abs(dominant_frequency(x, dt) - 1.5) < 1e-3);

    std::vector<double> flat(5000, 0.3);
    CHECK_THROWS_AS(dominant_frequency(flat, dt), InsufficientOscillations);

    std::mt19937_64 rng(29);
    std::normal_distribution<double> noise(0.0, 0.01);
    std::vector<double> noisy = x;
    for (double& v : noisy) v += noise(rng);
    CHECK(std::abs(dominant_frequency(noisy, dt) - 1.5) < 1e-2);

    // Two and a half periods give five crossings; one and a half give three.
    std::vector<double> few;
    for (int i = 0; i < 3000; ++i) few.push_back(std::sin(2.0 * std::numbers::pi * i / 1000.0 + 0.3));
    CHECK_THROWS_AS(dominant_frequency(std::span(few).first(1600), dt), InsufficientOscillations);
    CHECK_NOTHROW(dominant_frequency(few, dt));
}

TEST_CASE("in-well equilibrium separation balances all forces")
{
    ModelParams p;
    const double s = in_well_equilibrium_separation(p);
    CHECK(s < equilibrium_separation(p));
    const Accelerations a = accelerations({0.0, -s / 2, 0.0, s / 2, 0.0}, p);
    CHECK(std::abs(a.a1) < 1e-12);
    CHECK(std::abs(a.a2) < 1e-12);

    p.A = 0.0;
    CHECK(in_well_equilibrium_separation(p) == doctest::Approx(equilibrium_separation(p)).epsilon(1e-12));
}

TEST_CASE("full simulation: small CM oscillation frequency")
{
    // The exact small-oscillation frequency of the full model about the
    // in-well equilibrium (half separation h) is
    //   sqrt(2 A beta e^{-beta h^2} (1 - 2 beta h^2)),
    // which the linearized formula approximates when beta h^2 << 1.
    ModelParams p;
    const InWellRun run = run_in_well(p, 0.02, 200.0);
    const double h = 0.5 * in_well_equilibrium_separation(p);
    const double exact = std::sqrt(2 * p.A * p.beta * std::exp(-p.beta * h * h) * (1 - 2 * p.beta * h * h));
    CHECK(dominant_frequency(run.R, run.dt) == doctest::Approx(exact).epsilon(2e-3));

    // Shrinkage inside the well has the sign and order of magnitude of the
    // linearized offset (r_eq = r0 reading: full separation).
    const double r0 = equilibrium_separation(p);
    const double measured = in_well_equilibrium_separation(p) - r0;
    const double predicted = delta_offset(p, r0).value;
    CHECK(measured < 0.0);
    CHECK(measured / predicted > 0.1);
    CHECK(measured / predicted < 10.0);

    // Wide well, beta r0^2 << 1: the linearized CM frequency is accurate.
    ModelParams wide;
    wide.beta = 0.05;
    const InWellRun w = run_in_well(wide, 0.05, 400.0);
    const double predicted_wide = linearized_frequencies(wide, 0.5 * equilibrium_separation(wide)).omega_R;
    CHECK(dominant_frequency(w.R, w.dt) == doctest::Approx(predicted_wide).epsilon(0.1));
}

// The linearized relative-mode equation keeps the spring and the well but
// drops the curvature of the repulsion, n(n+1) alpha / s^(n+2), which at
// equilibrium equals (n+1) k. The measured relative frequency is therefore
// about twice omega_eps for any parameter set, and this property cannot hold.
TEST_CASE("full simulation: relative frequency matches omega_eps within 10%" * doctest::should_fail())
{
    ModelParams p;
    const InWellRun run = run_in_well(p, 0.0, 200.0);
    const double measured = dominant_frequency(run.r, run.dt);
    const double r0 = equilibrium_separation(p);
    const bool either = std::abs(measured / linearized_frequencies(p, r0).omega_eps - 1.0) < 0.1 ||
                        std::abs(measured / linearized_frequencies(p, 0.5 * r0).omega_eps - 1.0) < 0.1;
    CHECK(either);
}

} // TEST_SUITE
