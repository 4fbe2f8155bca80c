#include "kinktrap/model.hpp"

#include "kinktrap/errors.hpp"

#include <cmath>

namespace kinktrap {

namespace {

double ipow(double x, int n)
{
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

double checked_distance(double d, double floor)
{
    const double ad = std::abs(d);
    if (!(ad >= floor)) throw CoincidentParticles(ad, floor);
    return ad;
}

} // namespace

void ModelParams::validate() const
{
    if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError("k must be positive");
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ConfigError("alpha must be positive");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be positive");
    if (n < 1) throw ConfigError("n must be an integer >= 1");
    if (!std::isfinite(A)) throw ConfigError("A must be finite");
}

double equilibrium_separation(const ModelParams& p)
{
    return std::pow(p.n * p.alpha / p.k, 1.0 / (p.n + 2));
}

double external_potential(double x, const ModelParams& p)
{
    return -p.A * std::exp(-p.beta * x * x);
}

double external_force(double x, const ModelParams& p)
{
    return -2.0 * p.A * p.beta * x * std::exp(-p.beta * x * x);
}

double internal_potential(double d, const ModelParams& p)
{
    const double ad = std::abs(d);
    return 0.5 * p.k * d * d + p.alpha / ipow(ad, p.n);
}

ForceEval evaluate(double x1, double x2, const ModelParams& p, double floor)
{
    const double d = x1 - x2;
    const double ad = checked_distance(d, floor);
    const double adn = ipow(ad, p.n);
    const double repel = p.n * p.alpha / (adn * ad * ad);

    const double g1 = std::exp(-p.beta * x1 * x1);
    const double g2 = std::exp(-p.beta * x2 * x2);
    const double c = -2.0 * p.A * p.beta;

    ForceEval out;
    out.a1 = -p.k * d + repel * d + c * x1 * g1;
    out.a2 = -p.k * (x2 - x1) + repel * (x2 - x1) + c * x2 * g2;
    out.potential = (0.5 * p.k * d * d + p.alpha / adn) - p.A * (g1 + g2);
    return out;
}

double potential_energy(double x1, double x2, const ModelParams& p, double floor)
{
    return evaluate(x1, x2, p, floor).potential;
}

Accelerations accelerations(const State& s, const ModelParams& p, double floor)
{
    const ForceEval f = evaluate(s.x1, s.x2, p, floor);
    return {f.a1, f.a2};
}

double total_energy(const State& s, const ModelParams& p, double floor)
{
    const double kinetic = 0.5 * (s.v1 * s.v1 + s.v2 * s.v2);
    return kinetic + potential_energy(s.x1, s.x2, p, floor);
}

CMState to_cm(const State& s)
{
    return {s.t, 0.5 * (s.x1 + s.x2), 0.5 * (s.x2 - s.x1),
            0.5 * (s.v1 + s.v2), 0.5 * (s.v2 - s.v1)};
}

State from_cm(const CMState& c)
{
    return {c.t, c.R - c.r, c.V - c.w, c.R + c.r, c.V + c.w};
}

} // namespace kinktrap
