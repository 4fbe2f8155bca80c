#pragma once

// Two unit masses on a line, bound by a spring with short-range repulsion,
// each feeling the Gaussian well V(x) = A exp(-beta x^2).
//
// Sign convention: V enters the Lagrangian with a plus sign, so the potential
// energy of a particle in the well is -A exp(-beta x^2). A > 0 is attractive.

namespace kinktrap {

struct ModelParams {
    double k = 1.0;      ///< spring constant
    double alpha = 1.0;  ///< repulsion strength, energy * length^n
    int n = 2;           ///< repulsion exponent
    double A = 2.0;      ///< well amplitude
    double beta = 1.0;   ///< inverse squared well width

    /// Throws ConfigError unless k, alpha, beta > 0, n >= 1 and A finite.
    void validate() const;
};

/// Default coincidence floor on |x1 - x2|.
inline constexpr double kCoincidenceFloor = 1e-12;

struct State {
    double t = 0.0;
    double x1 = 0.0;
    double v1 = 0.0;
    double x2 = 0.0;
    double v2 = 0.0;

    friend bool operator==(const State&, const State&) = default;
};

/// Centre-of-mass frame: R = (x1+x2)/2, r = (x2-x1)/2 (half the separation).
struct CMState {
    double t = 0.0;
    double R = 0.0;
    double r = 0.0;
    double V = 0.0;
    double w = 0.0;
};

struct Accelerations {
    double a1 = 0.0;
    double a2 = 0.0;
};

/// Accelerations and total potential energy from one position evaluation.
struct ForceEval {
    double a1 = 0.0;
    double a2 = 0.0;
    double potential = 0.0;
};

/// Separation at which spring and repulsion balance without the well:
/// r0^(n+2) = n alpha / k.
double equilibrium_separation(const ModelParams& p);

/// Potential energy of one particle in the well, -A exp(-beta x^2).
double external_potential(double x, const ModelParams& p);

/// -d/dx of external_potential: -2 A beta x exp(-beta x^2).
double external_force(double x, const ModelParams& p);

/// Spring plus repulsion energy for separation d = x1 - x2.
double internal_potential(double d, const ModelParams& p);

double potential_energy(double x1, double x2, const ModelParams& p,
                        double floor = kCoincidenceFloor);

Accelerations accelerations(const State& s, const ModelParams& p,
                            double floor = kCoincidenceFloor);

double total_energy(const State& s, const ModelParams& p,
                    double floor = kCoincidenceFloor);

/// Forces and potential in one pass; the integrators call this once per
/// position evaluation.
ForceEval evaluate(double x1, double x2, const ModelParams& p,
                   double floor = kCoincidenceFloor);

CMState to_cm(const State& s);
State from_cm(const CMState& c);

/// Callable force law used by the integrators. The default wraps the model;
/// tests substitute their own laws through the same interface.
struct ModelForce {
    ModelParams params;
    double floor = kCoincidenceFloor;

    ForceEval operator()(double x1, double x2) const
    {
        return evaluate(x1, x2, params, floor);
    }
};

} // namespace kinktrap
