#pragma once

#include "kinktrap/model.hpp"

#include <cstddef>
#include <span>

namespace kinktrap {

// Small-oscillation model of the pair near the well centre. The centre of
// mass and the relative coordinate r = (x2 - x1)/2 decouple into
//   R''   + 2 A beta exp(-beta r_eq^2) R                 = 0
//   eps'' + (2k + 2 A beta exp(-beta r_eq^2)) eps         = 0
// with r = r_eq + delta_offset + eps. r_eq is explicit: the nominal
// equilibrium can be read as the full separation r0 or as r0/2.

struct Frequencies {
    double omega_R = 0.0;
    double omega_eps = 0.0;
};

struct LinearizedParams {
    double omega_R = 0.0;
    double omega_eps = 0.0;
    double delta_offset = 0.0;
    double r_eq = 0.0;
};

Frequencies linearized_frequencies(const ModelParams& p, double r_eq);

struct DeltaOffset {
    double value = 0.0;
    bool well_absent = false; ///< A == 0: no shrinkage, value is 0
};

/// -r_eq / (1 + k/(A beta) exp(beta r_eq^2)); negative for an attractive well.
DeltaOffset delta_offset(const ModelParams& p, double r_eq);

LinearizedParams linearize(const ModelParams& p, double r_eq);

struct LinearPoint {
    double R = 0.0;
    double delta = 0.0; ///< r - r_eq
};

/// Closed-form solution of the decoupled oscillators from init (CM frame).
LinearPoint closed_form_trajectory(const CMState& init, const LinearizedParams& lp, double t);

/// Full separation x2 - x1 of the symmetric static configuration at the
/// well centre, where spring, repulsion and well forces balance.
double in_well_equilibrium_separation(const ModelParams& p);

/// Angular frequency from the mean half-period between successive crossings
/// of the series mean (linear interpolation between samples spaced dt).
/// A crossing is only counted once the signal moves 10% of its RMS deviation
/// past the mean, so sample noise near the mean does not add crossings.
/// Throws InsufficientOscillations for fewer than 4 crossings.
double dominant_frequency(std::span<const double> samples, double dt);

/// Number of mean crossings dominant_frequency would use.
std::size_t count_mean_crossings(std::span<const double> samples);

} // namespace kinktrap
