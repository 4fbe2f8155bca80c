#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kinktrap {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters or configuration, detected before any computation.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// |x1 - x2| fell below the coincidence floor; the repulsion is singular there.
class CoincidentParticles : public Error {
public:
    CoincidentParticles(double separation, double floor);

    double separation() const noexcept { return separation_; }

private:
    double separation_;
};

/// The step budget ran out before any stop predicate fired.
class StepBudgetExhausted : public Error {
public:
    explicit StepBudgetExhausted(long long steps);
};

/// Fewer mean crossings than a frequency estimate needs.
class InsufficientOscillations : public Error {
public:
    explicit InsufficientOscillations(std::size_t crossings);
};

} // namespace kinktrap
