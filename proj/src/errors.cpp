#include "kinktrap/errors.hpp"

#include <sstream>

namespace kinktrap {

namespace {

std::string coincident_message(double separation, double floor)
{
    std::ostringstream os;
    os << "particles coincide: |x1 - x2| = " << separation
       << " is below the floor " << floor;
    return os.str();
}

} // namespace

CoincidentParticles::CoincidentParticles(double separation, double floor)
    : Error(coincident_message(separation, floor)), separation_(separation)
{
}

StepBudgetExhausted::StepBudgetExhausted(long long steps)
    : Error("step budget of " + std::to_string(steps) +
            " exhausted before any stop condition fired")
{
}

InsufficientOscillations::InsufficientOscillations(std::size_t crossings)
    : Error("need at least 4 mean crossings, found " + std::to_string(crossings))
{
}

} // namespace kinktrap
