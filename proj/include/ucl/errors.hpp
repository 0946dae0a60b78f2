#pragma once

#include <stdexcept>
#include <string>

namespace ucl {

// Every Monte Carlo sample had zero success probability; the ratio
// estimator has no defined value.
class EstimatorUndefinedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A structural check could not reach a verdict (zero operator, zero
// partial trace, or no usable samples).
class InconclusiveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// No optimizer restart converged. Carries the best objective seen so the
// caller can still report partial progress.
class NonconvergenceError : public std::runtime_error {
public:
    NonconvergenceError(const std::string& what, double best_so_far)
        : std::runtime_error(what), best_so_far(best_so_far) {}
    double best_so_far;
};

}  // namespace ucl
