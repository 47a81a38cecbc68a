#pragma once

#include <stdexcept>
#include <string>

namespace ddlqg {

/// Fixed-point or iterative scheme failed to reach the requested tolerance.
class NoConvergenceError : public std::runtime_error {
public:
    NoConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

/// rank([X0; U0]) < n_x + n_u, so the data do not determine the system.
class RankConditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A recovered matrix (P, Sigma, ...) is not positive definite within tolerance.
class DegenerateSolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operation needs the stored noise realization (W0, V0) but the data lack it.
class GroundTruthUnavailableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace ddlqg
