#pragma once

#include <stdexcept>
#include <string>

namespace bubbly {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A caller violated a documented precondition.
class PreconditionError : public Error {
  public:
    using Error::Error;
};

/// A generator produced fewer points than a configuration needs.
class DegenerateConfigurationError : public Error {
  public:
    using Error::Error;
};

/// A kernel was evaluated at coincident points.
class SingularEvaluationError : public Error {
  public:
    using Error::Error;
};

/// Frequency equals the Minnaert frequency (beta0 == 0); no effective medium exists there.
class ExactResonanceError : public Error {
  public:
    using Error::Error;
};

/// A scaling-regime constraint (epsilon ordering, positivity of delta) failed.
class AssumptionViolationError : public Error {
  public:
    using Error::Error;
};

/// Dense factorization of the point-interaction system is numerically singular.
class NearResonantSystemError : public Error {
  public:
    using Error::Error;
};

/// Spherical series truncated before its tail became negligible.
class TruncationError : public Error {
  public:
    using Error::Error;
};

/// An iterative solver hit its iteration cap.
class ConvergenceError : public Error {
  public:
    ConvergenceError(const std::string& what, double residual, int iterations)
        : Error(what + " (residual " + std::to_string(residual) + " after " +
                std::to_string(iterations) + " iterations)"),
          residual_(residual), iterations_(iterations) {}

    double residual() const noexcept { return residual_; }
    int iterations() const noexcept { return iterations_; }

  private:
    double residual_;
    int iterations_;
};

} // namespace bubbly
