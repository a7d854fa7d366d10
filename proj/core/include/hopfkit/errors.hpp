#ifndef HOPFKIT_ERRORS_HPP
#define HOPFKIT_ERRORS_HPP

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace hopfkit {

/// Base class for all toolkit failures.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid problem or run configuration (bad ranges, unknown keys, usage).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Iterative method failed to reach its tolerance; carries the residual trace.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& msg, std::vector<double> trace = {})
      : Error(msg), residual_trace(std::move(trace)) {}
  std::vector<double> residual_trace;
};

/// Eigen-solver locked onto an eigenvalue outside the expected window.
class WrongEigenvalueError : public Error {
 public:
  using Error::Error;
};

/// A shifted solve was requested too close to the discrete spectrum.
class SpectrumProximityError : public Error {
 public:
  SpectrumProximityError(const std::string& msg, std::complex<double> shift)
      : Error(msg), z(shift) {}
  std::complex<double> z;
};

/// Structural degeneracy (singular Gram system, vanishing pairing, zero phase).
class DegeneracyError : public Error {
 public:
  using Error::Error;
};

/// Evaluation at a pole of a closed-form symbol.
class PoleError : public Error {
 public:
  using Error::Error;
};

/// Non-finite numbers produced during a nonlinear evaluation.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// match_solution residual stayed above the match tolerance.
class NoMatchError : public Error {
 public:
  NoMatchError(const std::string& msg, double residual)
      : Error(msg), distance(residual) {}
  double distance;
};

}  // namespace hopfkit

#endif
