#ifndef CHROMSIM_ERRORS_HPP
#define CHROMSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace chromsim {

/// Scenario or input rejected before any solver ran (CLI exit code 2).
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure during a run: non-convergence, singular pivot,
/// non-physical state (CLI exit code 3).
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// File system trouble: unreadable scenario, unwritable output (CLI exit code 4).
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace chromsim

#endif
