#ifndef DIMER_ERRORS_HPP
#define DIMER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dimer {

struct NonConvergence : std::runtime_error {
  explicit NonConvergence(const std::string& msg) : std::runtime_error(msg) {}
};

struct Unstable : std::runtime_error {
  explicit Unstable(const std::string& msg) : std::runtime_error(msg) {}
};

struct PreconditionViolation : std::invalid_argument {
  explicit PreconditionViolation(const std::string& msg) : std::invalid_argument(msg) {}
};

struct SingularSystem : std::runtime_error {
  explicit SingularSystem(const std::string& msg) : std::runtime_error(msg) {}
};

struct EigenSolveFailure : std::runtime_error {
  explicit EigenSolveFailure(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegenerateConditioner : std::runtime_error {
  explicit DegenerateConditioner(const std::string& msg) : std::runtime_error(msg) {}
};

struct TrajectoryDivergence : std::runtime_error {
  explicit TrajectoryDivergence(const std::string& msg) : std::runtime_error(msg) {}
};

struct InsufficientData : std::runtime_error {
  explicit InsufficientData(const std::string& msg) : std::runtime_error(msg) {}
};

struct UnknownFigure : std::invalid_argument {
  explicit UnknownFigure(const std::string& msg) : std::invalid_argument(msg) {}
};

}  // namespace dimer

#endif
