#include "lmles/error.hpp"

#include <utility>

namespace lmles {

ParseError::ParseError(const std::string& what, std::size_t line)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

StepFailure::StepFailure(const std::string& what, int step, std::vector<double> residual_history)
    : Error("step " + std::to_string(step) + ": " + what),
      step_(step),
      history_(std::move(residual_history)) {}

}  // namespace lmles
