#pragma once

#include <stdexcept>
#include <string>

namespace epicon {

/// Raised when a requested design is outside the regime where it exists
/// (R0 <= 1, heterogeneity above its ceiling, a violated design inequality).
/// `condition()` names the inequality that failed.
class Infeasible : public std::runtime_error {
 public:
  Infeasible(std::string condition, const std::string& what)
      : std::runtime_error(what), condition_(std::move(condition)) {}

  const std::string& condition() const noexcept { return condition_; }

 private:
  std::string condition_;
};

}  // namespace epicon
