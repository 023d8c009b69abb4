#pragma once

#include <stdexcept>
#include <string>

namespace soaccept {

// Bad or inconsistent configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input data that violates a contract: malformed dump rows, unusable
// matrices, single-class labels and so on (CLI exit code 3).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A pipeline stage was invoked before its predecessor produced current
// artifacts (CLI exit code 4).
class StageError : public std::runtime_error {
 public:
  StageError(std::string stage_to_rerun, const std::string& what)
      : std::runtime_error(what), stage_(std::move(stage_to_rerun)) {}

  const std::string& stage_to_rerun() const noexcept { return stage_; }

 private:
  std::string stage_;
};

}  // namespace soaccept
