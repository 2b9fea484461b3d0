#pragma once

#include <stdexcept>
#include <string>

namespace pdsynth {

// Bad schema/dataset/config input. The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A privacy-budget target that cannot be met. Exit code 3.
class BudgetError : public std::runtime_error {
 public:
  explicit BudgetError(const std::string& what) : std::runtime_error(what) {}
};

// A verification sweep observed a violation. Exit code 4.
class VerifyError : public std::runtime_error {
 public:
  explicit VerifyError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pdsynth
