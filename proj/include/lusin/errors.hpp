#pragma once

#include <stdexcept>
#include <string>

namespace lusin {

/// Invalid input or a violated theorem hypothesis. CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A checked postcondition or property failed. CLI maps this to exit code 1.
class CheckError : public std::runtime_error {
 public:
  explicit CheckError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lusin
