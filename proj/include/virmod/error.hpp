#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace virmod {

/// Base class for every error raised by the library.
class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition of an operation does not hold.
class precondition_error : public error {
 public:
  using error::error;
};

/// Two operands live over different variable tables or spec shapes.
class mismatch_error : public error {
 public:
  using error::error;
};

/// Text could not be parsed; `position` is a 0-based offset into the input.
class parse_error : public error {
 public:
  parse_error(const std::string& what, std::size_t position)
      : error(what + " (at offset " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace virmod
