#pragma once

#include <stdexcept>
#include <string>

namespace oscilab {

/// Base exception for every precondition or domain failure raised by the library.
class error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raised when a requested computation exceeds the desk-scale work budget.
class budget_error : public error {
public:
  using error::error;
};

/// Raised by strict config parsing (unknown keys, unresolved names, bad values).
class config_error : public error {
public:
  using error::error;
};

namespace detail {
inline void require(bool cond, const std::string& msg) {
  if (!cond) throw error(msg);
}
}  // namespace detail

}  // namespace oscilab
