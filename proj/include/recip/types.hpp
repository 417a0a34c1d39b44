/*
 * types.hpp
 *
 * Identifiers and the error hierarchy shared by every recip module.
 */

#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace recip {

/// Opaque 64-bit account identifier.
struct UserId {
  std::uint64_t value{0};

  constexpr UserId() = default;
  constexpr explicit UserId(std::uint64_t v) : value(v) {}

  friend constexpr auto operator<=>(const UserId&, const UserId&) = default;
};

/// Bad input data: malformed rows, missing files, degenerate samples.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation has no defined value for its input (e.g. empty edge set).
class EmptyInputError : public DataError {
 public:
  using DataError::DataError;
};

/// Parameters that violate a documented precondition.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace recip

template <>
struct std::hash<recip::UserId> {
  std::size_t operator()(const recip::UserId& u) const noexcept {
    return std::hash<std::uint64_t>{}(u.value);
  }
};
