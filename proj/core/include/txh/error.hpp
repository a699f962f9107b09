#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace txh {

enum class ErrorKind {
  NonHermitian,
  NonSymmetricStrain,
  ManifoldOverlap,
  ZeroField,
  ZeroTotalRate,
  DegenerateAxes,
  InvalidStack,
  UnsupportedKind,
  InvalidProblem,
  ParseError,
  ConfigError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries a machine-readable kind so the
/// CLI can report it as JSON without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace txh
