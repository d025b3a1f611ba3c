#pragma once

#include <stdexcept>
#include <string>

namespace rgqda {

enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  NotPositiveDefinite,
  TooFewObservations,
  DegenerateData,
  ParseError,
  MissingColumn,
  ConstantColumn,
  ClassTooSmall,
  EmptyDataset,
  UnsupportedDesign,
  ConfigError,
  IoError,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every library failure carries a kind so callers (the CLI in particular)
/// can map it onto an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rgqda
