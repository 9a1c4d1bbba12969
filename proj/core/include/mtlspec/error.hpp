#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mtlspec {

enum class ErrorCode {
  // spec-model
  UnknownParent,
  UnknownSibling,
  UnknownNode,
  NonContiguousGroup,
  NonPositiveGroup,
  MalformedOperator,
  InvalidSignalName,
  NonFiniteThreshold,
  // mtl-lang
  SyntaxError,
  IntervalError,
  // translator
  NoTemplates,
  StructurallyInvalid,
  NoPredicate,
  NotInFragment,
  // monitor
  UnknownSignal,
  InsufficientHorizon,
  InvalidTrace,
  // exemplar-gen
  GenerationFailed,
  ThresholdOutOfRange,
  DurationTooShort,
  UnsupportedTemplate,
  InvalidConfig,
  // persistence
  SchemaError,
  VersionMismatch,
  CsvError,
  NonMonotoneTime,
  IoError,
  // service-api
  BindError,
  PersistenceError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. `line`/`column` are 1-based and only
/// meaningful for SyntaxError and the CSV errors (0 when unset).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::size_t line = 0, std::size_t column = 0);

  ErrorCode code() const noexcept { return code_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  ErrorCode code_;
  std::size_t line_;
  std::size_t column_;
};

}  // namespace mtlspec
