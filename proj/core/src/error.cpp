#include "mtlspec/error.hpp"

namespace mtlspec {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::UnknownParent: return "UnknownParent";
    case ErrorCode::UnknownSibling: return "UnknownSibling";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::NonContiguousGroup: return "NonContiguousGroup";
    case ErrorCode::NonPositiveGroup: return "NonPositiveGroup";
    case ErrorCode::MalformedOperator: return "MalformedOperator";
    case ErrorCode::InvalidSignalName: return "InvalidSignalName";
    case ErrorCode::NonFiniteThreshold: return "NonFiniteThreshold";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::IntervalError: return "IntervalError";
    case ErrorCode::NoTemplates: return "NoTemplates";
    case ErrorCode::StructurallyInvalid: return "StructurallyInvalid";
    case ErrorCode::NoPredicate: return "NoPredicate";
    case ErrorCode::NotInFragment: return "NotInFragment";
    case ErrorCode::UnknownSignal: return "UnknownSignal";
    case ErrorCode::InsufficientHorizon: return "InsufficientHorizon";
    case ErrorCode::InvalidTrace: return "InvalidTrace";
    case ErrorCode::GenerationFailed: return "GenerationFailed";
    case ErrorCode::ThresholdOutOfRange: return "ThresholdOutOfRange";
    case ErrorCode::DurationTooShort: return "DurationTooShort";
    case ErrorCode::UnsupportedTemplate: return "UnsupportedTemplate";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::CsvError: return "CsvError";
    case ErrorCode::NonMonotoneTime: return "NonMonotoneTime";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::BindError: return "BindError";
    case ErrorCode::PersistenceError: return "PersistenceError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      line_(line),
      column_(column) {}

}  // namespace mtlspec
