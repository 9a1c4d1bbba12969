#pragma once

// `.vspec.json` spec documents and CSV traces.
//
// Spec document (version 1):
//   { "version": 1, "name": "...", "description": "...", "negated": false,
//     "nodes": [ { "id": "n1", "parent": "n0", "order": 0, "group": 1,
//                  "op": { "kind": "Always", "outer": [0, 36] },
//                  "predicate": { "signal": "rpm", "relation": "<", "threshold": 4000 } } ] }
// `parent` is omitted for roots, `predicate` for structural nodes, and
// `outer`/`inner` when the operator kind does not take them. "description"
// is optional. Unknown fields are rejected.
//
// Trace CSV: header `time,<signal>,...`, one row per sample, '.' decimals.

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

#include "mtlspec/monitor.hpp"
#include "mtlspec/spec_model.hpp"

namespace mtlspec {

inline constexpr int kSpecFormatVersion = 1;

std::string spec_to_json(const SpecTree& tree);
/// Throws SchemaError (naming the offending field) or VersionMismatch.
SpecTree spec_from_json(std::string_view document);

/// Returns the number of bytes written; throws IoError.
std::size_t save_spec(const SpecTree& tree, const std::filesystem::path& destination);
SpecTree load_spec(const std::filesystem::path& source);

std::string trace_to_csv(const Trace& trace);
/// Throws CsvError (1-based file line and column) or NonMonotoneTime (line).
Trace trace_from_csv(std::string_view text);

std::size_t save_trace(const Trace& trace, const std::filesystem::path& destination);
Trace load_trace(const std::filesystem::path& source);

/// Whole-file helpers; throw IoError.
std::string read_file(const std::filesystem::path& source);
std::size_t write_file(const std::filesystem::path& destination, std::string_view contents);

}  // namespace mtlspec
