#pragma once

// Regression corpus: template trees for the worked examples and application
// formulas of the template formalism, plus formalizations of the ten-task
// automotive list. Each entry pins the translated formula and its class.

#include <string>
#include <vector>

#include "mtlspec/fragment.hpp"
#include "mtlspec/mtl.hpp"
#include "mtlspec/spec_model.hpp"

namespace mtlspec {

struct CorpusEntry {
  std::string id;
  std::string source;
  SpecTree tree;
  Formula expected_formula;
  Classification expected_class;
};

/// Worked examples phi1..phi7, the tree-structure figure, and the surgical
/// robot / quadcopter application formulas.
std::vector<CorpusEntry> formula_corpus();

/// Tasks 1..10 of the automotive task list.
std::vector<CorpusEntry> task_corpus();

std::vector<CorpusEntry> full_corpus();

struct CorpusResult {
  std::string id;
  bool translated = false;   // translate(tree) == expected_formula
  bool classified = false;   // classify(...) == expected_class
  bool recognized = false;   // extended recognizer accepts
  bool round_trip = false;   // parse(format(f)) == f
  std::string detail;        // first failure, empty on success

  bool passed() const noexcept { return translated && classified && recognized && round_trip; }
};

struct CorpusReport {
  std::vector<CorpusResult> results;

  std::size_t passed() const;
  std::size_t total() const noexcept { return results.size(); }
  bool all_passed() const { return passed() == total(); }
  /// One "PASS|FAIL <id> ..." line per entry plus a summary line.
  std::string text() const;
};

CorpusReport run_corpus(const std::vector<CorpusEntry>& entries);
CorpusReport run_corpus();

}  // namespace mtlspec
