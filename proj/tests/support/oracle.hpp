#pragma once

// Test-only reference semantics and random inputs.

#include <cstdint>
#include <random>
#include <vector>

#include "mtlspec/exemplar.hpp"
#include "mtlspec/monitor.hpp"
#include "mtlspec/mtl.hpp"

namespace mtlspec::testkit {

/// Propositional formula over sampled atoms: temporal operators are unrolled
/// into explicit conjunctions/disjunctions over the samples in their window.
struct Prop {
  enum class Kind { True, False, Atom, Not, And, Or } kind = Kind::True;
  Predicate atom;
  std::size_t sample = 0;
  std::vector<Prop> children;
};

Prop expand(const Formula& f, const Trace& trace, std::size_t at);
bool eval_prop(const Prop& p, const Trace& trace);

/// expand + eval_prop.
bool oracle(const Formula& f, const Trace& trace, std::size_t at = 0);

struct FormulaGen {
  std::mt19937_64 rng;
  std::vector<std::string> signals{"x", "y"};
  double max_bound = 5.0;

  explicit FormulaGen(std::uint64_t seed) : rng(seed) {}
  /// Any MTL construct, depth <= max_depth.
  Formula formula(int max_depth);
  Formula atom();
  Interval interval();
};

struct TraceGen {
  std::mt19937_64 rng;
  std::vector<std::string> signals{"x", "y"};

  explicit TraceGen(std::uint64_t seed) : rng(seed) {}
  /// At most `max_samples` samples, duration >= min_duration. Alternates
  /// between a half-second grid (bounds land exactly on samples) and
  /// irregular spacing.
  Trace trace(double min_duration, std::size_t max_samples = 50);
};

/// A randomized single-template formula with a generation config.
struct ExemplarDraw {
  Formula formula;
  ExemplarConfig config;
  std::uint64_t seed;
  int count;
};

ExemplarDraw random_exemplar_draw(std::mt19937_64& rng);

}  // namespace mtlspec::testkit
