#pragma once

// Exemplar signals for a single template: traces that satisfy (or, for
// counterexemplars, violate) the template's formula, for the user to pick from
// instead of drawing a signal by hand.

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "mtlspec/monitor.hpp"
#include "mtlspec/mtl.hpp"

namespace mtlspec {

struct ExemplarConfig {
  double dt = 0.5;
  /// Defaults to horizon + 10 s.
  std::optional<double> duration;
  /// Both or neither; defaults to threshold -/+ max(1, |threshold|).
  std::optional<double> vmin;
  std::optional<double> vmax;
};

enum class Archetype { Smooth, Ramp, Step };

std::string_view to_string(Archetype a) noexcept;

struct Exemplar {
  Trace trace;
  Archetype archetype;
};

/// Single-template formula decomposed into operator and atom.
struct TemplateShape {
  TemporalOperator op;
  Predicate atom;
};

/// Accepts p, []_I p, <>_I p, <>_I []_J p and []_I <>_J p; throws
/// UnsupportedTemplate for anything else.
TemplateShape template_shape(const Formula& formula);

/// `count` pairwise-distinct traces, each satisfying the formula under
/// evaluate(). Deterministic in (formula, count, seed, config).
/// Throws ThresholdOutOfRange, DurationTooShort, InvalidConfig,
/// UnsupportedTemplate, or GenerationFailed after 32 attempts for one trace.
std::vector<Exemplar> generate(const Formula& template_formula, int count, std::uint64_t seed,
                               const ExemplarConfig& config = {});

/// Same contract, but every trace violates the formula.
std::vector<Exemplar> counterexemplar(const Formula& template_formula, int count,
                                      std::uint64_t seed, const ExemplarConfig& config = {});

}  // namespace mtlspec
