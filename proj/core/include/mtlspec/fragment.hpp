#pragma once

// Membership in the template formalism's MTL fragment, specification classes,
// and a seeded generator of valid template trees for property tests.
//
// Strict mode is the published grammar, with => and -> read as one
// connective:
//
//   S -> !T | T
//   T -> A | B | C
//   A -> P | (P /\ A) | (P -> A)
//   B -> []_I D | <>_I D
//   C -> []_I <>_I D | <>_I []_I D
//   D -> p | (p -> A) | (p /\ A) | (p -> B) | (p /\ B)
//   P -> p | []_I p | <>_I p
//
// Extended mode is everything a template tree can translate to:
//
//   S -> !L | L
//   L -> I | (I /\ L) | (I -> L)          sibling chain
//   I -> O p | O (p /\ L) | O (p -> L) | O L
//   O -> e | []_I | <>_I | <>_I []_I | []_I <>_I

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mtlspec/mtl.hpp"
#include "mtlspec/spec_model.hpp"

namespace mtlspec {

enum class FragmentMode { Strict, Extended };

enum class Production {
  // strict
  S_Negated,
  S_Plain,
  T_A,
  T_B,
  T_C,
  A_P,
  A_And,
  A_Implies,
  B_Always,
  B_Eventually,
  C_AlwaysEventually,
  C_EventuallyAlways,
  D_Atom,
  D_ImpliesA,
  D_AndA,
  D_ImpliesB,
  D_AndB,
  P_Atom,
  P_Always,
  P_Eventually,
  // extended
  X_Negated,
  X_Plain,
  L_Item,
  L_And,
  L_Implies,
  I_Atom,
  I_HeadAnd,
  I_HeadImplies,
  I_Scope,
};

std::string_view to_string(Production p) noexcept;

/// One production application. Terminals used by the production (the atom,
/// interval subscripts, the operator of an extended item) ride along so a
/// derivation can be replayed into the formula it derives.
struct Derivation {
  Production production;
  std::optional<Predicate> atom;
  std::vector<Interval> intervals;
  OperatorKind op = OperatorKind::Now;  // extended items only
  std::vector<Derivation> children;
};

struct Recognition {
  bool accepted = false;
  std::optional<Derivation> derivation;
  std::string reason;  // set on rejection
};

Recognition recognize(const Formula& formula, FragmentMode mode = FragmentMode::Extended);

/// Rebuilds the derived formula; throws std::invalid_argument on a malformed
/// derivation.
Formula replay(const Derivation& derivation);

/// Indented one-production-per-line rendering.
std::string render(const Derivation& derivation);

enum class SpecificationClass {
  Safety,
  Reachability,
  Stabilization,
  Recurrence,
  Implication,
  ReactiveResponse,
  Conjunction,
  NonStrictSequencing,
  CompositeOther,
};

std::string_view to_string(SpecificationClass c) noexcept;
std::optional<SpecificationClass> specification_class_from_string(std::string_view text) noexcept;

struct Classification {
  SpecificationClass label = SpecificationClass::CompositeOther;
  bool negated = false;

  friend bool operator==(const Classification&, const Classification&) = default;
};

/// Shape-only classification of the outermost structure; a top-level
/// negation classifies its operand and sets `negated`.
Classification classify(const Formula& formula);

/// Extended draws any valid tree; Strict stays inside the printed grammar.
enum class FragmentProfile { Extended, Strict };

struct RandomTreeOptions {
  std::uint64_t seed = 0;
  int max_depth = 3;
  std::vector<std::string> signals{"speed", "rpm", "alpha", "dist"};
  FragmentProfile profile = FragmentProfile::Extended;
};

/// Deterministic in the options. max_depth 1 yields a single template.
SpecTree random_fragment_tree(const RandomTreeOptions& options);

}  // namespace mtlspec
