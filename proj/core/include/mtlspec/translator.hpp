#pragma once

#include "mtlspec/mtl.hpp"
#include "mtlspec/spec_model.hpp"

namespace mtlspec {

/// Tree-to-formula translation. Siblings fold to the right; the connective
/// between two adjacent siblings is And when they share a group, Implies
/// otherwise. A node carrying both a predicate and children becomes
/// (p /\ chain) when its group equals its first child's, else (p -> chain).
///
/// Throws NoTemplates for an empty tree and StructurallyInvalid when
/// validate_structure reports anything.
Formula translate(const SpecTree& tree);

/// The node's operator applied to its own predicate, ignoring children.
/// Throws UnknownNode / NoPredicate.
Formula template_formula(const SpecTree& tree, const NodeId& node);

/// Formula of a single operator around a body.
Formula apply_operator(const TemporalOperator& op, Formula body);

/// Representative of the tree's translation class: groups renumbered by
/// connective structure, ids n1..nk in preorder, redundant structural nodes
/// spliced out and stacked single operators merged. translate(canonicalize(t))
/// equals translate(t). Requires a structurally valid, non-empty tree.
SpecTree canonicalize(const SpecTree& tree);

/// Canonical tree whose translation is `formula`. Accepts exactly the formulas
/// with negation only at the root; throws NotInFragment otherwise.
SpecTree reverse(const Formula& formula, std::string name = {});

}  // namespace mtlspec
