#pragma once

// MTL fragment AST with its canonical ASCII syntax:
//
//   formula   := implies ;
//   implies   := and ( "->" implies )? ;
//   and       := unary ( "/\" unary )* ;        (folded to the right)
//   unary     := "!" unary | temporal | "(" formula ")" | atom ;
//   temporal  := ( "[]" | "<>" ) "_[" number "," number "]" unary ;
//   atom      := "(" ident rel number ")" | ident rel number ;
//   rel       := "<=" | ">=" | "<" | ">" ;

#include <memory>
#include <string>
#include <string_view>

#include "mtlspec/spec_model.hpp"

namespace mtlspec {

enum class FormulaKind { Atom, Not, And, Implies, Always, Eventually };

/// Immutable, cheaply copyable formula handle. Subtrees are shared.
class Formula {
 public:
  static Formula atom(Predicate predicate);
  static Formula atom(std::string signal, Relation rel, double threshold);
  static Formula negation(Formula operand);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula implication(Formula lhs, Formula rhs);
  static Formula always(Interval window, Formula operand);
  static Formula eventually(Interval window, Formula operand);

  FormulaKind kind() const noexcept;
  bool is_atom() const noexcept { return kind() == FormulaKind::Atom; }
  bool is_temporal() const noexcept {
    return kind() == FormulaKind::Always || kind() == FormulaKind::Eventually;
  }
  bool is_binary() const noexcept {
    return kind() == FormulaKind::And || kind() == FormulaKind::Implies;
  }

  /// Atom only.
  const Predicate& predicate() const;
  /// Always/Eventually only.
  const Interval& interval() const;
  /// Not/Always/Eventually only.
  Formula operand() const;
  /// And/Implies only.
  Formula lhs() const;
  Formula rhs() const;

  /// Structural equality.
  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  const Node& node() const;

  std::shared_ptr<const Node> node_;
};

/// Throws SyntaxError (with 1-based line/column) or IntervalError.
Formula parse(std::string_view text);

/// Canonical text; parse(format(f)) == f.
std::string format(const Formula& formula);

/// Shortest fixed-notation decimal that reads back to the same double
/// ("36", "0.5", "-45").
std::string format_number(double value);

/// Duration needed to evaluate the formula at time 0.
double horizon(const Formula& formula);

/// Nesting depth (an atom has depth 1).
int depth(const Formula& formula);

}  // namespace mtlspec
