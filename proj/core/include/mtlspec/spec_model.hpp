#pragma once

// Template-tree data model shared by the translator, persistence and the
// HTTP service. A SpecTree is a plain value: copying it snapshots it, and
// every mutator either succeeds completely or throws and leaves it untouched.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mtlspec/error.hpp"

namespace mtlspec {

using NodeId = std::string;

/// Closed time window [lo, hi] in seconds.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  /// Throws IntervalError unless 0 <= lo <= hi and both are finite.
  static Interval checked(double lo, double hi);

  bool valid() const noexcept;
  friend bool operator==(const Interval&, const Interval&) = default;
};

enum class Relation { Less, Greater, LessEqual, GreaterEqual };

std::string_view to_string(Relation rel) noexcept;
std::optional<Relation> relation_from_string(std::string_view text) noexcept;

/// True for "below threshold" relations (< and <=).
constexpr bool is_upper_bound(Relation rel) noexcept {
  return rel == Relation::Less || rel == Relation::LessEqual;
}

bool holds(Relation rel, double value, double threshold) noexcept;

/// Letters, digits and underscore, starting with a letter.
bool is_valid_signal_name(std::string_view name) noexcept;

struct Predicate {
  std::string signal;
  Relation relation = Relation::Less;
  double threshold = 0.0;

  /// Throws InvalidSignalName / NonFiniteThreshold.
  static Predicate checked(std::string signal, Relation relation, double threshold);

  friend bool operator==(const Predicate&, const Predicate&) = default;
};

enum class OperatorKind { Now, Always, AtLeastOnce, EventuallyAlways, RepeatedlyOftenAndFinally };

std::string_view to_string(OperatorKind kind) noexcept;
std::optional<OperatorKind> operator_kind_from_string(std::string_view text) noexcept;

/// Number of intervals an operator of this kind carries (0, 1 or 2).
int interval_arity(OperatorKind kind) noexcept;

struct TemporalOperator {
  OperatorKind kind = OperatorKind::Now;
  std::optional<Interval> outer;
  std::optional<Interval> inner;

  static TemporalOperator now() { return {}; }
  static TemporalOperator always(Interval window) { return {OperatorKind::Always, window, {}}; }
  static TemporalOperator at_least_once(Interval window) {
    return {OperatorKind::AtLeastOnce, window, {}};
  }
  static TemporalOperator eventually_always(Interval outer, Interval inner) {
    return {OperatorKind::EventuallyAlways, outer, inner};
  }
  static TemporalOperator repeatedly_often(Interval outer, Interval inner) {
    return {OperatorKind::RepeatedlyOftenAndFinally, outer, inner};
  }

  /// Interval arity matches the kind and every present interval is valid.
  bool well_formed() const noexcept;

  friend bool operator==(const TemporalOperator&, const TemporalOperator&) = default;
};

/// One template. A node without a predicate is structural and only scopes its
/// children; a leaf always carries a predicate.
struct TemplateNode {
  NodeId id;
  int group = 1;
  TemporalOperator op;
  std::optional<Predicate> predicate;
  std::vector<TemplateNode> children;

  bool is_structural() const noexcept { return !predicate.has_value(); }

  friend bool operator==(const TemplateNode&, const TemplateNode&) = default;
};

enum class DiagnosticKind {
  DuplicateId,
  EmptyId,
  LeafWithoutPredicate,
  NonPositiveGroup,
  NonContiguousGroup,
  MalformedOperator,
  InvalidSignalName,
  NonFiniteThreshold,
};

std::string_view to_string(DiagnosticKind kind) noexcept;

struct Diagnostic {
  DiagnosticKind kind;
  NodeId node;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

class SpecTree {
 public:
  SpecTree() = default;
  explicit SpecTree(std::string name) : name_(std::move(name)) {}
  SpecTree(std::string name, bool negated, std::vector<TemplateNode> roots)
      : name_(std::move(name)), negated_(negated), roots_(std::move(roots)) {}

  const std::string& name() const noexcept { return name_; }
  const std::string& description() const noexcept { return description_; }
  bool negated() const noexcept { return negated_; }
  const std::vector<TemplateNode>& roots() const noexcept { return roots_; }

  void set_name(std::string name) { name_ = std::move(name); }
  void set_description(std::string text) { description_ = std::move(text); }
  void set_negated(bool negated) noexcept { negated_ = negated; }

  /// Inserts a fresh Now/predicate-less node under `parent` (virtual root when
  /// absent), directly after `after` or at the end of the sibling list.
  NodeId add_template(const std::optional<NodeId>& parent, const std::optional<NodeId>& after,
                      int group);

  void set_operator(const NodeId& node, const TemporalOperator& op);
  void set_predicate(const NodeId& node, const Predicate& predicate);
  /// Turns the node structural. Leaves the tree in a state validate_structure
  /// reports on if the node has no children.
  void clear_predicate(const NodeId& node);
  void set_group(const NodeId& node, int group);
  /// Removes the node together with its subtree.
  void remove_template(const NodeId& node);

  const TemplateNode* find(const NodeId& node) const;
  /// Parent id of `node`; nullopt for roots. Throws UnknownNode.
  std::optional<NodeId> parent_of(const NodeId& node) const;
  std::size_t node_count() const;

  friend bool operator==(const SpecTree&, const SpecTree&) = default;

 private:
  TemplateNode* find_mutable(const NodeId& node);
  std::vector<TemplateNode>* sibling_list_of(const NodeId& node);
  NodeId fresh_id() const;

  std::string name_;
  std::string description_;
  bool negated_ = false;
  std::vector<TemplateNode> roots_;
};

SpecTree new_spec(std::string name);

/// Empty iff every structural invariant holds.
std::vector<Diagnostic> validate_structure(const SpecTree& tree);

/// Depth-first preorder visit of every node with its depth (roots are 0).
template <typename Fn>
void for_each_node(const std::vector<TemplateNode>& nodes, Fn&& fn, int depth = 0) {
  for (const auto& node : nodes) {
    fn(node, depth);
    for_each_node(node.children, fn, depth + 1);
  }
}

/// True when every group value occurs in one adjacent run.
bool groups_contiguous(const std::vector<int>& groups);

}  // namespace mtlspec
