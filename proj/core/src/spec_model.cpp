#include "mtlspec/spec_model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

namespace mtlspec {

Interval Interval::checked(double lo, double hi) {
  Interval window{lo, hi};
  if (!window.valid()) {
    throw Error(ErrorCode::IntervalError, "interval [" + std::to_string(lo) + "," +
                                              std::to_string(hi) +
                                              "] must satisfy 0 <= lo <= hi (finite)");
  }
  return window;
}

bool Interval::valid() const noexcept {
  return std::isfinite(lo) && std::isfinite(hi) && lo >= 0.0 && lo <= hi;
}

std::string_view to_string(Relation rel) noexcept {
  switch (rel) {
    case Relation::Less: return "<";
    case Relation::Greater: return ">";
    case Relation::LessEqual: return "<=";
    case Relation::GreaterEqual: return ">=";
  }
  return "?";
}

std::optional<Relation> relation_from_string(std::string_view text) noexcept {
  if (text == "<") return Relation::Less;
  if (text == ">") return Relation::Greater;
  if (text == "<=") return Relation::LessEqual;
  if (text == ">=") return Relation::GreaterEqual;
  return std::nullopt;
}

bool holds(Relation rel, double value, double threshold) noexcept {
  switch (rel) {
    case Relation::Less: return value < threshold;
    case Relation::Greater: return value > threshold;
    case Relation::LessEqual: return value <= threshold;
    case Relation::GreaterEqual: return value >= threshold;
  }
  return false;
}

bool is_valid_signal_name(std::string_view name) noexcept {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name.front()))) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

Predicate Predicate::checked(std::string signal, Relation relation, double threshold) {
  if (!is_valid_signal_name(signal)) {
    throw Error(ErrorCode::InvalidSignalName, "'" + signal + "' is not a valid signal name");
  }
  if (!std::isfinite(threshold)) {
    throw Error(ErrorCode::NonFiniteThreshold, "threshold for '" + signal + "' is not finite");
  }
  return Predicate{std::move(signal), relation, threshold};
}

std::string_view to_string(OperatorKind kind) noexcept {
  switch (kind) {
    case OperatorKind::Now: return "Now";
    case OperatorKind::Always: return "Always";
    case OperatorKind::AtLeastOnce: return "AtLeastOnce";
    case OperatorKind::EventuallyAlways: return "EventuallyAlways";
    case OperatorKind::RepeatedlyOftenAndFinally: return "RepeatedlyOftenAndFinally";
  }
  return "?";
}

std::optional<OperatorKind> operator_kind_from_string(std::string_view text) noexcept {
  for (auto kind : {OperatorKind::Now, OperatorKind::Always, OperatorKind::AtLeastOnce,
                    OperatorKind::EventuallyAlways, OperatorKind::RepeatedlyOftenAndFinally}) {
    if (to_string(kind) == text) return kind;
  }
  return std::nullopt;
}

int interval_arity(OperatorKind kind) noexcept {
  switch (kind) {
    case OperatorKind::Now: return 0;
    case OperatorKind::Always:
    case OperatorKind::AtLeastOnce: return 1;
    case OperatorKind::EventuallyAlways:
    case OperatorKind::RepeatedlyOftenAndFinally: return 2;
  }
  return -1;
}

bool TemporalOperator::well_formed() const noexcept {
  const int arity = interval_arity(kind);
  const bool want_outer = arity >= 1;
  const bool want_inner = arity == 2;
  if (outer.has_value() != want_outer || inner.has_value() != want_inner) return false;
  if (outer && !outer->valid()) return false;
  if (inner && !inner->valid()) return false;
  return true;
}

std::string_view to_string(DiagnosticKind kind) noexcept {
  switch (kind) {
    case DiagnosticKind::DuplicateId: return "DuplicateId";
    case DiagnosticKind::EmptyId: return "EmptyId";
    case DiagnosticKind::LeafWithoutPredicate: return "LeafWithoutPredicate";
    case DiagnosticKind::NonPositiveGroup: return "NonPositiveGroup";
    case DiagnosticKind::NonContiguousGroup: return "NonContiguousGroup";
    case DiagnosticKind::MalformedOperator: return "MalformedOperator";
    case DiagnosticKind::InvalidSignalName: return "InvalidSignalName";
    case DiagnosticKind::NonFiniteThreshold: return "NonFiniteThreshold";
  }
  return "?";
}

bool groups_contiguous(const std::vector<int>& groups) {
  std::set<int> closed;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (i > 0 && groups[i] != groups[i - 1]) {
      closed.insert(groups[i - 1]);
    }
    if (closed.count(groups[i]) != 0) return false;
  }
  return true;
}

namespace {

std::vector<int> groups_of(const std::vector<TemplateNode>& siblings) {
  std::vector<int> out;
  out.reserve(siblings.size());
  for (const auto& n : siblings) out.push_back(n.group);
  return out;
}

const TemplateNode* find_in(const std::vector<TemplateNode>& nodes, const NodeId& id) {
  for (const auto& n : nodes) {
    if (n.id == id) return &n;
    if (const auto* hit = find_in(n.children, id)) return hit;
  }
  return nullptr;
}

// Sibling list that directly contains `id`.
const std::vector<TemplateNode>* list_containing(const std::vector<TemplateNode>& nodes,
                                                 const NodeId& id) {
  for (const auto& n : nodes) {
    if (n.id == id) return &nodes;
  }
  for (const auto& n : nodes) {
    if (const auto* hit = list_containing(n.children, id)) return hit;
  }
  return nullptr;
}

const TemplateNode* parent_in(const std::vector<TemplateNode>& nodes, const NodeId& id) {
  for (const auto& n : nodes) {
    for (const auto& c : n.children) {
      if (c.id == id) return &n;
    }
    if (const auto* hit = parent_in(n.children, id)) return hit;
  }
  return nullptr;
}

void check_group(int group) {
  if (group <= 0) {
    throw Error(ErrorCode::NonPositiveGroup, "group must be a positive integer, got " +
                                                 std::to_string(group));
  }
}

}  // namespace

const TemplateNode* SpecTree::find(const NodeId& node) const { return find_in(roots_, node); }

TemplateNode* SpecTree::find_mutable(const NodeId& node) {
  return const_cast<TemplateNode*>(find_in(roots_, node));
}

std::vector<TemplateNode>* SpecTree::sibling_list_of(const NodeId& node) {
  return const_cast<std::vector<TemplateNode>*>(list_containing(roots_, node));
}

std::optional<NodeId> SpecTree::parent_of(const NodeId& node) const {
  if (find(node) == nullptr) throw Error(ErrorCode::UnknownNode, "no node '" + node + "'");
  if (const auto* p = parent_in(roots_, node)) return p->id;
  return std::nullopt;
}

std::size_t SpecTree::node_count() const {
  std::size_t count = 0;
  for_each_node(roots_, [&](const TemplateNode&, int) { ++count; });
  return count;
}

NodeId SpecTree::fresh_id() const {
  std::set<NodeId> used;
  long long highest = 0;
  for_each_node(roots_, [&](const TemplateNode& n, int) {
    used.insert(n.id);
    if (n.id.size() > 1 && n.id[0] == 'n') {
      long long value = 0;
      const auto* first = n.id.data() + 1;
      const auto* last = n.id.data() + n.id.size();
      auto [ptr, ec] = std::from_chars(first, last, value);
      if (ec == std::errc{} && ptr == last) highest = std::max(highest, value);
    }
  });
  NodeId candidate = "n" + std::to_string(highest + 1);
  while (used.count(candidate) != 0) candidate += "_";
  return candidate;
}

NodeId SpecTree::add_template(const std::optional<NodeId>& parent,
                              const std::optional<NodeId>& after, int group) {
  check_group(group);
  std::vector<TemplateNode>* siblings = &roots_;
  if (parent) {
    auto* p = find_mutable(*parent);
    if (p == nullptr) throw Error(ErrorCode::UnknownParent, "no parent '" + *parent + "'");
    siblings = &p->children;
  }
  auto position = siblings->end();
  if (after) {
    position = std::find_if(siblings->begin(), siblings->end(),
                            [&](const TemplateNode& n) { return n.id == *after; });
    if (position == siblings->end()) {
      throw Error(ErrorCode::UnknownSibling,
                  "'" + *after + "' is not a child of " + (parent ? "'" + *parent + "'" : "root"));
    }
    ++position;
  }
  auto groups = groups_of(*siblings);
  groups.insert(groups.begin() + (position - siblings->begin()), group);
  if (!groups_contiguous(groups)) {
    throw Error(ErrorCode::NonContiguousGroup,
                "inserting group " + std::to_string(group) + " would split a group run");
  }
  TemplateNode node;
  node.id = fresh_id();
  node.group = group;
  siblings->insert(position, node);
  return node.id;
}

void SpecTree::set_operator(const NodeId& node, const TemporalOperator& op) {
  auto* target = find_mutable(node);
  if (target == nullptr) throw Error(ErrorCode::UnknownNode, "no node '" + node + "'");
  if (!op.well_formed()) {
    throw Error(ErrorCode::MalformedOperator,
                std::string(to_string(op.kind)) + " needs " +
                    std::to_string(interval_arity(op.kind)) +
                    " valid interval(s) with 0 <= lo <= hi");
  }
  target->op = op;
}

void SpecTree::set_predicate(const NodeId& node, const Predicate& predicate) {
  auto* target = find_mutable(node);
  if (target == nullptr) throw Error(ErrorCode::UnknownNode, "no node '" + node + "'");
  target->predicate = Predicate::checked(predicate.signal, predicate.relation, predicate.threshold);
}

void SpecTree::clear_predicate(const NodeId& node) {
  auto* target = find_mutable(node);
  if (target == nullptr) throw Error(ErrorCode::UnknownNode, "no node '" + node + "'");
  target->predicate.reset();
}

void SpecTree::set_group(const NodeId& node, int group) {
  auto* target = find_mutable(node);
  if (target == nullptr) throw Error(ErrorCode::UnknownNode, "no node '" + node + "'");
  check_group(group);
  auto* siblings = sibling_list_of(node);
  auto groups = groups_of(*siblings);
  for (std::size_t i = 0; i < siblings->size(); ++i) {
    if ((*siblings)[i].id == node) groups[i] = group;
  }
  if (!groups_contiguous(groups)) {
    throw Error(ErrorCode::NonContiguousGroup,
                "regrouping '" + node + "' to " + std::to_string(group) + " would split a run");
  }
  target->group = group;
}

void SpecTree::remove_template(const NodeId& node) {
  auto* siblings = sibling_list_of(node);
  if (siblings == nullptr) throw Error(ErrorCode::UnknownNode, "no node '" + node + "'");
  auto it = std::find_if(siblings->begin(), siblings->end(),
                         [&](const TemplateNode& n) { return n.id == node; });
  auto groups = groups_of(*siblings);
  groups.erase(groups.begin() + (it - siblings->begin()));
  if (!groups_contiguous(groups)) {
    throw Error(ErrorCode::NonContiguousGroup,
                "removing '" + node + "' would merge non-adjacent group runs");
  }
  siblings->erase(it);
}

SpecTree new_spec(std::string name) { return SpecTree(std::move(name)); }

namespace {

void validate_list(const std::vector<TemplateNode>& siblings, const NodeId& owner,
                   std::set<NodeId>& seen, std::vector<Diagnostic>& out) {
  if (!groups_contiguous(groups_of(siblings))) {
    out.push_back({DiagnosticKind::NonContiguousGroup, owner,
                   "children of " + (owner.empty() ? std::string("root") : "'" + owner + "'") +
                       " split a group into several runs"});
  }
  for (const auto& n : siblings) {
    if (n.id.empty()) {
      out.push_back({DiagnosticKind::EmptyId, n.id, "node with empty id"});
    } else if (!seen.insert(n.id).second) {
      out.push_back({DiagnosticKind::DuplicateId, n.id, "id '" + n.id + "' used twice"});
    }
    if (n.group <= 0) {
      out.push_back({DiagnosticKind::NonPositiveGroup, n.id,
                     "group " + std::to_string(n.group) + " is not positive"});
    }
    if (!n.op.well_formed()) {
      out.push_back({DiagnosticKind::MalformedOperator, n.id,
                     std::string(to_string(n.op.kind)) + " has wrong or invalid intervals"});
    }
    if (n.predicate) {
      if (!is_valid_signal_name(n.predicate->signal)) {
        out.push_back({DiagnosticKind::InvalidSignalName, n.id,
                       "signal '" + n.predicate->signal + "' is not a valid name"});
      }
      if (!std::isfinite(n.predicate->threshold)) {
        out.push_back({DiagnosticKind::NonFiniteThreshold, n.id, "threshold is not finite"});
      }
    } else if (n.children.empty()) {
      out.push_back({DiagnosticKind::LeafWithoutPredicate, n.id,
                     "leaf '" + n.id + "' has no predicate"});
    }
    validate_list(n.children, n.id, seen, out);
  }
}

}  // namespace

std::vector<Diagnostic> validate_structure(const SpecTree& tree) {
  std::vector<Diagnostic> out;
  std::set<NodeId> seen;
  validate_list(tree.roots(), NodeId{}, seen, out);
  return out;
}

}  // namespace mtlspec
