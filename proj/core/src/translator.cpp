#include "mtlspec/translator.hpp"

#include <functional>

namespace mtlspec {

Formula apply_operator(const TemporalOperator& op, Formula body) {
  switch (op.kind) {
    case OperatorKind::Now: return body;
    case OperatorKind::Always: return Formula::always(*op.outer, std::move(body));
    case OperatorKind::AtLeastOnce: return Formula::eventually(*op.outer, std::move(body));
    case OperatorKind::EventuallyAlways:
      return Formula::eventually(*op.outer, Formula::always(*op.inner, std::move(body)));
    case OperatorKind::RepeatedlyOftenAndFinally:
      return Formula::always(*op.outer, Formula::eventually(*op.inner, std::move(body)));
  }
  return body;
}

namespace {

Formula node_formula(const TemplateNode& node);

Formula chain_formula(const std::vector<TemplateNode>& siblings) {
  Formula acc = node_formula(siblings.back());
  for (std::size_t i = siblings.size() - 1; i-- > 0;) {
    acc = siblings[i].group == siblings[i + 1].group
              ? Formula::conjunction(node_formula(siblings[i]), std::move(acc))
              : Formula::implication(node_formula(siblings[i]), std::move(acc));
  }
  return acc;
}

Formula node_formula(const TemplateNode& node) {
  if (node.children.empty()) return apply_operator(node.op, Formula::atom(*node.predicate));
  Formula chain = chain_formula(node.children);
  if (!node.predicate) return apply_operator(node.op, std::move(chain));
  Formula head = Formula::atom(*node.predicate);
  Formula body = node.group == node.children.front().group
                     ? Formula::conjunction(std::move(head), std::move(chain))
                     : Formula::implication(std::move(head), std::move(chain));
  return apply_operator(node.op, std::move(body));
}

}  // namespace

Formula translate(const SpecTree& tree) {
  if (tree.roots().empty()) throw Error(ErrorCode::NoTemplates, "specification has no templates");
  const auto diagnostics = validate_structure(tree);
  if (!diagnostics.empty()) {
    std::string message;
    for (const auto& d : diagnostics) {
      if (!message.empty()) message += "; ";
      message += std::string(to_string(d.kind)) + "(" + d.node + ")";
    }
    throw Error(ErrorCode::StructurallyInvalid, message);
  }
  Formula f = chain_formula(tree.roots());
  return tree.negated() ? Formula::negation(std::move(f)) : f;
}

Formula template_formula(const SpecTree& tree, const NodeId& node) {
  const auto* n = tree.find(node);
  if (n == nullptr) throw Error(ErrorCode::UnknownNode, "no node '" + node + "'");
  if (!n->predicate) throw Error(ErrorCode::NoPredicate, "node '" + node + "' has no predicate");
  if (!n->op.well_formed()) {
    throw Error(ErrorCode::MalformedOperator, "node '" + node + "' has a malformed operator");
  }
  return apply_operator(n->op, Formula::atom(*n->predicate));
}

// ---------------------------------------------------------------------------
// Canonical forms. Both canonicalize() and reverse() build this connective
// representation, where sibling links and the head-to-children link are
// explicit booleans (true = And), and share only the final numbering step.

namespace {

struct LinkedNode {
  TemporalOperator op;
  std::optional<Predicate> predicate;
  bool head_and = false;  // predicate /\ chain (true) or predicate -> chain
  std::vector<LinkedNode> children;
  std::vector<bool> links;  // links[i] joins children[i] and children[i+1]
};

struct LinkedList {
  std::vector<LinkedNode> items;
  std::vector<bool> links;
};

LinkedList to_linked(const std::vector<TemplateNode>& siblings);

LinkedNode to_linked(const TemplateNode& node) {
  LinkedNode out;
  out.op = node.op;
  out.predicate = node.predicate;
  if (!node.children.empty()) {
    out.head_and = node.predicate && node.group == node.children.front().group;
    auto list = to_linked(node.children);
    out.children = std::move(list.items);
    out.links = std::move(list.links);
  }
  return out;
}

LinkedList to_linked(const std::vector<TemplateNode>& siblings) {
  LinkedList out;
  for (std::size_t i = 0; i < siblings.size(); ++i) {
    out.items.push_back(to_linked(siblings[i]));
    if (i + 1 < siblings.size()) out.links.push_back(siblings[i].group == siblings[i + 1].group);
  }
  return out;
}

void emit_list(const std::vector<LinkedNode>& items, const std::vector<bool>& links,
               int first_group, int& next_group, int& next_id, std::vector<TemplateNode>& out) {
  int group = first_group;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const auto& item = items[i];
    TemplateNode node;
    node.id = "n" + std::to_string(next_id++);
    node.group = group;
    node.op = item.op;
    node.predicate = item.predicate;
    if (!item.children.empty()) {
      const int child_group = item.predicate && item.head_and ? group : next_group++;
      emit_list(item.children, item.links, child_group, next_group, next_id, node.children);
    }
    out.push_back(std::move(node));
    if (i + 1 < items.size() && !links[i]) group = next_group++;
  }
}

SpecTree emit_tree(std::string name, bool negated, const LinkedList& roots) {
  int next_group = 2;
  int next_id = 1;
  std::vector<TemplateNode> out;
  emit_list(roots.items, roots.links, 1, next_group, next_id, out);
  return SpecTree(std::move(name), negated, std::move(out));
}

bool is_now_with_children(const LinkedNode& n) {
  return n.op.kind == OperatorKind::Now && !n.children.empty();
}

void normalize_node(LinkedNode& node);

void normalize_list(std::vector<LinkedNode>& items, std::vector<bool>& links) {
  for (auto& item : items) normalize_node(item);
  bool changed = true;
  while (changed) {
    changed = false;
    // A Now structural node with one child is just that child.
    for (auto& item : items) {
      if (item.op.kind == OperatorKind::Now && !item.predicate && item.children.size() == 1) {
        LinkedNode only = std::move(item.children.front());
        item = std::move(only);
        changed = true;
      }
    }
    // A Now node with children at the end of a list continues the chain.
    if (!items.empty() && is_now_with_children(items.back())) {
      // The link that joined the previous item to `tail` now joins it to the
      // first spliced item.
      LinkedNode tail = std::move(items.back());
      items.pop_back();
      if (tail.predicate) {
        LinkedNode head;
        head.predicate = tail.predicate;
        items.push_back(std::move(head));
        links.push_back(tail.head_and);
      }
      for (std::size_t i = 0; i < tail.children.size(); ++i) {
        if (i > 0) links.push_back(tail.links[i - 1]);
        items.push_back(std::move(tail.children[i]));
      }
      changed = true;
    }
  }
}

void normalize_node(LinkedNode& node) {
  normalize_list(node.children, node.links);
  bool changed = true;
  while (changed) {
    changed = false;
    // Structural node whose chain starts with a bare predicate: that predicate
    // is the node's own.
    if (!node.predicate && !node.children.empty() &&
        node.children.front().op.kind == OperatorKind::Now && node.children.front().predicate &&
        node.children.front().children.empty()) {
      node.predicate = node.children.front().predicate;
      node.children.erase(node.children.begin());
      if (!node.children.empty()) {
        node.head_and = node.links.front();
        node.links.erase(node.links.begin());
      } else {
        node.head_and = false;
      }
      changed = true;
      continue;
    }
    // Stacked single operators over a lone child merge top-down.
    if (!node.predicate && node.children.size() == 1) {
      LinkedNode& child = node.children.front();
      const auto outer = node.op;
      const auto inner = child.op;
      const bool box = outer.kind == OperatorKind::Always;
      const bool diamond = outer.kind == OperatorKind::AtLeastOnce;
      if ((box && inner.kind == OperatorKind::AtLeastOnce) ||
          (diamond && inner.kind == OperatorKind::Always)) {
        LinkedNode merged = std::move(child);
        merged.op = box ? TemporalOperator::repeatedly_often(*outer.outer, *inner.outer)
                        : TemporalOperator::eventually_always(*outer.outer, *inner.outer);
        node = std::move(merged);
        changed = true;
        continue;
      }
      if ((box && inner.kind == OperatorKind::EventuallyAlways) ||
          (diamond && inner.kind == OperatorKind::RepeatedlyOftenAndFinally)) {
        node.op = box ? TemporalOperator::repeatedly_often(*outer.outer, *inner.outer)
                      : TemporalOperator::eventually_always(*outer.outer, *inner.outer);
        child.op = box ? TemporalOperator::always(*inner.inner)
                       : TemporalOperator::at_least_once(*inner.inner);
        normalize_node(child);
        changed = true;
        continue;
      }
    }
  }
}

// reverse ------------------------------------------------------------------

bool contains_negation(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom: return false;
    case FormulaKind::Not: return true;
    case FormulaKind::And:
    case FormulaKind::Implies: return contains_negation(f.lhs()) || contains_negation(f.rhs());
    case FormulaKind::Always:
    case FormulaKind::Eventually: return contains_negation(f.operand());
  }
  return false;
}

LinkedList chain_of(const Formula& f);

LinkedNode item_of(const Formula& f) {
  LinkedNode node;
  Formula body = f;
  if (f.kind() == FormulaKind::Eventually && f.operand().kind() == FormulaKind::Always) {
    node.op = TemporalOperator::eventually_always(f.interval(), f.operand().interval());
    body = f.operand().operand();
  } else if (f.kind() == FormulaKind::Always && f.operand().kind() == FormulaKind::Eventually) {
    node.op = TemporalOperator::repeatedly_often(f.interval(), f.operand().interval());
    body = f.operand().operand();
  } else if (f.kind() == FormulaKind::Always) {
    node.op = TemporalOperator::always(f.interval());
    body = f.operand();
  } else if (f.kind() == FormulaKind::Eventually) {
    node.op = TemporalOperator::at_least_once(f.interval());
    body = f.operand();
  }
  if (body.is_atom()) {
    node.predicate = body.predicate();
    return node;
  }
  if (body.is_binary() && body.lhs().is_atom()) {
    node.predicate = body.lhs().predicate();
    node.head_and = body.kind() == FormulaKind::And;
    auto rest = chain_of(body.rhs());
    node.children = std::move(rest.items);
    node.links = std::move(rest.links);
    return node;
  }
  auto inner = chain_of(body);
  node.children = std::move(inner.items);
  node.links = std::move(inner.links);
  return node;
}

LinkedList chain_of(const Formula& f) {
  LinkedList out;
  Formula cursor = f;
  while (cursor.is_binary()) {
    out.items.push_back(item_of(cursor.lhs()));
    out.links.push_back(cursor.kind() == FormulaKind::And);
    cursor = cursor.rhs();
  }
  out.items.push_back(item_of(cursor));
  return out;
}

}  // namespace

SpecTree canonicalize(const SpecTree& tree) {
  if (tree.roots().empty()) throw Error(ErrorCode::NoTemplates, "specification has no templates");
  if (!validate_structure(tree).empty()) {
    throw Error(ErrorCode::StructurallyInvalid, "cannot canonicalize an invalid tree");
  }
  LinkedList roots = to_linked(tree.roots());
  normalize_list(roots.items, roots.links);
  SpecTree out = emit_tree(tree.name(), tree.negated(), roots);
  out.set_description(tree.description());
  return out;
}

SpecTree reverse(const Formula& formula, std::string name) {
  bool negated = false;
  Formula body = formula;
  if (body.kind() == FormulaKind::Not) {
    negated = true;
    body = body.operand();
  }
  if (contains_negation(body)) {
    throw Error(ErrorCode::NotInFragment, "negation is only allowed at the top of the formula");
  }
  return emit_tree(std::move(name), negated, chain_of(body));
}

}  // namespace mtlspec
