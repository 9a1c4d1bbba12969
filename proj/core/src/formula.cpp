#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

#include "mtlspec/mtl.hpp"

namespace mtlspec {

struct Formula::Node {
  FormulaKind kind = FormulaKind::Atom;
  Predicate atom;
  Interval window;
  std::shared_ptr<const Node> left;
  std::shared_ptr<const Node> right;
};

Formula Formula::atom(Predicate predicate) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Atom;
  n->atom = std::move(predicate);
  return Formula(std::move(n));
}

Formula Formula::atom(std::string signal, Relation rel, double threshold) {
  return atom(Predicate{std::move(signal), rel, threshold});
}

Formula Formula::negation(Formula operand) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Not;
  n->left = std::move(operand.node_);
  return Formula(std::move(n));
}

Formula Formula::conjunction(Formula lhs, Formula rhs) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::And;
  n->left = std::move(lhs.node_);
  n->right = std::move(rhs.node_);
  return Formula(std::move(n));
}

Formula Formula::implication(Formula lhs, Formula rhs) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Implies;
  n->left = std::move(lhs.node_);
  n->right = std::move(rhs.node_);
  return Formula(std::move(n));
}

Formula Formula::always(Interval window, Formula operand) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Always;
  n->window = window;
  n->left = std::move(operand.node_);
  return Formula(std::move(n));
}

Formula Formula::eventually(Interval window, Formula operand) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Eventually;
  n->window = window;
  n->left = std::move(operand.node_);
  return Formula(std::move(n));
}

const Formula::Node& Formula::node() const {
  if (!node_) throw std::logic_error("empty formula handle");
  return *node_;
}

FormulaKind Formula::kind() const noexcept { return node_ ? node_->kind : FormulaKind::Atom; }

const Predicate& Formula::predicate() const {
  if (kind() != FormulaKind::Atom) throw std::logic_error("predicate() on non-atom");
  return node().atom;
}

const Interval& Formula::interval() const {
  if (!is_temporal()) throw std::logic_error("interval() on non-temporal formula");
  return node().window;
}

Formula Formula::operand() const {
  if (kind() != FormulaKind::Not && !is_temporal()) {
    throw std::logic_error("operand() on formula without a single operand");
  }
  return Formula(node().left);
}

Formula Formula::lhs() const {
  if (!is_binary()) throw std::logic_error("lhs() on non-binary formula");
  return Formula(node().left);
}

Formula Formula::rhs() const {
  if (!is_binary()) throw std::logic_error("rhs() on non-binary formula");
  return Formula(node().right);
}

namespace {

bool equal_nodes(const Formula& a, const Formula& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case FormulaKind::Atom: return a.predicate() == b.predicate();
    case FormulaKind::Not: return equal_nodes(a.operand(), b.operand());
    case FormulaKind::And:
    case FormulaKind::Implies:
      return equal_nodes(a.lhs(), b.lhs()) && equal_nodes(a.rhs(), b.rhs());
    case FormulaKind::Always:
    case FormulaKind::Eventually:
      return a.interval() == b.interval() && equal_nodes(a.operand(), b.operand());
  }
  return false;
}

}  // namespace

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  return equal_nodes(a, b);
}

std::string format_number(double value) {
  if (value == 0.0) return "0";  // folds -0
  std::array<char, 512> buffer{};
  auto [ptr, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value,
                                 std::chars_format::fixed);
  if (ec != std::errc{}) throw std::runtime_error("number too long to format");
  return std::string(buffer.data(), ptr);
}

namespace {

void format_into(const Formula& f, std::string& out);

// Atoms print their own parentheses; everything else gets wrapped.
void format_operand(const Formula& f, std::string& out) {
  if (f.is_atom()) {
    format_into(f, out);
    return;
  }
  out += '(';
  format_into(f, out);
  out += ')';
}

void format_into(const Formula& f, std::string& out) {
  switch (f.kind()) {
    case FormulaKind::Atom: {
      const auto& p = f.predicate();
      out += '(';
      out += p.signal;
      out += ' ';
      out += to_string(p.relation);
      out += ' ';
      out += format_number(p.threshold);
      out += ')';
      return;
    }
    case FormulaKind::Not:
      out += '!';
      format_operand(f.operand(), out);
      return;
    case FormulaKind::And:
    case FormulaKind::Implies:
      format_operand(f.lhs(), out);
      out += f.kind() == FormulaKind::And ? " /\\ " : " -> ";
      format_operand(f.rhs(), out);
      return;
    case FormulaKind::Always:
    case FormulaKind::Eventually:
      out += f.kind() == FormulaKind::Always ? "[]" : "<>";
      out += "_[";
      out += format_number(f.interval().lo);
      out += ',';
      out += format_number(f.interval().hi);
      out += ']';
      format_operand(f.operand(), out);
      return;
  }
}

}  // namespace

std::string format(const Formula& formula) {
  std::string out;
  format_into(formula, out);
  return out;
}

double horizon(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom: return 0.0;
    case FormulaKind::Not: return horizon(f.operand());
    case FormulaKind::And:
    case FormulaKind::Implies: return std::max(horizon(f.lhs()), horizon(f.rhs()));
    case FormulaKind::Always:
    case FormulaKind::Eventually: return f.interval().hi + horizon(f.operand());
  }
  return 0.0;
}

int depth(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom: return 1;
    case FormulaKind::Not:
    case FormulaKind::Always:
    case FormulaKind::Eventually: return 1 + depth(f.operand());
    case FormulaKind::And:
    case FormulaKind::Implies: return 1 + std::max(depth(f.lhs()), depth(f.rhs()));
  }
  return 0;
}

}  // namespace mtlspec
