#include <stdexcept>

#include "mtlspec/fragment.hpp"
#include "mtlspec/translator.hpp"

namespace mtlspec {

std::string_view to_string(Production p) noexcept {
  switch (p) {
    case Production::S_Negated: return "S -> !T";
    case Production::S_Plain: return "S -> T";
    case Production::T_A: return "T -> A";
    case Production::T_B: return "T -> B";
    case Production::T_C: return "T -> C";
    case Production::A_P: return "A -> P";
    case Production::A_And: return "A -> (P /\\ A)";
    case Production::A_Implies: return "A -> (P -> A)";
    case Production::B_Always: return "B -> []_I D";
    case Production::B_Eventually: return "B -> <>_I D";
    case Production::C_AlwaysEventually: return "C -> []_I <>_I D";
    case Production::C_EventuallyAlways: return "C -> <>_I []_I D";
    case Production::D_Atom: return "D -> p";
    case Production::D_ImpliesA: return "D -> (p -> A)";
    case Production::D_AndA: return "D -> (p /\\ A)";
    case Production::D_ImpliesB: return "D -> (p -> B)";
    case Production::D_AndB: return "D -> (p /\\ B)";
    case Production::P_Atom: return "P -> p";
    case Production::P_Always: return "P -> []_I p";
    case Production::P_Eventually: return "P -> <>_I p";
    case Production::X_Negated: return "S -> !L";
    case Production::X_Plain: return "S -> L";
    case Production::L_Item: return "L -> I";
    case Production::L_And: return "L -> (I /\\ L)";
    case Production::L_Implies: return "L -> (I -> L)";
    case Production::I_Atom: return "I -> O p";
    case Production::I_HeadAnd: return "I -> O (p /\\ L)";
    case Production::I_HeadImplies: return "I -> O (p -> L)";
    case Production::I_Scope: return "I -> O L";
  }
  return "?";
}

namespace {

using MaybeDerivation = std::optional<Derivation>;

Derivation make(Production p, std::vector<Derivation> children = {},
                std::vector<Interval> intervals = {}, std::optional<Predicate> atom = {}) {
  Derivation d;
  d.production = p;
  d.children = std::move(children);
  d.intervals = std::move(intervals);
  d.atom = std::move(atom);
  return d;
}

// Strict grammar: one function per nonterminal.

MaybeDerivation derive_a(const Formula& f);
MaybeDerivation derive_b(const Formula& f);

MaybeDerivation derive_p(const Formula& f) {
  if (f.is_atom()) return make(Production::P_Atom, {}, {}, f.predicate());
  if (f.is_temporal() && f.operand().is_atom()) {
    return make(f.kind() == FormulaKind::Always ? Production::P_Always : Production::P_Eventually,
                {}, {f.interval()}, f.operand().predicate());
  }
  return std::nullopt;
}

MaybeDerivation derive_d(const Formula& f) {
  if (f.is_atom()) return make(Production::D_Atom, {}, {}, f.predicate());
  if (!f.is_binary() || !f.lhs().is_atom()) return std::nullopt;
  const bool conj = f.kind() == FormulaKind::And;
  if (auto a = derive_a(f.rhs())) {
    return make(conj ? Production::D_AndA : Production::D_ImpliesA, {std::move(*a)}, {},
                f.lhs().predicate());
  }
  if (auto b = derive_b(f.rhs())) {
    return make(conj ? Production::D_AndB : Production::D_ImpliesB, {std::move(*b)}, {},
                f.lhs().predicate());
  }
  return std::nullopt;
}

MaybeDerivation derive_a(const Formula& f) {
  if (auto p = derive_p(f)) return make(Production::A_P, {std::move(*p)});
  if (!f.is_binary()) return std::nullopt;
  auto p = derive_p(f.lhs());
  if (!p) return std::nullopt;
  auto a = derive_a(f.rhs());
  if (!a) return std::nullopt;
  return make(f.kind() == FormulaKind::And ? Production::A_And : Production::A_Implies,
              {std::move(*p), std::move(*a)});
}

MaybeDerivation derive_b(const Formula& f) {
  if (!f.is_temporal()) return std::nullopt;
  auto d = derive_d(f.operand());
  if (!d) return std::nullopt;
  return make(f.kind() == FormulaKind::Always ? Production::B_Always : Production::B_Eventually,
              {std::move(*d)}, {f.interval()});
}

MaybeDerivation derive_c(const Formula& f) {
  if (!f.is_temporal()) return std::nullopt;
  const Formula inner = f.operand();
  if (!inner.is_temporal() || inner.kind() == f.kind()) return std::nullopt;
  auto d = derive_d(inner.operand());
  if (!d) return std::nullopt;
  return make(f.kind() == FormulaKind::Always ? Production::C_AlwaysEventually
                                              : Production::C_EventuallyAlways,
              {std::move(*d)}, {f.interval(), inner.interval()});
}

// A single []_I p or <>_I p derives both as B and as A -> P; the B reading
// is preferred.
MaybeDerivation derive_t(const Formula& f) {
  if (auto b = derive_b(f)) return make(Production::T_B, {std::move(*b)});
  if (auto c = derive_c(f)) return make(Production::T_C, {std::move(*c)});
  if (auto a = derive_a(f)) return make(Production::T_A, {std::move(*a)});
  return std::nullopt;
}

// Extended grammar.

bool has_negation(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Atom: return false;
    case FormulaKind::Not: return true;
    case FormulaKind::And:
    case FormulaKind::Implies: return has_negation(f.lhs()) || has_negation(f.rhs());
    case FormulaKind::Always:
    case FormulaKind::Eventually: return has_negation(f.operand());
  }
  return false;
}

Derivation derive_chain(const Formula& f);

Derivation derive_item(const Formula& f) {
  Derivation d;
  Formula body = f;
  if (f.is_temporal() && f.operand().is_temporal() && f.operand().kind() != f.kind()) {
    d.op = f.kind() == FormulaKind::Always ? OperatorKind::RepeatedlyOftenAndFinally
                                           : OperatorKind::EventuallyAlways;
    d.intervals = {f.interval(), f.operand().interval()};
    body = f.operand().operand();
  } else if (f.is_temporal()) {
    d.op = f.kind() == FormulaKind::Always ? OperatorKind::Always : OperatorKind::AtLeastOnce;
    d.intervals = {f.interval()};
    body = f.operand();
  }
  if (body.is_atom()) {
    d.production = Production::I_Atom;
    d.atom = body.predicate();
  } else if (body.is_binary() && body.lhs().is_atom()) {
    d.production =
        body.kind() == FormulaKind::And ? Production::I_HeadAnd : Production::I_HeadImplies;
    d.atom = body.lhs().predicate();
    d.children.push_back(derive_chain(body.rhs()));
  } else {
    d.production = Production::I_Scope;
    d.children.push_back(derive_chain(body));
  }
  return d;
}

Derivation derive_chain(const Formula& f) {
  if (!f.is_binary()) return make(Production::L_Item, {derive_item(f)});
  return make(f.kind() == FormulaKind::And ? Production::L_And : Production::L_Implies,
              {derive_item(f.lhs()), derive_chain(f.rhs())});
}

const Derivation& child(const Derivation& d, std::size_t i) {
  if (d.children.size() <= i) {
    throw std::invalid_argument(std::string("derivation step '") +
                                std::string(to_string(d.production)) + "' lacks a child");
  }
  return d.children[i];
}

const Interval& interval(const Derivation& d, std::size_t i) {
  if (d.intervals.size() <= i) {
    throw std::invalid_argument(std::string("derivation step '") +
                                std::string(to_string(d.production)) + "' lacks an interval");
  }
  return d.intervals[i];
}

Formula atom(const Derivation& d) {
  if (!d.atom) {
    throw std::invalid_argument(std::string("derivation step '") +
                                std::string(to_string(d.production)) + "' lacks its atom");
  }
  return Formula::atom(*d.atom);
}

Formula wrap_item_operator(const Derivation& d, Formula body) {
  TemporalOperator op;
  op.kind = d.op;
  const int arity = interval_arity(d.op);
  if (arity >= 1) op.outer = interval(d, 0);
  if (arity == 2) op.inner = interval(d, 1);
  return apply_operator(op, std::move(body));
}

}  // namespace

Recognition recognize(const Formula& formula, FragmentMode mode) {
  Recognition out;
  const bool negated = formula.kind() == FormulaKind::Not;
  const Formula body = negated ? formula.operand() : formula;
  if (has_negation(body)) {
    out.reason = "negation is only allowed at the root (S -> !T)";
    return out;
  }
  if (mode == FragmentMode::Strict) {
    auto t = derive_t(body);
    if (!t) {
      out.reason = "no derivation of T -> A | B | C for " + format(body);
      return out;
    }
    out.accepted = true;
    out.derivation = make(negated ? Production::S_Negated : Production::S_Plain, {std::move(*t)});
    return out;
  }
  out.accepted = true;
  out.derivation =
      make(negated ? Production::X_Negated : Production::X_Plain, {derive_chain(body)});
  return out;
}

Formula replay(const Derivation& d) {
  switch (d.production) {
    case Production::S_Negated:
    case Production::X_Negated: return Formula::negation(replay(child(d, 0)));
    case Production::S_Plain:
    case Production::X_Plain:
    case Production::T_A:
    case Production::T_B:
    case Production::T_C:
    case Production::A_P:
    case Production::L_Item: return replay(child(d, 0));
    case Production::A_And:
    case Production::L_And: return Formula::conjunction(replay(child(d, 0)), replay(child(d, 1)));
    case Production::A_Implies:
    case Production::L_Implies:
      return Formula::implication(replay(child(d, 0)), replay(child(d, 1)));
    case Production::B_Always: return Formula::always(interval(d, 0), replay(child(d, 0)));
    case Production::B_Eventually: return Formula::eventually(interval(d, 0), replay(child(d, 0)));
    case Production::C_AlwaysEventually:
      return Formula::always(interval(d, 0),
                             Formula::eventually(interval(d, 1), replay(child(d, 0))));
    case Production::C_EventuallyAlways:
      return Formula::eventually(interval(d, 0),
                                 Formula::always(interval(d, 1), replay(child(d, 0))));
    case Production::D_Atom:
    case Production::P_Atom: return atom(d);
    case Production::D_ImpliesA:
    case Production::D_ImpliesB: return Formula::implication(atom(d), replay(child(d, 0)));
    case Production::D_AndA:
    case Production::D_AndB: return Formula::conjunction(atom(d), replay(child(d, 0)));
    case Production::P_Always: return Formula::always(interval(d, 0), atom(d));
    case Production::P_Eventually: return Formula::eventually(interval(d, 0), atom(d));
    case Production::I_Atom: return wrap_item_operator(d, atom(d));
    case Production::I_HeadAnd:
      return wrap_item_operator(d, Formula::conjunction(atom(d), replay(child(d, 0))));
    case Production::I_HeadImplies:
      return wrap_item_operator(d, Formula::implication(atom(d), replay(child(d, 0))));
    case Production::I_Scope: return wrap_item_operator(d, replay(child(d, 0)));
  }
  throw std::invalid_argument("unknown production");
}

namespace {

void render_into(const Derivation& d, int indent, std::string& out) {
  out.append(static_cast<std::size_t>(indent) * 2, ' ');
  out += to_string(d.production);
  if (d.atom) out += "   p = " + format(Formula::atom(*d.atom));
  for (const auto& window : d.intervals) {
    out += "   I = [" + format_number(window.lo) + "," + format_number(window.hi) + "]";
  }
  out += '\n';
  for (const auto& c : d.children) render_into(c, indent + 1, out);
}

}  // namespace

std::string render(const Derivation& derivation) {
  std::string out;
  render_into(derivation, 0, out);
  return out;
}

std::string_view to_string(SpecificationClass c) noexcept {
  switch (c) {
    case SpecificationClass::Safety: return "Safety";
    case SpecificationClass::Reachability: return "Reachability";
    case SpecificationClass::Stabilization: return "Stabilization";
    case SpecificationClass::Recurrence: return "Recurrence";
    case SpecificationClass::Implication: return "Implication";
    case SpecificationClass::ReactiveResponse: return "ReactiveResponse";
    case SpecificationClass::Conjunction: return "Conjunction";
    case SpecificationClass::NonStrictSequencing: return "NonStrictSequencing";
    case SpecificationClass::CompositeOther: return "CompositeOther";
  }
  return "?";
}

std::optional<SpecificationClass> specification_class_from_string(std::string_view text) noexcept {
  for (auto c : {SpecificationClass::Safety, SpecificationClass::Reachability,
                 SpecificationClass::Stabilization, SpecificationClass::Recurrence,
                 SpecificationClass::Implication, SpecificationClass::ReactiveResponse,
                 SpecificationClass::Conjunction, SpecificationClass::NonStrictSequencing,
                 SpecificationClass::CompositeOther}) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

namespace {

SpecificationClass classify_shape(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Implies: return SpecificationClass::Implication;
    case FormulaKind::And: return SpecificationClass::Conjunction;
    case FormulaKind::Always:
    case FormulaKind::Eventually: {
      const Formula body = f.operand();
      if (body.is_binary() && body.rhs().is_temporal()) {
        return body.kind() == FormulaKind::Implies ? SpecificationClass::ReactiveResponse
                                                   : SpecificationClass::NonStrictSequencing;
      }
      if (body.is_temporal() && body.kind() != f.kind()) {
        return f.kind() == FormulaKind::Eventually ? SpecificationClass::Stabilization
                                                   : SpecificationClass::Recurrence;
      }
      return f.kind() == FormulaKind::Always ? SpecificationClass::Safety
                                             : SpecificationClass::Reachability;
    }
    case FormulaKind::Atom:
    case FormulaKind::Not: return SpecificationClass::CompositeOther;
  }
  return SpecificationClass::CompositeOther;
}

}  // namespace

Classification classify(const Formula& formula) {
  if (formula.kind() == FormulaKind::Not) return {classify_shape(formula.operand()), true};
  return {classify_shape(formula), false};
}

}  // namespace mtlspec
