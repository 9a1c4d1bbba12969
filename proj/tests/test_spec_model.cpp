#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "mtlspec/corpus.hpp"
#include "mtlspec/error.hpp"
#include "mtlspec/fragment.hpp"
#include "mtlspec/spec_model.hpp"
#include "mtlspec/translator.hpp"

using namespace mtlspec;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::IoError;
}

}  // namespace

TEST(Interval, Validity) {
  EXPECT_TRUE((Interval{0, 36}).valid());
  EXPECT_TRUE((Interval{5, 5}).valid());
  EXPECT_FALSE((Interval{5, 1}).valid());
  EXPECT_FALSE((Interval{-1, 1}).valid());
  EXPECT_FALSE((Interval{0, std::numeric_limits<double>::infinity()}).valid());
}

TEST(Predicate, SignalNames) {
  EXPECT_TRUE(is_valid_signal_name("rpm"));
  EXPECT_TRUE(is_valid_signal_name("n_x"));
  EXPECT_TRUE(is_valid_signal_name("v2"));
  EXPECT_FALSE(is_valid_signal_name(""));
  EXPECT_FALSE(is_valid_signal_name("2v"));
  EXPECT_FALSE(is_valid_signal_name("_x"));
  EXPECT_FALSE(is_valid_signal_name("a-b"));
}

TEST(Relation, Holds) {
  EXPECT_TRUE(holds(Relation::Less, 1, 2));
  EXPECT_FALSE(holds(Relation::Less, 2, 2));
  EXPECT_TRUE(holds(Relation::LessEqual, 2, 2));
  EXPECT_TRUE(holds(Relation::GreaterEqual, 2, 2));
  EXPECT_FALSE(holds(Relation::Greater, 2, 2));
  for (auto rel : {Relation::Less, Relation::Greater, Relation::LessEqual, Relation::GreaterEqual}) {
    EXPECT_EQ(relation_from_string(to_string(rel)), rel);
  }
}

TEST(TemporalOperator, Arity) {
  EXPECT_TRUE(TemporalOperator::now().well_formed());
  EXPECT_TRUE(TemporalOperator::always({0, 36}).well_formed());
  EXPECT_TRUE(TemporalOperator::eventually_always({0, 30}, {0, 10}).well_formed());
  EXPECT_FALSE((TemporalOperator{OperatorKind::Always, std::nullopt, std::nullopt}).well_formed());
  EXPECT_FALSE((TemporalOperator{OperatorKind::Now, Interval{0, 1}, std::nullopt}).well_formed());
  EXPECT_FALSE(
      (TemporalOperator{OperatorKind::EventuallyAlways, Interval{0, 1}, std::nullopt}).well_formed());
  EXPECT_FALSE(TemporalOperator::always({3, 1}).well_formed());
  EXPECT_EQ(interval_arity(OperatorKind::RepeatedlyOftenAndFinally), 2);
}

TEST(NewSpec, Empty) {
  const auto t = new_spec("demo");
  EXPECT_EQ(t.name(), "demo");
  EXPECT_FALSE(t.negated());
  EXPECT_TRUE(t.roots().empty());
  EXPECT_TRUE(validate_structure(t).empty());
  EXPECT_EQ(new_spec("").name(), "");
  EXPECT_EQ(code_of([&] { translate(t); }), ErrorCode::NoTemplates);
}

TEST(AddTemplate, RootAndChild) {
  auto t = new_spec("t");
  const auto root = t.add_template(std::nullopt, std::nullopt, 1);
  const auto* node = t.find(root);
  ASSERT_NE(node, nullptr);
  EXPECT_EQ(node->op.kind, OperatorKind::Now);
  EXPECT_FALSE(node->predicate);
  EXPECT_TRUE(node->children.empty());
  const auto child = t.add_template(root, std::nullopt, 2);
  EXPECT_NE(child, root);
  EXPECT_EQ(t.parent_of(child), root);
  EXPECT_EQ(t.find(root)->children.size(), 1u);
  EXPECT_EQ(t.find(root)->children[0].group, 2);
}

TEST(AddTemplate, AfterSibling) {
  auto t = new_spec("t");
  const auto a = t.add_template(std::nullopt, std::nullopt, 1);
  const auto b = t.add_template(std::nullopt, std::nullopt, 1);
  const auto c = t.add_template(std::nullopt, a, 1);
  ASSERT_EQ(t.roots().size(), 3u);
  EXPECT_EQ(t.roots()[0].id, a);
  EXPECT_EQ(t.roots()[1].id, c);
  EXPECT_EQ(t.roots()[2].id, b);
}

TEST(AddTemplate, Errors) {
  auto t = new_spec("t");
  const auto a = t.add_template(std::nullopt, std::nullopt, 1);
  EXPECT_EQ(code_of([&] { t.add_template(std::string("nope"), std::nullopt, 1); }),
            ErrorCode::UnknownParent);
  EXPECT_EQ(code_of([&] { t.add_template(std::nullopt, std::string("nope"), 1); }),
            ErrorCode::UnknownSibling);
  // `a` is a root, not a child of itself
  EXPECT_EQ(code_of([&] { t.add_template(a, a, 1); }), ErrorCode::UnknownSibling);
  EXPECT_EQ(code_of([&] { t.add_template(std::nullopt, std::nullopt, 0); }), ErrorCode::NonPositiveGroup);
  t.add_template(std::nullopt, std::nullopt, 2);
  // inserting group 2 between the 1-run and 2-run is fine; group 1 after the 2-run is not
  EXPECT_EQ(code_of([&] { t.add_template(std::nullopt, std::nullopt, 1); }),
            ErrorCode::NonContiguousGroup);
}

TEST(AddTemplate, FreshIds) {
  auto t = new_spec("t");
  std::set<NodeId> ids;
  std::optional<NodeId> parent;
  for (int i = 0; i < 20; ++i) {
    const auto id = t.add_template(parent, std::nullopt, 1);
    EXPECT_TRUE(ids.insert(id).second);
    if (i % 3 == 0) parent = id;
  }
}

TEST(SetOperator, ExamplesAndErrors) {
  auto t = new_spec("t");
  const auto n = t.add_template(std::nullopt, std::nullopt, 1);
  t.set_operator(n, TemporalOperator::always({0, 36}));
  EXPECT_EQ(t.find(n)->op, TemporalOperator::always({0, 36}));
  t.set_operator(n, TemporalOperator::eventually_always({0, 30}, {0, 10}));
  EXPECT_EQ(t.find(n)->op.inner, (Interval{0, 10}));
  EXPECT_EQ(code_of([&] {
              t.set_operator(n, TemporalOperator{OperatorKind::Always, std::nullopt, std::nullopt});
            }),
            ErrorCode::MalformedOperator);
  EXPECT_EQ(code_of([&] { t.set_operator("zz", TemporalOperator::now()); }), ErrorCode::UnknownNode);
}

TEST(SetPredicate, ExamplesAndErrors) {
  auto t = new_spec("t");
  const auto n = t.add_template(std::nullopt, std::nullopt, 1);
  t.set_predicate(n, {"rpm", Relation::Less, 4000});
  EXPECT_EQ(t.find(n)->predicate, (Predicate{"rpm", Relation::Less, 4000}));
  t.set_predicate(n, {"speed", Relation::Greater, 100});
  EXPECT_EQ(t.find(n)->predicate->signal, "speed");
  EXPECT_EQ(code_of([&] {
              t.set_predicate(n, {"speed", Relation::Less, std::numeric_limits<double>::infinity()});
            }),
            ErrorCode::NonFiniteThreshold);
  EXPECT_EQ(code_of([&] { t.set_predicate(n, {"9x", Relation::Less, 1}); }), ErrorCode::InvalidSignalName);
  EXPECT_EQ(code_of([&] { t.set_predicate("zz", {"x", Relation::Less, 1}); }), ErrorCode::UnknownNode);
  // failed mutations leave the node as it was
  EXPECT_EQ(t.find(n)->predicate, (Predicate{"speed", Relation::Greater, 100}));
}

TEST(SetGroup, ConnectiveFollowsGroup) {
  auto t = new_spec("t");
  const auto a = t.add_template(std::nullopt, std::nullopt, 1);
  const auto b = t.add_template(std::nullopt, std::nullopt, 1);
  t.set_operator(a, TemporalOperator::always({0, 40}));
  t.set_operator(b, TemporalOperator::always({0, 40}));
  t.set_predicate(a, {"speed", Relation::Less, 100});
  t.set_predicate(b, {"rpm", Relation::Less, 4000});
  EXPECT_EQ(translate(t).kind(), FormulaKind::And);
  t.set_group(b, 2);
  EXPECT_EQ(translate(t).kind(), FormulaKind::Implies);
}

TEST(SetGroup, BreakingRunRejected) {
  auto t = new_spec("t");
  t.add_template(std::nullopt, std::nullopt, 1);
  const auto mid = t.add_template(std::nullopt, std::nullopt, 1);
  t.add_template(std::nullopt, std::nullopt, 1);
  EXPECT_EQ(code_of([&] { t.set_group(mid, 2); }), ErrorCode::NonContiguousGroup);
  EXPECT_EQ(code_of([&] { t.set_group("zz", 1); }), ErrorCode::UnknownNode);
}

TEST(RemoveTemplate, SubtreeAndErrors) {
  auto t = new_spec("t");
  const auto a = t.add_template(std::nullopt, std::nullopt, 1);
  const auto b = t.add_template(std::nullopt, std::nullopt, 2);
  t.add_template(b, std::nullopt, 1);
  t.add_template(std::nullopt, std::nullopt, 3);
  t.remove_template(b);
  EXPECT_EQ(t.node_count(), 2u);
  EXPECT_EQ(t.find(b), nullptr);
  EXPECT_TRUE(groups_contiguous({t.roots()[0].group, t.roots()[1].group}));
  EXPECT_EQ(code_of([&] { t.remove_template(b); }), ErrorCode::UnknownNode);
  EXPECT_EQ(code_of([&] { t.parent_of(b); }), ErrorCode::UnknownNode);
  EXPECT_EQ(t.parent_of(a), std::nullopt);
}

TEST(ValidateStructure, Diagnostics) {
  for (const auto& e : full_corpus()) EXPECT_TRUE(validate_structure(e.tree).empty()) << e.id;

  auto t = new_spec("t");
  const auto n = t.add_template(std::nullopt, std::nullopt, 1);
  auto d = validate_structure(t);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].kind, DiagnosticKind::LeafWithoutPredicate);
  EXPECT_EQ(d[0].node, n);

  TemplateNode leaf;
  leaf.id = "x";
  leaf.predicate = Predicate{"a", Relation::Less, 1};
  SpecTree dup("dup", false, {leaf, leaf});
  d = validate_structure(dup);
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].kind, DiagnosticKind::DuplicateId);
  EXPECT_EQ(d[0].node, "x");

  TemplateNode bad = leaf;
  bad.id = "y";
  bad.group = 0;
  bad.op = TemporalOperator{OperatorKind::Always, std::nullopt, std::nullopt};
  bad.predicate = Predicate{"1a", Relation::Less, std::nan("")};
  d = validate_structure(SpecTree("bad", false, {bad}));
  std::set<DiagnosticKind> kinds;
  for (const auto& x : d) kinds.insert(x.kind);
  EXPECT_EQ(kinds, (std::set<DiagnosticKind>{DiagnosticKind::NonPositiveGroup,
                                             DiagnosticKind::MalformedOperator,
                                             DiagnosticKind::InvalidSignalName,
                                             DiagnosticKind::NonFiniteThreshold}));

  TemplateNode g1 = leaf, g2 = leaf, g3 = leaf;
  g1.id = "a";
  g2.id = "b";
  g2.group = 2;
  g3.id = "c";
  d = validate_structure(SpecTree("runs", false, {g1, g2, g3}));
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(d[0].kind, DiagnosticKind::NonContiguousGroup);
}

TEST(GroupsContiguous, Runs) {
  EXPECT_TRUE(groups_contiguous({}));
  EXPECT_TRUE(groups_contiguous({1, 1, 2, 2, 3}));
  EXPECT_TRUE(groups_contiguous({3, 1, 2}));
  EXPECT_FALSE(groups_contiguous({1, 2, 1}));
}

// -- properties over random trees and random mutation sequences -------------

namespace {

std::vector<NodeId> ids_of(const SpecTree& t) {
  std::vector<NodeId> out;
  for_each_node(t.roots(), [&](const TemplateNode& n, int) { out.push_back(n.id); });
  return out;
}

/// Every node except `skip`, with its children stripped, keyed by id.
std::map<NodeId, TemplateNode> frame(const SpecTree& t, const NodeId& skip) {
  std::map<NodeId, TemplateNode> out;
  for_each_node(t.roots(), [&](const TemplateNode& n, int) {
    if (n.id == skip) return;
    TemplateNode copy = n;
    copy.children.clear();
    out.emplace(n.id, copy);
  });
  return out;
}

}  // namespace

TEST(SpecModelProperty, AddThenRemoveRestores) {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto tree = random_fragment_tree({seed});
    const auto ids = ids_of(tree);
    std::mt19937_64 rng(seed);
    auto t = tree;
    std::optional<NodeId> parent;
    if (rng() % 2 == 0) parent = ids[rng() % ids.size()];
    const auto& siblings = parent ? t.find(*parent)->children : t.roots();
    // reuse an existing group of the list so contiguity holds at the end
    const int group = siblings.empty() ? 1 : siblings.back().group;
    const auto added = t.add_template(parent, std::nullopt, group);
    EXPECT_EQ(t.node_count(), tree.node_count() + 1);
    t.remove_template(added);
    EXPECT_EQ(t, tree) << "seed " << seed;
  }
}

TEST(SpecModelProperty, FrameAndNoPhantomDiagnostics) {
  // the only rule a successful mutation can leave violated is a fresh,
  // predicate-less leaf
  const std::set<DiagnosticKind> allowed{DiagnosticKind::LeafWithoutPredicate};
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    auto t = random_fragment_tree({seed});
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    for (int step = 0; step < 25; ++step) {
      const auto ids = ids_of(t);
      if (ids.empty()) break;
      const auto target = ids[rng() % ids.size()];
      const auto before = t;
      try {
        switch (rng() % 5) {
          case 0: t.set_operator(target, TemporalOperator::always({0, double(rng() % 20)})); break;
          case 1: t.set_predicate(target, {"rpm", Relation::Greater, double(rng() % 5000)}); break;
          case 2: t.set_group(target, 1 + int(rng() % 3)); break;
          case 3: t.add_template(target, std::nullopt, 1 + int(rng() % 3)); break;
          default:
            if (ids.size() > 1) t.remove_template(target);
            break;
        }
      } catch (const Error&) {
        EXPECT_EQ(t, before) << "failed mutation changed the tree";
        continue;
      }
      // frame property for in-place edits
      if (t.node_count() == before.node_count()) {
        EXPECT_EQ(frame(t, target), frame(before, target)) << "seed " << seed;
      }
      for (const auto& d : validate_structure(t)) {
        EXPECT_TRUE(allowed.count(d.kind)) << to_string(d.kind);
      }
    }
  }
}
