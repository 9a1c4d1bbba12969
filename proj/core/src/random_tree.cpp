#include <algorithm>

#include "mtlspec/fragment.hpp"
#include "rng.hpp"

namespace mtlspec {
namespace {

class TreeGenerator {
 public:
  explicit TreeGenerator(const RandomTreeOptions& options)
      : options_(options), rng_(options.seed) {
    if (options_.signals.empty()) options_.signals = {"x"};
  }

  SpecTree run() {
    const int depth = std::max(1, options_.max_depth);
    std::vector<TemplateNode> roots;
    if (depth == 1) {
      roots.push_back(leaf(fresh_group(), options_.profile == FragmentProfile::Strict));
    } else if (options_.profile == FragmentProfile::Strict) {
      roots = strict_top(depth);
    } else {
      roots = extended_list(depth, rng_.between(1, 3), fresh_group());
    }
    const bool negated = rng_.chance(0.2);
    return SpecTree("random-" + std::to_string(options_.seed), negated, std::move(roots));
  }

 private:
  NodeId next_id() { return "t" + std::to_string(++id_counter_); }

  // Gaps between group numbers are deliberate: only equality of neighbours
  // may influence translation.
  int fresh_group() {
    group_counter_ += rng_.between(1, 3);
    return group_counter_;
  }

  double bound() {
    const int whole = rng_.between(0, 40);
    return rng_.chance(0.2) ? whole + 0.5 : whole;
  }

  Interval window() {
    double a = bound();
    double b = bound();
    if (a > b) std::swap(a, b);
    return {a, b};
  }

  Predicate predicate() {
    Predicate p;
    p.signal = options_.signals[static_cast<std::size_t>(
        rng_.between(0, static_cast<int>(options_.signals.size()) - 1))];
    p.relation = static_cast<Relation>(rng_.between(0, 3));
    const int whole = rng_.between(-100, 5000);
    p.threshold = rng_.chance(0.25) ? whole + 0.25 : whole;
    return p;
  }

  TemporalOperator any_operator() {
    switch (rng_.between(0, 4)) {
      case 0: return TemporalOperator::now();
      case 1: return TemporalOperator::always(window());
      case 2: return TemporalOperator::at_least_once(window());
      case 3: return TemporalOperator::eventually_always(window(), window());
      default: return TemporalOperator::repeatedly_often(window(), window());
    }
  }

  TemporalOperator single_operator() {
    switch (rng_.between(0, 2)) {
      case 0: return TemporalOperator::now();
      case 1: return TemporalOperator::always(window());
      default: return TemporalOperator::at_least_once(window());
    }
  }

  TemplateNode leaf(int group, bool p_form) {
    TemplateNode n;
    n.id = next_id();
    n.group = group;
    n.op = p_form ? single_operator() : any_operator();
    n.predicate = predicate();
    return n;
  }

  std::vector<TemplateNode> extended_list(int depth, int count, int first_group) {
    std::vector<TemplateNode> out;
    int group = first_group;
    for (int i = 0; i < count; ++i) {
      if (i > 0 && rng_.chance(0.5)) group = fresh_group();
      out.push_back(extended_node(depth, group));
    }
    return out;
  }

  TemplateNode extended_node(int depth, int group) {
    if (depth <= 1 || !rng_.chance(0.45)) return leaf(group, false);
    TemplateNode n;
    n.id = next_id();
    n.group = group;
    n.op = any_operator();
    if (rng_.chance(0.7)) n.predicate = predicate();
    const int child_group = rng_.chance(0.5) ? group : fresh_group();
    n.children = extended_list(depth - 1, rng_.between(1, 3), child_group);
    return n;
  }

  // Strict profile: T -> A | B | C.
  std::vector<TemplateNode> strict_top(int depth) {
    switch (rng_.between(0, 2)) {
      case 0: return a_chain(rng_.between(1, 3), fresh_group());
      case 1: return {temporal_node(depth, false, fresh_group())};
      default: return {temporal_node(depth, true, fresh_group())};
    }
  }

  // A: a sibling chain of P-form leaves.
  std::vector<TemplateNode> a_chain(int count, int first_group) {
    std::vector<TemplateNode> out;
    int group = first_group;
    for (int i = 0; i < count; ++i) {
      if (i > 0 && rng_.chance(0.5)) group = fresh_group();
      out.push_back(leaf(group, true));
    }
    return out;
  }

  // B (single operator) or C (combined operator) over a D body.
  TemplateNode temporal_node(int depth, bool combined, int group) {
    TemplateNode n;
    n.id = next_id();
    n.group = group;
    if (combined) {
      n.op = rng_.chance(0.5) ? TemporalOperator::eventually_always(window(), window())
                              : TemporalOperator::repeatedly_often(window(), window());
    } else {
      n.op = rng_.chance(0.5) ? TemporalOperator::always(window())
                              : TemporalOperator::at_least_once(window());
    }
    n.predicate = predicate();
    if (depth <= 1 || rng_.chance(0.35)) return n;  // D -> p
    const int child_group = rng_.chance(0.5) ? group : fresh_group();
    if (depth >= 3 && rng_.chance(0.4)) {
      n.children.push_back(temporal_node(depth - 1, false, child_group));  // D -> (p op B)
    } else {
      n.children = a_chain(rng_.between(1, 3), child_group);  // D -> (p op A)
    }
    return n;
  }

  RandomTreeOptions options_;
  detail::Rng rng_;
  int id_counter_ = 0;
  int group_counter_ = 0;
};

}  // namespace

SpecTree random_fragment_tree(const RandomTreeOptions& options) {
  return TreeGenerator(options).run();
}

}  // namespace mtlspec
