#include "mtlspec/corpus.hpp"

#include "mtlspec/translator.hpp"

namespace mtlspec {
namespace {

constexpr auto LT = Relation::Less;
constexpr auto GT = Relation::Greater;
constexpr auto LE = Relation::LessEqual;

Formula p(const char* signal, Relation rel, double threshold) {
  return Formula::atom(signal, rel, threshold);
}
Formula G(double lo, double hi, Formula f) { return Formula::always({lo, hi}, std::move(f)); }
Formula F(double lo, double hi, Formula f) { return Formula::eventually({lo, hi}, std::move(f)); }
Formula both(Formula a, Formula b) { return Formula::conjunction(std::move(a), std::move(b)); }
Formula then(Formula a, Formula b) { return Formula::implication(std::move(a), std::move(b)); }

TemporalOperator always(double lo, double hi) { return TemporalOperator::always({lo, hi}); }
TemporalOperator once(double lo, double hi) { return TemporalOperator::at_least_once({lo, hi}); }

// Drives the same mutation API the editor uses.
class Build {
 public:
  explicit Build(std::string name) : tree_(std::move(name)) {}

  NodeId add(std::optional<NodeId> parent, int group, const TemporalOperator& op,
             std::optional<Predicate> predicate) {
    const NodeId id = tree_.add_template(parent, std::nullopt, group);
    tree_.set_operator(id, op);
    if (predicate) tree_.set_predicate(id, *predicate);
    return id;
  }

  NodeId root(int group, const TemporalOperator& op, Predicate predicate) {
    return add(std::nullopt, group, op, std::move(predicate));
  }

  Build& negate() {
    tree_.set_negated(true);
    return *this;
  }

  SpecTree done() const { return tree_; }

 private:
  SpecTree tree_;
};

Predicate pred(const char* signal, Relation rel, double threshold) {
  return Predicate{signal, rel, threshold};
}

CorpusEntry entry(std::string id, std::string source, SpecTree tree, Formula expected,
                  SpecificationClass label, bool negated = false) {
  return CorpusEntry{std::move(id), std::move(source), std::move(tree), std::move(expected),
                     Classification{label, negated}};
}

SpecTree single(const char* name, const TemporalOperator& op, Predicate predicate) {
  Build b(name);
  b.root(1, op, std::move(predicate));
  return b.done();
}

}  // namespace

std::vector<CorpusEntry> formula_corpus() {
  std::vector<CorpusEntry> out;

  out.push_back(entry("phi1", "Example 1 (Safety)",
                      single("phi1", always(0, 36), pred("rpm", LT, 4000)),
                      G(0, 36, p("rpm", LT, 4000)), SpecificationClass::Safety));

  out.push_back(entry("phi2", "Example 2 (Reachability)",
                      single("phi2", once(0, 39), pred("speed", GT, 100)),
                      F(0, 39, p("speed", GT, 100)), SpecificationClass::Reachability));

  out.push_back(entry("phi3", "Example 3 (Eventually Always)",
                      single("phi3", TemporalOperator::eventually_always({0, 30}, {0, 10}),
                             pred("speed", GT, 100)),
                      F(0, 30, G(0, 10, p("speed", GT, 100))), SpecificationClass::Stabilization));

  out.push_back(entry("phi4", "Example 4 (Repeatedly Often and Finally)",
                      single("phi4", TemporalOperator::repeatedly_often({0, 30}, {0, 10}),
                             pred("speed", GT, 100)),
                      G(0, 30, F(0, 10, p("speed", GT, 100))), SpecificationClass::Recurrence));

  {
    Build b("phi5");
    b.root(1, once(0, 40), pred("speed", GT, 100));
    b.root(2, once(0, 30), pred("rpm", GT, 3000));
    out.push_back(entry("phi5", "Example 5 (sequenced templates)", b.done(),
                        then(F(0, 40, p("speed", GT, 100)), F(0, 30, p("rpm", GT, 3000))),
                        SpecificationClass::Implication));
  }
  {
    Build b("phi6");
    b.root(1, always(0, 40), pred("speed", LT, 100));
    b.root(1, always(0, 40), pred("rpm", LT, 4000));
    out.push_back(entry("phi6", "Example 6 (grouped templates)", b.done(),
                        both(G(0, 40, p("speed", LT, 100)), G(0, 40, p("rpm", LT, 4000))),
                        SpecificationClass::Conjunction));
  }
  {
    Build b("phi7");
    const auto parent = b.root(1, always(0, 40), pred("speed", LT, 80));
    b.add(parent, 2, always(0, 40), pred("rpm", LT, 4000));
    out.push_back(entry("phi7", "Example 7 (nested templates)", b.done(),
                        G(0, 40, then(p("speed", LT, 80), G(0, 40, p("rpm", LT, 4000)))),
                        SpecificationClass::ReactiveResponse));
  }
  {
    // Predicates a..d are encoded as "x > 0"; the figure's operators carry
    // no bounds, so every window is [0,10].
    Build b("tree-figure");
    const auto n1 = b.root(1, always(0, 10), pred("a", GT, 0));
    b.add(n1, 1, once(0, 10), pred("b", GT, 0));
    const auto n3 = b.add(std::nullopt, 2, TemporalOperator::now(), std::nullopt);
    b.add(n3, 2, always(0, 10), pred("c", GT, 0));
    const auto n32 = b.add(n3, 2, once(0, 10), pred("d", GT, 0));
    b.add(n32, 3, TemporalOperator::now(), pred("a", GT, 0));
    b.add(n32, 3, always(0, 10), pred("b", GT, 0));
    const Formula a = p("a", GT, 0), bb = p("b", GT, 0), c = p("c", GT, 0), d = p("d", GT, 0);
    out.push_back(entry(
        "fig7", "Tree-structure figure", b.done(),
        then(G(0, 10, both(a, F(0, 10, bb))),
             both(G(0, 10, c), F(0, 10, then(d, both(a, G(0, 10, bb)))))),
        SpecificationClass::Implication));
  }
  {
    // !puncturing as (puncturing < 0.5); f_max = 10
    Build b("phi_s1");
    const auto parent = b.root(1, always(0, 30), pred("puncturing", LT, 0.5));
    b.add(parent, 2, TemporalOperator::now(), pred("f", LE, 10));
    out.push_back(entry("phi_s1", "Surgical robot: bounded force", b.done(),
                        G(0, 30, then(p("puncturing", LT, 0.5), p("f", LE, 10))),
                        SpecificationClass::Safety));
  }
  {
    // Stop as (Stop > 0.5); needle in R as 5 < n_x < 10 /\ 5 < n_y < 10
    Build b("phi_s2");
    const auto parent = b.root(1, once(0, 40), pred("Stop", GT, 0.5));
    b.add(parent, 1, TemporalOperator::now(), pred("n_x", GT, 5));
    b.add(parent, 1, TemporalOperator::now(), pred("n_x", LT, 10));
    b.add(parent, 1, TemporalOperator::now(), pred("n_y", GT, 5));
    b.add(parent, 1, TemporalOperator::now(), pred("n_y", LT, 10));
    out.push_back(entry(
        "phi_s2", "Surgical robot: needle stops inside the target region", b.done(),
        F(0, 40, both(p("Stop", GT, 0.5),
                      both(p("n_x", GT, 5),
                           both(p("n_x", LT, 10), both(p("n_y", GT, 5), p("n_y", LT, 10)))))),
        SpecificationClass::Reachability));
  }
  {
    // v_min = 10 < v_eff < v_max = 20 as two grouped templates under one Always
    Build b("phi_s3");
    const auto scope = b.add(std::nullopt, 1, always(0, 40), std::nullopt);
    b.add(scope, 1, TemporalOperator::now(), pred("v_eff", GT, 10));
    b.add(scope, 1, TemporalOperator::now(), pred("v_eff", LT, 20));
    out.push_back(entry("phi_s3", "Surgical robot: end-effector speed band", b.done(),
                        G(0, 40, both(p("v_eff", GT, 10), p("v_eff", LT, 20))),
                        SpecificationClass::Safety));
  }
  {
    // |alpha| < 45 as (alpha < 45) grouped with (alpha > -45); same for beta
    Build b("phi_q1");
    const auto pitch = b.add(std::nullopt, 1, always(0, 40), std::nullopt);
    b.add(pitch, 1, TemporalOperator::now(), pred("alpha", LT, 45));
    b.add(pitch, 1, TemporalOperator::now(), pred("alpha", GT, -45));
    const auto roll = b.add(std::nullopt, 1, always(0, 40), std::nullopt);
    b.add(roll, 1, TemporalOperator::now(), pred("beta", LT, 45));
    b.add(roll, 1, TemporalOperator::now(), pred("beta", GT, -45));
    out.push_back(entry("phi_q1", "Quadcopter: pitch and roll bounds", b.done(),
                        both(G(0, 40, both(p("alpha", LT, 45), p("alpha", GT, -45))),
                             G(0, 40, both(p("beta", LT, 45), p("beta", GT, -45)))),
                        SpecificationClass::Conjunction));
  }
  {
    // d = 5, v_max = 10
    Build b("phi_q2");
    const auto parent = b.root(1, always(0, 40), pred("dist", LT, 5));
    b.add(parent, 2, always(0, 20), pred("v", LT, 10));
    out.push_back(entry("phi_q2", "Quadcopter: slow down near the target", b.done(),
                        G(0, 40, then(p("dist", LT, 5), G(0, 20, p("v", LT, 10)))),
                        SpecificationClass::ReactiveResponse));
  }
  return out;
}

std::vector<CorpusEntry> task_corpus() {
  std::vector<CorpusEntry> out;
  out.push_back(entry("task1", "Task 1: Safety",
                      single("task1", always(0, 40), pred("speed", LT, 160)),
                      G(0, 40, p("speed", LT, 160)), SpecificationClass::Safety));
  out.push_back(entry("task2", "Task 2: Reachability",
                      single("task2", once(0, 30), pred("speed", GT, 120)),
                      F(0, 30, p("speed", GT, 120)), SpecificationClass::Reachability));
  out.push_back(entry("task3", "Task 3: Stabilization",
                      single("task3", TemporalOperator::eventually_always({0, 30}, {0, 20}),
                             pred("speed", GT, 100)),
                      F(0, 30, G(0, 20, p("speed", GT, 100))), SpecificationClass::Stabilization));
  out.push_back(entry("task4", "Task 4: Recurrence",
                      single("task4", TemporalOperator::repeatedly_often({0, 40}, {0, 10}),
                             pred("speed", GT, 100)),
                      G(0, 40, F(0, 10, p("speed", GT, 100))), SpecificationClass::Recurrence));
  {
    Build b("task5");
    b.root(1, TemporalOperator::repeatedly_often({0, 40}, {0, 10}), pred("speed", GT, 100));
    b.negate();
    out.push_back(entry("task5", "Task 5: Recurrence (negated)", b.done(),
                        Formula::negation(G(0, 40, F(0, 10, p("speed", GT, 100)))),
                        SpecificationClass::Recurrence, true));
  }
  {
    Build b("task6");
    b.root(1, once(0, 40), pred("speed", GT, 100));
    b.root(2, once(0, 30), pred("rpm", GT, 3000));
    out.push_back(entry("task6", "Task 6: Implication", b.done(),
                        then(F(0, 40, p("speed", GT, 100)), F(0, 30, p("rpm", GT, 3000))),
                        SpecificationClass::Implication));
  }
  {
    Build b("task7");
    const auto parent = b.root(1, always(0, 40), pred("speed", GT, 80));
    b.add(parent, 2, always(0, 30), pred("rpm", GT, 4000));
    out.push_back(entry("task7", "Task 7: Reactive Response", b.done(),
                        G(0, 40, then(p("speed", GT, 80), G(0, 30, p("rpm", GT, 4000)))),
                        SpecificationClass::ReactiveResponse));
  }
  {
    Build b("task8");
    b.root(1, always(0, 40), pred("speed", LT, 100));
    b.root(1, always(0, 40), pred("rpm", LT, 4000));
    out.push_back(entry("task8", "Task 8: Conjunction", b.done(),
                        both(G(0, 40, p("speed", LT, 100)), G(0, 40, p("rpm", LT, 4000))),
                        SpecificationClass::Conjunction));
  }
  {
    Build b("task9");
    const auto parent = b.root(1, once(0, 40), pred("speed", GT, 80));
    b.add(parent, 1, always(0, 30), pred("rpm", GT, 4000));
    out.push_back(entry("task9", "Task 9: Non-strict sequencing", b.done(),
                        F(0, 40, both(p("speed", GT, 80), G(0, 30, p("rpm", GT, 4000)))),
                        SpecificationClass::NonStrictSequencing));
  }
  {
    // Long sequence, read as a chain of nested reactive responses.
    Build b("task10");
    const auto first = b.root(1, always(0, 40), pred("speed", GT, 80));
    const auto second = b.add(first, 2, always(0, 20), pred("rpm", GT, 4000));
    b.add(second, 3, always(0, 30), pred("speed", GT, 100));
    out.push_back(entry(
        "task10", "Task 10: Long sequence", b.done(),
        G(0, 40, then(p("speed", GT, 80),
                      G(0, 20, then(p("rpm", GT, 4000), G(0, 30, p("speed", GT, 100)))))),
        SpecificationClass::ReactiveResponse));
  }
  return out;
}

std::vector<CorpusEntry> full_corpus() {
  auto out = formula_corpus();
  for (auto& e : task_corpus()) out.push_back(std::move(e));
  return out;
}

std::size_t CorpusReport::passed() const {
  std::size_t n = 0;
  for (const auto& r : results) n += r.passed() ? 1 : 0;
  return n;
}

std::string CorpusReport::text() const {
  std::string out;
  for (const auto& r : results) {
    out += r.passed() ? "PASS " : "FAIL ";
    out += r.id;
    if (!r.passed()) out += "  " + r.detail;
    out += '\n';
  }
  out += std::to_string(passed()) + "/" + std::to_string(total()) + " corpus entries passed\n";
  return out;
}

CorpusReport run_corpus(const std::vector<CorpusEntry>& entries) {
  CorpusReport report;
  for (const auto& e : entries) {
    CorpusResult r;
    r.id = e.id;
    try {
      const Formula f = translate(e.tree);
      r.translated = f == e.expected_formula;
      if (!r.translated) {
        r.detail = "translated " + format(f) + " expected " + format(e.expected_formula);
      }
      const auto c = classify(f);
      r.classified = c == e.expected_class;
      if (!r.classified && r.detail.empty()) {
        r.detail = std::string("class ") + (c.negated ? "!" : "") + std::string(to_string(c.label)) +
                   " expected " + (e.expected_class.negated ? "!" : "") +
                   std::string(to_string(e.expected_class.label));
      }
      const auto rec = recognize(f, FragmentMode::Extended);
      r.recognized = rec.accepted;
      if (!r.recognized && r.detail.empty()) r.detail = "rejected: " + rec.reason;
      r.round_trip = parse(format(f)) == f;
      if (!r.round_trip && r.detail.empty()) r.detail = "format/parse round trip differs";
    } catch (const Error& err) {
      r.detail = err.what();
    }
    report.results.push_back(std::move(r));
  }
  return report;
}

CorpusReport run_corpus() { return run_corpus(full_corpus()); }

}  // namespace mtlspec
