#include "mtlspec/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace mtlspec {

Trace::Trace(std::vector<double> times, std::vector<Column> signals)
    : times_(std::move(times)), signals_(std::move(signals)) {
  if (times_.empty()) throw Error(ErrorCode::InvalidTrace, "trace needs at least one sample");
  if (times_.front() != 0.0) throw Error(ErrorCode::InvalidTrace, "trace must start at time 0");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i])) throw Error(ErrorCode::InvalidTrace, "non-finite time stamp");
    if (i > 0 && !(times_[i] > times_[i - 1])) {
      throw Error(ErrorCode::InvalidTrace,
                  "time stamps must strictly increase (sample " + std::to_string(i) + ")");
    }
  }
  std::set<std::string> names;
  for (const auto& [name, values] : signals_) {
    if (!names.insert(name).second) {
      throw Error(ErrorCode::InvalidTrace, "signal '" + name + "' appears twice");
    }
    if (values.size() != times_.size()) {
      throw Error(ErrorCode::InvalidTrace, "signal '" + name + "' has " +
                                               std::to_string(values.size()) + " samples, expected " +
                                               std::to_string(times_.size()));
    }
    if (!std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); })) {
      throw Error(ErrorCode::InvalidTrace, "signal '" + name + "' has a non-finite sample");
    }
  }
}

bool Trace::has_signal(const std::string& name) const noexcept {
  return std::any_of(signals_.begin(), signals_.end(),
                     [&](const Column& c) { return c.first == name; });
}

const std::vector<double>& Trace::values(const std::string& name) const {
  for (const auto& column : signals_) {
    if (column.first == name) return column.second;
  }
  throw Error(ErrorCode::UnknownSignal, "trace has no signal '" + name + "'");
}

std::vector<double> sample_times(double dt, double duration) {
  std::vector<double> times;
  const auto steps = static_cast<std::size_t>(std::floor(duration / dt + kTimeTolerance));
  times.reserve(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) times.push_back(static_cast<double>(k) * dt);
  return times;
}

HorizonCheck check_horizon(const Formula& formula, const Trace& trace) {
  HorizonCheck out;
  out.required = horizon(formula);
  out.available = trace.duration();
  out.ok = out.available + kTimeTolerance >= out.required;
  return out;
}

namespace {

using Bits = std::vector<char>;

class Evaluator {
 public:
  explicit Evaluator(const Trace& trace) : trace_(trace) {}

  Bits run(const Formula& f) {
    const auto n = trace_.size();
    Bits out(n, 0);
    switch (f.kind()) {
      case FormulaKind::Atom: {
        const auto& p = f.predicate();
        const auto& values = trace_.values(p.signal);
        for (std::size_t k = 0; k < n; ++k) out[k] = holds(p.relation, values[k], p.threshold);
        return out;
      }
      case FormulaKind::Not: {
        Bits inner = run(f.operand());
        for (std::size_t k = 0; k < n; ++k) out[k] = !inner[k];
        return out;
      }
      case FormulaKind::And:
      case FormulaKind::Implies: {
        Bits lhs = run(f.lhs());
        Bits rhs = run(f.rhs());
        const bool conj = f.kind() == FormulaKind::And;
        for (std::size_t k = 0; k < n; ++k) out[k] = conj ? (lhs[k] && rhs[k]) : (!lhs[k] || rhs[k]);
        return out;
      }
      case FormulaKind::Always:
      case FormulaKind::Eventually: {
        Bits inner = run(f.operand());
        // prefix[j] = number of satisfied samples before j
        std::vector<std::size_t> prefix(n + 1, 0);
        for (std::size_t j = 0; j < n; ++j) prefix[j + 1] = prefix[j] + (inner[j] ? 1 : 0);
        const auto& times = trace_.times();
        const Interval window = f.interval();
        for (std::size_t k = 0; k < n; ++k) {
          const double from = times[k] + window.lo - kTimeTolerance;
          const double to = times[k] + window.hi + kTimeTolerance;
          const auto first = static_cast<std::size_t>(
              std::lower_bound(times.begin(), times.end(), from) - times.begin());
          const auto last = static_cast<std::size_t>(
              std::upper_bound(times.begin(), times.end(), to) - times.begin());
          const std::size_t total = last > first ? last - first : 0;
          const std::size_t good = total == 0 ? 0 : prefix[last] - prefix[first];
          out[k] = f.kind() == FormulaKind::Always ? good == total : good > 0;
        }
        return out;
      }
    }
    return out;
  }

 private:
  const Trace& trace_;
};

void require_signals(const Formula& f, const Trace& trace) {
  switch (f.kind()) {
    case FormulaKind::Atom:
      if (!trace.has_signal(f.predicate().signal)) {
        throw Error(ErrorCode::UnknownSignal, "trace has no signal '" + f.predicate().signal + "'");
      }
      return;
    case FormulaKind::Not:
    case FormulaKind::Always:
    case FormulaKind::Eventually: require_signals(f.operand(), trace); return;
    case FormulaKind::And:
    case FormulaKind::Implies:
      require_signals(f.lhs(), trace);
      require_signals(f.rhs(), trace);
      return;
  }
}

}  // namespace

bool evaluate(const Formula& formula, const Trace& trace, std::size_t at) {
  if (at >= trace.size()) {
    throw Error(ErrorCode::InvalidTrace, "sample index " + std::to_string(at) +
                                             " is past the end of a " +
                                             std::to_string(trace.size()) + "-sample trace");
  }
  require_signals(formula, trace);
  const double required = horizon(formula);
  const double available = trace.duration() - trace.times()[at];
  if (available + kTimeTolerance < required) {
    throw Error(ErrorCode::InsufficientHorizon,
                "formula needs " + format_number(required) + " s from t=" +
                    format_number(trace.times()[at]) + " but the trace only covers " +
                    format_number(available) + " s");
  }
  return Evaluator(trace).run(formula)[at] != 0;
}

}  // namespace mtlspec
