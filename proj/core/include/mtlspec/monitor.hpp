#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "mtlspec/mtl.hpp"

namespace mtlspec {

/// Slack on time comparisons so that sample instants computed as k * dt still
/// land inside windows whose bounds they equal mathematically.
inline constexpr double kTimeTolerance = 1e-9;

/// Finite multi-signal sample sequence. Times start at 0 and strictly
/// increase; every signal has one finite sample per time stamp.
class Trace {
 public:
  using Column = std::pair<std::string, std::vector<double>>;

  /// Throws InvalidTrace when an invariant does not hold.
  Trace(std::vector<double> times, std::vector<Column> signals);

  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<Column>& signals() const noexcept { return signals_; }
  std::size_t size() const noexcept { return times_.size(); }
  double duration() const noexcept { return times_.back(); }

  bool has_signal(const std::string& name) const noexcept;
  /// Throws UnknownSignal.
  const std::vector<double>& values(const std::string& name) const;

  friend bool operator==(const Trace&, const Trace&) = default;

 private:
  std::vector<double> times_;
  std::vector<Column> signals_;
};

/// Uniformly sampled time axis 0, dt, 2dt, ... up to `duration` inclusive.
std::vector<double> sample_times(double dt, double duration);

struct HorizonCheck {
  bool ok = true;
  double required = 0.0;   // horizon of the formula
  double available = 0.0;  // trace duration
};

HorizonCheck check_horizon(const Formula& formula, const Trace& trace);

/// Pointwise Boolean semantics at sample `at`. Windows are closed and
/// relative to times[at]; an empty window makes Always true and Eventually
/// false. Throws UnknownSignal, or InsufficientHorizon when the trace ends
/// before times[at] + horizon(formula).
bool evaluate(const Formula& formula, const Trace& trace, std::size_t at = 0);

}  // namespace mtlspec
