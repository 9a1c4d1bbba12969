#include "mtlspec/exemplar.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "rng.hpp"

namespace mtlspec {

std::string_view to_string(Archetype a) noexcept {
  switch (a) {
    case Archetype::Smooth: return "smooth";
    case Archetype::Ramp: return "ramp";
    case Archetype::Step: return "step";
  }
  return "?";
}

TemplateShape template_shape(const Formula& f) {
  const auto unsupported = [&] {
    return Error(ErrorCode::UnsupportedTemplate,
                 format(f) + " is not a single-template formula over one atom");
  };
  if (f.is_atom()) return {TemporalOperator::now(), f.predicate()};
  if (!f.is_temporal()) throw unsupported();
  const Formula inner = f.operand();
  if (inner.is_atom()) {
    return {f.kind() == FormulaKind::Always ? TemporalOperator::always(f.interval())
                                            : TemporalOperator::at_least_once(f.interval()),
            inner.predicate()};
  }
  if (inner.is_temporal() && inner.kind() != f.kind() && inner.operand().is_atom()) {
    return {f.kind() == FormulaKind::Eventually
                ? TemporalOperator::eventually_always(f.interval(), inner.interval())
                : TemporalOperator::repeatedly_often(f.interval(), inner.interval()),
            inner.operand().predicate()};
  }
  throw unsupported();
}

namespace {

constexpr int kMaxAttempts = 32;
constexpr double kMarginFraction = 0.02;

struct Band {
  double lo;
  double hi;
};

struct Setup {
  TemplateShape shape;
  std::vector<double> times;
  double vmin;
  double vmax;
  Band good;  // values that satisfy the atom with margin
  Band bad;   // values that falsify it with margin
};

Setup resolve(const Formula& formula, const ExemplarConfig& config) {
  Setup s{template_shape(formula), {}, 0.0, 0.0, {}, {}};
  if (!(config.dt > 0.0) || !std::isfinite(config.dt)) {
    throw Error(ErrorCode::InvalidConfig, "dt must be a positive number of seconds");
  }
  const double needed = horizon(formula);
  const double duration = config.duration.value_or(needed + 10.0);
  if (!std::isfinite(duration) || duration + kTimeTolerance < needed) {
    throw Error(ErrorCode::DurationTooShort, "duration " + format_number(duration) +
                                                 " s is shorter than the horizon " +
                                                 format_number(needed) + " s");
  }
  const double threshold = s.shape.atom.threshold;
  if (config.vmin.has_value() != config.vmax.has_value()) {
    throw Error(ErrorCode::InvalidConfig, "value range needs both vmin and vmax");
  }
  if (config.vmin) {
    s.vmin = *config.vmin;
    s.vmax = *config.vmax;
  } else {
    const double spread = std::max(1.0, std::abs(threshold));
    s.vmin = threshold - spread;
    s.vmax = threshold + spread;
  }
  const double margin = kMarginFraction * (s.vmax - s.vmin);
  if (!(s.vmax > s.vmin) || threshold - margin < s.vmin || threshold + margin > s.vmax) {
    throw Error(ErrorCode::ThresholdOutOfRange,
                "threshold " + format_number(threshold) + " must lie inside [" +
                    format_number(s.vmin) + ", " + format_number(s.vmax) +
                    "] with a 2% margin to both ends");
  }
  const Band below{s.vmin, threshold - margin};
  const Band above{threshold + margin, s.vmax};
  const bool upper = is_upper_bound(s.shape.atom.relation);
  s.good = upper ? below : above;
  s.bad = upper ? above : below;
  s.times = sample_times(config.dt, duration);
  return s;
}

class Builder {
 public:
  Builder(const Setup& setup, detail::Rng& rng) : s_(setup), rng_(rng) {}

  std::vector<double> base(Archetype archetype) {
    const auto& times = s_.times;
    const double range = s_.vmax - s_.vmin;
    const double end = std::max(times.back(), 1.0);
    std::vector<double> values(times.size());
    switch (archetype) {
      case Archetype::Smooth: {
        const double centre = rng_.uniform(s_.vmin, s_.vmax);
        const int waves = rng_.between(1, 3);
        std::vector<std::array<double, 3>> params;
        for (int w = 0; w < waves; ++w) {
          params.push_back({rng_.uniform(0.05, 0.35) * range, rng_.uniform(4.0, 40.0),
                            rng_.uniform(0.0, 2.0 * std::numbers::pi)});
        }
        for (std::size_t k = 0; k < times.size(); ++k) {
          double v = centre;
          for (const auto& [amp, period, phase] : params) {
            v += amp * std::sin(2.0 * std::numbers::pi * times[k] / period + phase);
          }
          values[k] = v;
        }
        break;
      }
      case Archetype::Ramp: {
        const double start = rng_.uniform(s_.vmin, s_.vmax);
        const double stop = rng_.uniform(s_.vmin, s_.vmax);
        const double wobble = rng_.uniform(0.0, 0.1) * range;
        const double period = rng_.uniform(5.0, 30.0);
        for (std::size_t k = 0; k < times.size(); ++k) {
          values[k] = start + (stop - start) * times[k] / end +
                      wobble * std::sin(2.0 * std::numbers::pi * times[k] / period);
        }
        break;
      }
      case Archetype::Step: {
        double level = rng_.uniform(s_.vmin, s_.vmax);
        double next_change = rng_.uniform(2.0, 10.0);
        for (std::size_t k = 0; k < times.size(); ++k) {
          if (times[k] >= next_change) {
            level = rng_.uniform(s_.vmin, s_.vmax);
            next_change += rng_.uniform(2.0, 10.0);
          }
          values[k] = level;
        }
        break;
      }
    }
    for (auto& v : values) v = std::clamp(v, s_.vmin, s_.vmax);
    return values;
  }

  // Sample indices whose time lies in [from, to].
  std::pair<std::size_t, std::size_t> span(double from, double to) const {
    const auto& t = s_.times;
    const auto first = std::lower_bound(t.begin(), t.end(), from - kTimeTolerance) - t.begin();
    const auto last = std::upper_bound(t.begin(), t.end(), to + kTimeTolerance) - t.begin();
    return {static_cast<std::size_t>(first), static_cast<std::size_t>(std::max(first, last))};
  }

  static bool inside(double v, const Band& band) { return v >= band.lo && v <= band.hi; }

  void force(std::vector<double>& values, std::size_t k, const Band& band) {
    if (inside(values[k], band)) return;
    double v = std::clamp(values[k], band.lo, band.hi);
    // step a little further in so plateaus are not glued to the band edge
    const double room = (band.hi - band.lo) * rng_.uniform(0.0, 0.25);
    v = v == band.lo ? v + room : v - room;
    values[k] = std::clamp(v, band.lo, band.hi);
  }

  void force_range(std::vector<double>& values, std::size_t first, std::size_t last,
                   const Band& band) {
    for (std::size_t k = first; k < last; ++k) force(values, k, band);
  }

  // A short excursion into `band` around a random sample of [first, last).
  bool excursion(std::vector<double>& values, std::size_t first, std::size_t last,
                 const Band& band) {
    if (first >= last) return false;
    const auto centre = first + static_cast<std::size_t>(
                                    rng_.between(0, static_cast<int>(last - first - 1)));
    const auto width = static_cast<std::size_t>(rng_.between(0, 2));
    const auto lo = centre >= first + width ? centre - width : first;
    const auto hi = std::min(last, centre + width + 1);
    force_range(values, lo, hi, band);
    return true;
  }

  // Every outer instant must see a `band` sample within the inner window.
  bool cover_every_window(std::vector<double>& values, const Interval& outer,
                          const Interval& inner, const Band& band) {
    const auto [o_first, o_last] = span(outer.lo, outer.hi);
    if (o_first >= o_last) return true;
    const double width = inner.hi - inner.lo;
    const double dt = s_.times.size() > 1 ? s_.times[1] - s_.times[0] : 1.0;
    if (width >= dt) {
      // periodic excursions for the oscillating look, then patch any gaps
      const double period = rng_.uniform(std::max(dt, 0.4 * width), std::max(dt, width));
      double tau = s_.times[o_first] + inner.lo + rng_.uniform(0.0, period);
      const double stop = s_.times[o_last - 1] + inner.hi;
      while (tau <= stop) {
        const auto [f, l] = span(tau - dt / 2, tau + dt / 2);
        if (f < l) force(values, f, band);
        tau += period;
      }
    }
    for (std::size_t k = o_first; k < o_last; ++k) {
      const auto [f, l] = span(s_.times[k] + inner.lo, s_.times[k] + inner.hi);
      if (f >= l) return false;
      bool seen = false;
      for (std::size_t j = f; j < l && !seen; ++j) seen = inside(values[j], band);
      if (!seen) force(values, l - 1, band);
    }
    return true;
  }

  bool repair(std::vector<double>& values, bool satisfy) {
    const auto& op = s_.shape.op;
    const Band& good = satisfy ? s_.good : s_.bad;
    switch (op.kind) {
      case OperatorKind::Now: force(values, 0, good); return true;
      case OperatorKind::Always: {
        const auto [f, l] = span(op.outer->lo, op.outer->hi);
        if (satisfy) {
          force_range(values, f, l, good);
          return true;
        }
        return excursion(values, f, l, s_.bad);
      }
      case OperatorKind::AtLeastOnce: {
        const auto [f, l] = span(op.outer->lo, op.outer->hi);
        if (!satisfy) {
          force_range(values, f, l, good);
          return true;
        }
        for (std::size_t k = f; k < l; ++k) {
          if (inside(values[k], s_.good)) return true;
        }
        return excursion(values, f, l, good);
      }
      case OperatorKind::EventuallyAlways:
        // <>_o []_i p ; its negation is []_o <>_i !p
        if (satisfy) return plateau(values, *op.outer, *op.inner, s_.good);
        return cover_every_window(values, *op.outer, *op.inner, s_.bad);
      case OperatorKind::RepeatedlyOftenAndFinally:
        // []_o <>_i p ; its negation is <>_o []_i !p
        if (satisfy) return cover_every_window(values, *op.outer, *op.inner, s_.good);
        return plateau(values, *op.outer, *op.inner, s_.bad);
    }
    return false;
  }

 private:
  // Some outer instant followed by an inner window entirely inside `band`.
  bool plateau(std::vector<double>& values, const Interval& outer, const Interval& inner,
               const Band& band) {
    const auto [o_first, o_last] = span(outer.lo, outer.hi);
    if (o_first >= o_last) return false;
    const auto start = o_first + static_cast<std::size_t>(
                                     rng_.between(0, static_cast<int>(o_last - o_first - 1)));
    const auto [f, l] = span(s_.times[start] + inner.lo, s_.times[start] + inner.hi);
    force_range(values, f, l, band);
    return true;
  }

  const Setup& s_;
  detail::Rng& rng_;
};

std::vector<Exemplar> build(const Formula& formula, int count, std::uint64_t seed,
                            const ExemplarConfig& config, bool satisfy) {
  if (count <= 0) throw Error(ErrorCode::InvalidConfig, "count must be positive");
  const Setup setup = resolve(formula, config);
  detail::Rng rng(seed);
  Builder builder(setup, rng);
  const int offset = static_cast<int>(seed % 3);
  std::vector<Exemplar> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int index = 0; index < count; ++index) {
    const auto archetype = static_cast<Archetype>((offset + index) % 3);
    bool done = false;
    for (int attempt = 0; attempt < kMaxAttempts && !done; ++attempt) {
      auto values = builder.base(archetype);
      if (!builder.repair(values, satisfy)) continue;
      Trace trace(setup.times, {{setup.shape.atom.signal, std::move(values)}});
      if (evaluate(formula, trace) != satisfy) continue;
      const bool duplicate = std::any_of(out.begin(), out.end(),
                                         [&](const Exemplar& e) { return e.trace == trace; });
      if (duplicate) continue;
      out.push_back({std::move(trace), archetype});
      done = true;
    }
    if (!done) {
      throw Error(ErrorCode::GenerationFailed,
                  std::string("could not build a ") + (satisfy ? "satisfying" : "violating") +
                      " trace for " + format(formula) + " after " + std::to_string(kMaxAttempts) +
                      " attempts");
    }
  }
  return out;
}

}  // namespace

std::vector<Exemplar> generate(const Formula& template_formula, int count, std::uint64_t seed,
                               const ExemplarConfig& config) {
  return build(template_formula, count, seed, config, true);
}

std::vector<Exemplar> counterexemplar(const Formula& template_formula, int count,
                                      std::uint64_t seed, const ExemplarConfig& config) {
  return build(template_formula, count, seed, config, false);
}

}  // namespace mtlspec
