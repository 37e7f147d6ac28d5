#pragma once

// Piecewise-constant functions on [0,1] and the exact lattice calculus on them.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace peetre {

/// A finite union of pairwise disjoint half-open subintervals of [0,1].
class MeasurableSet {
 public:
  MeasurableSet() = default;

  /// Intervals may be given in any order; empty intervals are dropped and
  /// touching intervals are joined. Overlaps are rejected.
  explicit MeasurableSet(std::vector<std::pair<double, double>> intervals) {
    for (const auto& [l, r] : intervals) {
      if (!std::isfinite(l) || !std::isfinite(r) || l < 0.0 || r > 1.0 || l > r)
        throw std::invalid_argument("MeasurableSet: interval outside [0,1] or reversed");
    }
    std::erase_if(intervals, [](const auto& iv) { return iv.first == iv.second; });
    std::sort(intervals.begin(), intervals.end());
    for (const auto& iv : intervals) {
      if (!intervals_.empty() && iv.first < intervals_.back().second)
        throw std::invalid_argument("MeasurableSet: overlapping intervals");
      if (!intervals_.empty() && iv.first == intervals_.back().second)
        intervals_.back().second = iv.second;
      else
        intervals_.push_back(iv);
    }
  }

  static MeasurableSet interval(double l, double r) { return MeasurableSet({{l, r}}); }

  const std::vector<std::pair<double, double>>& intervals() const { return intervals_; }

  double measure() const {
    double m = 0.0;
    for (const auto& [l, r] : intervals_) m += r - l;
    return m;
  }

  bool empty() const { return intervals_.empty(); }

 private:
  std::vector<std::pair<double, double>> intervals_;
};

/// A real function on [0,1] that is constant on each half-open cell
/// [breakpoints[i], breakpoints[i+1]).
class StepFunction {
 public:
  /// Zero function.
  StepFunction() : breakpoints_{0.0, 1.0}, values_{0.0} {}

  /// Validates and stores the partition as given (no merging).
  StepFunction(std::vector<double> breakpoints, std::vector<double> values)
      : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
    validate();
  }

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t cells() const { return values_.size(); }

  double measure(std::size_t cell) const { return breakpoints_[cell + 1] - breakpoints_[cell]; }

  std::vector<double> measures() const {
    std::vector<double> m(cells());
    for (std::size_t i = 0; i < cells(); ++i) m[i] = measure(i);
    return m;
  }

  /// Value at t, with the convention f(1) = value of the last cell.
  double operator()(double t) const {
    if (t < 0.0 || t > 1.0) throw std::domain_error("StepFunction: argument outside [0,1]");
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
    std::size_t cell = static_cast<std::size_t>(it - breakpoints_.begin());
    cell = cell == 0 ? 0 : cell - 1;
    return values_[std::min(cell, cells() - 1)];
  }

  /// Same function with adjacent equal cells joined. Two canonical forms
  /// compare equal iff the functions agree everywhere.
  StepFunction canonical() const {
    std::vector<double> bp{breakpoints_.front()};
    std::vector<double> vals;
    for (std::size_t i = 0; i < cells(); ++i) {
      if (!vals.empty() && vals.back() == values_[i]) {
        bp.back() = breakpoints_[i + 1];
      } else {
        vals.push_back(values_[i]);
        bp.push_back(breakpoints_[i + 1]);
      }
    }
    StepFunction out;
    out.breakpoints_ = std::move(bp);
    out.values_ = std::move(vals);
    return out;
  }

  bool is_zero() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  friend bool operator==(const StepFunction& f, const StepFunction& g) {
    const StepFunction cf = f.canonical();
    const StepFunction cg = g.canonical();
    return cf.breakpoints_ == cg.breakpoints_ && cf.values_ == cg.values_;
  }

 private:
  void validate() const {
    if (breakpoints_.size() < 2) throw std::invalid_argument("StepFunction: need at least two breakpoints");
    if (values_.size() + 1 != breakpoints_.size())
      throw std::invalid_argument("StepFunction: values count must be breakpoints count - 1");
    if (breakpoints_.front() != 0.0 || breakpoints_.back() != 1.0)
      throw std::invalid_argument("StepFunction: breakpoints must start at 0 and end at 1");
    for (std::size_t i = 0; i + 1 < breakpoints_.size(); ++i) {
      if (!(breakpoints_[i] < breakpoints_[i + 1]))
        throw std::invalid_argument("StepFunction: breakpoints must be strictly increasing");
    }
    for (double v : values_) {
      if (!std::isfinite(v)) throw std::invalid_argument("StepFunction: non-finite value");
    }
  }

  std::vector<double> breakpoints_;
  std::vector<double> values_;
};

/// Validated construction; adjacent equal values are merged.
inline StepFunction make_step(std::vector<double> breakpoints, std::vector<double> values) {
  return StepFunction(std::move(breakpoints), std::move(values)).canonical();
}

inline StepFunction constant(double c) { return StepFunction({0.0, 1.0}, {c}); }

inline StepFunction indicator(const MeasurableSet& e) {
  std::vector<double> bp{0.0};
  std::vector<double> vals;
  for (const auto& [l, r] : e.intervals()) {
    if (l > bp.back()) {
      vals.push_back(0.0);
      bp.push_back(l);
    }
    vals.push_back(1.0);
    bp.push_back(r);
  }
  if (bp.back() < 1.0) {
    vals.push_back(0.0);
    bp.push_back(1.0);
  }
  return make_step(std::move(bp), std::move(vals));
}

/// Indicator of [l, r).
inline StepFunction indicator(double l, double r) { return indicator(MeasurableSet::interval(l, r)); }

/// Both functions re-expressed on the union of their breakpoints.
inline std::pair<StepFunction, StepFunction> refine_common(const StepFunction& f, const StepFunction& g) {
  std::vector<double> bp;
  std::set_union(f.breakpoints().begin(), f.breakpoints().end(), g.breakpoints().begin(),
                 g.breakpoints().end(), std::back_inserter(bp));
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  std::vector<double> fv(bp.size() - 1), gv(bp.size() - 1);
  std::size_t fi = 0, gi = 0;
  for (std::size_t c = 0; c + 1 < bp.size(); ++c) {
    while (f.breakpoints()[fi + 1] <= bp[c]) ++fi;
    while (g.breakpoints()[gi + 1] <= bp[c]) ++gi;
    fv[c] = f.values()[fi];
    gv[c] = g.values()[gi];
  }
  return {StepFunction(bp, std::move(fv)), StepFunction(bp, std::move(gv))};
}

namespace detail {

template <class Op>
StepFunction combine(const StepFunction& f, const StepFunction& g, Op op) {
  auto [rf, rg] = refine_common(f, g);
  std::vector<double> vals(rf.cells());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = op(rf.values()[i], rg.values()[i]);
  return make_step(rf.breakpoints(), std::move(vals));
}

template <class Op>
StepFunction map_values(const StepFunction& f, Op op) {
  std::vector<double> vals(f.values());
  for (double& v : vals) v = op(v);
  return make_step(f.breakpoints(), std::move(vals));
}

}  // namespace detail

inline StepFunction add(const StepFunction& f, const StepFunction& g) {
  return detail::combine(f, g, [](double x, double y) { return x + y; });
}

inline StepFunction multiply(const StepFunction& f, const StepFunction& g) {
  return detail::combine(f, g, [](double x, double y) { return x * y; });
}

inline StepFunction scale(const StepFunction& f, double c) {
  return detail::map_values(f, [c](double x) { return c * x; });
}

inline StepFunction abs(const StepFunction& f) {
  return detail::map_values(f, [](double x) { return std::abs(x); });
}

/// sign(f) * min(|f|, c).
inline StepFunction truncate(const StepFunction& f, double c) {
  if (!(c >= 0.0)) throw std::invalid_argument("truncate: level must be nonnegative");
  return detail::map_values(f, [c](double x) { return std::copysign(std::min(std::abs(x), c), x); });
}

inline double support_measure(const StepFunction& f) {
  double m = 0.0;
  for (std::size_t i = 0; i < f.cells(); ++i)
    if (f.values()[i] != 0.0) m += f.measure(i);
  return m;
}

/// Decreasing rearrangement f*: cells of |f| sorted by value (ties keep
/// their original order). Cells that already sit in their sorted position
/// keep their breakpoints, so rearrange is exactly idempotent.
inline StepFunction rearrange(const StepFunction& f) {
  const StepFunction cf = abs(f);
  std::vector<std::size_t> order(cf.cells());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return cf.values()[i] > cf.values()[j];
  });
  std::vector<double> bp{0.0};
  std::vector<double> vals;
  vals.reserve(order.size());
  bool in_place = true;
  for (std::size_t k = 0; k < order.size(); ++k) {
    const std::size_t i = order[k];
    in_place = in_place && i == k;
    bp.push_back(in_place ? cf.breakpoints()[i + 1] : bp.back() + cf.measure(i));
    vals.push_back(cf.values()[i]);
  }
  bp.back() = 1.0;
  // Cumulative rounding can, in principle, collapse a sliver cell.
  for (std::size_t k = 1; k + 1 < bp.size(); ++k) {
    if (!(bp[k] > bp[k - 1]))
      bp[k] = std::nextafter(bp[k - 1], 2.0);
  }
  return make_step(std::move(bp), std::move(vals));
}

inline bool equimeasurable(const StepFunction& f, const StepFunction& g) {
  return rearrange(f) == rearrange(g);
}

/// f restricted to [0, tau): f * chi_[0,tau).
inline StepFunction restrict_to_initial(const StepFunction& f, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::domain_error("restrict_to_initial: tau outside [0,1]");
  if (tau == 0.0) return StepFunction();
  if (tau == 1.0) return f;
  return multiply(f, indicator(0.0, tau));
}

/// Uniform partition into `cells` cells with values uniform in [-amplitude, amplitude].
inline StepFunction random_step(std::uint64_t seed, std::size_t cells, double amplitude) {
  if (cells == 0) throw std::invalid_argument("random_step: cells must be positive");
  std::mt19937_64 rng(seed);
  std::vector<double> bp(cells + 1);
  std::vector<double> vals(cells);
  for (std::size_t i = 0; i <= cells; ++i) bp[i] = static_cast<double>(i) / static_cast<double>(cells);
  for (double& v : vals) {
    const double u = std::generate_canonical<double, 53>(rng);
    v = amplitude * (2.0 * u - 1.0);
  }
  return make_step(std::move(bp), std::move(vals));
}

}  // namespace peetre
