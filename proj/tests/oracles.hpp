#pragma once

// Independent reference computations used only by the tests. None of these
// call into the code path they check.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "peetre/step_function.hpp"
#include "peetre/symmetric_space.hpp"

namespace peetre::oracle {

/// (|value|, measure) cells sorted by |value| descending with a plain
/// insertion sort (stable), merged where equal.
struct Cells {
  std::vector<double> values;
  std::vector<double> measures;
};

inline Cells sorted_cells(const StepFunction& f) {
  Cells c;
  for (std::size_t i = 0; i < f.cells(); ++i) {
    c.values.push_back(std::abs(f.values()[i]));
    c.measures.push_back(f.breakpoints()[i + 1] - f.breakpoints()[i]);
  }
  for (std::size_t i = 1; i < c.values.size(); ++i) {
    for (std::size_t k = i; k > 0 && c.values[k - 1] < c.values[k]; --k) {
      std::swap(c.values[k - 1], c.values[k]);
      std::swap(c.measures[k - 1], c.measures[k]);
    }
  }
  Cells merged;
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    if (!merged.values.empty() && merged.values.back() == c.values[i]) {
      merged.measures.back() += c.measures[i];
    } else {
      merged.values.push_back(c.values[i]);
      merged.measures.push_back(c.measures[i]);
    }
  }
  return merged;
}

/// a * integral_0^{b/a} f*(s) ds, the K-functional of the couple (L1, Linf).
inline double k_l1_linf(const StepFunction& f, double a, double b) {
  const Cells c = sorted_cells(f);
  double t = std::min(b / a, 1.0), s = 0.0;
  for (std::size_t i = 0; i < c.values.size() && t > 0.0; ++i) {
    const double take = std::min(t, c.measures[i]);
    s += c.values[i] * take;
    t -= take;
  }
  return a * s;
}

/// (sum_i m_i |x_i|^p)^(1/p) straight from the definition.
inline double lp_norm(const StepFunction& f, double p) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.cells(); ++i)
    s += (f.breakpoints()[i + 1] - f.breakpoints()[i]) * std::pow(std::abs(f.values()[i]), p);
  return std::pow(s, 1.0 / p);
}

/// Closed form of the fundamental function of the exp-square Orlicz space:
/// tau M(1/lambda) = 1 with M(u) = (e^{u^2} - 1)/(e - 1).
inline double phi_g(double tau) { return 1.0 / std::sqrt(std::log1p((std::exp(1.0) - 1.0) / tau)); }

/// Max over all unions of cells of total measure tau of ||f chi_e||_E / ||f||_E.
/// Returns -1 if no union has measure exactly tau. On equal cells this is the
/// supremum over all sets of measure tau.
inline double worst_set_eta(const SpaceSpec& E, const StepFunction& f, double tau) {
  const std::size_t n = f.cells();
  const double nf = norm(E, f);
  double best = -1.0;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    double m = 0.0;
    std::vector<double> vals(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::size_t{1} << i)) {
        m += f.breakpoints()[i + 1] - f.breakpoints()[i];
        vals[i] = f.values()[i];
      }
    }
    if (m != tau) continue;
    best = std::max(best, norm(E, StepFunction(f.breakpoints(), vals)) / nf);
  }
  return best;
}

/// Uniform step: values.size() equal cells with the given values.
inline StepFunction dyadic(const std::vector<double>& values) {
  std::vector<double> bp(values.size() + 1);
  for (std::size_t i = 0; i <= values.size(); ++i) bp[i] = static_cast<double>(i) / static_cast<double>(values.size());
  return StepFunction(bp, values);
}

}  // namespace peetre::oracle
