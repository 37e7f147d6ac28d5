#pragma once

// The K-functional k(f; a, b) = inf { a ||u||_E + b ||v||_F : u + v = f }.
//
// For f >= 0 any decomposition can be replaced by one with 0 <= v <= f
// cellwise without increasing either term (both norms are ideal), and
// k(f) = k(|f|). All solvers below therefore work on the box
// 0 <= v_i <= |f_i| over the cells of f's own partition.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "peetre/step_function.hpp"
#include "peetre/symmetric_space.hpp"

namespace peetre {

enum class KMethod { Truncation, General, Oracle, Exact };

inline const char* to_string(KMethod m) {
  switch (m) {
    case KMethod::Truncation: return "truncation";
    case KMethod::General: return "general";
    case KMethod::Oracle: return "oracle";
    case KMethod::Exact: return "exact";
  }
  return "?";
}

/// Value of the K-functional with a certified bracket lower <= value <= upper.
/// `value` is the objective of the stored decomposition f = u + v.
struct KValue {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  KMethod method = KMethod::Truncation;
  StepFunction u;
  StepFunction v;
  /// Oracle only: the grid-granularity term subtracted to form `lower`.
  double granularity = 0.0;

  double width() const { return upper - lower; }
};

struct KSolverOptions {
  std::size_t iterations = 2000;
  /// Stop once upper - lower <= tol * upper.
  double tol = 1e-9;
  std::size_t scan_samples = 512;
};

namespace detail {

/// The cellwise problem: minimize a N_E(x - v) + b N_F(v) over 0 <= v <= x.
class KProblem {
 public:
  KProblem(const StepFunction& f, double a, double b, const SpaceSpec& E, const SpaceSpec& F)
      : f_(f), a_(a), b_(b), E_(E), F_(F), m_(f.measures()), x_(f.cells()) {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
      throw std::invalid_argument("k-functional: weights a and b must be positive and finite");
    for (std::size_t i = 0; i < x_.size(); ++i) x_[i] = std::abs(f.values()[i]);
    scratch_.resize(x_.size());
  }

  std::size_t dim() const { return x_.size(); }
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& m() const { return m_; }
  double a() const { return a_; }
  double b() const { return b_; }
  const SpaceSpec& E() const { return E_; }
  const SpaceSpec& F() const { return F_; }
  double max_x() const { return detail::linf_cells(x_); }

  double objective(std::span<const double> v) const {
    for (std::size_t i = 0; i < x_.size(); ++i) scratch_[i] = std::max(x_[i] - v[i], 0.0);
    return a_ * norm_cells(E_, m_, scratch_) + b_ * norm_cells(F_, m_, v);
  }

  std::vector<double> subgradient(std::span<const double> v) const {
    for (std::size_t i = 0; i < x_.size(); ++i) scratch_[i] = std::max(x_[i] - v[i], 0.0);
    auto ge = norm_subgradient_cells(E_, m_, scratch_);
    const auto gf = norm_subgradient_cells(F_, m_, v);
    for (std::size_t i = 0; i < ge.size(); ++i) ge[i] = -a_ * ge[i] + b_ * gf[i];
    return ge;
  }

  /// min(a, b) ||f||_1 bounds k from below for every pair in scope, since
  /// each implemented norm dominates the L1 norm.
  double trivial_lower() const { return std::min(a_, b_) * l1_cells(m_, x_); }

  KValue make_value(std::span<const double> v, double lower, KMethod method) const {
    std::vector<double> vv(x_.size()), uu(x_.size());
    for (std::size_t i = 0; i < x_.size(); ++i) {
      const double s = f_.values()[i];
      vv[i] = std::copysign(std::clamp(v[i], 0.0, x_[i]), s);
      uu[i] = s - vv[i];
    }
    KValue k;
    k.v = StepFunction(f_.breakpoints(), vv);
    k.u = StepFunction(f_.breakpoints(), uu);
    k.value = a_ * norm(E_, k.u) + b_ * norm(F_, k.v);
    k.upper = k.value;
    k.lower = std::min(std::max(lower, 0.0), k.value);
    k.method = method;
    return k;
  }

 private:
  StepFunction f_;
  double a_, b_;
  SpaceSpec E_, F_;
  std::vector<double> m_;
  std::vector<double> x_;
  mutable std::vector<double> scratch_;
};

inline std::vector<double> truncated(const std::vector<double>& x, double c) {
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) v[i] = std::min(x[i], c);
  return v;
}

/// Best level c for v_c = min(x, c): dense scan, every cell value as a
/// candidate, then golden-section refinement around the best scan point.
inline double best_truncation_level(const KProblem& p, std::size_t samples) {
  const double top = p.max_x();
  if (top == 0.0) return 0.0;
  auto g = [&](double c) { return p.objective(truncated(p.x(), c)); };

  std::vector<double> cand;
  cand.reserve(samples + p.dim() + 2);
  const std::size_t n = std::max<std::size_t>(samples, 2);
  for (std::size_t s = 0; s < n; ++s) cand.push_back(top * static_cast<double>(s) / static_cast<double>(n - 1));
  cand.insert(cand.end(), p.x().begin(), p.x().end());
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  std::size_t best = 0;
  double best_val = std::numeric_limits<double>::infinity();
  std::vector<double> vals(cand.size());
  for (std::size_t s = 0; s < cand.size(); ++s) {
    vals[s] = g(cand[s]);
    if (vals[s] < best_val) {
      best_val = vals[s];
      best = s;
    }
  }

  double lo = cand[best == 0 ? 0 : best - 1];
  double hi = cand[std::min(best + 1, cand.size() - 1)];
  double best_c = cand[best];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c1 = hi - inv_phi * (hi - lo), c2 = lo + inv_phi * (hi - lo);
  double g1 = g(c1), g2 = g(c2);
  for (int it = 0; it < 80 && hi - lo > 1e-15 * top; ++it) {
    if (g1 < g2) {
      hi = c2;
      c2 = c1;
      g2 = g1;
      c1 = hi - inv_phi * (hi - lo);
      g1 = g(c1);
    } else {
      lo = c1;
      c1 = c2;
      g1 = g2;
      c2 = lo + inv_phi * (hi - lo);
      g2 = g(c2);
    }
    if (g1 < best_val) {
      best_val = g1;
      best_c = c1;
    }
    if (g2 < best_val) {
      best_val = g2;
      best_c = c2;
    }
  }
  return best_c;
}

}  // namespace detail

/// k over the truncation family v_c = sign(f) min(|f|, c). Exact for
/// (E, F) = (L1, Linf); an upper bound otherwise.
inline KValue k_truncation(const StepFunction& f, double a, double b, const SpaceSpec& E, const SpaceSpec& F,
                           std::size_t samples = 512) {
  const detail::KProblem p(f, a, b, E, F);
  const double c = detail::best_truncation_level(p, samples);
  const auto v = detail::truncated(p.x(), c);
  KValue k = p.make_value(v, p.trivial_lower(), KMethod::Truncation);
  // The objective is piecewise linear in c with kinks at cell values, all of
  // which were scanned.
  if (E.is_l1() && F.is_linf()) k.lower = k.value;
  return k;
}

/// Projected subgradient with steps D / sqrt(t), D = max |f|, started at the
/// best truncation point. The lower bound minimizes a convex combination of
/// the collected linearizations over the box.
inline KValue k_general(const StepFunction& f, double a, double b, const SpaceSpec& E, const SpaceSpec& F,
                        const KSolverOptions& opt = {}) {
  if (opt.iterations == 0) throw std::invalid_argument("k_general: iterations must be >= 1");
  const detail::KProblem p(f, a, b, E, F);
  const std::size_t n = p.dim();
  const double D = p.max_x();
  if (D == 0.0) return p.make_value(std::vector<double>(n, 0.0), 0.0, KMethod::General);

  std::vector<double> v = detail::truncated(p.x(), detail::best_truncation_level(p, opt.scan_samples));
  std::vector<double> best_v = v;
  double best = p.objective(v);
  double lower = p.trivial_lower();

  // Linearization t: h_t + g_t . (y - v_t) = c_t + g_t . y
  std::vector<double> consts;
  std::vector<std::vector<double>> grads;
  std::vector<double> weights;
  consts.reserve(opt.iterations);
  grads.reserve(opt.iterations);
  weights.reserve(opt.iterations);

  auto window_bound = [&](std::size_t from) {
    double wsum = 0.0, c = 0.0;
    std::vector<double> G(n, 0.0);
    for (std::size_t t = from; t < consts.size(); ++t) {
      wsum += weights[t];
      c += weights[t] * consts[t];
      for (std::size_t i = 0; i < n; ++i) G[i] += weights[t] * grads[t][i];
    }
    if (wsum == 0.0) return 0.0;
    double lb = c;
    for (std::size_t i = 0; i < n; ++i) lb += std::min(0.0, G[i] * p.x()[i]);
    return lb / wsum;
  };

  for (std::size_t t = 1; t <= opt.iterations; ++t) {
    const double h = p.objective(v);
    if (h < best) {
      best = h;
      best_v = v;
    }
    const auto g = p.subgradient(v);
    double gnorm = 0.0, gv = 0.0, box_min = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      gnorm += g[i] * g[i];
      gv += g[i] * v[i];
      box_min += std::min(0.0, g[i] * p.x()[i]);
    }
    gnorm = std::sqrt(gnorm);
    lower = std::max(lower, h - gv + box_min);
    if (gnorm == 0.0) break;
    const double step = D / std::sqrt(static_cast<double>(t));
    consts.push_back(h - gv);
    grads.push_back(g);
    weights.push_back(step / gnorm);

    if (t % 250 == 0 || t == opt.iterations) {
      for (std::size_t from : {std::size_t{0}, consts.size() / 2, 3 * consts.size() / 4, 7 * consts.size() / 8})
        lower = std::max(lower, window_bound(from));
      if (best - lower <= opt.tol * best) break;
    }
    for (std::size_t i = 0; i < n; ++i) v[i] = std::clamp(v[i] - step * g[i] / gnorm, 0.0, p.x()[i]);
  }
  return p.make_value(best_v, lower, KMethod::General);
}

/// Largest cell count accepted by the exhaustive oracle.
inline constexpr std::size_t kOracleMaxCells = 8;
inline constexpr std::size_t kOracleMaxLevels = 33;

/// Exact minimum of the objective over the grid v_i in {0, x_i/L, ..., x_i},
/// found by exhaustive branch and bound. Boxes are pruned with the bound
/// a N_E(x - v_hi) + b N_F(v_lo), which is exact on single grid points, so
/// the grid minimum is never lost. `lower` subtracts the granularity
/// (a + b) max|f| / (2L): every point of the box is within x_i/(2L) of a grid
/// point in each cell and the objective is (a+b)-Lipschitz in the sup norm.
inline KValue k_exact_oracle(const StepFunction& f, double a, double b, const SpaceSpec& E, const SpaceSpec& F,
                             std::size_t levels) {
  if (f.cells() > kOracleMaxCells) throw std::invalid_argument("k_exact_oracle: too many cells");
  if (levels == 0 || levels > kOracleMaxLevels) throw std::invalid_argument("k_exact_oracle: levels out of range");
  const detail::KProblem p(f, a, b, E, F);
  const std::size_t n = p.dim();
  const double L = static_cast<double>(levels);
  auto point = [&](std::span<const std::size_t> idx) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = idx[i] == levels ? p.x()[i] : p.x()[i] * static_cast<double>(idx[i]) / L;
    return v;
  };

  std::vector<std::size_t> best_idx(n, 0);
  double best = p.objective(point(best_idx));
  {
    // Incumbents: the all-ones corner and the grid point nearest the best
    // truncation. Only pruning depends on them.
    std::vector<std::size_t> top(n, levels), near(n, 0);
    const auto vt = detail::truncated(p.x(), detail::best_truncation_level(p, 64));
    for (std::size_t i = 0; i < n; ++i)
      near[i] = p.x()[i] > 0.0 ? static_cast<std::size_t>(std::lround(vt[i] / p.x()[i] * L)) : 0;
    for (const auto& cand : {top, near}) {
      const double h = p.objective(point(cand));
      if (h < best) {
        best = h;
        best_idx = cand;
      }
    }
  }

  std::vector<double> scratch(n);
  auto bound = [&](const std::vector<std::size_t>& lo, const std::vector<std::size_t>& hi) {
    const auto vlo = point(lo);
    const auto vhi = point(hi);
    for (std::size_t i = 0; i < n; ++i) scratch[i] = std::max(p.x()[i] - vhi[i], 0.0);
    return a * norm_cells(E, p.m(), scratch) + b * norm_cells(F, p.m(), vlo);
  };

  struct Box {
    std::vector<std::size_t> lo, hi;
  };
  // A global lower bound ends the search once the incumbent attains it.
  const double global_lower = E == F ? std::min(a, b) * norm_cells(E, p.m(), p.x()) : p.trivial_lower();
  std::vector<Box> stack{{std::vector<std::size_t>(n, 0), std::vector<std::size_t>(n, levels)}};
  while (!stack.empty() && best > global_lower * (1.0 + 1e-14)) {
    Box box = std::move(stack.back());
    stack.pop_back();
    std::size_t split = n, width = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (box.hi[i] - box.lo[i] > width) {
        width = box.hi[i] - box.lo[i];
        split = i;
      }
    }
    if (split == n) {
      const double h = p.objective(point(box.lo));
      if (h < best) {
        best = h;
        best_idx = box.lo;
      }
      continue;
    }
    const std::size_t mid = box.lo[split] + width / 2;
    Box left = box, right = box;
    left.hi[split] = mid;
    right.lo[split] = mid + 1;
    const double bl = bound(left.lo, left.hi);
    const double br = bound(right.lo, right.hi);
    // Push the more promising child last so it is explored first.
    if (bl <= br) {
      if (br < best) stack.push_back(std::move(right));
      if (bl < best) stack.push_back(std::move(left));
    } else {
      if (bl < best) stack.push_back(std::move(left));
      if (br < best) stack.push_back(std::move(right));
    }
  }

  const double gran = (a + b) * p.max_x() / (2.0 * L);
  KValue k = p.make_value(point(best_idx), 0.0, KMethod::Oracle);
  k.granularity = gran;
  k.lower = std::max(0.0, k.value - gran);
  return k;
}

/// Dispatcher: exact truncation for (L1, Linf), the closed form
/// min(a, b) ||f||_E when E = F, the general solver otherwise. Returns the
/// best decomposition found and the tightest certified lower bound.
inline KValue k(const StepFunction& f, double a, double b, const SpaceSpec& E, const SpaceSpec& F,
                const KSolverOptions& opt = {}) {
  if (E.is_l1() && F.is_linf()) return k_truncation(f, a, b, E, F, opt.scan_samples);
  const detail::KProblem p(f, a, b, E, F);
  {
    // On f's cells ||u||_G >= phi_G(m) ||u||_inf >= phi_G(m) ||u||_H, m the
    // smallest cell carrying f. Past that ratio one endpoint is optimal.
    double m_min = 1.0;
    for (std::size_t i = 0; i < p.dim(); ++i)
      if (p.x()[i] > 0.0) m_min = std::min(m_min, p.m()[i]);
    constexpr double margin = 1.0 - 1e-9;
    std::optional<std::vector<double>> corner;
    if (a * fundamental_function(E, m_min) * margin >= b) corner = p.x();
    else if (b * fundamental_function(F, m_min) * margin >= a) corner = std::vector<double>(p.dim(), 0.0);
    if (corner) {
      KValue kv = p.make_value(*corner, 0.0, KMethod::Exact);
      kv.lower = kv.value;
      return kv;
    }
  }
  if (E == F) {
    std::vector<double> v = a <= b ? std::vector<double>(p.dim(), 0.0) : p.x();
    KValue kv = p.make_value(v, 0.0, KMethod::Exact);
    kv.lower = kv.value;
    return kv;
  }
  KValue t = k_truncation(f, a, b, E, F, opt.scan_samples);
  KValue g = k_general(f, a, b, E, F, opt);
  const double lower = std::max(t.lower, g.lower);
  KValue best = g.value <= t.value ? std::move(g) : std::move(t);
  best.lower = std::min(lower, best.value);
  return best;
}

}  // namespace peetre
