#pragma once

// Finite reenactments of the head/tail cutting argument for disjoint
// sequences in a Peetre space, and sampled block-equivalence ratios.
// Nothing here asserts an infinite-dimensional statement; all reports are
// empirical.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "peetre/inclusion.hpp"
#include "peetre/peetre_space.hpp"
#include "peetre/sequence_space.hpp"
#include "peetre/step_function.hpp"

namespace peetre {

/// Tolerance added to each inequality of the head/tail chain.
inline constexpr double kHeadTailSlack = 1e-6;

struct HeadTailReport {
  double eps0 = 0.0;
  std::size_t n0 = 0;
  std::size_t j = 0;
  /// a_j^-1 b_j: the largest admissible value of s(mes(supp f)).
  double delta = 0.0;
  double support = 0.0;
  double s_support = 0.0;
  StepFunction f;  ///< rescaled to unit K-norm
  double f_K_norm = 0.0;
  double f_E_norm = 0.0;
  double f_E_bound = 0.0;  ///< 2 / a_j
  double head_norm = 0.0;
  double head_bound = 0.0;  ///< 2 A_{n0} / a_j
  std::size_t N = 0;
  double tail_norm = 0.0;
  double combined_norm = 0.0;

  bool hypotheses_met = false;
  std::string failing_inequality;
  bool head_ok = false;
  bool combined_ok = false;
  bool f_E_ok = false;

  bool passed() const { return hypotheses_met && head_ok && combined_ok && f_E_ok; }
};

/// Estimate of s(tau) for the pair of the spec: s_tau over the default test
/// family, the indicator of [0, tau] and `extra`.
inline double s_estimate(const PeetreSpec& spec, double tau, const StepFunction& extra) {
  const TestFamily B = default_family({tau}).with(extra, "probe");
  return s_tau(spec.E(), spec.F(), tau, B);
}

namespace detail {

/// Upper k-brackets of f at indices first..last (1-based, inclusive).
inline std::vector<double> k_uppers(const StepFunction& f, const PeetreSpec& spec, std::size_t first,
                                    std::size_t last) {
  std::vector<double> out;
  const double fF = norm(spec.F(), f);
  for (std::size_t i = first; i <= last; ++i) {
    const double bi = spec.weights().b(i);
    out.push_back(std::min(k(f, spec.weights().a(i), bi, spec.E(), spec.F(), spec.options().solver).upper, bi * fF));
  }
  return out;
}

/// Number of explicit coordinates evaluated past the tail index before the
/// closed-form envelope takes over.
inline constexpr std::size_t kTailLookahead = 64;

}  // namespace detail

/// Rescales f to unit K-norm, then evaluates every quantity of the head and
/// tail cutting chain. If s(mes(supp f)) exceeds a_j^-1 b_j the report is
/// marked as not meeting the hypotheses and no check is asserted.
inline HeadTailReport run_head_tail(const PeetreSpec& spec, double eps0, std::size_t n0, const StepFunction& f,
                                    double tol = 1e-9) {
  if (f.is_zero()) throw std::invalid_argument("run_head_tail: f must be nonzero");
  HeadTailReport r;
  r.eps0 = eps0;
  r.n0 = n0;
  const auto& w = spec.weights();
  r.j = head_index(eps0, n0, w);
  r.delta = w.b(r.j) / w.a(r.j);
  r.support = support_measure(f);
  r.s_support = s_estimate(spec, r.support, f);
  r.hypotheses_met = r.s_support <= r.delta;
  if (!r.hypotheses_met) {
    std::ostringstream os;
    os.precision(17);
    os << "s(mes(supp f)) <= a_j^-1 b_j fails: " << r.s_support << " > " << r.delta;
    r.failing_inequality = os.str();
  }

  const KEvaluation kn = peetre_norm(f, spec, tol);
  r.f = scale(f, 1.0 / kn.value);
  r.f_K_norm = peetre_norm(r.f, spec, tol).value;
  r.f_E_norm = norm(spec.E(), r.f);
  r.f_E_bound = 2.0 / w.a(r.j);
  r.head_bound = 2.0 * w.partial_sum_a(n0) / w.a(r.j);

  const auto head = detail::k_uppers(r.f, spec, 1, n0);
  r.head_norm = w_norm(spec.W(), head);

  const double fF = norm(spec.F(), r.f);
  r.N = tail_index(eps0, fF, spec);
  const std::size_t last = r.N + detail::kTailLookahead;
  const auto tail = detail::k_uppers(r.f, spec, r.N + 1, last);
  const double envelope = fF * w.tail_norm(spec.W(), last);
  std::vector<double> tail_coords(last, 0.0);
  std::copy(tail.begin(), tail.end(), tail_coords.begin() + static_cast<std::ptrdiff_t>(r.N));
  r.tail_norm = w_norm(spec.W(), tail_coords, envelope);

  std::vector<double> both = tail_coords;
  for (std::size_t i = 0; i < n0 && i < both.size(); ++i) both[i] = std::max(both[i], head[i]);
  r.combined_norm = w_norm(spec.W(), both, envelope);

  r.head_ok = r.head_norm <= eps0 + kHeadTailSlack;
  r.combined_ok = r.combined_norm <= 2.0 * eps0 + kHeadTailSlack;
  r.f_E_ok = r.f_E_norm <= r.f_E_bound + kHeadTailSlack;
  return r;
}

/// f_n = n chi_[2^-(d(n+1)), 2^-(dn)) for n = 1..count: disjoint, with
/// supports shrinking geometrically at rate 2^-d.
inline std::vector<StepFunction> geometric_disjoint_family(std::size_t count, int decay_bits) {
  if (decay_bits < 1) throw std::invalid_argument("geometric_disjoint_family: decay must be >= 1");
  if (static_cast<long>(count + 1) * decay_bits > 1000)
    throw std::invalid_argument("geometric_disjoint_family: supports underflow double precision");
  std::vector<StepFunction> fam;
  for (std::size_t n = 1; n <= count; ++n) {
    const double l = std::ldexp(1.0, -decay_bits * static_cast<int>(n + 1));
    const double r = std::ldexp(1.0, -decay_bits * static_cast<int>(n));
    fam.push_back(scale(indicator(l, r), static_cast<double>(n)));
  }
  return fam;
}

inline bool pairwise_disjoint(const std::vector<StepFunction>& fam) {
  for (std::size_t i = 0; i < fam.size(); ++i)
    for (std::size_t j = i + 1; j < fam.size(); ++j)
      if (!multiply(fam[i], fam[j]).is_zero()) return false;
  return true;
}

struct Subsequence {
  /// 1-based positions in the family, strictly increasing.
  std::vector<std::size_t> indices;
  bool partial = false;
};

/// Inductive selection: n_k is the least m > n_{k-1} with
/// s(mes(supp f_m)) <= a_j^-1 b_j, j = head_index(2^-m eps, m).
/// Stops after `wanted` indices; flags a partial result if the family runs out.
inline Subsequence select_subsequence(const std::vector<StepFunction>& family, const PeetreSpec& spec, double eps,
                                      std::size_t wanted) {
  if (!(eps > 0.0)) throw std::invalid_argument("select_subsequence: eps must be positive");
  if (!pairwise_disjoint(family)) throw std::invalid_argument("select_subsequence: family is not disjoint");
  Subsequence out;
  const auto& w = spec.weights();
  for (std::size_t m = 1; m <= family.size() && out.indices.size() < wanted; ++m) {
    const StepFunction& fm = family[m - 1];
    if (fm.is_zero()) continue;
    const double eps_m = std::ldexp(eps, -static_cast<int>(m));
    if (!(eps_m > 0.0)) break;
    const std::size_t j = head_index(eps_m, m, w);
    const double threshold = w.b(j) / w.a(j);
    if (s_estimate(spec, support_measure(fm), fm) <= threshold) out.indices.push_back(m);
  }
  out.partial = out.indices.size() < wanted;
  return out;
}

struct BlockWindow {
  std::size_t index = 0;  ///< family position n_k
  std::size_t first = 0;  ///< head_index(2^-n_k eps, n_k) + 1
  std::size_t last = 0;   ///< tail_index(2^-n_k eps, ||g_k||_F)
  std::vector<double> theta;
};

struct BlockEquivalenceReport {
  std::vector<BlockWindow> windows;
  bool windows_disjoint = true;
  std::vector<std::vector<double>> coefficients;
  std::vector<double> ratios;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  std::size_t argmin = 0;
  std::size_t argmax = 0;
};

namespace detail {

/// sum_k c_k theta_k, each block placed at its window's coordinates.
inline std::vector<double> block_vector(const std::vector<BlockWindow>& windows, const std::vector<double>& c) {
  std::size_t len = 0;
  for (const auto& bw : windows) len = std::max(len, bw.last);
  std::vector<double> y(len, 0.0);
  for (std::size_t q = 0; q < windows.size(); ++q)
    for (std::size_t t = 0; t < windows[q].theta.size(); ++t) y[windows[q].first - 1 + t] += c[q] * windows[q].theta[t];
  return y;
}

}  // namespace detail

/// For each selected f_k (normalized to g_k with ||g_k||_K = 1) the window of
/// coefficients the head/tail argument leaves, and for seeded random
/// sign-symmetric coefficient vectors c the ratio
///   ||sum c_k g_k||_K / (||sum c_k theta_k||_W / U(chi_[0,1])).
inline BlockEquivalenceReport run_block_equivalence(const std::vector<StepFunction>& family,
                                                    const std::vector<std::size_t>& indices, const PeetreSpec& spec,
                                                    double eps, std::size_t samples, std::uint64_t seed,
                                                    double tol = 1e-9) {
  if (samples == 0) throw std::invalid_argument("run_block_equivalence: samples must be >= 1");
  if (indices.empty()) throw std::invalid_argument("run_block_equivalence: no functions selected");
  BlockEquivalenceReport rep;
  const auto& w = spec.weights();
  std::vector<StepFunction> g;
  for (std::size_t n : indices) {
    if (n == 0 || n > family.size()) throw std::out_of_range("run_block_equivalence: index outside family");
    const StepFunction& f = family[n - 1];
    g.push_back(scale(f, 1.0 / peetre_norm(f, spec, tol).value));
    const double eps_n = std::ldexp(eps, -static_cast<int>(n));
    BlockWindow bw;
    bw.index = n;
    bw.first = head_index(eps_n, n, w) + 1;
    bw.last = std::max(tail_index(eps_n, norm(spec.F(), g.back()), spec), bw.first);
    for (std::size_t i = bw.first; i <= bw.last; ++i)
      bw.theta.push_back(k(g.back(), w.a(i), w.b(i), spec.E(), spec.F(), spec.options().solver).value);
    rep.windows.push_back(std::move(bw));
  }
  for (std::size_t q = 1; q < rep.windows.size(); ++q)
    rep.windows_disjoint = rep.windows_disjoint && rep.windows[q].first > rep.windows[q - 1].last;

  std::mt19937_64 rng(seed);
  rep.min_ratio = std::numeric_limits<double>::infinity();
  rep.max_ratio = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<double> c(g.size());
    for (double& ck : c) {
      const double u = std::generate_canonical<double, 53>(rng);
      ck = 2.0 * u - 1.0;
      if (ck == 0.0) ck = 0.5;
    }
    StepFunction sum;
    for (std::size_t q = 0; q < g.size(); ++q) sum = add(sum, scale(g[q], c[q]));
    const double lhs = peetre_norm(sum, spec, tol).value;
    const double rhs = w_norm(spec.W(), detail::block_vector(rep.windows, c)) / spec.normalizer_value();
    const double ratio = lhs / rhs;
    rep.coefficients.push_back(std::move(c));
    rep.ratios.push_back(ratio);
    if (ratio < rep.min_ratio) {
      rep.min_ratio = ratio;
      rep.argmin = s;
    }
    if (ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.argmax = s;
    }
  }
  return rep;
}

/// Ratios for user-supplied coefficient vectors, sharing the windows of `rep`.
inline std::vector<double> block_ratios(const std::vector<StepFunction>& family, const BlockEquivalenceReport& rep,
                                        const PeetreSpec& spec, const std::vector<std::vector<double>>& coeffs,
                                        double tol = 1e-9) {
  std::vector<StepFunction> g;
  for (const auto& bw : rep.windows) {
    const StepFunction& f = family[bw.index - 1];
    g.push_back(scale(f, 1.0 / peetre_norm(f, spec, tol).value));
  }
  std::vector<double> out;
  for (const auto& c : coeffs) {
    StepFunction sum;
    for (std::size_t q = 0; q < g.size(); ++q) sum = add(sum, scale(g[q], c[q]));
    out.push_back(peetre_norm(sum, spec, tol).value /
                  (w_norm(spec.W(), detail::block_vector(rep.windows, c)) / spec.normalizer_value()));
  }
  return out;
}

}  // namespace peetre
