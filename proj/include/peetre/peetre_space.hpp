#pragma once

// The Peetre space K(E, F; W; (a_i), (b_i)):
//   U(f)     = || sum_i k(f; a_i, b_i) w_i ||_W
//   ||f||_K  = U(f) / U(chi_[0,1]).
//
// The series is truncated at N with a certified tail: k(f; a_i, b_i) <= b_i ||f||_F
// (take u = 0), and W is monotone, so the coordinates i > N contribute at most
// ||f||_F * ||(b_i)_{i>N}||_W.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "peetre/k_functional.hpp"
#include "peetre/sequence_space.hpp"
#include "peetre/step_function.hpp"
#include "peetre/symmetric_space.hpp"

namespace peetre {

/// Bracket on the unnormalized norm U(f) from the first N coefficients.
struct PeetreBracket {
  double lo = 0.0;
  double hi = 0.0;
  /// W-norm of the upper k-brackets of coordinates 1..N (no tail).
  double head = 0.0;
  /// ||f||_F * ||(b_i)_{i>N}||_W.
  double tail_bound = 0.0;
  std::size_t N = 0;
  std::vector<KValue> k_values;
};

/// A Peetre-norm evaluation: value with a certified bracket.
struct KEvaluation {
  double value = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::size_t N = 0;
  bool converged = true;
  PeetreBracket unnormalized;

  double width() const { return upper - lower; }
};

struct PeetreOptions {
  KSolverOptions solver{};
  /// Relative bracket width targeted for the normalizer U(chi_[0,1]).
  double normalizer_tol = 1e-9;
  std::size_t initial_N = 4;
  std::size_t max_N = 512;
};

class PeetreSpec;
PeetreBracket peetre_norm_unnormalized(const StepFunction& f, const PeetreSpec& spec, std::size_t N);

class PeetreSpec {
 public:
  PeetreSpec(SpaceSpec E, SpaceSpec F, SequenceSpaceSpec W, WeightScheme weights, PeetreOptions options = {})
      : E_(std::move(E)), F_(std::move(F)), W_(std::move(W)), weights_(std::move(weights)), options_(options) {
    if (!std::isfinite(weights_.tail_norm(W_, 0)))
      throw std::invalid_argument("PeetreSpec: (b_i) is not in W, tail bound unavailable");
    const StepFunction one = constant(1.0);
    std::size_t N = options_.initial_N;
    for (;;) {
      normalizer_ = peetre_norm_unnormalized(one, *this, N);
      if (normalizer_.hi - normalizer_.lo <= options_.normalizer_tol * normalizer_.lo || N >= options_.max_N) break;
      N *= 2;
    }
    if (!(normalizer_.lo > 0.0)) throw std::invalid_argument("PeetreSpec: normalizer is not positive");
  }

  const SpaceSpec& E() const { return E_; }
  const SpaceSpec& F() const { return F_; }
  const SequenceSpaceSpec& W() const { return W_; }
  const WeightScheme& weights() const { return weights_; }
  const PeetreOptions& options() const { return options_; }

  /// Cached bracket of U(chi_[0,1]).
  const PeetreBracket& normalizer() const { return normalizer_; }
  double normalizer_value() const { return 0.5 * (normalizer_.lo + normalizer_.hi); }

 private:
  SpaceSpec E_, F_;
  SequenceSpaceSpec W_;
  WeightScheme weights_;
  PeetreOptions options_;
  PeetreBracket normalizer_;
};

namespace detail {

inline void extend_k_sequence(const StepFunction& f, const PeetreSpec& spec, std::size_t N,
                              std::vector<KValue>& ks) {
  const double fF = norm(spec.F(), f);
  for (std::size_t i = ks.size() + 1; i <= N; ++i) {
    const double bi = spec.weights().b(i);
    KValue kv = k(f, spec.weights().a(i), bi, spec.E(), spec.F(), spec.options().solver);
    // u = 0 is feasible; keeps every upper bracket under the tail envelope.
    if (kv.upper > bi * fF) {
      kv.upper = bi * fF;
      kv.value = kv.upper;
      kv.u = StepFunction();
      kv.v = f;
      kv.lower = std::min(kv.lower, kv.upper);
    }
    ks.push_back(std::move(kv));
  }
}

inline PeetreBracket bracket_from(const StepFunction& f, const PeetreSpec& spec, std::size_t N,
                                  std::span<const KValue> ks) {
  PeetreBracket br;
  br.N = N;
  std::vector<double> lows(N), ups(N);
  for (std::size_t i = 0; i < N; ++i) {
    lows[i] = ks[i].lower;
    ups[i] = ks[i].upper;
  }
  br.tail_bound = norm(spec.F(), f) * spec.weights().tail_norm(spec.W(), N);
  br.lo = w_norm(spec.W(), lows);
  br.head = w_norm(spec.W(), ups);
  br.hi = w_norm(spec.W(), ups, br.tail_bound);
  br.k_values.assign(ks.begin(), ks.begin() + static_cast<std::ptrdiff_t>(N));
  return br;
}

}  // namespace detail

/// Bracket [lo, hi] on U(f) from k-values i = 1..N. The upper end places the
/// tail envelope ||f||_F (b_i)_{i>N} in the coordinates beyond N, so brackets
/// nest as N grows.
inline PeetreBracket peetre_norm_unnormalized(const StepFunction& f, const PeetreSpec& spec, std::size_t N) {
  if (N == 0) throw std::invalid_argument("peetre_norm_unnormalized: N must be >= 1");
  std::vector<KValue> ks;
  detail::extend_k_sequence(f, spec, N, ks);
  return detail::bracket_from(f, spec, N, ks);
}

/// ||f||_K, doubling N until the bracket width is at most tol * value (or an
/// absolute tol when the value vanishes). Constants c * chi_[0,1] evaluate to
/// |c| exactly, which is the normalization.
inline KEvaluation peetre_norm(const StepFunction& f, const PeetreSpec& spec, double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("peetre_norm: tol must be positive");
  KEvaluation ev;
  const StepFunction af = abs(f);
  if (af.cells() == 1) {
    ev.value = ev.lower = ev.upper = af.values()[0];
    ev.N = 0;
    return ev;
  }
  std::vector<KValue> ks;
  std::size_t N = spec.options().initial_N;
  PeetreBracket br;
  for (;;) {
    detail::extend_k_sequence(f, spec, N, ks);
    br = detail::bracket_from(f, spec, N, ks);
    const double width = br.hi - br.lo;
    if (width <= tol * br.lo || br.hi <= tol) {
      ev.converged = true;
      break;
    }
    if (N >= spec.options().max_N) {
      ev.converged = false;
      break;
    }
    N *= 2;
  }
  const auto& nz = spec.normalizer();
  ev.N = N;
  ev.value = 0.5 * (br.lo + br.hi) / spec.normalizer_value();
  ev.lower = br.lo / nz.hi;
  ev.upper = br.hi / nz.lo;
  ev.unnormalized = std::move(br);
  return ev;
}

/// Least j >= 1 with 2 A_{n0} / a_j < eps0.
inline std::size_t head_index(double eps0, std::size_t n0, const WeightScheme& w) {
  if (!(eps0 > 0.0)) throw std::invalid_argument("head_index: eps0 must be positive");
  if (n0 == 0) throw std::invalid_argument("head_index: n0 must be >= 1");
  const double A = w.partial_sum_a(n0);
  std::size_t j = 1;
  while (!(2.0 * A / w.a(j) < eps0)) {
    ++j;
    if (j > 100000) throw std::runtime_error("head_index: no index found");
  }
  return j;
}

/// Least N >= 1 with ||f||_F * ||(b_i)_{i>N}||_W <= eps0.
inline std::size_t tail_index(double eps0, double f_F_norm, const PeetreSpec& spec) {
  if (!(eps0 > 0.0)) throw std::invalid_argument("tail_index: eps0 must be positive");
  std::size_t N = 1;
  while (!(f_F_norm * spec.weights().tail_norm(spec.W(), N) <= eps0)) {
    ++N;
    if (N > 100000) throw std::runtime_error("tail_index: no index found");
  }
  return N;
}

}  // namespace peetre
