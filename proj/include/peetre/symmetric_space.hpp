#pragma once

// Norms of concrete symmetric (rearrangement-invariant) spaces on [0,1].
//
// Every space is normalized so that the norm of the constant 1 is 1. On step
// functions all norms reduce to finite sums over cells, except the Orlicz
// (Luxemburg) norm, which is found by bisection.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "peetre/step_function.hpp"

namespace peetre {

/// L_p, 1 <= p < infinity.
struct Lp {
  double p = 1.0;
};

/// L_infinity.
struct Linf {};

/// Young function of an Orlicz space, normalized to M(1) = 1.
struct YoungFunction {
  enum class Kind {
    ExpSquare,  ///< (exp(u^2) - 1) / (e - 1)
    Power,      ///< u^p, p >= 1
  };
  Kind kind = Kind::ExpSquare;
  double p = 2.0;

  double operator()(double u) const {
    switch (kind) {
      case Kind::ExpSquare: return std::expm1(u * u) / (std::numbers::e_v<double> - 1.0);
      case Kind::Power: return std::pow(u, p);
    }
    return 0.0;
  }

  double derivative(double u) const {
    switch (kind) {
      case Kind::ExpSquare: return 2.0 * u * std::exp(u * u) / (std::numbers::e_v<double> - 1.0);
      case Kind::Power: return p * std::pow(u, p - 1.0);
    }
    return 0.0;
  }
};

struct Orlicz {
  YoungFunction M;
};

/// Concave increasing weight of a Lorentz space with phi(0) = 0, phi(1) = 1.
struct LorentzWeight {
  enum class Kind {
    Power,  ///< t^alpha, 0 < alpha <= 1
    TLog,   ///< t (1 - ln t)
  };
  Kind kind = Kind::Power;
  double alpha = 0.5;

  double operator()(double t) const {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    switch (kind) {
      case Kind::Power: return std::pow(t, alpha);
      case Kind::TLog: return t * (1.0 - std::log(t));
    }
    return 0.0;
  }
};

/// ||x|| = integral of x* d(phi).
struct Lorentz {
  LorentzWeight phi;
};

/// Descriptor of a symmetric space norm.
class SpaceSpec {
 public:
  using Variant = std::variant<Lp, Linf, Orlicz, Lorentz>;

  SpaceSpec() : v_(Lp{1.0}) {}
  SpaceSpec(Variant v) : v_(std::move(v)) { validate(); }  // NOLINT implicit

  static SpaceSpec lp(double p) { return SpaceSpec(Lp{p}); }
  static SpaceSpec l1() { return lp(1.0); }
  static SpaceSpec l2() { return lp(2.0); }
  static SpaceSpec linf() { return SpaceSpec(Linf{}); }
  /// The exponential-square Orlicz space G.
  static SpaceSpec orlicz_g() { return SpaceSpec(Orlicz{YoungFunction{YoungFunction::Kind::ExpSquare, 0.0}}); }
  static SpaceSpec orlicz_power(double p) { return SpaceSpec(Orlicz{YoungFunction{YoungFunction::Kind::Power, p}}); }
  static SpaceSpec lorentz_power(double alpha) {
    return SpaceSpec(Lorentz{LorentzWeight{LorentzWeight::Kind::Power, alpha}});
  }
  static SpaceSpec lorentz_tlog() { return SpaceSpec(Lorentz{LorentzWeight{LorentzWeight::Kind::TLog, 0.0}}); }

  const Variant& variant() const { return v_; }

  bool is_l1() const { return std::holds_alternative<Lp>(v_) && std::get<Lp>(v_).p == 1.0; }
  bool is_linf() const { return std::holds_alternative<Linf>(v_); }

  std::string name() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Lp>) {
            os << "L" << s.p;
          } else if constexpr (std::is_same_v<T, Linf>) {
            os << "Linf";
          } else if constexpr (std::is_same_v<T, Orlicz>) {
            if (s.M.kind == YoungFunction::Kind::ExpSquare)
              os << "Orlicz(G)";
            else
              os << "Orlicz(u^" << s.M.p << ")";
          } else {
            if (s.phi.kind == LorentzWeight::Kind::Power)
              os << "Lorentz(t^" << s.phi.alpha << ")";
            else
              os << "Lorentz(t(1-ln t))";
          }
        },
        v_);
    return os.str();
  }

  friend bool operator==(const SpaceSpec& a, const SpaceSpec& b) { return a.name() == b.name(); }

 private:
  void validate() const {
    std::visit(
        [](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, Lp>) {
            if (!(s.p >= 1.0) || !std::isfinite(s.p)) throw std::invalid_argument("Lp: p must be a finite value >= 1");
          } else if constexpr (std::is_same_v<T, Orlicz>) {
            if (s.M.kind == YoungFunction::Kind::Power && !(s.M.p >= 1.0 && std::isfinite(s.M.p)))
              throw std::invalid_argument("Orlicz: power Young function needs p >= 1");
          } else if constexpr (std::is_same_v<T, Lorentz>) {
            if (s.phi.kind == LorentzWeight::Kind::Power && !(s.phi.alpha > 0.0 && s.phi.alpha <= 1.0))
              throw std::invalid_argument("Lorentz: power weight needs 0 < alpha <= 1");
          }
        },
        v_);
  }

  Variant v_;
};

/// Relative tolerance of the Luxemburg bisection.
inline constexpr double kLuxemburgRelTol = 1e-10;

namespace detail {

inline double l1_cells(std::span<const double> m, std::span<const double> x) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += m[i] * std::abs(x[i]);
  return s;
}

inline double linf_cells(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s = std::max(s, std::abs(v));
  return s;
}

inline double lp_cells(double p, std::span<const double> m, std::span<const double> x) {
  if (p == 1.0) return l1_cells(m, x);
  // Scale by the max to avoid under/overflow for tiny or huge values.
  const double big = linf_cells(x);
  if (big == 0.0) return 0.0;
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += m[i] * std::pow(std::abs(x[i]) / big, p);
  return big * std::pow(s, 1.0 / p);
}

/// Integral of M(|x| / lambda).
inline double modular(const YoungFunction& M, std::span<const double> m, std::span<const double> x, double lambda) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) continue;
    s += m[i] * M(std::abs(x[i]) / lambda);
  }
  return s;
}

/// Luxemburg norm inf{lambda > 0 : modular(x / lambda) <= 1}. The bracket
/// [||x||_1, ||x||_inf] is valid because M is convex with M(0)=0, M(1)=1.
/// The returned value always satisfies modular <= 1.
inline double luxemburg_cells(const YoungFunction& M, std::span<const double> m, std::span<const double> x) {
  double hi = linf_cells(x);
  if (hi == 0.0) return 0.0;
  double lo = l1_cells(m, x);
  if (lo >= hi) return hi;
  while (lo < hi * (1.0 - kLuxemburgRelTol)) {
    const double mid = hi / lo > 2.0 ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (modular(M, m, x, mid) <= 1.0)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

/// Permutation sorting |x| in decreasing order (stable).
inline std::vector<std::size_t> decreasing_order(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return std::abs(x[i]) > std::abs(x[j]); });
  return order;
}

inline double lorentz_cells(const LorentzWeight& phi, std::span<const double> m, std::span<const double> x) {
  const auto order = decreasing_order(x);
  double pos = 0.0, prev = 0.0, s = 0.0;
  for (std::size_t i : order) {
    if (x[i] == 0.0) break;
    pos += m[i];
    const double cur = phi(pos);
    s += std::abs(x[i]) * (cur - prev);
    prev = cur;
  }
  return s;
}

}  // namespace detail

/// Norm of the step function with cell measures m and cell values x.
inline double norm_cells(const SpaceSpec& space, std::span<const double> m, std::span<const double> x) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Lp>) {
          return detail::lp_cells(s.p, m, x);
        } else if constexpr (std::is_same_v<T, Linf>) {
          return detail::linf_cells(x);
        } else if constexpr (std::is_same_v<T, Orlicz>) {
          return detail::luxemburg_cells(s.M, m, x);
        } else {
          return detail::lorentz_cells(s.phi, m, x);
        }
      },
      space.variant());
}

/// A subgradient of the norm with respect to the cell values, for x >= 0
/// cellwise. At x = 0 the zero vector is returned.
inline std::vector<double> norm_subgradient_cells(const SpaceSpec& space, std::span<const double> m,
                                                  std::span<const double> x) {
  std::vector<double> g(x.size(), 0.0);
  const double n = norm_cells(space, m, x);
  if (n == 0.0) return g;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Lp>) {
          for (std::size_t i = 0; i < x.size(); ++i) {
            if (s.p == 1.0)
              g[i] = x[i] > 0.0 ? m[i] : 0.0;
            else
              g[i] = m[i] * std::pow(x[i] / n, s.p - 1.0);
          }
        } else if constexpr (std::is_same_v<T, Linf>) {
          const auto it = std::max_element(x.begin(), x.end());
          g[static_cast<std::size_t>(it - x.begin())] = 1.0;
        } else if constexpr (std::is_same_v<T, Orlicz>) {
          // Implicit differentiation of sum m_i M(x_i / lambda) = 1.
          double denom = 0.0;
          for (std::size_t i = 0; i < x.size(); ++i) denom += m[i] * s.M.derivative(x[i] / n) * x[i] / n;
          if (denom > 0.0 && std::isfinite(denom)) {
            for (std::size_t i = 0; i < x.size(); ++i) g[i] = m[i] * s.M.derivative(x[i] / n) / denom;
          }
        } else {
          const auto order = detail::decreasing_order(x);
          double pos = 0.0;
          for (std::size_t i : order) {
            const double prev = s.phi(pos);
            pos += m[i];
            g[i] = s.phi(pos) - prev;
          }
        }
      },
      space.variant());
  return g;
}

inline double norm(const SpaceSpec& space, const StepFunction& f) {
  const auto m = f.measures();
  return norm_cells(space, m, f.values());
}

/// phi_E(tau) = ||chi_[0,tau]||_E.
inline double fundamental_function(const SpaceSpec& space, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::domain_error("fundamental_function: tau outside [0,1]");
  if (tau == 0.0) return 0.0;
  return norm(space, indicator(0.0, tau));
}

/// Outcome of the randomized axiom harness. On failure, `witness_f` and
/// `witness_g` hold the offending pair.
struct AxiomReport {
  bool passed = true;
  std::size_t trials = 0;
  std::string failed_property;
  std::string detail;
  std::optional<StepFunction> witness_f;
  std::optional<StepFunction> witness_g;
};

using NormFunction = std::function<double(const StepFunction&)>;

/// Randomized checks of the ideal property, rearrangement invariance, the
/// triangle inequality and absolute homogeneity, for an arbitrary norm-like
/// callable. Used both on SpaceSpec norms and on negative controls.
inline AxiomReport validate_norm_axioms(const NormFunction& nrm, std::uint64_t seed, std::size_t trials,
                                        double tol = 1e-9) {
  AxiomReport rep;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> cells_dist(1, 16);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> amp_dist(0.01, 100.0);

  auto fail = [&](const char* what, const StepFunction& f, const StepFunction& g, double lhs, double rhs) {
    rep.passed = false;
    rep.failed_property = what;
    std::ostringstream os;
    os.precision(17);
    os << what << ": lhs=" << lhs << " rhs=" << rhs;
    rep.detail = os.str();
    rep.witness_f = f;
    rep.witness_g = g;
  };

  for (std::size_t t = 0; t < trials && rep.passed; ++t) {
    rep.trials = t + 1;
    const StepFunction f = random_step(rng(), cells_dist(rng), amp_dist(rng));
    const double nf = nrm(f);

    // Ideal property: |g| <= |f| cellwise, for a random damping and for the
    // positive and negative parts of f.
    std::vector<double> gv(f.values()), pos(f.values()), neg(f.values()), flip(f.values()), mod(f.values());
    for (double& v : gv) v *= unit(rng);
    for (double& v : pos) v = std::max(v, 0.0);
    for (double& v : neg) v = std::min(v, 0.0);
    for (double& v : flip) v = -v;
    for (double& v : mod) v = std::abs(v);
    bool ideal_ok = true;
    for (const auto* vals : {&gv, &pos, &neg, &flip, &mod}) {
      const StepFunction g(f.breakpoints(), *vals);
      const double ng = nrm(g);
      const bool same_modulus = vals == &flip || vals == &mod;
      const double slack = tol * std::max(1.0, nf);
      if (!(ng <= nf + slack) || (same_modulus && !(nf <= ng + slack))) {
        fail("ideal", f, g, ng, nf);
        ideal_ok = false;
        break;
      }
    }
    if (!ideal_ok) break;

    // Rearrangement invariance, against f* and a random cell permutation.
    const StepFunction fs = rearrange(f);
    const double nfs = nrm(fs);
    if (!(std::abs(nf - nfs) <= tol * nf)) {
      fail("rearrangement", f, fs, nf, nfs);
      break;
    }
    std::vector<std::size_t> perm(f.cells());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<double> pbp{0.0}, pv;
    for (std::size_t i : perm) {
      pbp.push_back(pbp.back() + f.measure(i));
      pv.push_back(f.values()[i]);
    }
    pbp.back() = 1.0;
    bool valid_partition = true;
    for (std::size_t i = 0; i + 1 < pbp.size(); ++i) valid_partition = valid_partition && pbp[i] < pbp[i + 1];
    if (valid_partition) {
      const StepFunction fp(pbp, pv);
      const double nfp = nrm(fp);
      if (!(std::abs(nf - nfp) <= tol * std::max(nf, 1e-300) + tol * 1e-12)) {
        fail("rearrangement", f, fp, nf, nfp);
        break;
      }
    }

    // Triangle inequality on an independent partition.
    const StepFunction h = random_step(rng(), cells_dist(rng), amp_dist(rng));
    const double nh = nrm(h);
    const double nsum = nrm(add(f, h));
    if (!(nsum <= (nf + nh) * (1.0 + tol))) {
      fail("triangle", f, h, nsum, nf + nh);
      break;
    }

    // Absolute homogeneity.
    const double c = 10.0 * unit(rng);
    const double ncf = nrm(scale(f, c));
    if (!(std::abs(ncf - std::abs(c) * nf) <= tol * std::abs(c) * nf + 1e-300)) {
      fail("homogeneity", f, scale(f, c), ncf, std::abs(c) * nf);
      break;
    }
  }
  return rep;
}

inline AxiomReport validate_space_axioms(const SpaceSpec& space, std::uint64_t seed, std::size_t trials) {
  if (trials == 0) throw std::invalid_argument("validate_space_axioms: trials must be >= 1");
  return validate_norm_axioms([&](const StepFunction& f) { return norm(space, f); }, seed, trials);
}

}  // namespace peetre
