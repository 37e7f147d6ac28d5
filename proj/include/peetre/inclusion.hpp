#pragma once

// Concentration moduli of one symmetric space inside another.
//
// Suprema over infinite sets of functions are replaced by maxima over a named
// finite TestFamily; every such value is a lower bound for the true supremum.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "peetre/step_function.hpp"
#include "peetre/symmetric_space.hpp"

namespace peetre {

class TestFamily {
 public:
  TestFamily(std::string name, std::vector<StepFunction> members) : name_(std::move(name)), members_(std::move(members)) {
    if (members_.empty()) throw std::invalid_argument("TestFamily: family must be nonempty");
    for (const auto& f : members_)
      if (f.is_zero()) throw std::invalid_argument("TestFamily: members must be nonzero");
  }

  /// chi_[0,tau] for each tau.
  static TestFamily indicators(const std::vector<double>& taus) {
    std::vector<StepFunction> m;
    for (double t : taus) m.push_back(indicator(0.0, t));
    return TestFamily("indicators", std::move(m));
  }

  /// Dyadic step approximations of t^(-alpha): value 2^(k alpha) on
  /// [2^-(k+1), 2^-k) for k < levels, and 2^(levels alpha) on [0, 2^-levels).
  static TestFamily power_profiles(const std::vector<double>& alphas, std::size_t levels = 24) {
    std::vector<StepFunction> m;
    for (double alpha : alphas) m.push_back(power_profile(alpha, levels));
    return TestFamily("power_profiles", std::move(m));
  }

  static StepFunction power_profile(double alpha, std::size_t levels) {
    std::vector<double> bp{0.0};
    std::vector<double> vals;
    for (std::size_t k = levels + 1; k-- > 0;) {
      bp.push_back(std::ldexp(1.0, -static_cast<int>(k)));
      vals.push_back(std::pow(2.0, static_cast<double>(k) * alpha));
    }
    return make_step(std::move(bp), std::move(vals));
  }

  static TestFamily random(std::uint64_t seed, std::size_t count, std::size_t cells) {
    std::vector<StepFunction> m;
    std::uint64_t s = seed;
    while (m.size() < count) {
      StepFunction f = random_step(s++, cells, 1.0);
      if (!f.is_zero()) m.push_back(std::move(f));
    }
    return TestFamily("random", std::move(m));
  }

  TestFamily merged(const TestFamily& other) const {
    std::vector<StepFunction> m = members_;
    m.insert(m.end(), other.members_.begin(), other.members_.end());
    return TestFamily(name_ + "+" + other.name_, std::move(m));
  }

  TestFamily with(StepFunction f, const std::string& label) const {
    std::vector<StepFunction> m = members_;
    m.push_back(std::move(f));
    return TestFamily(name_ + "+" + label, std::move(m));
  }

  const std::string& name() const { return name_; }
  const std::vector<StepFunction>& members() const { return members_; }

 private:
  std::string name_;
  std::vector<StepFunction> members_;
};

namespace detail {
/// ||f* chi_[0,tau]||_E: the largest E-norm of f restricted to a set of
/// measure tau (the set where |f| is largest).
inline double concentrated_norm(const SpaceSpec& E, const StepFunction& f, double tau) {
  if (tau >= support_measure(f)) return norm(E, f);
  return norm(E, restrict_to_initial(rearrange(f), tau));
}
}  // namespace detail

/// sup { ||f chi_e||_E / ||f||_E : mes(e) = tau }.
inline double eta_point(const SpaceSpec& E, const StepFunction& f, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::domain_error("eta_point: tau outside [0,1]");
  const double nf = norm(E, f);
  if (nf == 0.0) throw std::invalid_argument("eta_point: f has zero norm");
  return std::min(1.0, detail::concentrated_norm(E, f, tau) / nf);
}

/// max over the family of eta_point; a lower bound for the supremum over
/// the set the family samples.
inline double eta_family(const SpaceSpec& E, const TestFamily& B, double tau) {
  double s = 0.0;
  for (const auto& f : B.members()) s = std::max(s, eta_point(E, f, tau));
  return s;
}

/// F-normalized modulus s(tau) = sup_{x in B} ||x* chi_[0,tau]||_E / ||x||_F.
inline double s_tau(const SpaceSpec& E, const SpaceSpec& F, double tau, const TestFamily& B) {
  if (!(tau > 0.0 && tau <= 1.0)) throw std::domain_error("s_tau: tau must lie in (0,1]");
  double s = 0.0;
  for (const auto& x : B.members()) s = std::max(s, detail::concentrated_norm(E, x, tau) / norm(F, x));
  return E == F ? std::min(s, 1.0) : s;
}

struct InclusionProfile {
  std::vector<double> tau;
  std::vector<double> s;
  /// True when the profile falls below the threshold at the smallest tau.
  bool consistent_with_absolute_inclusion = false;
  double threshold = 0.0;
};

inline InclusionProfile inclusion_profile(const SpaceSpec& E, const SpaceSpec& F, const std::vector<double>& tau_grid,
                                          const TestFamily& B, double threshold = 1e-2) {
  if (tau_grid.empty()) throw std::invalid_argument("inclusion_profile: empty tau grid");
  for (std::size_t i = 1; i < tau_grid.size(); ++i)
    if (!(tau_grid[i] < tau_grid[i - 1])) throw std::invalid_argument("inclusion_profile: tau grid must decrease");
  InclusionProfile p;
  p.threshold = threshold;
  p.tau = tau_grid;
  for (double t : tau_grid) p.s.push_back(s_tau(E, F, t, B));
  p.consistent_with_absolute_inclusion = p.s.back() <= threshold;
  return p;
}

/// max over B of ||x||_E / ||x||_F; a lower bound on the norm of F -> E.
inline double inclusion_constant_estimate(const SpaceSpec& E, const SpaceSpec& F, const TestFamily& B) {
  double c = 0.0;
  for (const auto& x : B.members()) c = std::max(c, norm(E, x) / norm(F, x));
  return c;
}

/// Default family used by the CLI and experiments: indicators on a dyadic
/// grid, power profiles and a few random steps.
inline TestFamily default_family(const std::vector<double>& taus, std::uint64_t seed = 1) {
  return TestFamily::indicators(taus)
      .merged(TestFamily::power_profiles({0.1, 0.25, 0.4, 0.5}))
      .merged(TestFamily::random(seed, 8, 8))
      .with(constant(1.0), "constant");
}

}  // namespace peetre
