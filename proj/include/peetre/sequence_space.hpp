#pragma once

// Coefficient spaces W with a 1-unconditional, coordinatewise monotone norm,
// and closed-form weight sequences (a_i), (b_i), indexed from 1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace peetre {

/// l_p, sup-norm, or weighted l_p with weights gamma^i:
/// ||c|| = (sum_i gamma^i |c_i|^p)^(1/p).
class SequenceSpaceSpec {
 public:
  enum class Kind { Lp, Sup, WeightedLp };

  static SequenceSpaceSpec lp(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("W: l_p needs finite p >= 1");
    return SequenceSpaceSpec(Kind::Lp, p, 1.0);
  }
  static SequenceSpaceSpec sup() { return SequenceSpaceSpec(Kind::Sup, 0.0, 1.0); }
  static SequenceSpaceSpec weighted_lp(double p, double gamma) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("W: weighted l_p needs finite p >= 1");
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw std::invalid_argument("W: weight ratio gamma must be positive");
    return SequenceSpaceSpec(Kind::WeightedLp, p, gamma);
  }

  Kind kind() const { return kind_; }
  double p() const { return p_; }
  double gamma() const { return gamma_; }

  /// Weight of coordinate i (1-based) in the p-th power sum.
  double coordinate_weight(std::size_t i) const {
    return kind_ == Kind::WeightedLp ? std::pow(gamma_, static_cast<double>(i)) : 1.0;
  }

  std::string name() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
      case Kind::Lp: os << "l" << p_; break;
      case Kind::Sup: os << "sup"; break;
      case Kind::WeightedLp: os << "l" << p_ << "(gamma=" << gamma_ << ")"; break;
    }
    return os.str();
  }

 private:
  SequenceSpaceSpec(Kind k, double p, double gamma) : kind_(k), p_(p), gamma_(gamma) {}
  Kind kind_;
  double p_;
  double gamma_;
};

/// ||(c_1, ..., c_n, tail...)||_W where the tail coordinates contribute a
/// precomputed W-norm `tail_norm` (coordinates disjoint from the head).
inline double w_norm(const SequenceSpaceSpec& W, std::span<const double> coeffs, double tail_norm = 0.0) {
  if (W.kind() == SequenceSpaceSpec::Kind::Sup) {
    double s = tail_norm;
    for (double c : coeffs) s = std::max(s, std::abs(c));
    return s;
  }
  const double p = W.p();
  double big = tail_norm;
  for (double c : coeffs) big = std::max(big, std::abs(c));
  if (big == 0.0) return 0.0;
  double s = std::pow(tail_norm / big, p);
  for (std::size_t i = 0; i < coeffs.size(); ++i)
    s += W.coordinate_weight(i + 1) * std::pow(std::abs(coeffs[i]) / big, p);
  return big * std::pow(s, 1.0 / p);
}

/// (a_i) nondecreasing to infinity and (b_i) nonincreasing summable, given by
/// an explicit finite prefix followed by geometric continuation:
/// for i > P, a_i = a_P rho^(i-P) and b_i = b_P sigma^(i-P).
/// The pure geometric family a_i = a0 rho^i, b_i = b0 sigma^i is P = 0 with
/// a_0 = a0, b_0 = b0.
class WeightScheme {
 public:
  static WeightScheme geometric(double a0, double rho, double b0, double sigma) {
    return WeightScheme({}, {}, a0, rho, b0, sigma);
  }

  static WeightScheme prefix_geometric(std::vector<double> a_prefix, std::vector<double> b_prefix, double rho,
                                       double sigma) {
    if (a_prefix.empty() || a_prefix.size() != b_prefix.size())
      throw std::invalid_argument("WeightScheme: prefixes must be nonempty and of equal length");
    const double a_last = a_prefix.back(), b_last = b_prefix.back();
    return WeightScheme(std::move(a_prefix), std::move(b_prefix), a_last, rho, b_last, sigma);
  }

  std::size_t prefix_length() const { return a_prefix_.size(); }
  double rho() const { return rho_; }
  double sigma() const { return sigma_; }

  /// a_i, i >= 1.
  double a(std::size_t i) const {
    check_index(i);
    const std::size_t P = prefix_length();
    if (i <= P) return a_prefix_[i - 1];
    return a_base_ * std::pow(rho_, static_cast<double>(i - P));
  }

  double b(std::size_t i) const {
    check_index(i);
    const std::size_t P = prefix_length();
    if (i <= P) return b_prefix_[i - 1];
    return b_base_ * std::pow(sigma_, static_cast<double>(i - P));
  }

  /// A_n = a_1 + ... + a_n.
  double partial_sum_a(std::size_t n) const {
    double s = 0.0;
    const std::size_t P = prefix_length();
    for (std::size_t i = 1; i <= std::min(n, P); ++i) s += a(i);
    if (n > P) {
      // a_base (rho + ... + rho^(n-P))
      const double k = static_cast<double>(n - P);
      s += a_base_ * rho_ * (std::pow(rho_, k) - 1.0) / (rho_ - 1.0);
    }
    return s;
  }

  /// W-norm of the tail (b_i)_{i > N}, in closed form.
  double tail_norm(const SequenceSpaceSpec& W, std::size_t N) const {
    const std::size_t P = prefix_length();
    std::vector<double> explicit_part;
    for (std::size_t i = N + 1; i <= P; ++i) explicit_part.push_back(b(i));
    const std::size_t first_geo = std::max(N, P) + 1;  // first geometric index
    const double b_first = b(first_geo);
    const double k = static_cast<double>(first_geo);

    double geo;  // W-norm of (b_i)_{i >= first_geo}, restricted to those coordinates
    switch (W.kind()) {
      case SequenceSpaceSpec::Kind::Sup: geo = b_first; break;
      case SequenceSpaceSpec::Kind::Lp:
        geo = b_first / std::pow(1.0 - std::pow(sigma_, W.p()), 1.0 / W.p());
        break;
      case SequenceSpaceSpec::Kind::WeightedLp: {
        const double r = W.gamma() * std::pow(sigma_, W.p());
        if (!(r < 1.0)) return std::numeric_limits<double>::infinity();
        geo = b_first * std::pow(W.gamma(), k / W.p()) / std::pow(1.0 - r, 1.0 / W.p());
        break;
      }
      default: geo = 0.0;
    }
    if (explicit_part.empty()) return geo;
    // Explicit coordinates N+1..P sit before the geometric part.
    if (W.kind() == SequenceSpaceSpec::Kind::Sup) {
      double s = geo;
      for (double c : explicit_part) s = std::max(s, c);
      return s;
    }
    double s = std::pow(geo, W.p());
    for (std::size_t t = 0; t < explicit_part.size(); ++t)
      s += W.coordinate_weight(N + 1 + t) * std::pow(explicit_part[t], W.p());
    return std::pow(s, 1.0 / W.p());
  }

 private:
  WeightScheme(std::vector<double> a_prefix, std::vector<double> b_prefix, double a_base, double rho, double b_base,
               double sigma)
      : a_prefix_(std::move(a_prefix)),
        b_prefix_(std::move(b_prefix)),
        a_base_(a_base),
        rho_(rho),
        b_base_(b_base),
        sigma_(sigma) {
    if (!(a_base_ > 0.0) || !(b_base_ > 0.0)) throw std::invalid_argument("WeightScheme: a and b must be positive");
    if (!(rho_ > 1.0) || !std::isfinite(rho_)) throw std::invalid_argument("WeightScheme: rho must exceed 1 (a_i -> infinity)");
    if (!(sigma_ > 0.0 && sigma_ < 1.0)) throw std::invalid_argument("WeightScheme: sigma must lie in (0,1) (sum b_i < infinity)");
    for (std::size_t i = 0; i < a_prefix_.size(); ++i) {
      if (!(a_prefix_[i] > 0.0) || !(b_prefix_[i] > 0.0))
        throw std::invalid_argument("WeightScheme: prefix entries must be positive");
      if (i > 0 && a_prefix_[i] < a_prefix_[i - 1]) throw std::invalid_argument("WeightScheme: (a_i) must be nondecreasing");
      if (i > 0 && b_prefix_[i] > b_prefix_[i - 1]) throw std::invalid_argument("WeightScheme: (b_i) must be nonincreasing");
    }
  }

  static void check_index(std::size_t i) {
    if (i == 0) throw std::out_of_range("WeightScheme: indices start at 1");
  }

  std::vector<double> a_prefix_, b_prefix_;
  double a_base_, rho_, b_base_, sigma_;
};

}  // namespace peetre
