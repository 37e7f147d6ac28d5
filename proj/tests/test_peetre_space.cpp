#include <gtest/gtest.h>

#include <random>

#include "instances.hpp"
#include "oracles.hpp"
#include "peetre/peetre_space.hpp"

using namespace peetre;

namespace {

// a_i = 2^i, b_i = 2^-i.
WeightScheme dyadic_weights() { return WeightScheme::geometric(1.0, 2.0, 1.0, 0.5); }

PeetreSpec l1_linf_l2() {
  return PeetreSpec(SpaceSpec::l1(), SpaceSpec::linf(), SequenceSpaceSpec::lp(2.0), dyadic_weights());
}

double brute_tail(const WeightScheme& w, const SequenceSpaceSpec& W, std::size_t N) {
  std::vector<double> c;
  for (std::size_t i = 1; i <= N + 1500; ++i) c.push_back(i <= N ? 0.0 : w.b(i));
  return w_norm(W, c);
}

}  // namespace

TEST(WNorm, Examples) {
  const std::vector<double> c{3.0, 4.0};
  EXPECT_DOUBLE_EQ(w_norm(SequenceSpaceSpec::lp(2.0), c), 5.0);
  EXPECT_DOUBLE_EQ(w_norm(SequenceSpaceSpec::lp(1.0), c), 7.0);
  EXPECT_DOUBLE_EQ(w_norm(SequenceSpaceSpec::sup(), c), 4.0);
  EXPECT_DOUBLE_EQ(w_norm(SequenceSpaceSpec::weighted_lp(1.0, 2.0), std::vector<double>{1.0, 1.0}), 6.0);
  EXPECT_DOUBLE_EQ(w_norm(SequenceSpaceSpec::lp(2.0), std::vector<double>{3.0}, 4.0), 5.0);
  EXPECT_EQ(w_norm(SequenceSpaceSpec::lp(2.0), std::vector<double>{0.0, 0.0}), 0.0);
  EXPECT_DOUBLE_EQ(w_norm(SequenceSpaceSpec::lp(2.0), std::vector<double>{1e200, 1e200}), std::sqrt(2.0) * 1e200);
}

TEST(Weights, GeometricValuesAndSums) {
  const auto w = dyadic_weights();
  EXPECT_EQ(w.a(1), 2.0);
  EXPECT_EQ(w.a(10), 1024.0);
  EXPECT_EQ(w.b(3), 0.125);
  EXPECT_DOUBLE_EQ(w.partial_sum_a(3), 14.0);
  const auto p = WeightScheme::prefix_geometric({1.0, 1.0, 3.0}, {1.0, 0.5, 0.5}, 2.0, 0.25);
  EXPECT_EQ(p.a(2), 1.0);
  EXPECT_EQ(p.a(4), 6.0);
  EXPECT_EQ(p.b(5), 0.5 / 16);
  EXPECT_DOUBLE_EQ(p.partial_sum_a(5), 1 + 1 + 3 + 6 + 12);
}

TEST(Weights, TailNormMatchesDirectSum) {
  const auto g = dyadic_weights();
  const auto p = WeightScheme::prefix_geometric({1.0, 2.0, 4.0, 4.0}, {0.9, 0.7, 0.7, 0.2}, 1.5, 0.8);
  for (const auto& W : {SequenceSpaceSpec::lp(1.0), SequenceSpaceSpec::lp(2.0), SequenceSpaceSpec::lp(3.0),
                        SequenceSpaceSpec::sup(), SequenceSpaceSpec::weighted_lp(2.0, 1.5)}) {
    for (std::size_t N : {0u, 1u, 2u, 3u, 5u, 9u}) {
      EXPECT_NEAR(g.tail_norm(W, N), brute_tail(g, W, N), 1e-13 * brute_tail(g, W, N)) << W.name() << " N=" << N;
      EXPECT_NEAR(p.tail_norm(W, N), brute_tail(p, W, N), 1e-12 * brute_tail(p, W, N)) << W.name() << " N=" << N;
    }
  }
}

TEST(Weights, Validation) {
  EXPECT_THROW(WeightScheme::geometric(1.0, 1.0, 1.0, 0.5), std::invalid_argument);
  EXPECT_THROW(WeightScheme::geometric(1.0, 2.0, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(WeightScheme::geometric(0.0, 2.0, 1.0, 0.5), std::invalid_argument);
  EXPECT_THROW(WeightScheme::prefix_geometric({2.0, 1.0}, {1.0, 1.0}, 2.0, 0.5), std::invalid_argument);
  EXPECT_THROW(WeightScheme::prefix_geometric({1.0, 2.0}, {1.0, 2.0}, 2.0, 0.5), std::invalid_argument);
  EXPECT_THROW(WeightScheme::prefix_geometric({1.0}, {}, 2.0, 0.5), std::invalid_argument);
  EXPECT_THROW(dyadic_weights().a(0), std::out_of_range);
  // gamma sigma^p = 4 * 0.25 = 1: (b_i) is not in W.
  EXPECT_THROW(PeetreSpec(SpaceSpec::l1(), SpaceSpec::linf(), SequenceSpaceSpec::weighted_lp(2.0, 4.0), dyadic_weights()),
               std::invalid_argument);
}

TEST(Indices, HeadIndexExample) {
  // A_3 = 14, least j with 28 / 2^j < 0.1 is 9.
  EXPECT_EQ(head_index(0.1, 3, dyadic_weights()), 9u);
  EXPECT_EQ(head_index(1e3, 1, dyadic_weights()), 1u);
  EXPECT_THROW(head_index(0.0, 3, dyadic_weights()), std::invalid_argument);
  EXPECT_THROW(head_index(0.1, 0, dyadic_weights()), std::invalid_argument);
}

TEST(Indices, TailIndexExample) {
  const PeetreSpec spec(SpaceSpec::l1(), SpaceSpec::linf(), SequenceSpaceSpec::lp(1.0), dyadic_weights());
  EXPECT_EQ(tail_index(std::ldexp(1.0, -10), 1.0, spec), 10u);
  EXPECT_EQ(tail_index(0.1, 0.0, spec), 1u);
  EXPECT_EQ(tail_index(std::ldexp(1.0, -10), 4.0, spec), 12u);
}

TEST(PeetreNorm, NormalizerClosedForm) {
  // K(chi, 2^i, 2^-i) = 2^-i for every symmetric couple, so U(chi) = ||(2^-i)||_2 = 3^{-1/2}.
  const auto spec = l1_linf_l2();
  EXPECT_NEAR(spec.normalizer().lo, 1 / std::sqrt(3.0), 1e-9);
  EXPECT_NEAR(spec.normalizer().hi, 1 / std::sqrt(3.0), 1e-9);
  const PeetreSpec g(SpaceSpec::l2(), SpaceSpec::orlicz_g(), SequenceSpaceSpec::lp(2.0), dyadic_weights());
  EXPECT_NEAR(g.normalizer_value(), 1 / std::sqrt(3.0), 1e-9);
}

TEST(PeetreNorm, ConstantsNormalizeExactly) {
  const auto spec = l1_linf_l2();
  EXPECT_EQ(peetre_norm(constant(1.0), spec, 1e-9).value, 1.0);
  EXPECT_EQ(peetre_norm(constant(-2.5), spec, 1e-9).value, 2.5);
  EXPECT_EQ(peetre_norm(StepFunction(), spec, 1e-9).value, 0.0);
  // Same function through the bracket path.
  const auto br = peetre_norm_unnormalized(constant(1.0), spec, 64);
  EXPECT_NEAR(br.lo / spec.normalizer().hi, 1.0, 1e-9);
  EXPECT_NEAR(br.hi / spec.normalizer().lo, 1.0, 1e-9);
}

TEST(PeetreNorm, BracketsNest) {
  const auto spec = l1_linf_l2();
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto f = random_step(s, 1 + s % 8, 2.0);
    PeetreBracket prev;
    for (std::size_t N : {4u, 8u, 16u, 32u}) {
      const auto br = peetre_norm_unnormalized(f, spec, N);
      EXPECT_LE(br.lo, br.hi);
      EXPECT_LE(br.head, br.hi);
      if (N > 4) {
        EXPECT_GE(br.lo, prev.lo * (1 - 1e-12));
        EXPECT_LE(br.hi, prev.hi * (1 + 1e-12));
      }
      prev = br;
    }
  }
}

TEST(PeetreNorm, L1LinfMatchesClosedFormSequence) {
  const auto spec = l1_linf_l2();
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto f = random_step(100 + s, 1 + s % 6, 3.0);
    double acc = 0.0;
    for (std::size_t i = 1; i <= 80; ++i) acc += std::pow(oracle::k_l1_linf(f, std::ldexp(1.0, int(i)), std::ldexp(1.0, -int(i))), 2);
    const double ref = std::sqrt(acc) * std::sqrt(3.0);
    const auto ev = peetre_norm(f, spec, 1e-9);
    EXPECT_TRUE(ev.converged);
    EXPECT_NEAR(ev.value, ref, 1e-8 * ref);
    EXPECT_LE(ev.lower, ref * (1 + 1e-12));
    EXPECT_GE(ev.upper, ref * (1 - 1e-12));
  }
}

TEST(PeetreNorm, NormProperties) {
  std::mt19937_64 rng(41);
  const PeetreSpec spec(SpaceSpec::l2(), SpaceSpec::orlicz_g(), SequenceSpaceSpec::lp(2.0), dyadic_weights());
  for (int t = 0; t < 8; ++t) {
    const auto f = random_step(rng(), 4, 1.0);
    const auto g = random_step(rng(), 3, 1.0);
    const auto nf = peetre_norm(f, spec, 1e-6);
    const auto ng = peetre_norm(g, spec, 1e-6);
    const auto nsum = peetre_norm(add(f, g), spec, 1e-6);
    EXPECT_LE(nsum.lower, nf.upper + ng.upper);
    const auto n2 = peetre_norm(scale(f, -3.0), spec, 1e-6);
    EXPECT_LE(n2.lower, 3 * nf.upper * (1 + 1e-9));
    EXPECT_GE(n2.upper, 3 * nf.lower * (1 - 1e-9));
    const auto nr = peetre_norm(rearrange(f), spec, 1e-6);
    EXPECT_LE(nr.lower, nf.upper);
    EXPECT_LE(nf.lower, nr.upper);
    const auto nh = peetre_norm(truncate(f, 0.5 * f.max_abs()), spec, 1e-6);
    EXPECT_LE(nh.lower, nf.upper);
  }
}

TEST(PeetreNorm, RejectsBadTol) {
  EXPECT_THROW(peetre_norm(constant(1.0), l1_linf_l2(), 0.0), std::invalid_argument);
  EXPECT_THROW(peetre_norm_unnormalized(constant(1.0), l1_linf_l2(), 0), std::invalid_argument);
}
