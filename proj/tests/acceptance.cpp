// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "instances.hpp"
#include "oracles.hpp"
#include "peetre.hpp"

using namespace peetre;
using peetre::testing::random_instance;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      note = what;
    }
  }
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

int failures = 0;

void run(int id, const std::string& title, double limit_seconds, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.ok = false;
    o.note = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (o.ok && secs > limit_seconds) {
    o.ok = false;
    o.note = "runtime " + fmt(secs) + " s over limit " + fmt(limit_seconds) + " s";
  }
  if (!o.ok) ++failures;
  std::printf("%s [%d] %s (%.2f s / %.0f s)%s%s\n", o.ok ? "PASS" : "FAIL", id, title.c_str(), secs, limit_seconds,
              o.note.empty() ? "" : ": ", o.note.c_str());
  std::fflush(stdout);
}

/// lhs <= rhs up to rel * max(1, |rhs|).
bool le(double lhs, double rhs, double rel) { return lhs <= rhs + rel * std::max(1.0, std::abs(rhs)); }

Outcome rearrangement() {
  Outcome o;
  for (std::uint64_t s = 0; s < 10000 && o.ok; ++s) {
    std::mt19937_64 rng(s);
    const auto f = random_step(rng(), 1 + rng() % 16, 4.0);
    const auto fs = rearrange(f);
    const auto ref = oracle::sorted_cells(f);
    for (std::size_t i = 1; i < fs.cells(); ++i) o.require(fs.values()[i - 1] >= fs.values()[i], "not nonincreasing");
    o.require(equimeasurable(f, fs), "not equimeasurable, seed " + std::to_string(s));
    // Merge zeros into the tail the way the oracle does.
    o.require(fs.values() == ref.values, "values differ from sort oracle, seed " + std::to_string(s));
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < ref.measures.size() && o.ok; ++i) {
      acc += ref.measures[i];
      o.require(fs.breakpoints()[i + 1] == acc, "breakpoints differ from sort oracle, seed " + std::to_string(s));
    }
  }
  return o;
}

Outcome axioms() {
  Outcome o;
  for (const auto& E : peetre::testing::acceptance_spaces()) {
    const auto rep = validate_space_axioms(E, 2024, 1000);
    o.require(rep.passed && rep.trials == 1000, E.name() + ": " + rep.detail);
  }
  const auto neg = validate_norm_axioms(
      [](const StepFunction& f) {
        double s = 0.0;
        for (std::size_t i = 0; i < f.cells(); ++i) s += f.measure(i) * f.values()[i];
        return s;
      },
      2024, 1000);
  o.require(!neg.passed && neg.failed_property == "ideal" && neg.witness_f && neg.witness_g,
            "signed sum was not rejected on the ideal property");
  return o;
}

Outcome fundamental() {
  Outcome o;
  for (int i = 1; i <= 50; ++i) {
    const double tau = i / 50.0;
    for (double p : {1.0, 1.5, 2.0, 3.0, 4.0})
      o.require(std::abs(fundamental_function(SpaceSpec::lp(p), tau) - std::pow(tau, 1.0 / p)) <= 1e-12,
                "Lp p=" + fmt(p) + " tau=" + fmt(tau));
    o.require(std::abs(fundamental_function(SpaceSpec::linf(), tau) - 1.0) <= 1e-12, "Linf");
    const double g = fundamental_function(SpaceSpec::orlicz_g(), tau);
    o.require(std::abs(g - oracle::phi_g(tau)) <= 1e-8, "G tau=" + fmt(tau) + " got " + fmt(g));
  }
  return o;
}

Outcome k_oracle() {
  Outcome o;
  std::mt19937_64 rng(404);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const auto in = random_instance(rng, 6);
    const KValue g = k_general(in.f, in.a, in.b, in.E, in.F);
    const KValue or33 = k_exact_oracle(in.f, in.a, in.b, in.E, in.F, 33);
    const double diff = std::abs(g.value - or33.value);
    worst = std::max(worst, diff);
    o.require(diff <= or33.granularity + 1e-3, "instance " + std::to_string(t) + " diff " + fmt(diff));
  }
  for (int t = 0; t < 200; ++t) {
    auto in = random_instance(rng, 16);
    const double ref = oracle::k_l1_linf(in.f, in.a, in.b);
    const double got = k(in.f, in.a, in.b, SpaceSpec::l1(), SpaceSpec::linf()).value;
    o.require(std::abs(got - ref) <= 1e-6 * ref, "(L1,Linf) closed form, instance " + std::to_string(t));
  }
  if (o.ok) o.note = "max |general - oracle| " + fmt(worst);
  return o;
}

Outcome k_structure() {
  Outcome o;
  std::mt19937_64 rng(505);
  std::uniform_real_distribution<double> lam(0.0, 1.0), stretch(1.0, 4.0), c_dist(0.1, 10.0);
  constexpr double tol = 1e-8;
  for (int t = 0; t < 500 && o.ok; ++t) {
    const auto in = random_instance(rng, 8);
    const auto& [f, a, b, E, F] = in;
    const std::string at = " (instance " + std::to_string(t) + ")";
    const KValue k0 = k(f, a, b, E, F);

    const double c = c_dist(rng);
    const KValue kc = k(scale(f, c), a, b, E, F);
    o.require(le(kc.lower, c * k0.upper, tol) && le(c * k0.lower, kc.upper, tol), "homogeneity" + at);

    const double s = stretch(rng);
    const KValue ka = k(f, a * s, b, E, F), kb = k(f, a, b * s, E, F);
    o.require(le(k0.lower, ka.upper, tol) && le(k0.lower, kb.upper, tol), "monotonicity" + at);

    const double a2 = a * stretch(rng), b2 = b / stretch(rng), l = lam(rng);
    const KValue k2 = k(f, a2, b2, E, F);
    const KValue km = k(f, l * a + (1 - l) * a2, l * b + (1 - l) * b2, E, F);
    o.require(le(l * k0.lower + (1 - l) * k2.lower, km.upper, tol), "concavity" + at);

    const KValue k11 = k(f, 1.0, 1.0, E, F);
    o.require(le(k0.lower, std::max(a, b) * k11.upper, tol), "max(a,b) k(f;1,1) >= k(f;a,b)" + at);
    o.require(le(k0.lower / a, norm(E, f), tol), "k(f;a,b)/a <= ||f||_E" + at);
  }
  return o;
}

Outcome peetre_norms() {
  Outcome o;
  const auto weights = WeightScheme::geometric(1.0, 2.0, 1.0, 0.5);
  const std::vector<PeetreSpec> specs{
      PeetreSpec(SpaceSpec::l1(), SpaceSpec::linf(), SequenceSpaceSpec::lp(2.0), weights),
      PeetreSpec(SpaceSpec::l2(), SpaceSpec::orlicz_g(), SequenceSpaceSpec::lp(2.0), weights),
      PeetreSpec(SpaceSpec::orlicz_g(), SpaceSpec::lorentz_power(0.5), SequenceSpaceSpec::lp(1.0), weights),
      PeetreSpec(SpaceSpec::l1(), SpaceSpec::l2(), SequenceSpaceSpec::sup(), WeightScheme::geometric(0.5, 1.5, 2.0, 0.7)),
  };
  for (const auto& spec : specs) {
    o.require(peetre_norm(constant(1.0), spec, 1e-9).value == 1.0, "normalization");
    const auto& nz = spec.normalizer();
    o.require(nz.hi - nz.lo <= 1e-9 * nz.lo, "normalizer bracket too wide");
  }
  std::mt19937_64 rng(606);
  for (int t = 0; t < 100 && o.ok; ++t) {
    const auto& spec = specs[t % specs.size()];
    const std::string at = " (pair " + std::to_string(t) + ", " + spec.E().name() + "/" + spec.F().name() + ")";
    const auto f = random_step(rng(), 1 + rng() % 6, 2.0);
    const auto g = random_step(rng(), 1 + rng() % 6, 2.0);

    PeetreBracket prev;
    for (std::size_t N : {4u, 8u, 16u, 32u}) {
      const auto br = peetre_norm_unnormalized(f, spec, N);
      o.require(br.lo <= br.hi, "bracket inverted" + at);
      if (N > 4) o.require(br.lo >= prev.lo * (1 - 1e-12) && br.hi <= prev.hi * (1 + 1e-12), "nesting" + at);
      if (N > 4) o.require(br.head - prev.head <= prev.tail_bound * (1 + 1e-12) + 1e-300, "tail bound T_N" + at);
      prev = br;
    }

    const auto nf = peetre_norm(f, spec, 1e-6), ng = peetre_norm(g, spec, 1e-6);
    const auto ns = peetre_norm(add(f, g), spec, 1e-6);
    o.require(le(ns.lower, nf.upper + ng.upper, 1e-9), "triangle" + at);
    const auto nr = peetre_norm(rearrange(f), spec, 1e-6);
    o.require(le(nr.lower, nf.upper, 1e-9) && le(nf.lower, nr.upper, 1e-9), "rearrangement" + at);
  }
  return o;
}

Outcome inclusion() {
  Outcome o;
  std::vector<double> taus;
  for (int k = 0; k <= 20; ++k) taus.push_back(std::ldexp(1.0, -k));
  const auto B = default_family(taus);
  for (double tau : taus) {
    o.require(std::abs(s_tau(SpaceSpec::l1(), SpaceSpec::linf(), tau, B) - tau) <= 1e-9, "(L1,Linf) tau=" + fmt(tau));
    o.require(std::abs(s_tau(SpaceSpec::l1(), SpaceSpec::l2(), tau, B) - std::sqrt(tau)) <= 1e-9,
              "(L1,L2) tau=" + fmt(tau));
  }
  std::mt19937_64 rng(707);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::size_t checked = 0;
  for (const auto& E : peetre::testing::acceptance_spaces()) {
    for (std::size_t n : {1u, 2u, 4u, 8u}) {
      for (int t = 0; t < 25; ++t) {
        std::vector<double> v(n);
        for (double& x : v) x = u(rng);
        const auto f = oracle::dyadic(v);
        for (std::size_t q = 0; q <= n; ++q) {
          const double tau = static_cast<double>(q) / static_cast<double>(n);
          const double ref = oracle::worst_set_eta(E, f, tau);
          const double got = eta_point(E, f, tau);
          // Same set, summed in a different cell order.
          const double ulps = 4 * std::numeric_limits<double>::epsilon() * std::max(ref, 1e-300);
          o.require(std::abs(got - ref) <= ulps, "eta_point " + E.name() + " tau=" + fmt(tau) + ": " + fmt(got) + " vs " + fmt(ref));
          ++checked;
        }
      }
    }
  }
  if (o.ok) o.note = std::to_string(checked) + " worst-set comparisons";
  return o;
}

Outcome head_tail() {
  Outcome o;
  const PeetreSpec spec(SpaceSpec::l1(), SpaceSpec::linf(), SequenceSpaceSpec::lp(2.0),
                        WeightScheme::geometric(1.0, 2.0, 1.0, 0.5));
  const std::size_t j = head_index(0.1, 3, spec.weights());
  o.require(j == 9, "j = " + std::to_string(j));
  const auto r = run_head_tail(spec, 0.1, 3, indicator(0.0, spec.weights().b(j) / spec.weights().a(j)));
  o.require(r.hypotheses_met, r.failing_inequality);
  o.require(std::abs(r.f_K_norm - 1.0) <= 1e-9, "f not at unit K-norm");
  o.require(r.head_norm <= 0.1, "head " + fmt(r.head_norm));
  o.require(r.combined_norm <= 0.2, "combined " + fmt(r.combined_norm));
  o.require(r.f_E_norm <= 2.0 / 512 + 1e-6, "||f||_E " + fmt(r.f_E_norm));
  if (o.ok)
    o.note = "head " + fmt(r.head_norm) + ", combined " + fmt(r.combined_norm) + ", ||f||_E " + fmt(r.f_E_norm);
  return o;
}

Outcome blocks() {
  Outcome o;
  const Config c = load_config(PEETRE_SOURCE_DIR "/configs/blocks.json");
  const PeetreSpec spec(*c.E, *c.F, *c.W, *c.weights);
  const auto family = geometric_disjoint_family(c.experiment.family_count, c.experiment.family_decay);
  const auto sel = select_subsequence(family, spec, c.experiment.eps, 6);
  o.require(sel.indices.size() == 6 && !sel.partial, "selected " + std::to_string(sel.indices.size()) + " functions");
  if (!o.ok) return o;
  const auto r1 = run_block_equivalence(family, sel.indices, spec, c.experiment.eps, 64, c.experiment.seed);
  const auto r2 = run_block_equivalence(family, sel.indices, spec, c.experiment.eps, 64, c.experiment.seed);
  o.require(r1.ratios == r2.ratios && r1.min_ratio == r2.min_ratio && r1.max_ratio == r2.max_ratio,
            "rerun not bit-identical");
  o.require(r1.ratios.size() == 64, "sample count");
  for (double r : r1.ratios) o.require(std::isfinite(r) && r > 0.0, "non-finite ratio");
  o.require(std::isfinite(r1.max_ratio / r1.min_ratio), "max/min not finite");

  const std::string csv = to_csv(build_table("blocks", c));
  o.require(csv == to_csv(build_table("blocks", c)), "CSV not reproducible");
  std::stringstream ss(csv);
  std::string line;
  std::getline(ss, line);
  o.require(line == "sample,ratio", "header '" + line + "'");
  std::size_t rows = 0;
  while (std::getline(ss, line)) {
    const auto comma = line.find(',');
    o.require(comma != std::string::npos && line.find(',', comma + 1) == std::string::npos, "row shape: " + line);
    if (!o.ok) break;
    std::size_t used = 0;
    o.require(std::stoll(line.substr(0, comma)) == static_cast<long long>(rows), "sample column");
    const double ratio = std::stod(line.substr(comma + 1), &used);
    o.require(used == line.size() - comma - 1 && ratio == r1.ratios[rows], "ratio column: " + line);
    ++rows;
  }
  o.require(rows == 64, "row count " + std::to_string(rows));
  if (o.ok) o.note = "max/min = " + fmt(r1.max_ratio / r1.min_ratio);
  return o;
}

}  // namespace

int main() {
  run(1, "rearrangement matches sort oracle on 10000 functions", 5, rearrangement);
  run(2, "space axioms, 1000 trials each, negative control rejected", 30, axioms);
  run(3, "fundamental functions in closed form", 5, fundamental);
  run(4, "K-functional against grid oracle and (L1,Linf) closed form", 120, k_oracle);
  run(5, "K-functional structure on 500 instances", 120, k_structure);
  run(6, "Peetre norm normalization, nesting, tail bound, triangle, rearrangement", 300, peetre_norms);
  run(7, "inclusion moduli closed forms and worst-set oracle", 10, inclusion);
  run(8, "head and tail cutting at j = 9", 60, head_tail);
  run(9, "block ratios for 6 selected functions, 64 samples", 300, blocks);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
