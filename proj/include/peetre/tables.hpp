#pragma once

// Table builders behind the CLI subcommands, and CSV / JSON serialization.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "peetre/config.hpp"
#include "peetre/experiments.hpp"
#include "peetre/inclusion.hpp"
#include "peetre/k_functional.hpp"
#include "peetre/peetre_space.hpp"
#include "peetre/symmetric_space.hpp"

namespace peetre {

using Cell = std::variant<double, std::int64_t, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

enum class Format { Csv, Json };

inline Format parse_format(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw std::invalid_argument("unknown format '" + s + "' (expected csv or json)");
}

/// 17 significant digits: enough to round-trip any double.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline std::string csv_field(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else {
          if (v.find_first_of(",\"\n") == std::string::npos) return v;
          std::string q = "\"";
          for (char ch : v) {
            if (ch == '"') q += '"';
            q += ch;
          }
          return q + "\"";
        }
      },
      c);
}

}  // namespace detail

inline std::string to_csv(const Table& t) {
  std::ostringstream os;
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << detail::csv_field(row[i]);
    os << "\n";
  }
  return os.str();
}

inline std::string to_json(const Table& t) {
  nlohmann::ordered_json j;
  j["columns"] = t.columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r;
    for (std::size_t i = 0; i < row.size(); ++i)
      std::visit([&](const auto& v) { r[t.columns[i]] = v; }, row[i]);
    j["rows"].push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

inline std::string serialize(const Table& t, Format f) { return f == Format::Csv ? to_csv(t) : to_json(t); }

/// Command-line overrides of config values.
struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
};

namespace detail {

template <class T>
const T& require(const std::optional<T>& v, const std::string& field, const std::string& what) {
  if (!v) throw ConfigError(field, "required by '" + what + "'");
  return *v;
}

inline std::vector<double> default_tau_grid() {
  std::vector<double> g;
  for (int k = 0; k <= 20; ++k) g.push_back(std::ldexp(1.0, -k));
  return g;
}

inline PeetreSpec make_peetre(const Config& c, const std::string& what) {
  PeetreOptions opt;
  opt.solver.iterations = c.experiment.iterations;
  return guarded("spaces", [&] {
    return PeetreSpec(require(c.E, "spaces.E", what), require(c.F, "spaces.F", what), require(c.W, "W", what),
                      require(c.weights, "weights", what), opt);
  });
}

inline std::int64_t as_int(std::size_t n) { return static_cast<std::int64_t>(n); }

}  // namespace detail

inline Table build_table(const std::string& what, const Config& c, const RunOptions& ro = {}) {
  using detail::as_int;
  using detail::require;
  const ExperimentParams& ex = c.experiment;
  const std::uint64_t seed = ro.seed.value_or(ex.seed);
  const double tol = ro.tol.value_or(ex.tol);
  const std::vector<double> taus = c.tau_grid.empty() ? detail::default_tau_grid() : c.tau_grid;
  Table t;

  if (what == "norm") {
    const auto& f = require(c.function, "function", what);
    t.columns = {"space", "value"};
    t.rows.push_back({require(c.E, "spaces.E", what).name(), norm(*c.E, f)});
    if (c.F) t.rows.push_back({c.F->name(), norm(*c.F, f)});
  } else if (what == "kfun") {
    const auto& f = require(c.function, "function", what);
    KSolverOptions opt;
    opt.iterations = ex.iterations;
    const KValue kv = detail::guarded("experiment", [&] {
      return k(f, ex.a, ex.b, require(c.E, "spaces.E", what), require(c.F, "spaces.F", what), opt);
    });
    t.columns = {"a", "b", "value", "lower", "upper", "method"};
    t.rows.push_back({ex.a, ex.b, kv.value, kv.lower, kv.upper, std::string(to_string(kv.method))});
  } else if (what == "peetre-norm") {
    const auto& f = require(c.function, "function", what);
    const PeetreSpec spec = detail::make_peetre(c, what);
    t.columns = {"value", "lower", "upper", "N", "converged"};
    if (ex.N > 0) {
      const PeetreBracket br = peetre_norm_unnormalized(f, spec, ex.N);
      const auto& nz = spec.normalizer();
      t.rows.push_back({0.5 * (br.lo + br.hi) / spec.normalizer_value(), br.lo / nz.hi, br.hi / nz.lo, as_int(ex.N),
                        (br.hi - br.lo) <= tol * br.lo});
    } else {
      const KEvaluation ev = peetre_norm(f, spec, tol);
      t.rows.push_back({ev.value, ev.lower, ev.upper, as_int(ev.N), ev.converged});
    }
  } else if (what == "fundamental") {
    const auto& E = require(c.E, "spaces.E", what);
    t.columns = {"tau", "phi"};
    for (double tau : taus) t.rows.push_back({tau, fundamental_function(E, tau)});
  } else if (what == "eta") {
    const auto& E = require(c.E, "spaces.E", what);
    const auto& f = require(c.function, "function", what);
    t.columns = {"tau", "eta"};
    for (double tau : taus) t.rows.push_back({tau, eta_point(E, f, tau)});
  } else if (what == "s-profile") {
    const auto& E = require(c.E, "spaces.E", what);
    const auto& F = require(c.F, "spaces.F", what);
    std::vector<double> grid = taus;
    std::sort(grid.begin(), grid.end(), std::greater<>());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    const InclusionProfile p = inclusion_profile(E, F, grid, default_family(grid, seed), ex.threshold);
    t.columns = {"tau", "s"};
    for (std::size_t i = 0; i < p.tau.size(); ++i) t.rows.push_back({p.tau[i], p.s[i]});
  } else if (what == "head-tail") {
    const PeetreSpec spec = detail::make_peetre(c, what);
    StepFunction f;
    if (c.function) {
      f = *c.function;
    } else {
      const std::size_t j = head_index(ex.eps0, ex.n0, spec.weights());
      f = indicator(0.0, spec.weights().b(j) / spec.weights().a(j));
    }
    const HeadTailReport r = run_head_tail(spec, ex.eps0, ex.n0, f, tol);
    t.columns = {"field", "value"};
    t.rows = {
        {std::string("eps0"), r.eps0},
        {std::string("n0"), as_int(r.n0)},
        {std::string("j"), as_int(r.j)},
        {std::string("delta"), r.delta},
        {std::string("support"), r.support},
        {std::string("s_support"), r.s_support},
        {std::string("f_K_norm"), r.f_K_norm},
        {std::string("f_E_norm"), r.f_E_norm},
        {std::string("f_E_bound"), r.f_E_bound},
        {std::string("head_norm"), r.head_norm},
        {std::string("head_bound"), r.head_bound},
        {std::string("N"), as_int(r.N)},
        {std::string("tail_norm"), r.tail_norm},
        {std::string("combined_norm"), r.combined_norm},
        {std::string("hypotheses_met"), r.hypotheses_met},
        {std::string("failing_inequality"), r.failing_inequality},
        {std::string("head_ok"), r.head_ok},
        {std::string("combined_ok"), r.combined_ok},
        {std::string("f_E_ok"), r.f_E_ok},
    };
  } else if (what == "blocks") {
    const PeetreSpec spec = detail::make_peetre(c, what);
    const auto family = detail::guarded(
        "experiment", [&] { return geometric_disjoint_family(ex.family_count, ex.family_decay); });
    const Subsequence sel = select_subsequence(family, spec, ex.eps, ex.select);
    if (sel.indices.empty()) throw ConfigError("experiment", "no family member satisfies the selection criterion");
    const BlockEquivalenceReport rep = run_block_equivalence(family, sel.indices, spec, ex.eps, ex.samples, seed, tol);
    t.columns = {"sample", "ratio"};
    for (std::size_t s = 0; s < rep.ratios.size(); ++s) t.rows.push_back({as_int(s), rep.ratios[s]});
  } else {
    throw std::invalid_argument("unknown table '" + what + "'");
  }
  return t;
}

/// Builds the table and writes `<out_dir>/<what>.<csv|json>`; returns the path.
inline std::filesystem::path emit_tables(const std::string& what, const Config& c, const std::filesystem::path& out_dir,
                                         Format fmt, const RunOptions& ro = {}) {
  const Table t = build_table(what, c, ro);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  const auto path = out_dir / (what + (fmt == Format::Csv ? ".csv" : ".json"));
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << serialize(t, fmt);
  if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
  return path;
}

}  // namespace peetre
