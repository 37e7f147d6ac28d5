#pragma once

// JSON experiment configuration. Unknown fields are rejected at every level,
// and every error names the offending field path.

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "peetre/sequence_space.hpp"
#include "peetre/step_function.hpp"
#include "peetre/symmetric_space.hpp"

namespace peetre {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error("config error at '" + field + "': " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ExperimentParams {
  double a = 1.0;
  double b = 1.0;
  double eps0 = 0.1;
  std::size_t n0 = 3;
  double eps = 1.0;
  std::size_t samples = 64;
  std::uint64_t seed = 1;
  std::size_t select = 6;
  std::size_t family_count = 12;
  int family_decay = 5;
  double threshold = 1e-2;
  /// Fixed truncation index for peetre-norm; 0 selects the adaptive schedule.
  std::size_t N = 0;
  std::size_t iterations = 2000;
  double tol = 1e-9;
};

struct Config {
  std::optional<SpaceSpec> E;
  std::optional<SpaceSpec> F;
  std::optional<WeightScheme> weights;
  std::optional<SequenceSpaceSpec> W;
  std::optional<StepFunction> function;
  std::vector<double> tau_grid;
  ExperimentParams experiment;
};

namespace detail {

using nlohmann::json;

inline void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw ConfigError(path.empty() ? key : path + "." + key, "unknown field");
  }
}

template <class T>
T get_field(const json& j, const std::string& key, const std::string& path) {
  const std::string field = path.empty() ? key : path + "." + key;
  if (!j.contains(key)) throw ConfigError(field, "missing required field");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(field, "wrong type");
  }
}

template <class T>
T get_or(const json& j, const std::string& key, const std::string& path, T fallback) {
  return j.contains(key) ? get_field<T>(j, key, path) : fallback;
}

/// Runs a constructor, converting validation failures into field errors.
template <class Fn>
auto guarded(const std::string& path, Fn fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(path, e.what());
  }
}

inline SpaceSpec parse_space(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("type")) throw ConfigError(path + ".type", "missing space tag");
  const auto type = get_field<std::string>(j, "type", path);
  if (type == "Lp") {
    check_keys(j, {"type", "p"}, path);
    return guarded(path, [&] { return SpaceSpec::lp(get_field<double>(j, "p", path)); });
  }
  if (type == "L1") {
    check_keys(j, {"type"}, path);
    return SpaceSpec::l1();
  }
  if (type == "Linf") {
    check_keys(j, {"type"}, path);
    return SpaceSpec::linf();
  }
  if (type == "Orlicz") {
    check_keys(j, {"type", "M", "p"}, path);
    const auto M = get_field<std::string>(j, "M", path);
    if (M == "G") {
      if (j.contains("p")) throw ConfigError(path + ".p", "not used by the G Young function");
      return SpaceSpec::orlicz_g();
    }
    if (M == "power") return guarded(path, [&] { return SpaceSpec::orlicz_power(get_field<double>(j, "p", path)); });
    throw ConfigError(path + ".M", "unknown Young function '" + M + "'");
  }
  if (type == "Lorentz") {
    check_keys(j, {"type", "phi", "alpha"}, path);
    const auto phi = get_field<std::string>(j, "phi", path);
    if (phi == "power")
      return guarded(path, [&] { return SpaceSpec::lorentz_power(get_field<double>(j, "alpha", path)); });
    if (phi == "tlog") {
      if (j.contains("alpha")) throw ConfigError(path + ".alpha", "not used by the t(1-ln t) weight");
      return SpaceSpec::lorentz_tlog();
    }
    throw ConfigError(path + ".phi", "unknown Lorentz weight '" + phi + "'");
  }
  throw ConfigError(path + ".type", "unknown space tag '" + type + "'");
}

inline WeightScheme parse_weights(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("family")) throw ConfigError(path + ".family", "missing weight family tag");
  const auto fam = get_field<std::string>(j, "family", path);
  if (fam == "geometric") {
    check_keys(j, {"family", "a0", "rho", "b0", "sigma"}, path);
    return guarded(path, [&] {
      return WeightScheme::geometric(get_field<double>(j, "a0", path), get_field<double>(j, "rho", path),
                                     get_field<double>(j, "b0", path), get_field<double>(j, "sigma", path));
    });
  }
  if (fam == "prefix_geometric") {
    check_keys(j, {"family", "a_prefix", "b_prefix", "rho", "sigma"}, path);
    return guarded(path, [&] {
      return WeightScheme::prefix_geometric(get_field<std::vector<double>>(j, "a_prefix", path),
                                            get_field<std::vector<double>>(j, "b_prefix", path),
                                            get_field<double>(j, "rho", path), get_field<double>(j, "sigma", path));
    });
  }
  throw ConfigError(path + ".family", "unknown weight family '" + fam + "'");
}

inline SequenceSpaceSpec parse_sequence_space(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("type")) throw ConfigError(path + ".type", "missing sequence space tag");
  const auto type = get_field<std::string>(j, "type", path);
  if (type == "lp") {
    check_keys(j, {"type", "p"}, path);
    return guarded(path, [&] { return SequenceSpaceSpec::lp(get_field<double>(j, "p", path)); });
  }
  if (type == "sup") {
    check_keys(j, {"type"}, path);
    return SequenceSpaceSpec::sup();
  }
  if (type == "weighted_lp") {
    check_keys(j, {"type", "p", "gamma"}, path);
    return guarded(path, [&] {
      return SequenceSpaceSpec::weighted_lp(get_field<double>(j, "p", path), get_field<double>(j, "gamma", path));
    });
  }
  throw ConfigError(path + ".type", "unknown sequence space tag '" + type + "'");
}

inline StepFunction parse_function(const json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  if (!j.contains("generator")) {
    check_keys(j, {"breakpoints", "values"}, path);
    return guarded(path, [&] {
      return make_step(get_field<std::vector<double>>(j, "breakpoints", path),
                       get_field<std::vector<double>>(j, "values", path));
    });
  }
  const auto gen = get_field<std::string>(j, "generator", path);
  if (gen == "random") {
    check_keys(j, {"generator", "seed", "cells", "amplitude"}, path);
    return guarded(path, [&] {
      return random_step(get_field<std::uint64_t>(j, "seed", path), get_field<std::size_t>(j, "cells", path),
                         get_or<double>(j, "amplitude", path, 1.0));
    });
  }
  if (gen == "indicator") {
    check_keys(j, {"generator", "intervals", "scale"}, path);
    return guarded(path, [&] {
      auto ivs = get_field<std::vector<std::pair<double, double>>>(j, "intervals", path);
      return scale(indicator(MeasurableSet(std::move(ivs))), get_or<double>(j, "scale", path, 1.0));
    });
  }
  throw ConfigError(path + ".generator", "unknown generator '" + gen + "'");
}

inline ExperimentParams parse_experiment(const json& j, const std::string& path) {
  check_keys(j,
             {"a", "b", "eps0", "n0", "eps", "samples", "seed", "select", "family_count", "family_decay", "threshold",
              "N", "iterations", "tol"},
             path);
  ExperimentParams e;
  e.a = get_or(j, "a", path, e.a);
  e.b = get_or(j, "b", path, e.b);
  e.eps0 = get_or(j, "eps0", path, e.eps0);
  e.n0 = get_or(j, "n0", path, e.n0);
  e.eps = get_or(j, "eps", path, e.eps);
  e.samples = get_or(j, "samples", path, e.samples);
  e.seed = get_or(j, "seed", path, e.seed);
  e.select = get_or(j, "select", path, e.select);
  e.family_count = get_or(j, "family_count", path, e.family_count);
  e.family_decay = get_or(j, "family_decay", path, e.family_decay);
  e.threshold = get_or(j, "threshold", path, e.threshold);
  e.N = get_or(j, "N", path, e.N);
  e.iterations = get_or(j, "iterations", path, e.iterations);
  e.tol = get_or(j, "tol", path, e.tol);
  return e;
}

}  // namespace detail

inline Config parse_config(const nlohmann::json& j) {
  using detail::check_keys;
  check_keys(j, {"spaces", "weights", "W", "function", "tau_grid", "experiment"}, "");
  Config c;
  if (j.contains("spaces")) {
    const auto& s = j.at("spaces");
    check_keys(s, {"E", "F"}, "spaces");
    if (s.contains("E")) c.E = detail::parse_space(s.at("E"), "spaces.E");
    if (s.contains("F")) c.F = detail::parse_space(s.at("F"), "spaces.F");
  }
  if (j.contains("weights")) c.weights = detail::parse_weights(j.at("weights"), "weights");
  if (j.contains("W")) c.W = detail::parse_sequence_space(j.at("W"), "W");
  if (j.contains("function")) c.function = detail::parse_function(j.at("function"), "function");
  if (j.contains("tau_grid")) {
    c.tau_grid = detail::get_field<std::vector<double>>(j, "tau_grid", "");
    for (double t : c.tau_grid)
      if (!(t > 0.0 && t <= 1.0)) throw ConfigError("tau_grid", "entries must lie in (0,1]");
  }
  if (j.contains("experiment")) c.experiment = detail::parse_experiment(j.at("experiment"), "experiment");
  return c;
}

inline Config parse_config_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

inline Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace peetre
