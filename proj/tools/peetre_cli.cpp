#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "peetre.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Symmetric function space norms, K-functionals and Peetre interpolation spaces"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string format = "csv";
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"norm", "norm of the configured function in E (and F)"},
      {"kfun", "K-functional k(f; a, b) for the pair (E, F)"},
      {"peetre-norm", "Peetre space norm of the configured function"},
      {"fundamental", "fundamental function of E on tau_grid"},
      {"eta", "concentration characteristic of the function in E on tau_grid"},
      {"s-profile", "F-normalized concentration modulus of F inside E on tau_grid"},
      {"head-tail", "head and tail cutting report"},
      {"blocks", "sampled block-equivalence ratios for a disjoint family"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (default: stdout)");
    sub->add_option("--seed", seed, "override experiment.seed");
    sub->add_option("--tol", tol, "override experiment.tol")->check(CLI::PositiveNumber);
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  }

  CLI11_PARSE(app, argc, argv);

  const std::string what = app.get_subcommands().front()->get_name();
  try {
    const peetre::Config cfg = peetre::load_config(config_path);
    const peetre::RunOptions ro{seed, tol};
    const peetre::Format fmt = peetre::parse_format(format);
    if (out_dir.empty()) {
      std::cout << peetre::serialize(peetre::build_table(what, cfg, ro), fmt);
    } else {
      std::cout << peetre::emit_tables(what, cfg, out_dir, fmt, ro).string() << "\n";
    }
  } catch (const peetre::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
