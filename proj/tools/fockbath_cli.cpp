#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fockbath/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"fockbath: finite quantum gas as a dephasing bath for a probe atom"};
  app.require_subcommand(1);

  struct Args {
    std::string config;
    std::vector<std::string> params;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
  };
  std::map<std::string, Args> subs;  // node-based: stable addresses for CLI11

  for (const char* name : {"orbitals", "evolve", "fig2", "fig3", "fig4", "chaos", "fig5",
                           "stochastic", "sweep"}) {
    Args& a = subs[name];
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", a.config, "JSON config file (or an emitted manifest)");
    sub->add_option("--param", a.params, "key=value override, repeatable");
    sub->add_option("--seed", a.seed, "RNG seed");
    sub->add_option("--out", a.out, "output directory");
  }

  CLI11_PARSE(app, argc, argv);

  const CLI::App* chosen = app.get_subcommands().front();
  const Args* args = &subs.at(chosen->get_name());

  try {
    const fockbath::ExperimentConfig cfg = fockbath::resolve_config(
        chosen->get_name(), args->config, args->params, args->seed, args->out);
    fockbath::run_experiment(cfg);
    std::printf("wrote %s\n", cfg.out_dir.string().c_str());
    return 0;
  } catch (const fockbath::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  }
}
