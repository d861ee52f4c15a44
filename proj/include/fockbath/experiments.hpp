#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace fockbath {

// Bad or malformed configuration; the CLI maps this to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Propagation, eigensolve, or fit breakdown; the CLI maps this to exit code 3.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string experiment;
  nlohmann::json params;  // fully resolved: defaults <- config file <- overrides
  std::filesystem::path out_dir{"out"};
};

// Default parameter map of a named experiment; throws ConfigError for an
// unknown name. Experiments: orbitals, evolve, fig2, fig3, fig4 (alias
// chaos), fig5, stochastic, sweep.
nlohmann::json default_params(const std::string& experiment);

// Layer a config file (either a flat parameter map or a previously emitted
// manifest) and key=value overrides over the defaults. Unknown keys and type
// mismatches are rejected.
ExperimentConfig resolve_config(const std::string& experiment, const std::string& config_path,
                                const std::vector<std::string>& overrides,
                                std::optional<std::uint64_t> seed,
                                std::optional<std::string> out_dir);

// FNV-1a hash of the canonical parameter dump, stamped into output headers.
std::string config_hash(const nlohmann::json& params);

// Run one experiment, writing its artifact bundle (manifest, CSV series,
// summary JSON) under config.out_dir. Returns the summary. Partially written
// outputs are removed on failure.
nlohmann::json run_experiment(const ExperimentConfig& config);

}  // namespace fockbath
