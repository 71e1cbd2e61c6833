#pragma once

// Run configuration, validation and command dispatch for the command-line tool.

#include <cstdint>
#include <stdexcept>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace cusp::cli {

struct RunConfig {
  std::string command = "branch";   // kernel | branch | homotopy | verify-asymptotics | regularity | audit
  double alpha = 0.5;
  std::string symbol_family = "neg_order";
  std::string kind = "abs";
  double p = 2.0;
  double eps = 1e-2;
  std::vector<double> eps_schedule;
  std::size_t k = 1;
  std::size_t M = 512;
  std::size_t N = 2048;
  double s0 = 1e-2;
  double ds = 1e-2;
  double ds_min = 1e-7;
  double ds_max = 5e-2;
  double delta = 1e-2;              // crest margin
  double newton_tol = 1e-10;
  int newton_max_iterations = 12;
  int max_steps = 2000;
  std::vector<double> s_list{2e-3, 4e-3, 6e-3, 8e-3, 1e-2};   // verify-asymptotics amplitudes
  std::size_t kernel_nodes = 513;
  double ratio_floor = 1e-2;        // lower_bound_check floor
  std::filesystem::path input;      // audit: wave CSV to re-ingest
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;
};

/// Overlay the keys of a config document onto `base`. Unknown keys raise
/// ConfigError naming the key. Accepted layout:
///   {"command", "output_dir", "seed", "input",
///    "symbol": {"family", "alpha"}, "nonlinearity": {"kind", "p", "eps", "eps_schedule"},
///    "discretization": {"M", "N", "k"},
///    "continuation": {"s0", "ds", "ds_min", "ds_max", "delta", "newton_tol",
///                     "newton_max_iterations", "max_steps"},
///    "asymptotics": {"s_list"}, "kernel": {"nodes"}, "regularity": {"ratio_floor"}}
RunConfig config_from_json(const nlohmann::json& doc, RunConfig base = {});

/// Check every field against the module preconditions; ConfigError(field, ...)
/// on the first violation. No computation happens before this passes.
void validate(const RunConfig& config);

/// A failure inside run(), tagged with the stage that raised it.
class RunError : public std::runtime_error {
public:
  RunError(std::string stage, int exit_code, nlohmann::json record)
      : std::runtime_error(record.value("message", std::string("run failed"))),
        stage_(std::move(stage)), exit_code_(exit_code), record_(std::move(record)) {}
  const std::string& stage() const noexcept { return stage_; }
  int exit_code() const noexcept { return exit_code_; }
  const nlohmann::json& record() const noexcept { return record_; }

private:
  std::string stage_;
  int exit_code_;
  nlohmann::json record_;
};

struct RunResult {
  int exit_code = 0;
  std::string failure;   // set when exit_code != 0
  std::vector<std::filesystem::path> files;
  nlohmann::json summary;
};

/// Validate, execute the configured command and write its files under
/// output_dir. Failures surface as RunError. A run that completes but misses its
/// goal (branch short of the crest, incomplete homotopy) returns exit_code 3.
RunResult run(const RunConfig& config);

/// 0 success, 2 config, 3 numerical, 4 IO.
int exit_code_for(const std::exception& e);

/// Machine-readable error record for stderr.
nlohmann::json error_record(const std::exception& e);

/// Full CLI entry point: parse argv, run, map errors to exit codes.
int main_entry(int argc, char** argv);

}  // namespace cusp::cli
