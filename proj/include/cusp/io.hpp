#pragma once

// CSV and JSON emission for waves, kernel tables, branch summaries and
// regularity reports, plus CSV re-ingestion.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "cusp/analysis.hpp"
#include "cusp/continuation.hpp"
#include "cusp/kernel.hpp"
#include "cusp/steady.hpp"

namespace cusp::io {

/// Shortest decimal string that reads back to exactly `v` ("nan", "inf", "-inf"
/// for non-finite values).
std::string format_double(double v);

/// `x,phi,mu_minus_phi` at every grid node.
std::string wave_csv(const SteadyProblem& problem, const BranchPoint& point);

struct WaveTable {
  std::vector<double> x;
  std::vector<double> phi;
  std::vector<double> mu_minus_phi;
};

/// Parse a wave CSV; IoError on malformed input.
WaveTable parse_wave_csv(const std::string& text);

/// Rebuild the cosine series of a wave table on `problem`'s grid (the node
/// count must equal problem.N) and evaluate the point at speed c. The speed is
/// recovered from mu_minus_phi unless the table carries no finite entries.
BranchPoint wave_from_table(const SteadyProblem& problem, const WaveTable& table);

/// Quarter-offset nodes x_j = -pi + 2 pi (j + 1/4) / n, j = 0..n-1: n points
/// inside (-pi, pi), none of them 0.
std::vector<double> kernel_table_nodes(std::size_t n);

/// `x,K_alpha,singular,regular`; at alpha = 1 the split is the log term and 0.
std::string kernel_csv(const KernelSpec& spec, std::size_t n = 513);

nlohmann::json to_json(const BranchPoint& point, const SteadyProblem& problem);
nlohmann::json to_json(const RegularityReport& report);
nlohmann::json to_json(const LowerBoundReport& report);
nlohmann::json to_json(const ExponentFit& fit);
nlohmann::json to_json(const AsymptoticsReport& report);
nlohmann::json branch_summary(const Branch& branch, const SteadyProblem& problem);

/// Double -> JSON number, or the string "nan"/"inf" for non-finite values.
nlohmann::json number(double v);

/// Read/write whole files; IoError on failure.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace cusp::io
