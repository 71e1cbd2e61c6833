#pragma once

// Local bifurcation predictors, pseudo-arclength branch following toward the
// highest wave, numerical checks of the small-amplitude expansions, and the
// eps -> 0 homotopy.

#include <cstddef>
#include <string>
#include <vector>

#include "cusp/steady.hpp"

namespace cusp {

struct ContinuationConfig {
  double s0 = 1e-2;
  double ds = 1e-2;
  double ds_min = 1e-7;
  double ds_max = 5e-2;
  double crest_margin = 1e-2;   // stop once mu_eps - max < crest_margin * mu_eps
  int max_steps = 2000;
  double newton_tol = 1e-10;
  int newton_max_iterations = 12;
  double growth = 1.3;          // ds growth after fast convergence (<= 3 iterations)
  std::vector<double> eps_schedule;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

enum class TerminationReason { crest_reached, step_floor, max_steps, error };
std::string to_string(TerminationReason reason);

struct Branch {
  std::vector<BranchPoint> points;
  TerminationReason terminated_reason = TerminationReason::error;
  std::string diagnostics;
  int rejected_steps = 0;
};

/// Closed-form small-amplitude data for the k-th branch.
struct LocalExpansion {
  double phi_coefficient = 0.0;     // C of the first harmonic correction
  std::size_t harmonic = 0;         // its wavenumber (2k abs, 3k sgn)
  int phi_order = 0;                // power of s multiplying it
  double speed_coefficient = 0.0;   // coefficient used by the predictor
  int speed_order = 0;              // power of s multiplying it
  double stated_speed_coefficient = 0.0;   // 2C (abs) or (3/4)(p-1)eps^{p-3} (sgn)
  double derived_speed_coefficient = 0.0;  // from the order-s^3 solvability condition
};

/// Coefficients of the local expansion; eps > 0, or eps = 0 with integer p >= 2
/// whose parity matches the kind (even p for abs, odd p for sgn).
LocalExpansion local_expansion(std::size_t k, const SteadyProblem& problem);

struct LocalPrediction {
  CosineSeries phi;
  double c = 0.0;
};

/// Truncated expansion at amplitude s. Throws UnsupportedError for eps = 0 with
/// non-integer p (or mismatched parity), DomainError for even k with sgn.
LocalPrediction local_predictor(std::size_t k, double s, const SteadyProblem& problem);

struct AsymptoticsSample {
  double s = 0.0;
  double c = 0.0;
  double harmonic_coefficient = 0.0;
  double residual_norm = 0.0;
  int iterations = 0;
  double c_mirror = 0.0;   // speed at -s
};

struct AsymptoticsReport {
  std::vector<AsymptoticsSample> samples;
  double fitted_phi_coefficient = 0.0;
  double formula_phi_coefficient = 0.0;
  double phi_relative_deviation = 0.0;
  double fitted_speed_coefficient = 0.0;
  double quadrature_speed_coefficient = 0.0;   // independent solvability quadrature
  double stated_speed_coefficient = 0.0;
  double derived_speed_coefficient = 0.0;
  double deviation_vs_quadrature = 0.0;
  double deviation_vs_stated = 0.0;
  double deviation_vs_derived = 0.0;
  std::string matching_candidate;   // "derived", "stated", "both" or "neither" (2% rule)
  double speed_evenness_defect = 0.0;  // max |c(s) - c(-s)|
};

/// Newton-solve at each s (and -s), fit the harmonic and speed coefficients, and
/// compare them with the closed forms and with an independent quadrature of the
/// order-s^3 solvability condition.
AsymptoticsReport verify_asymptotics(const SteadyProblem& problem, std::size_t k,
                                     const std::vector<double>& s_list, double newton_tol = 1e-13);

/// The solvability-condition speed coefficient computed by trapezoidal quadrature
/// from Taylor coefficients of n^eps read off n_eval.
double solvability_speed_coefficient(const SteadyProblem& problem, std::size_t k);

/// Strict monotonicity check on (-pi, 0): first differences >= -slack.
bool monotone_on_left_half(const SteadyProblem& problem, const CosineSeries& phi, double slack = 1e-12);

/// max |phi_m| over the upper half of the retained modes: the size of the
/// truncation ripple. Branch following accepts dips in the first differences up
/// to this level (the crest is under-resolved once it sharpens below the grid).
double resolution_floor(const CosineSeries& phi);

/// Follow the branch from the local predictor at config.s0 toward the crest.
Branch branch_follow(const SteadyProblem& problem, const ContinuationConfig& config);

/// Continue an existing branch from its last two points (used for restarts).
Branch branch_continue(const SteadyProblem& problem, const ContinuationConfig& config,
                       std::vector<BranchPoint> start);

struct HomotopyStage {
  double eps = 0.0;
  bool ok = false;
  std::string failure;
  Branch branch;
  BranchPoint final_point;
  double mu_limit = 0.0;   // (c/p)^{1/(p-1)} at the final speed
};

struct HomotopyResult {
  std::vector<HomotopyStage> stages;
  bool complete = false;
};

/// Run the branch at the largest eps, then warm-start each smaller eps from the
/// previous branch and continue to its crest.
HomotopyResult eps_homotopy(const SteadyProblem& problem, const ContinuationConfig& config);

}  // namespace cusp
