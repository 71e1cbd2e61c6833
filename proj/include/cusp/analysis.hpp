#pragma once

// Post-hoc diagnostics on computed waves: power-law fits at the crest and the
// trough, two-sided Hölder ratios, speed/nodal/range audits, and the parity
// positivity of the kernel convolution.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cusp/kernel.hpp"
#include "cusp/steady.hpp"

namespace cusp {

struct FitWindow {
  double lo = 0.0;
  double hi = 0.0;
};

/// x_lo = max(4 * 2pi/N, 2 eps^{1/alpha}), x_hi = pi/8.
FitWindow auto_fit_window(const SteadyProblem& problem);

struct ExponentFit {
  double exponent = 0.0;
  double log_prefactor = 0.0;   // intercept of the log-log line
  FitWindow window;
  std::size_t nodes = 0;
};

/// Least-squares slope of log y against log x. Needs at least 8 pairs with
/// x, y > 0 (InsufficientDataError otherwise; DomainError on non-positive data).
ExponentFit power_law_fit(const std::vector<double>& x, const std::vector<double>& y);

enum class Anchor { crest, trough };

/// Fit of log(sign * (v(a + d) - reference)) against log d, d in the window,
/// a = 0 for the crest and a = -pi for the trough; sign = -1 at the crest and +1
/// at the trough, so both fit a positive gap.
ExponentFit gap_exponent_fit(const Grid& grid, const std::vector<double>& values, Anchor anchor,
                             double reference, FitWindow window);

/// Crest exponent of a near-crest wave: fit of log(mu_eps - phi(x)) over the
/// window (auto-selected when absent). DomainError unless
/// (mu_eps - max)/mu_eps < 5 * crest_margin and the window lies in (0, pi/4).
ExponentFit cusp_exponent_fit(const BranchPoint& wave, const SteadyProblem& problem,
                              std::optional<FitWindow> window = std::nullopt,
                              double crest_margin = 1e-2);

/// Local exponent of |phi(a + d) - phi(a)| at the crest or trough node itself;
/// about 2 for a smooth extremum.
ExponentFit local_exponent_fit(const BranchPoint& wave, const SteadyProblem& problem, Anchor anchor,
                               std::optional<FitWindow> window = std::nullopt);

struct LowerBoundReport {
  double min_ratio = 0.0;   // min over the window of (mu_eps - phi(x)) / |x|^alpha
  double max_ratio = 0.0;
  double floor = 0.0;
  bool passed = false;      // min_ratio > floor
  FitWindow window;
  std::size_t nodes = 0;
};

/// Two-sided Hölder ratio over the window; never throws (an empty window
/// reports passed = false with zero nodes).
LowerBoundReport lower_bound_check(const BranchPoint& wave, const SteadyProblem& problem,
                                   std::optional<FitWindow> window = std::nullopt,
                                   double floor = 1e-2);

struct RegularityReport {
  double alpha_hat = 0.0;               // NaN when the fit was not possible (see notes)
  FitWindow fit_window;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  double speed = 0.0;
  double speed_bound = 0.0;             // p/(p-1) ||K||_{L1}
  bool speed_bound_ok = false;
  bool monotone_ok = false;             // first differences >= -1e-12 on (-pi/k, 0)
  double min_first_difference = 0.0;
  double resolution_floor = 0.0;        // truncation ripple level of the series
  bool monotone_resolved_ok = false;    // first differences >= -resolution_floor
  bool range_ok = false;                // (n^eps)'(phi) <= c + 1e-10 at every node
  double antisymmetry_defect = 0.0;     // max |phi(x+pi) + phi(x)|; NaN for abs
  double max_gap = 0.0;                 // mu_eps - phi(0)
  double mu_eps = 0.0;
  std::vector<std::string> notes;
};

/// Fill every report field; never throws.
RegularityReport wave_audit(const BranchPoint& wave, const SteadyProblem& problem,
                            double crest_margin = 1e-2);

/// (K_alpha * f)(x) for the odd f(y) = sum_m b_m sin(m y) (b[m-1] = b_m),
/// by quadrature of int_0^pi K(t) (f(x+t) + f(x-t)) dt with the t^{alpha-1}
/// singularity removed by t = u^{1/alpha}. 0 < alpha < 1.
KernelValue odd_convolution(const KernelSpec& spec, const std::vector<double>& b, double x);

struct ParityPositivityReport {
  std::vector<double> points;
  std::vector<double> quadrature;
  std::vector<double> spectral;   // sum_m b_m m^{-alpha} sin(m x)
  double min_value = 0.0;
  double max_deviation = 0.0;     // max |quadrature - spectral|
  bool positive = false;
};

/// Evaluate the convolution at `count` interior points of (-pi, 0).
ParityPositivityReport parity_positivity(const KernelSpec& spec, const std::vector<double>& b,
                                         std::size_t count = 32);

}  // namespace cusp
