#include "cusp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "cusp/continuation.hpp"
#include "cusp/errors.hpp"
#include "cusp/quadrature.hpp"

namespace cusp {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Offsets d > 0 from the anchor that sit on grid nodes inside [lo, hi], with
// the node index of a + d.
struct Sample {
  double d;
  std::size_t j;
};

std::vector<Sample> window_nodes(const Grid& grid, Anchor anchor, FitWindow w) {
  std::vector<Sample> out;
  const std::size_t N = grid.size();
  const double h = 2.0 * kPi / static_cast<double>(N);
  const std::size_t base = anchor == Anchor::crest ? grid.center() : 0;
  for (std::size_t i = 1; i < N / 2; ++i) {
    const double d = h * static_cast<double>(i);
    if (d < w.lo || d > w.hi) continue;
    out.push_back({d, base + i});
  }
  return out;
}

double speed_bound(const SteadyProblem& problem) {
  const double p = problem.nonlinearity.p;
  double norm = 1.0;   // positive kernels with m(0) = 1 have unit mass
  if (problem.symbol.family == SymbolFamily::neg_order) {
    KernelSpec ks;
    ks.alpha = problem.symbol.alpha;
    norm = kernel_l1_norm(ks).value;
  }
  return p / (p - 1.0) * norm;
}

}  // namespace

FitWindow auto_fit_window(const SteadyProblem& problem) {
  const double h = 2.0 * kPi / static_cast<double>(problem.N);
  const double eps = problem.nonlinearity.eps;
  const double alpha = problem.symbol.alpha;
  return {std::max(4.0 * h, 2.0 * std::pow(eps, 1.0 / alpha)), kPi / 8.0};
}

ExponentFit power_law_fit(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw DomainError("power_law_fit: x and y differ in length");
  if (x.size() < 8)
    throw InsufficientDataError("power_law_fit: " + std::to_string(x.size()) +
                                " points in the window, need at least 8");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw DomainError("power_law_fit: data must be positive (gap vanished at x = " +
                        std::to_string(x[i]) + ")");
    const double X = std::log(x[i]), Y = std::log(y[i]);
    sx += X;
    sy += Y;
    sxx += X * X;
    sxy += X * Y;
  }
  const double det = n * sxx - sx * sx;
  if (!(det > 0.0)) throw InsufficientDataError("power_law_fit: abscissae are degenerate");
  ExponentFit out;
  out.exponent = (n * sxy - sx * sy) / det;
  out.log_prefactor = (sy - out.exponent * sx) / n;
  out.nodes = x.size();
  out.window = {*std::min_element(x.begin(), x.end()), *std::max_element(x.begin(), x.end())};
  return out;
}

ExponentFit gap_exponent_fit(const Grid& grid, const std::vector<double>& values, Anchor anchor,
                             double reference, FitWindow window) {
  if (values.size() != grid.size()) throw DomainError("gap_exponent_fit: values do not match the grid");
  const double sign = anchor == Anchor::crest ? -1.0 : 1.0;
  std::vector<double> x, y;
  for (const Sample& s : window_nodes(grid, anchor, window)) {
    x.push_back(s.d);
    y.push_back(sign * (values[s.j] - reference));
  }
  ExponentFit out = power_law_fit(x, y);
  out.window = window;
  return out;
}

ExponentFit cusp_exponent_fit(const BranchPoint& wave, const SteadyProblem& problem,
                              std::optional<FitWindow> window, double crest_margin) {
  problem.validate();
  const FitWindow w = window.value_or(auto_fit_window(problem));
  if (!(w.lo > 0.0 && w.hi > w.lo && w.hi < kPi / 4.0))
    throw DomainError("cusp_exponent_fit: window must satisfy 0 < lo < hi < pi/4");
  const double mu = mu_of_speed(problem.nonlinearity, wave.c);
  const std::vector<double> v = synthesize(wave.phi, problem.grid());
  const double top = *std::max_element(v.begin(), v.end());
  const double gap = (mu - top) / mu;
  if (!(gap < 5.0 * crest_margin))
    throw DomainError("cusp_exponent_fit: wave is not near the crest ((mu - max)/mu = " +
                      std::to_string(gap) + ")");
  return gap_exponent_fit(problem.grid(), v, Anchor::crest, mu, w);
}

ExponentFit local_exponent_fit(const BranchPoint& wave, const SteadyProblem& problem, Anchor anchor,
                               std::optional<FitWindow> window) {
  problem.validate();
  const FitWindow w = window.value_or(auto_fit_window(problem));
  const Grid grid = problem.grid();
  const std::vector<double> v = synthesize(wave.phi, grid);
  const std::size_t j0 = anchor == Anchor::crest ? grid.center() : 0;
  std::vector<double> x, y;
  for (const Sample& s : window_nodes(grid, anchor, w)) {
    x.push_back(s.d);
    y.push_back(std::abs(v[s.j] - v[j0]));
  }
  ExponentFit out = power_law_fit(x, y);
  out.window = w;
  return out;
}

LowerBoundReport lower_bound_check(const BranchPoint& wave, const SteadyProblem& problem,
                                   std::optional<FitWindow> window, double floor) {
  LowerBoundReport out;
  out.floor = floor;
  try {
    out.window = window.value_or(auto_fit_window(problem));
    const double mu = mu_of_speed(problem.nonlinearity, wave.c);
    const double alpha = problem.symbol.alpha;
    const Grid grid = problem.grid();
    const std::vector<double> v = synthesize(wave.phi, grid);
    out.min_ratio = std::numeric_limits<double>::infinity();
    out.max_ratio = -std::numeric_limits<double>::infinity();
    for (const Sample& s : window_nodes(grid, Anchor::crest, out.window)) {
      const double r = (mu - v[s.j]) / std::pow(s.d, alpha);
      out.min_ratio = std::min(out.min_ratio, r);
      out.max_ratio = std::max(out.max_ratio, r);
      ++out.nodes;
    }
    out.passed = out.nodes > 0 && out.min_ratio > floor;
    if (out.nodes == 0) out.min_ratio = out.max_ratio = kNaN;
  } catch (const std::exception&) {
    out.passed = false;
    out.min_ratio = out.max_ratio = kNaN;
  }
  return out;
}

RegularityReport wave_audit(const BranchPoint& wave, const SteadyProblem& problem, double crest_margin) {
  RegularityReport r;
  r.alpha_hat = r.ratio_min = r.ratio_max = r.speed_bound = r.mu_eps = r.max_gap = kNaN;
  r.antisymmetry_defect = kNaN;
  r.speed = wave.c;
  try {
    problem.validate();
    if (wave.phi.size() != problem.M) throw DomainError("wave has the wrong number of modes");
  } catch (const std::exception& e) {
    r.notes.push_back(std::string("invalid input: ") + e.what());
    return r;
  }
  const Grid grid = problem.grid();
  const std::vector<double> v = synthesize(wave.phi, grid);
  const std::size_t N = grid.size();

  try {
    r.speed_bound = speed_bound(problem);
    r.speed_bound_ok = wave.c < r.speed_bound;
  } catch (const std::exception& e) {
    r.notes.push_back(std::string("speed bound unavailable: ") + e.what());
  }

  // Monotone on (-pi/k, 0): the k-th branch repeats with period 2pi/k.
  std::size_t j0 = 0;
  while (j0 < N / 2 && grid.node(j0) < -kPi / static_cast<double>(problem.k) - 1e-12) ++j0;
  r.min_first_difference = std::numeric_limits<double>::infinity();
  for (std::size_t j = j0; j < N / 2; ++j)
    r.min_first_difference = std::min(r.min_first_difference, v[j + 1] - v[j]);
  r.resolution_floor = std::max(1e-12, resolution_floor(wave.phi));
  r.monotone_ok = r.min_first_difference >= -1e-12;
  r.monotone_resolved_ok = r.min_first_difference >= -r.resolution_floor;

  if (problem.odd_subspace()) {
    r.antisymmetry_defect = 0.0;
    for (std::size_t j = 0; j < N; ++j)
      r.antisymmetry_defect = std::max(r.antisymmetry_defect, std::abs(v[grid.shift_half(j)] + v[j]));
  }

  if (wave.c > 0.0) {
    try {
      r.mu_eps = mu_of_speed(problem.nonlinearity, wave.c);
      r.max_gap = r.mu_eps - v[grid.center()];
    } catch (const std::exception& e) {
      r.notes.push_back(std::string("crest value unavailable: ") + e.what());
    }
  } else {
    r.notes.push_back("non-positive speed: no crest value");
  }

  r.range_ok = true;
  for (double x : v) {
    if (!(n_eval(problem.nonlinearity, x, 1) <= wave.c + 1e-10)) {
      r.range_ok = false;
      break;
    }
  }

  const LowerBoundReport lb = lower_bound_check(wave, problem, std::nullopt);
  r.fit_window = lb.window;
  r.ratio_min = lb.min_ratio;
  r.ratio_max = lb.max_ratio;
  try {
    r.alpha_hat = cusp_exponent_fit(wave, problem, std::nullopt, crest_margin).exponent;
  } catch (const std::exception& e) {
    r.notes.push_back(std::string("no crest fit: ") + e.what());
  }
  if (problem.nonlinearity.eps > 0.0)
    r.notes.push_back("fit window depends on eps heuristically (x_lo >= 2 eps^{1/alpha})");
  return r;
}

namespace {

// Kernel-weighted nodes in t for int_0^pi K(t) g(t) dt, built once per alpha:
// fine (24-point) and coarse (12-point) Gauss-Legendre panels in u = t^alpha.
struct ConvolutionRule {
  std::vector<double> t_fine, w_fine, t_coarse, w_coarse;
  double kernel_error = 0.0;   // sum of |w| * kernel error over the fine nodes
  double magnitude = 0.0;      // sum of |w|
};

ConvolutionRule convolution_rule(const KernelSpec& spec) {
  spec.validate();
  const double alpha = spec.alpha;
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("odd_convolution: alpha must lie in (0, 1)");
  const double u_max = std::pow(kPi, alpha);
  std::vector<double> cuts;
  for (int i = 0; i <= 4; ++i) cuts.push_back(u_max * (0.5 + 0.125 * i));
  for (int i = 1; i <= 40; ++i) cuts.insert(cuts.begin(), u_max * std::ldexp(0.5, -i));
  cuts.insert(cuts.begin(), 0.0);
  ConvolutionRule r;
  auto fill = [&](const quad::Rule& rule, std::vector<double>& ts, std::vector<double>& ws, bool fine) {
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double half = 0.5 * (cuts[i + 1] - cuts[i]);
      const double mid = 0.5 * (cuts[i + 1] + cuts[i]);
      for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
        const double u = mid + half * rule.nodes[q];
        const double t = std::pow(u, 1.0 / alpha);
        const KernelValue k = kernel_eval(spec, t);
        const double jac = std::pow(u, 1.0 / alpha - 1.0) / alpha;
        const double w = half * rule.weights[q] * jac;
        ts.push_back(t);
        ws.push_back(w * k.value);
        if (fine) {
          r.kernel_error += std::abs(w) * k.error;
          r.magnitude += std::abs(w * k.value);
        }
      }
    }
  };
  fill(quad::gauss_legendre(24), r.t_fine, r.w_fine, true);
  fill(quad::gauss_legendre(12), r.t_coarse, r.w_coarse, false);
  return r;
}

double sine_sum(const std::vector<double>& b, double y) {
  double s = 0.0;
  for (std::size_t m = 1; m <= b.size(); ++m) s += b[m - 1] * std::sin(static_cast<double>(m) * y);
  return s;
}

KernelValue apply_rule(const ConvolutionRule& r, const std::vector<double>& b, double x) {
  double fine = 0.0, coarse = 0.0, gmax = 0.0;
  for (std::size_t i = 0; i < r.t_fine.size(); ++i) {
    const double g = sine_sum(b, x + r.t_fine[i]) + sine_sum(b, x - r.t_fine[i]);
    fine += r.w_fine[i] * g;
    gmax = std::max(gmax, std::abs(g));
  }
  for (std::size_t i = 0; i < r.t_coarse.size(); ++i)
    coarse += r.w_coarse[i] * (sine_sum(b, x + r.t_coarse[i]) + sine_sum(b, x - r.t_coarse[i]));
  const double err = std::abs(fine - coarse) + gmax * r.kernel_error +
                     8.0 * std::numeric_limits<double>::epsilon() * gmax * r.magnitude;
  return {fine, err};
}

}  // namespace

KernelValue odd_convolution(const KernelSpec& spec, const std::vector<double>& b, double x) {
  return apply_rule(convolution_rule(spec), b, x);
}

ParityPositivityReport parity_positivity(const KernelSpec& spec, const std::vector<double>& b,
                                         std::size_t count) {
  if (count < 1) throw DomainError("parity_positivity: need at least one point");
  const ConvolutionRule rule = convolution_rule(spec);
  ParityPositivityReport out;
  out.min_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    const double x = -kPi + kPi * (static_cast<double>(i) + 0.5) / static_cast<double>(count);
    const double q = apply_rule(rule, b, x).value;
    double s = 0.0;
    for (std::size_t m = 1; m <= b.size(); ++m)
      s += b[m - 1] * std::pow(static_cast<double>(m), -spec.alpha) * std::sin(static_cast<double>(m) * x);
    out.points.push_back(x);
    out.quadrature.push_back(q);
    out.spectral.push_back(s);
    out.min_value = std::min(out.min_value, q);
    out.max_deviation = std::max(out.max_deviation, std::abs(q - s));
  }
  out.positive = out.min_value > 0.0;
  return out;
}

}  // namespace cusp
