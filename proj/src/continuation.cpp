#include "cusp/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <utility>

#include "cusp/errors.hpp"

namespace cusp {
namespace {

constexpr double kPi = std::numbers::pi;

bool is_integer(double p) { return std::floor(p) == p; }

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double b = 1.0;
  for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
  return b;
}

struct Harmonic {
  std::size_t wavenumber;
  double coefficient;
};

// Harmonics of the s^p correction for n(x) = x^p, p integer.
std::vector<Harmonic> smooth_harmonics(std::size_t k, int p, const SymbolSpec& m) {
  std::vector<Harmonic> out;
  const double mk = m(static_cast<double>(k));
  const int last = (p % 2 == 0) ? p / 2 - 1 : (p - 3) / 2;
  for (int j = 0; j <= last; ++j) {
    const std::size_t w = static_cast<std::size_t>(p - 2 * j) * k;
    const double c = binomial(p, j) / std::ldexp(1.0, p - 1) / (mk - m(static_cast<double>(w)));
    out.push_back({w, c});
  }
  return out;
}

SteadyProblem with_k(SteadyProblem problem, std::size_t k) {
  problem.k = k;
  problem.validate();
  return problem;
}

// Least-squares intercept of y against x.
double fit_intercept(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  if (n < 2 || den == 0.0) return sy / static_cast<double>(n);
  return (sxx * sy - sx * sxy) / den;
}

double rel_dev(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

BranchPoint as_guess(const LocalPrediction& pred) {
  BranchPoint g;
  g.phi = pred.phi;
  g.c = pred.c;
  return g;
}

}  // namespace

void ContinuationConfig::validate() const {
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(s0)) throw ConfigError("s0", "s0 must be > 0");
  if (!positive(ds_min)) throw ConfigError("ds_min", "ds_min must be > 0");
  if (!(ds_min <= ds) || !std::isfinite(ds)) throw ConfigError("ds", "need ds_min <= ds");
  if (!(ds <= ds_max) || !std::isfinite(ds_max)) throw ConfigError("ds_max", "need ds <= ds_max");
  if (!(crest_margin > 0.0 && crest_margin < 1.0))
    throw ConfigError("crest_margin", "crest_margin must lie in (0, 1)");
  if (max_steps < 1) throw ConfigError("max_steps", "max_steps must be >= 1");
  if (!positive(newton_tol)) throw ConfigError("newton_tol", "newton_tol must be > 0");
  if (newton_max_iterations < 1) throw ConfigError("newton_max_iterations", "must be >= 1");
  if (!(growth >= 1.0)) throw ConfigError("growth", "growth must be >= 1");
  for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
    if (!positive(eps_schedule[i])) throw ConfigError("eps_schedule", "entries must be > 0");
    if (i > 0 && !(eps_schedule[i] < eps_schedule[i - 1]))
      throw ConfigError("eps_schedule", "eps_schedule must be strictly decreasing");
  }
}

std::string to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::crest_reached: return "crest_reached";
    case TerminationReason::step_floor: return "step_floor";
    case TerminationReason::max_steps: return "max_steps";
    case TerminationReason::error: return "error";
  }
  return "?";
}

LocalExpansion local_expansion(std::size_t k, const SteadyProblem& problem) {
  const SteadyProblem pb = with_k(problem, k);
  const NonlinearitySpec& n = pb.nonlinearity;
  const SymbolSpec& m = pb.symbol;
  const double p = n.p;
  const double e = n.eps;
  const double mk = m(static_cast<double>(k));
  LocalExpansion out;
  if (e > 0.0) {
    if (n.kind == NonlinearityKind::abs) {
      out.harmonic = 2 * k;
      out.phi_order = 2;
      out.phi_coefficient = 0.25 * p * std::pow(e, p - 2.0) / (mk - m(2.0 * k));
      out.derived_speed_coefficient = 0.5 * p * std::pow(e, p - 2.0) * out.phi_coefficient;
      out.stated_speed_coefficient = 2.0 * out.phi_coefficient;
    } else {
      out.harmonic = 3 * k;
      out.phi_order = 3;
      out.phi_coefficient = 0.125 * (p - 1.0) * std::pow(e, p - 3.0) / (mk - m(3.0 * k));
      out.derived_speed_coefficient = 0.375 * (p - 1.0) * std::pow(e, p - 3.0);
      out.stated_speed_coefficient = 0.75 * (p - 1.0) * std::pow(e, p - 3.0);
    }
    out.speed_order = 2;
    out.speed_coefficient = out.derived_speed_coefficient;
    return out;
  }
  const bool even = n.kind == NonlinearityKind::abs;
  if (!is_integer(p) || p < 2.0 || (static_cast<long>(p) % 2 == 0) != even)
    throw UnsupportedError(
        "local_predictor: eps = 0 needs an integer p >= 2 (even for abs, odd for sgn)");
  const int ip = static_cast<int>(p);
  const std::vector<Harmonic> h = smooth_harmonics(k, ip, m);
  out.harmonic = h.front().wavenumber;
  out.phi_coefficient = h.front().coefficient;
  out.phi_order = ip;
  if (even) {
    // Coefficient of cos(kx) in p cos^{p-1}(kx) Phi_k(x).
    double sum = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j)
      sum += (binomial(ip - 1, static_cast<int>(j)) + binomial(ip - 1, static_cast<int>(j) - 1)) *
             h[j].coefficient;
    out.speed_coefficient = p / std::ldexp(1.0, ip - 1) * sum;
    out.speed_order = 2 * ip - 2;
  } else {
    out.speed_coefficient = binomial(ip, (ip - 1) / 2) / std::ldexp(1.0, ip - 1);
    out.speed_order = ip - 1;
  }
  (void)mk;
  out.derived_speed_coefficient = out.speed_coefficient;
  out.stated_speed_coefficient = out.speed_coefficient;
  return out;
}

LocalPrediction local_predictor(std::size_t k, double s, const SteadyProblem& problem) {
  const SteadyProblem pb = with_k(problem, k);
  const LocalExpansion ex = local_expansion(k, pb);
  const double mk = pb.symbol(static_cast<double>(k));
  LocalPrediction out;
  out.phi = pb.zero_series();
  out.phi[k] = s;
  if (pb.nonlinearity.eps > 0.0) {
    if (ex.harmonic <= pb.M) out.phi[ex.harmonic] += std::pow(s, ex.phi_order) * ex.phi_coefficient;
  } else {
    const int ip = static_cast<int>(pb.nonlinearity.p);
    for (const Harmonic& h : smooth_harmonics(k, ip, pb.symbol))
      if (h.wavenumber <= pb.M) out.phi[h.wavenumber] += std::pow(s, ip) * h.coefficient;
  }
  out.c = mk + std::pow(s, ex.speed_order) * ex.speed_coefficient;
  return out;
}

double solvability_speed_coefficient(const SteadyProblem& problem, std::size_t k) {
  const SteadyProblem pb = with_k(problem, k);
  const NonlinearitySpec& n = pb.nonlinearity;
  const double q2 = 0.5 * n_eval(n, 0.0, 2);
  // q3 = n'''(0)/6 from central differences of n'' with two Richardson levels.
  const double h0 = 1e-2 * (n.eps > 0.0 ? n.eps : 1.0);
  auto d = [&](double h) { return (n_eval(n, h, 2) - n_eval(n, -h, 2)) / (12.0 * h); };
  const double d1 = d(h0), d2 = d(0.5 * h0), d3 = d(0.25 * h0);
  const double r1 = (4.0 * d2 - d1) / 3.0, r2 = (4.0 * d3 - d2) / 3.0;
  const double q3 = (16.0 * r2 - r1) / 15.0;

  // Trapezoid on a grid resolving every product below.
  const std::size_t N = 64 * k;
  const double mk = pb.symbol(static_cast<double>(k));
  std::vector<double> x(N), phi1(N), w(N);
  double mean = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    x[j] = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(N);
    phi1[j] = std::cos(static_cast<double>(k) * x[j]);
    w[j] = phi1[j] * phi1[j];
    mean += w[j] / static_cast<double>(N);
  }
  for (double& v : w) v -= mean;
  // phi2 = -(L - m_k)^{-1} q2 (phi1^2 - mean), without the k-th mode.
  std::vector<double> phi2(N, 0.0);
  for (std::size_t mode = 1; mode < N / 2; ++mode) {
    if (mode == k) continue;
    double coef = 0.0;
    for (std::size_t j = 0; j < N; ++j) coef += w[j] * std::cos(static_cast<double>(mode) * x[j]);
    coef *= 2.0 / static_cast<double>(N);
    if (std::abs(coef) < 1e-15) continue;
    const double a = -q2 * coef / (pb.symbol(static_cast<double>(mode)) - mk);
    for (std::size_t j = 0; j < N; ++j) phi2[j] += a * std::cos(static_cast<double>(mode) * x[j]);
  }
  double sigma = 0.0;
  for (std::size_t j = 0; j < N; ++j) {
    const double g = 2.0 * q2 * phi1[j] * phi2[j] + q3 * phi1[j] * phi1[j] * phi1[j];
    sigma += g * phi1[j];
  }
  return sigma * 2.0 / static_cast<double>(N);
}

AsymptoticsReport verify_asymptotics(const SteadyProblem& problem, std::size_t k,
                                     const std::vector<double>& s_list, double newton_tol) {
  if (s_list.size() < 2) throw InsufficientDataError("verify_asymptotics: need at least two amplitudes");
  const SteadyProblem pb = with_k(problem, k);
  const LocalExpansion ex = local_expansion(k, pb);
  const double mk = pb.symbol(static_cast<double>(k));
  NewtonOptions opts;
  opts.tol = newton_tol;

  AsymptoticsReport rep;
  std::vector<double> xs, y_phi, y_c;
  for (double s : s_list) {
    if (!(s > 0.0)) throw DomainError("verify_asymptotics: amplitudes must be positive");
    const BranchPoint bp =
        newton_solve(pb, as_guess(local_predictor(k, s, pb)), Constraint::fix_amplitude(s), opts);
    const BranchPoint bm =
        newton_solve(pb, as_guess(local_predictor(k, -s, pb)), Constraint::fix_amplitude(-s), opts);
    AsymptoticsSample smp;
    smp.s = s;
    smp.c = bp.c;
    smp.c_mirror = bm.c;
    smp.harmonic_coefficient = ex.harmonic <= pb.M ? bp.phi[ex.harmonic] : 0.0;
    smp.residual_norm = bp.residual_norm;
    smp.iterations = bp.iterations;
    rep.samples.push_back(smp);
    rep.speed_evenness_defect = std::max(rep.speed_evenness_defect, std::abs(bp.c - bm.c));
    xs.push_back(s * s);
    y_phi.push_back(smp.harmonic_coefficient / std::pow(s, ex.phi_order));
    y_c.push_back((bp.c - mk) / std::pow(s, ex.speed_order));
  }
  rep.fitted_phi_coefficient = fit_intercept(xs, y_phi);
  rep.formula_phi_coefficient = ex.phi_coefficient;
  rep.phi_relative_deviation = rel_dev(rep.fitted_phi_coefficient, rep.formula_phi_coefficient);
  rep.fitted_speed_coefficient = fit_intercept(xs, y_c);
  rep.quadrature_speed_coefficient =
      ex.speed_order == 2 ? solvability_speed_coefficient(pb, k) : ex.speed_coefficient;
  rep.stated_speed_coefficient = ex.stated_speed_coefficient;
  rep.derived_speed_coefficient = ex.derived_speed_coefficient;
  rep.deviation_vs_quadrature = rel_dev(rep.fitted_speed_coefficient, rep.quadrature_speed_coefficient);
  rep.deviation_vs_stated = rel_dev(rep.fitted_speed_coefficient, rep.stated_speed_coefficient);
  rep.deviation_vs_derived = rel_dev(rep.fitted_speed_coefficient, rep.derived_speed_coefficient);
  const bool stated = rep.deviation_vs_stated < 0.02;
  const bool derived = rep.deviation_vs_derived < 0.02;
  rep.matching_candidate = stated && derived ? "both" : stated ? "stated" : derived ? "derived" : "neither";
  return rep;
}

bool monotone_on_left_half(const SteadyProblem& problem, const CosineSeries& phi, double slack) {
  const Grid grid = problem.grid();
  const std::vector<double> v = synthesize(phi, grid);
  const std::size_t N = grid.size();
  const double x_start = -kPi / static_cast<double>(problem.k);
  std::size_t j0 = 0;
  while (j0 < N / 2 && grid.node(j0) < x_start - 1e-12) ++j0;
  for (std::size_t j = j0; j < N / 2; ++j)
    if (v[j + 1] - v[j] < -slack) return false;
  return true;
}

double resolution_floor(const CosineSeries& phi) {
  double m = 0.0;
  for (std::size_t i = std::max<std::size_t>(1, phi.size() / 2); i <= phi.size(); ++i) m = std::max(m, std::abs(phi[i]));
  return m;
}

Branch branch_continue(const SteadyProblem& problem, const ContinuationConfig& config,
                       std::vector<BranchPoint> start) {
  config.validate();
  problem.validate();
  if (start.size() < 2) throw InsufficientDataError("branch_continue: need two starting points");
  Branch br;
  br.points = std::move(start);
  NewtonOptions opts;
  opts.tol = config.newton_tol;
  opts.max_iterations = config.newton_max_iterations;

  auto crest = [&](const BranchPoint& bp) {
    return bp.mu_eps - bp.max_value < config.crest_margin * bp.mu_eps;
  };
  if (crest(br.points.back())) {
    br.terminated_reason = TerminationReason::crest_reached;
    return br;
  }

  double ds = config.ds;
  std::string last_failure;
  for (int attempt = 0;; ++attempt) {
    if (attempt >= config.max_steps) {
      br.terminated_reason = TerminationReason::max_steps;
      br.diagnostics = "step budget exhausted";
      return br;
    }
    const BranchPoint& p0 = br.points[br.points.size() - 2];
    const BranchPoint& p1 = br.points.back();
    const Eigen::VectorXd u0 = pack_state(problem, p0.phi, p0.c);
    const Eigen::VectorXd u1 = pack_state(problem, p1.phi, p1.c);
    Eigen::VectorXd tangent = u1 - u0;
    const double len = tangent.norm();
    if (!(len > 0.0)) {
      br.terminated_reason = TerminationReason::error;
      br.diagnostics = "degenerate secant: two identical branch points";
      return br;
    }
    tangent /= len;

    BranchPoint guess;
    unpack_state(problem, u1 + ds * tangent, guess.phi, guess.c);
    bool accepted = false;
    try {
      BranchPoint next = newton_solve(problem, guess, Constraint::arclength(tangent, u1, ds), opts);
      if (next.residual_norm > config.newton_tol) {
        last_failure = "residual above tolerance";
      } else if (!(next.max_value < next.mu_eps)) {
        last_failure = "maximum reached the crest value";
      } else if (!monotone_on_left_half(problem, next.phi,
                                        std::max(1e-12, resolution_floor(next.phi)))) {
        last_failure = "wave not monotone on (-pi, 0)";
      } else if (next.max_value < p1.max_value - 1e-12) {
        last_failure = "maximum decreased along the branch";
      } else {
        const int its = next.iterations;
        br.points.push_back(std::move(next));
        accepted = true;
        if (its <= 3) ds = std::min(ds * config.growth, config.ds_max);
      }
    } catch (const ConvergenceError& e) {
      last_failure = e.what();
    } catch (const NearSingularError& e) {
      last_failure = e.what();
    } catch (const RootFindError& e) {
      last_failure = e.what();
    } catch (const Error& e) {
      br.terminated_reason = TerminationReason::error;
      br.diagnostics = e.what();
      return br;
    }
    if (accepted) {
      if (crest(br.points.back())) {
        br.terminated_reason = TerminationReason::crest_reached;
        return br;
      }
      continue;
    }
    ++br.rejected_steps;
    ds *= 0.5;
    if (ds < config.ds_min) {
      br.terminated_reason = last_failure == "maximum decreased along the branch"
                                 ? TerminationReason::error
                                 : TerminationReason::step_floor;
      std::ostringstream os;
      os << "step size below ds_min; last failure: " << last_failure;
      br.diagnostics = os.str();
      return br;
    }
  }
}

Branch branch_follow(const SteadyProblem& problem, const ContinuationConfig& config) {
  config.validate();
  problem.validate();
  NewtonOptions opts;
  opts.tol = config.newton_tol;
  opts.max_iterations = config.newton_max_iterations;
  const std::size_t k = problem.k;
  std::vector<BranchPoint> start;
  try {
    for (double s : {config.s0, config.s0 + config.ds}) {
      start.push_back(newton_solve(problem, as_guess(local_predictor(k, s, problem)),
                                   Constraint::fix_amplitude(s), opts));
    }
  } catch (const Error& e) {
    Branch br;
    br.points = std::move(start);
    br.terminated_reason = TerminationReason::error;
    br.diagnostics = std::string("start-up failed: ") + e.what();
    return br;
  }
  return branch_continue(problem, config, std::move(start));
}

HomotopyResult eps_homotopy(const SteadyProblem& problem, const ContinuationConfig& config) {
  config.validate();
  if (config.eps_schedule.empty()) throw ConfigError("eps_schedule", "eps_schedule must not be empty");
  NewtonOptions opts;
  opts.tol = config.newton_tol;
  opts.max_iterations = config.newton_max_iterations;

  HomotopyResult out;
  out.stages.reserve(config.eps_schedule.size());
  const Branch* previous = nullptr;
  for (std::size_t i = 0; i < config.eps_schedule.size(); ++i) {
    SteadyProblem pb = problem;
    pb.nonlinearity.eps = config.eps_schedule[i];
    HomotopyStage stage;
    stage.eps = pb.nonlinearity.eps;
    if (previous == nullptr) {
      stage.branch = branch_follow(pb, config);
    } else {
      // Walk back along the previous branch to a wave that sits safely below the
      // new crest value, re-anchor it at its amplitude, then continue.
      std::vector<BranchPoint> start;
      const auto& pts = previous->points;
      std::string why = "no re-anchoring point converged";
      for (std::size_t back = pts.size(); back-- > 1 && start.empty();) {
        const BranchPoint& cand = pts[back];
        try {
          const double mu_new = mu_of_speed(pb.nonlinearity, cand.c);
          if (!(cand.max_value < (1.0 - 2.0 * config.crest_margin) * mu_new)) continue;
          BranchPoint a = newton_solve(pb, cand, Constraint::fix_amplitude(cand.s), opts);
          const BranchPoint& nxt = pts[back - 1];
          BranchPoint b = newton_solve(pb, nxt, Constraint::fix_amplitude(nxt.s), opts);
          start.push_back(std::move(b));
          start.push_back(std::move(a));
        } catch (const Error& e) {
          why = e.what();
          start.clear();
        }
      }
      if (start.size() < 2) {
        stage.failure = "re-anchoring failed: " + why;
        out.stages.push_back(std::move(stage));
        return out;
      }
      stage.branch = branch_continue(pb, config, std::move(start));
    }
    if (stage.branch.points.empty()) {
      stage.failure = "empty branch: " + stage.branch.diagnostics;
      out.stages.push_back(std::move(stage));
      return out;
    }
    stage.final_point = stage.branch.points.back();
    stage.mu_limit = std::pow(stage.final_point.c / pb.nonlinearity.p, 1.0 / (pb.nonlinearity.p - 1.0));
    stage.ok = stage.branch.terminated_reason == TerminationReason::crest_reached;
    if (!stage.ok) {
      stage.failure = to_string(stage.branch.terminated_reason) + ": " + stage.branch.diagnostics;
      out.stages.push_back(std::move(stage));
      return out;
    }
    out.stages.push_back(std::move(stage));
    previous = &out.stages.back().branch;
  }
  out.complete = true;
  return out;
}

}  // namespace cusp
