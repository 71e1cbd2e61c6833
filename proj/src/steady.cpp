#include "cusp/steady.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cusp/errors.hpp"

namespace cusp {
namespace {

void check_size(const SteadyProblem& problem, const CosineSeries& s, const char* what) {
  if (s.size() != problem.M)
    throw DomainError(std::string(what) + ": series has " + std::to_string(s.size()) +
                      " modes, problem expects " + std::to_string(problem.M));
}

std::vector<double> apply_pointwise(const NonlinearitySpec& n, const std::vector<double>& v, int order) {
  std::vector<double> out(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) out[j] = n_eval(n, v[j], order);
  return out;
}

void project_odd(CosineSeries& s, double* defect) {
  const double d = s.even_defect();
  if (defect) *defect = d;
  s.make_antisymmetric();
}

}  // namespace

void SteadyProblem::validate() const {
  symbol.validate();
  nonlinearity.validate();
  if (M < 1) throw DomainError("SteadyProblem: M must be >= 1");
  Grid g(N);
  if (N < 4 * M) throw AliasingError("SteadyProblem: need N >= 4M");
  if (k < 1 || k > M) throw DomainError("SteadyProblem: base wavenumber k must lie in [1, M]");
  if (odd_subspace() && k % 2 == 0) throw DomainError("SteadyProblem: sgn branches need odd k");
}

std::vector<std::size_t> SteadyProblem::active_modes() const {
  std::vector<std::size_t> modes;
  const std::size_t stride = odd_subspace() ? 2 * k : k;
  for (std::size_t m = k; m <= M; m += stride) modes.push_back(m);
  return modes;
}

CosineSeries SteadyProblem::zero_series() const { return CosineSeries(M, odd_subspace()); }

ResidualReport residual_with_diagnostics(const SteadyProblem& problem, const CosineSeries& phi,
                                         double c) {
  problem.validate();
  check_size(problem, phi, "residual");
  const Grid grid = problem.grid();
  const std::vector<double> v = synthesize(phi, grid);
  const AnalysisResult nl =
      analyze_with_diagnostics(apply_pointwise(problem.nonlinearity, v, 0), grid, problem.M);
  ResidualReport out;
  out.F = apply_symbol(phi, problem.symbol);
  for (std::size_t k = 1; k <= problem.M; ++k) out.F[k] += -c * phi[k] + nl.series[k];
  out.F.antisymmetric = false;
  out.nonlinear_mean = nl.mean;
  if (phi.antisymmetric && problem.odd_subspace()) project_odd(out.F, &out.symmetry_defect);
  return out;
}

CosineSeries residual(const SteadyProblem& problem, const CosineSeries& phi, double c) {
  return residual_with_diagnostics(problem, phi, c).F;
}

double grid_max_norm(const SteadyProblem& problem, const CosineSeries& series) {
  const std::vector<double> v = synthesize(series, problem.grid());
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

CosineSeries jacobian_apply(const SteadyProblem& problem, const CosineSeries& phi, double c,
                            const CosineSeries& h) {
  problem.validate();
  check_size(problem, phi, "jacobian_apply");
  check_size(problem, h, "jacobian_apply");
  const Grid grid = problem.grid();
  std::vector<double> g = apply_pointwise(problem.nonlinearity, synthesize(phi, grid), 1);
  const std::vector<double> hv = synthesize(h, grid);
  for (std::size_t j = 0; j < g.size(); ++j) g[j] *= hv[j];
  const CosineSeries gh = analyze(g, grid, problem.M);
  CosineSeries out = apply_symbol(h, problem.symbol);
  for (std::size_t k = 1; k <= problem.M; ++k) out[k] += -c * h[k] + gh[k];
  out.antisymmetric = false;
  if (phi.antisymmetric && h.antisymmetric && problem.odd_subspace()) project_odd(out, nullptr);
  return out;
}

Eigen::MatrixXd jacobian_matrix(const SteadyProblem& problem, const CosineSeries& phi, double c) {
  problem.validate();
  check_size(problem, phi, "jacobian_matrix");
  const Grid grid = problem.grid();
  const std::vector<double> g = apply_pointwise(problem.nonlinearity, synthesize(phi, grid), 1);
  // (2/N) sum g cos(jx) cos(kx) = (g_{|k-j|} + g_{k+j}) / 2 with g_m the cosine moments.
  const std::vector<double> gm = cosine_moments(g, grid);
  const std::size_t M = problem.M;
  Eigen::MatrixXd J(M, M);
  for (std::size_t col = 1; col <= M; ++col) {
    for (std::size_t row = 1; row <= M; ++row) {
      const std::size_t diff = row > col ? row - col : col - row;
      J(row - 1, col - 1) = 0.5 * (gm[diff] + gm[row + col]);
    }
    J(col - 1, col - 1) += problem.symbol(static_cast<double>(col)) - c;
  }
  return J;
}

BranchPoint evaluate_point(const SteadyProblem& problem, const CosineSeries& phi, double c) {
  const ResidualReport r = residual_with_diagnostics(problem, phi, c);
  BranchPoint bp;
  bp.phi = phi;
  bp.c = c;
  bp.s = phi[problem.k];
  bp.residual_norm = grid_max_norm(problem, r.F);
  bp.symmetry_defect = r.symmetry_defect;
  const std::vector<double> v = synthesize(phi, problem.grid());
  bp.max_value = *std::max_element(v.begin(), v.end());
  bp.mu_eps = c > 0.0 ? mu_of_speed(problem.nonlinearity, c)
                      : std::numeric_limits<double>::quiet_NaN();
  return bp;
}

Eigen::VectorXd pack_state(const SteadyProblem& problem, const CosineSeries& phi, double c) {
  const std::vector<std::size_t> modes = problem.active_modes();
  Eigen::VectorXd u(modes.size() + 1);
  for (std::size_t i = 0; i < modes.size(); ++i) u(i) = phi[modes[i]];
  u(modes.size()) = c;
  return u;
}

void unpack_state(const SteadyProblem& problem, const Eigen::VectorXd& u, CosineSeries& phi, double& c) {
  const std::vector<std::size_t> modes = problem.active_modes();
  if (static_cast<std::size_t>(u.size()) != modes.size() + 1)
    throw DomainError("unpack_state: state has the wrong length");
  phi = problem.zero_series();
  for (std::size_t i = 0; i < modes.size(); ++i) phi[modes[i]] = u(i);
  c = u(modes.size());
}

BranchPoint newton_solve(const SteadyProblem& problem, const BranchPoint& guess,
                         const Constraint& constraint, const NewtonOptions& options) {
  problem.validate();
  check_size(problem, guess.phi, "newton_solve");
  const std::vector<std::size_t> modes = problem.active_modes();
  const std::size_t A = modes.size();
  using Kind = Constraint::Kind;
  const Kind kind = constraint.kind;
  if (kind == Kind::arclength &&
      (static_cast<std::size_t>(constraint.tangent.size()) != A + 1 ||
       static_cast<std::size_t>(constraint.anchor.size()) != A + 1))
    throw DomainError("newton_solve: arclength tangent/anchor have the wrong length");

  CosineSeries phi = guess.phi;
  if (problem.odd_subspace()) phi.make_antisymmetric();
  double c = guess.c;
  if (kind == Kind::fix_amplitude) phi[problem.k] = constraint.s;

  // Unknowns: fix_speed -> all active modes; fix_amplitude -> active modes but
  // the first, plus c; arclength -> all active modes plus c.
  const std::size_t n = kind == Kind::fix_speed ? A : (kind == Kind::fix_amplitude ? A : A + 1);
  const std::size_t first = kind == Kind::fix_amplitude ? 1 : 0;

  auto arclength_defect = [&](const CosineSeries& f_phi, double f_c) {
    return constraint.tangent.dot(pack_state(problem, f_phi, f_c) - constraint.anchor) - constraint.step;
  };
  // Merit: grid residual, plus the bordering row when present.
  auto merit = [&](const CosineSeries& f, const CosineSeries& f_phi, double f_c) {
    double m = grid_max_norm(problem, f);
    if (kind == Kind::arclength) m = std::max(m, std::abs(arclength_defect(f_phi, f_c)));
    return m;
  };

  std::vector<double> history;
  double condition = 0.0;
  CosineSeries F = residual(problem, phi, c);
  double rn = merit(F, phi, c);
  int it = 0;
  for (;; ++it) {
    history.push_back(rn);
    if (!std::isfinite(rn)) throw ConvergenceError("newton_solve: residual is not finite", rn, it);
    if (rn <= options.tol) break;
    if (it >= options.max_iterations)
      throw ConvergenceError("newton_solve: iteration limit reached", rn, it);

    const Eigen::MatrixXd J = jacobian_matrix(problem, phi, c);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd rhs(n);
    for (std::size_t r = 0; r < A; ++r) {
      rhs(r) = -F[modes[r]];
      for (std::size_t q = first; q < A; ++q) B(r, q - first) = J(modes[r] - 1, modes[q] - 1);
      if (kind != Kind::fix_speed) B(r, n - 1) = -phi[modes[r]];
    }
    if (kind == Kind::arclength) {
      for (std::size_t q = 0; q <= A; ++q) B(A, q) = constraint.tangent(q);
      rhs(A) = -arclength_defect(phi, c);
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(B);
    const double rc = lu.rcond();
    condition = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
    if (!(condition <= options.max_condition))
      throw NearSingularError("newton_solve: Jacobian is numerically singular", condition);
    const Eigen::VectorXd delta = lu.solve(rhs);

    // Full Newton step; halve only if it increases the residual.
    double lambda = 1.0;
    for (int bt = 0;; ++bt) {
      CosineSeries trial = phi;
      double trial_c = c;
      for (std::size_t q = first; q < A; ++q) trial[modes[q]] += lambda * delta(q - first);
      if (kind != Kind::fix_speed) trial_c += lambda * delta(n - 1);
      CosineSeries trial_F = residual(problem, trial, trial_c);
      const double trial_rn = merit(trial_F, trial, trial_c);
      if ((std::isfinite(trial_rn) && trial_rn < rn) || bt >= 8) {
        phi = std::move(trial);
        c = trial_c;
        F = std::move(trial_F);
        rn = trial_rn;
        break;
      }
      lambda *= 0.5;
    }
  }

  BranchPoint out = evaluate_point(problem, phi, c);
  out.iterations = it;
  out.condition = condition;
  out.residual_history = std::move(history);
  return out;
}

}  // namespace cusp
