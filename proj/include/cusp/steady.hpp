#pragma once

// Steady residual F(phi, c) = L phi - c phi + n(phi) - mean(n(phi)) on cosine
// series, its Jacobian, and a Newton corrector.

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cusp/nonlinearity.hpp"
#include "cusp/spectral.hpp"

namespace cusp {

struct SteadyProblem {
  SymbolSpec symbol;
  NonlinearitySpec nonlinearity;
  std::size_t N = 256;   // collocation points
  std::size_t M = 64;    // cosine modes
  std::size_t k = 1;     // base wavenumber: unknowns are its multiples (odd multiples for sgn)

  /// Throws DomainError / AliasingError on inconsistent sizes (N >= 4M, k odd for sgn).
  void validate() const;
  Grid grid() const { return Grid(N); }
  bool odd_subspace() const { return nonlinearity.kind == NonlinearityKind::sgn; }
  /// Mode indices carried as unknowns, ascending; the first one is k.
  std::vector<std::size_t> active_modes() const;
  /// A zero series with the right subspace flag.
  CosineSeries zero_series() const;
};

struct BranchPoint {
  CosineSeries phi;
  double c = 0.0;
  double s = 0.0;              // amplitude parameter <phi>_k
  double residual_norm = 0.0;  // grid max-norm of the projected residual
  double max_value = 0.0;      // max of phi over the grid
  double mu_eps = 0.0;         // crest value at speed c
  int iterations = 0;
  double condition = 0.0;      // 1-norm condition estimate of the last Newton matrix
  double symmetry_defect = 0.0;
  std::vector<double> residual_history;
};

/// Residual series (projected onto the active subspace for sgn-antisymmetric input).
CosineSeries residual(const SteadyProblem& problem, const CosineSeries& phi, double c);

struct ResidualReport {
  CosineSeries F;
  double nonlinear_mean = 0.0;     // the removed grid mean of n(phi)
  double symmetry_defect = 0.0;    // even-frequency content removed by the projection
};
ResidualReport residual_with_diagnostics(const SteadyProblem& problem, const CosineSeries& phi,
                                         double c);

/// Max-norm of a series on the problem grid.
double grid_max_norm(const SteadyProblem& problem, const CosineSeries& series);

/// Directional derivative of the residual at (phi, c) along h (c fixed).
CosineSeries jacobian_apply(const SteadyProblem& problem, const CosineSeries& phi, double c,
                            const CosineSeries& h);

/// Full M x M Jacobian in mode coordinates (row/column i <-> mode i+1), assembled
/// from the cosine moments of n'(phi); column j equals jacobian_apply(cos((j+1) .)).
Eigen::MatrixXd jacobian_matrix(const SteadyProblem& problem, const CosineSeries& phi, double c);

/// Fill residual_norm, max_value, mu_eps, s, symmetry_defect for (phi, c).
BranchPoint evaluate_point(const SteadyProblem& problem, const CosineSeries& phi, double c);

/// Active-mode coefficients followed by c.
Eigen::VectorXd pack_state(const SteadyProblem& problem, const CosineSeries& phi, double c);
void unpack_state(const SteadyProblem& problem, const Eigen::VectorXd& u, CosineSeries& phi, double& c);

struct Constraint {
  enum class Kind { fix_speed, fix_amplitude, arclength };
  Kind kind = Kind::fix_speed;
  double s = 0.0;
  // arclength: tangent . (u - anchor) = step, u = pack_state(phi, c).
  Eigen::VectorXd tangent;
  Eigen::VectorXd anchor;
  double step = 0.0;

  static Constraint fix_speed() { return {Kind::fix_speed, 0.0, {}, {}, 0.0}; }
  static Constraint fix_amplitude(double s) { return {Kind::fix_amplitude, s, {}, {}, 0.0}; }
  static Constraint arclength(Eigen::VectorXd tangent, Eigen::VectorXd anchor, double step) {
    return {Kind::arclength, 0.0, std::move(tangent), std::move(anchor), step};
  }
};

struct NewtonOptions {
  double tol = 1e-12;
  int max_iterations = 30;
  double max_condition = 1e14;
};

/// Newton iteration from `guess`. fix_amplitude pins <phi>_k = s and frees c;
/// fix_speed keeps c; arclength frees c and appends the bordering row.
/// Throws ConvergenceError or NearSingularError.
BranchPoint newton_solve(const SteadyProblem& problem, const BranchPoint& guess,
                         const Constraint& constraint, const NewtonOptions& options = {});

}  // namespace cusp
