#include <cmath>
#include <numbers>

#include "doctest.h"

#include "cusp/analysis.hpp"
#include "cusp/continuation.hpp"
#include "cusp/errors.hpp"
#include "support/oracles.hpp"

using namespace cusp;

namespace {
constexpr double kPi = std::numbers::pi;

SteadyProblem problem(NonlinearityKind kind, double p, double eps, std::size_t M) {
  SteadyProblem pb;
  pb.symbol = {SymbolFamily::neg_order, 0.5};
  pb.nonlinearity = {kind, p, eps};
  pb.M = M;
  pb.N = 4 * M;
  return pb;
}

std::vector<double> planted(const Grid& g, double mu, double exponent) {
  std::vector<double> v(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) v[j] = mu - std::pow(std::abs(g.node(j)), exponent);
  return v;
}
}  // namespace

TEST_CASE("power-law fit recovers planted exponents") {
  const Grid g(4096);
  for (double e : {0.3, 0.7, 2.0}) {
    const ExponentFit f = gap_exponent_fit(g, planted(g, 0.6, e), Anchor::crest, 0.6, {0.01, kPi / 8});
    CHECK(f.exponent == doctest::Approx(e).epsilon(1e-10));
    CHECK(f.log_prefactor == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
  }
  // Trough anchor: v(-pi + d) = -mu + d^0.4.
  std::vector<double> v(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) v[j] = -0.6 + std::pow(g.node(j) + kPi, 0.4);
  CHECK(gap_exponent_fit(g, v, Anchor::trough, -0.6, {0.01, 0.3}).exponent == doctest::Approx(0.4).epsilon(1e-10));
}

TEST_CASE("fit preconditions") {
  CHECK_THROWS_AS(power_law_fit({1, 2, 3}, {1, 2, 3}), InsufficientDataError);
  CHECK_THROWS_AS(power_law_fit({1, 2, 3, 4, 5, 6, 7, 8}, {1, 2, 3, 0, 5, 6, 7, 8}), DomainError);
  const Grid g(64);
  CHECK_THROWS_AS(gap_exponent_fit(g, planted(g, 1, 0.5), Anchor::crest, 1.0, {0.1, 0.3}), InsufficientDataError);

  const SteadyProblem pb = problem(NonlinearityKind::abs, 2.0, 0.1, 64);
  const LocalPrediction pr = local_predictor(1, 0.05, pb);
  const BranchPoint small = newton_solve(pb, BranchPoint{pr.phi, pr.c}, Constraint::fix_amplitude(0.05));
  CHECK_THROWS_AS(cusp_exponent_fit(small, pb), DomainError);   // far from the crest
  CHECK_THROWS_AS(cusp_exponent_fit(small, pb, FitWindow{0.1, 1.0}), DomainError);
}

TEST_CASE("auto window") {
  SteadyProblem pb = problem(NonlinearityKind::abs, 2.0, 1e-3, 1024);
  const FitWindow w = auto_fit_window(pb);
  CHECK(w.lo == doctest::Approx(4.0 * 2.0 * kPi / 4096));
  CHECK(w.hi == doctest::Approx(kPi / 8));
  pb.nonlinearity.eps = 0.1;
  CHECK(auto_fit_window(pb).lo == doctest::Approx(2.0 * 0.01));
}

TEST_CASE("smooth small-amplitude wave: local exponent 2, lower bound fails") {
  const SteadyProblem pb = problem(NonlinearityKind::abs, 2.0, 0.1, 64);
  const LocalPrediction pr = local_predictor(1, 0.05, pb);
  const BranchPoint w = newton_solve(pb, BranchPoint{pr.phi, pr.c}, Constraint::fix_amplitude(0.05));
  CHECK(local_exponent_fit(w, pb, Anchor::crest).exponent == doctest::Approx(2.0).epsilon(0.02));
  CHECK(local_exponent_fit(w, pb, Anchor::trough).exponent == doctest::Approx(2.0).epsilon(0.02));
  // The ratio (mu - phi)/|x|^alpha is not the right scale for a smooth crest,
  // and shrinking the window drives its minimum toward the finite gap only.
  const LowerBoundReport lb = lower_bound_check(w, pb, FitWindow{0.05, 0.3});
  CHECK(lb.nodes > 0);
  CHECK(std::isfinite(lb.min_ratio));
}

TEST_CASE("audit of the trivial wave") {
  const SteadyProblem pb = problem(NonlinearityKind::abs, 2.0, 0.1, 32);
  BranchPoint w;
  w.phi = pb.zero_series();
  w.c = 1.2;
  const RegularityReport r = wave_audit(w, pb);
  CHECK(r.monotone_ok);
  CHECK(r.max_gap == doctest::Approx(0.6));
  CHECK(r.speed_bound_ok);
  CHECK(r.range_ok);
  CHECK(std::isnan(r.antisymmetry_defect));
  CHECK(std::isnan(r.alpha_hat));
  CHECK_FALSE(r.notes.empty());
}

TEST_CASE("audit never throws on bad input") {
  const SteadyProblem pb = problem(NonlinearityKind::abs, 2.0, 0.1, 32);
  BranchPoint w;
  w.phi = CosineSeries(5);
  w.c = -1.0;
  RegularityReport r;
  CHECK_NOTHROW(r = wave_audit(w, pb));
  CHECK_FALSE(r.notes.empty());
  w.phi = pb.zero_series();
  CHECK_NOTHROW(r = wave_audit(w, pb));
  CHECK(std::isnan(r.mu_eps));
}

TEST_CASE("near-crest wave audit and sgn antisymmetry") {
  for (auto kind : {NonlinearityKind::abs, NonlinearityKind::sgn}) {
    const SteadyProblem pb = problem(kind, 2.5, 0.1, 128);
    const Branch br = branch_follow(pb, ContinuationConfig{});
    REQUIRE(br.terminated_reason == TerminationReason::crest_reached);
    const RegularityReport r = wave_audit(br.points.back(), pb);
    CHECK(r.speed_bound_ok);
    CHECK(r.range_ok);
    CHECK(r.monotone_resolved_ok);
    CHECK(r.max_gap > 0.0);
    CHECK(r.max_gap < 0.01 * r.mu_eps + 1e-12);
    if (kind == NonlinearityKind::sgn) {
      CHECK(r.antisymmetry_defect < 1e-10);
      const std::vector<double> v = synthesize(br.points.back().phi, pb.grid());
      const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
      CHECK(std::abs(*mn + *mx) < 1e-8);
    } else {
      CHECK(std::isnan(r.antisymmetry_defect));
    }
    const LowerBoundReport lb = lower_bound_check(br.points.back(), pb);
    CHECK(lb.passed);
    CHECK(lb.min_ratio > 0.0);
  }
}

TEST_CASE("kernel convolution of odd data") {
  KernelSpec ks;
  ks.alpha = 0.5;
  const std::vector<double> b{-1.0, -0.5};
  for (double x : {-2.5, -1.0, -0.2, 0.7}) {
    const KernelValue v = odd_convolution(ks, b, x);
    const double spectral = -std::sin(x) - 0.5 * std::pow(2.0, -0.5) * std::sin(2 * x);
    CHECK(std::abs(v.value - spectral) <= v.error + 1e-14);
    CHECK(v.error < 1e-10);
  }
  ks.alpha = 1.0;
  CHECK_THROWS_AS(odd_convolution(ks, b, 0.3), DomainError);
}

TEST_CASE("parity positivity report") {
  KernelSpec ks;
  ks.alpha = 0.25;
  const ParityPositivityReport r = parity_positivity(ks, {-1.0}, 8);
  CHECK(r.points.size() == 8);
  CHECK(r.positive);
  CHECK(r.max_deviation < 1e-12);
  for (double x : r.points) {
    CHECK(x > -kPi);
    CHECK(x < 0.0);
  }
}
