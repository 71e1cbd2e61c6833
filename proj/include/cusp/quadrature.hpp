#pragma once

#include <cstddef>
#include <vector>

namespace cusp::quad {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule (n >= 1), nodes ascending. Results are cached.
const Rule& gauss_legendre(std::size_t n);

/// Result of a panel sum: the value plus the sum of |w f| for roundoff bounds.
struct PanelSum {
  double value = 0.0;
  double magnitude = 0.0;
};

/// Apply `rule` to f on [a, b].
template <class F>
PanelSum integrate_panel(const Rule& rule, double a, double b, F&& f) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  PanelSum out;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double v = rule.weights[i] * f(mid + half * rule.nodes[i]);
    out.value += v;
    out.magnitude += v < 0 ? -v : v;
  }
  out.value *= half;
  out.magnitude *= half < 0 ? -half : half;
  return out;
}

}  // namespace cusp::quad
