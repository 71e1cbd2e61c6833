#pragma once

// The two nonlinearity families and their analytic regularisations:
//   abs: n(x) = |x|^p,        n^eps(x) = (x^2 + eps^2)^{p/2} - eps^p
//   sgn: n(x) = x |x|^{p-1},  n^eps(x) = x ((x^2 + eps^2)^{(p-1)/2} - eps^{p-1})

#include <string>

namespace cusp {

enum class NonlinearityKind { abs, sgn };

NonlinearityKind parse_nonlinearity_kind(const std::string& name);
std::string to_string(NonlinearityKind kind);

struct NonlinearitySpec {
  NonlinearityKind kind = NonlinearityKind::abs;
  double p = 2.0;
  double eps = 0.0;

  /// Throws DomainError unless p > 1 and eps >= 0.
  void validate() const;
};

/// n^eps(x) and its first two derivatives (order 0, 1, 2) in closed form.
/// With eps = 0 the second derivative at x = 0 is unbounded (abs, p < 2) or
/// undefined (sgn, p <= 2); both raise NonsmoothPointError.
double n_eval(const NonlinearitySpec& spec, double x, int order = 0);

/// Crest value: (c/p)^{1/(p-1)} when eps = 0, otherwise the first positive root
/// of (n^eps)'(x) = c (bracketing, bisection, then Newton).
double mu_of_speed(const NonlinearitySpec& spec, double c);

}  // namespace cusp
