#include "cusp/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cusp/errors.hpp"

namespace cusp {
namespace {

double sign(double x) { return (x > 0.0) - (x < 0.0); }

double abs_eval(double p, double e, double x, int order) {
  const double a = std::abs(x);
  if (e == 0.0) {
    switch (order) {
      case 0: return std::pow(a, p);
      case 1: return p * sign(x) * std::pow(a, p - 1.0);
      default:
        if (a == 0.0) {
          if (p < 2.0) throw NonsmoothPointError("n'' of |x|^p is unbounded at 0 for p < 2");
          return p == 2.0 ? 2.0 : 0.0;
        }
        return p * (p - 1.0) * std::pow(a, p - 2.0);
    }
  }
  const double q = x * x + e * e;
  switch (order) {
    case 0: return std::pow(e, p) * std::expm1(0.5 * p * std::log1p((a / e) * (a / e)));
    case 1: return p * x * std::pow(q, 0.5 * p - 1.0);
    default: return p * std::pow(q, 0.5 * p - 2.0) * ((p - 1.0) * x * x + e * e);
  }
}

double sgn_eval(double p, double e, double x, int order) {
  const double a = std::abs(x);
  if (e == 0.0) {
    switch (order) {
      case 0: return x * std::pow(a, p - 1.0);
      case 1: return p * std::pow(a, p - 1.0);
      default:
        if (a == 0.0) {
          if (p <= 2.0) throw NonsmoothPointError("n'' of x|x|^{p-1} is not defined at 0 for p <= 2");
          return 0.0;
        }
        return p * (p - 1.0) * sign(x) * std::pow(a, p - 2.0);
    }
  }
  const double q = x * x + e * e;
  const double r = (a / e) * (a / e);
  switch (order) {
    case 0: return x * std::pow(e, p - 1.0) * std::expm1(0.5 * (p - 1.0) * std::log1p(r));
    case 1:
      return std::pow(e, p - 1.0) * std::expm1(0.5 * (p - 1.0) * std::log1p(r)) +
             (p - 1.0) * x * x * std::pow(q, 0.5 * (p - 3.0));
    default: return (p - 1.0) * x * std::pow(q, 0.5 * (p - 5.0)) * (p * x * x + 3.0 * e * e);
  }
}

}  // namespace

NonlinearityKind parse_nonlinearity_kind(const std::string& name) {
  if (name == "abs") return NonlinearityKind::abs;
  if (name == "sgn") return NonlinearityKind::sgn;
  throw DomainError("unknown nonlinearity kind '" + name + "'");
}

std::string to_string(NonlinearityKind kind) { return kind == NonlinearityKind::abs ? "abs" : "sgn"; }

void NonlinearitySpec::validate() const {
  if (!(p > 1.0) || !std::isfinite(p)) throw DomainError("NonlinearitySpec: p must be > 1");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw DomainError("NonlinearitySpec: eps must be >= 0");
}

double n_eval(const NonlinearitySpec& spec, double x, int order) {
  spec.validate();
  if (order < 0 || order > 2) throw DomainError("n_eval: order must be 0, 1 or 2");
  return spec.kind == NonlinearityKind::abs ? abs_eval(spec.p, spec.eps, x, order)
                                            : sgn_eval(spec.p, spec.eps, x, order);
}

double mu_of_speed(const NonlinearitySpec& spec, double c) {
  spec.validate();
  if (!(c > 0.0) || !std::isfinite(c)) throw DomainError("mu_of_speed: c must be > 0");
  const double p = spec.p;
  if (spec.eps == 0.0) return std::pow(c / p, 1.0 / (p - 1.0));

  // (n^eps)' is continuous, vanishes at 0 and increases on (0, inf).
  auto g = [&](double x) { return n_eval(spec, x, 1) - c; };
  double lo = 0.0;
  double hi = std::max(1.0, std::pow(2.0 * c / p, 1.0 / (p - 1.0)) + spec.eps);
  const double cap = 1e6 * hi;
  while (g(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > cap) throw RootFindError("mu_of_speed: no bracket below the cap");
  }
  while (hi - lo > 1e-3 * hi) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) < 0.0 ? lo : hi) = mid;
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 60; ++i) {
    const double f = g(x);
    if (f == 0.0) return x;
    (f < 0.0 ? lo : hi) = x;
    const double d = n_eval(spec, x, 2);
    double next = x - f / d;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - x);
    x = next;
    if (step <= 1e-14 * x) return x;
  }
  if (hi - lo <= 1e-12 * hi) return x;
  throw RootFindError("mu_of_speed: Newton polish did not converge");
}

}  // namespace cusp
