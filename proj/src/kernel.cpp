#include "cusp/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/math/special_functions/zeta.hpp>

#include "cusp/errors.hpp"
#include "cusp/quadrature.hpp"

namespace cusp {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTinyX = 1e-100;

// Reduce to (-pi, pi]; throw on the singular point.
double reduce(double x) {
  if (!std::isfinite(x)) throw DomainError("kernel: abscissa must be finite");
  const double r = std::remainder(x, 2.0 * kPi);
  if (r == 0.0) throw SingularityError("kernel: x is congruent to 0 mod 2pi");
  return r;
}

struct Geometry {
  double s2;     // 1 - cos x = 2 sin^2(x/2)
  double sin_x;
};

Geometry geometry(double x) {
  const double h = std::sin(0.5 * x);
  return {2.0 * h * h, std::sin(x)};
}

// (e^t cos x - 1) / (1 - 2 e^t cos x + e^{2t}) without cancellation.
double ratio(double t, const Geometry& g) {
  const double em = std::expm1(t);
  const double num = em - (1.0 + em) * g.s2;
  const double den = em * em + 2.0 * (1.0 + em) * g.s2;
  return num / den;
}

// e^t (e^{2t} - 1) / den^2, the cos-derivative of `ratio`.
double ratio_dcos(double t, const Geometry& g) {
  const double em = std::expm1(t);
  const double den = em * em + 2.0 * (1.0 + em) * g.s2;
  return (1.0 + em) * em * (2.0 + em) / (den * den);
}

struct Accum {
  double coarse = 0.0;
  double fine = 0.0;
  double magnitude = 0.0;
};

// Integrate t^{alpha-1} g(t) over (0, t_max) with rules of n and 2n nodes.
// Panels on (0, t_split) are geometric in t (ratio 2) down to a floor below the
// scales 1 - cos x and |x|; on each of them u = t^alpha removes the weight.
template <class G>
Accum t_integral(const KernelSpec& spec, double s2, G&& g) {
  const auto& coarse = quad::gauss_legendre(spec.quad_nodes);
  const auto& fine = quad::gauss_legendre(2 * spec.quad_nodes);
  const double a = spec.alpha;
  Accum acc;

  auto weighted = [&](double u) {
    const double t = std::pow(u, 1.0 / a);
    return g(t) / a;
  };
  auto add_u_panel = [&](double t0, double t1) {
    const double u0 = t0 > 0.0 ? std::pow(t0, a) : 0.0;
    const double u1 = std::pow(t1, a);
    const auto c = quad::integrate_panel(coarse, u0, u1, weighted);
    const auto f = quad::integrate_panel(fine, u0, u1, weighted);
    acc.coarse += c.value;
    acc.fine += f.value;
    acc.magnitude += f.magnitude;
  };
  auto plain = [&](double t) { return std::pow(t, a - 1.0) * g(t); };
  auto add_t_panel = [&](double t0, double t1) {
    const auto c = quad::integrate_panel(coarse, t0, t1, plain);
    const auto f = quad::integrate_panel(fine, t0, t1, plain);
    acc.coarse += c.value;
    acc.fine += f.value;
    acc.magnitude += f.magnitude;
  };

  const double floor_t = std::min(spec.t_split, s2) * std::ldexp(1.0, -20);
  double hi = spec.t_split;
  while (hi > floor_t) {
    const double lo = std::max(0.5 * hi, floor_t);
    add_u_panel(lo, hi);
    hi = lo;
  }
  add_u_panel(0.0, hi);

  double lo = spec.t_split;
  while (lo < spec.t_max) {
    const double up = std::min(2.0 * lo, spec.t_max);
    add_t_panel(lo, up);
    lo = up;
  }
  return acc;
}

// int_T^inf t^{alpha-1} e^{-t} dt
double gamma_tail(double alpha, double T) {
  return boost::math::tgamma(alpha, T);
}

void check_accuracy(const char* what, const KernelSpec& spec, const KernelValue& v) {
  const double allowed = spec.tolerance * std::max(1.0, std::abs(v.value));
  if (!(v.error <= allowed)) throw AccuracyError(what, v.error);
}

// Backward difference nabla^j f(m) of f(k) = k^{-alpha}, accurate for large m.
long double backward_difference(double alpha, int j, long double m) {
  if (j == 0) return std::pow(m, -static_cast<long double>(alpha));
  if (m < 20.0L * j) {
    long double s = 0.0L;
    long double binom = 1.0L;
    for (int i = 0; i <= j; ++i) {
      const long double term = binom * std::pow(m - i, -static_cast<long double>(alpha));
      s += (i % 2 == 0) ? term : -term;
      binom = binom * (j - i) / (i + 1);
    }
    return s;
  }
  // f(m - i) = m^{-alpha} sum_r (alpha)_r / r! (i/m)^r; differences kill r < j.
  long double total = 0.0L;
  long double coef = 1.0L;  // (alpha)_r / r!
  long double inv_m_pow = 1.0L;
  for (int r = 0; r < j + 40; ++r) {
    if (r >= j) {
      long double inner = 0.0L;
      long double binom = 1.0L;
      for (int i = 0; i <= j; ++i) {
        const long double term = binom * std::pow(static_cast<long double>(i), r);
        inner += (i % 2 == 0) ? term : -term;
        binom = binom * (j - i) / (i + 1);
      }
      const long double add = coef * inv_m_pow * inner;
      total += add;
      if (r > j + 2 && std::abs(add) < 1e-22L * std::abs(total)) break;
    }
    coef *= (alpha + r) / static_cast<long double>(r + 1);
    inv_m_pow /= m;
  }
  return total * std::pow(m, -static_cast<long double>(alpha));
}

}  // namespace

void KernelSpec::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("KernelSpec: alpha must be > 0");
  if (quad_nodes < 4) throw DomainError("KernelSpec: quad_nodes must be >= 4");
  if (!(t_split > 0.0) || !(t_split < t_max) || !std::isfinite(t_max))
    throw DomainError("KernelSpec: need 0 < t_split < t_max");
  if (fourier_terms < 1) throw DomainError("KernelSpec: fourier_terms must be >= 1");
  if (!(tolerance > 0.0)) throw DomainError("KernelSpec: tolerance must be > 0");
}

double gamma_coefficient(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("gamma_coefficient: alpha must lie in (0, 1)");
  return 1.0 / (2.0 * std::tgamma(alpha) * std::sin(0.5 * kPi * (1.0 - alpha)));
}

KernelValue kernel_quadrature(const KernelSpec& spec, double x) {
  spec.validate();
  const double r = reduce(x);
  if (std::abs(r) < kTinyX) throw AccuracyError("kernel_quadrature: |x| too small to resolve", 1.0);
  const Geometry g = geometry(r);
  const auto acc = t_integral(spec, g.s2, [&](double t) { return ratio(t, g); });
  const double T = spec.t_max;
  const double eT = std::exp(-T);
  const double tail = gamma_tail(spec.alpha, T) * (1.0 + eT) / ((1.0 - eT) * (1.0 - eT));
  const double scale = 1.0 / (kPi * std::tgamma(spec.alpha));
  KernelValue out;
  out.value = scale * acc.fine;
  out.error = scale * (std::abs(acc.fine - acc.coarse) + tail + 4.0 * kEps * acc.magnitude);
  check_accuracy("kernel_eval: quadrature error estimate above tolerance", spec, out);
  return out;
}

KernelValue kernel_eval(const KernelSpec& spec, double x) {
  spec.validate();
  const double r = reduce(x);
  if (spec.alpha == 1.0) {
    const double v = -std::log(std::abs(2.0 * std::sin(0.5 * r))) / kPi;
    return {v, 4.0 * kEps * std::max(1.0, std::abs(v))};
  }
  if (std::abs(r) < kTinyX) {
    // Below the scales the t-panels can resolve; the expansion
    // gamma |x|^{alpha-1} + zeta(alpha)/pi + O(x^2) is exact to rounding there.
    if (spec.alpha > 1.0) throw AccuracyError("kernel_eval: |x| too small to resolve", 1.0);
    const double v = gamma_coefficient(spec.alpha) * std::pow(std::abs(r), spec.alpha - 1.0) +
                     boost::math::zeta(spec.alpha) / kPi;
    return {v, 4.0 * kEps * std::abs(v)};
  }
  return kernel_quadrature(spec, r);
}

KernelValue kernel_derivative(const KernelSpec& spec, double x) {
  spec.validate();
  const double r = reduce(x);
  if (std::abs(r) < kTinyX) throw AccuracyError("kernel_derivative: |x| too small to resolve", 1.0);
  const Geometry g = geometry(r);
  if (spec.alpha == 1.0) {
    const double v = -0.5 / (kPi * std::tan(0.5 * r));
    return {v, 4.0 * kEps * std::max(1.0, std::abs(v))};
  }
  const auto acc = t_integral(spec, g.s2, [&](double t) { return ratio_dcos(t, g); });
  const double T = spec.t_max;
  const double eT = std::exp(-T);
  const double tail =
      gamma_tail(spec.alpha, T) * (1.0 + eT) / ((1.0 - eT) * (1.0 - eT) * (1.0 - eT));
  const double scale = std::abs(g.sin_x) / (kPi * std::tgamma(spec.alpha));
  KernelValue out;
  out.value = -g.sin_x / (kPi * std::tgamma(spec.alpha)) * acc.fine;
  out.error = scale * (std::abs(acc.fine - acc.coarse) + tail + 4.0 * kEps * acc.magnitude);
  check_accuracy("kernel_derivative: quadrature error estimate above tolerance", spec, out);
  return out;
}

FourierSum kernel_fourier_sum(double alpha, double x, std::size_t terms, TailTreatment treatment) {
  if (!(alpha > 0.0)) throw DomainError("kernel_fourier_sum: alpha must be > 0");
  if (terms < 1) throw DomainError("kernel_fourier_sum: need at least one term");
  const double r = reduce(x);
  const long double xl = r;
  const std::complex<long double> w(std::cos(xl), std::sin(xl));
  constexpr std::size_t kBlock = 256;

  long double sum = 0.0L;
  std::complex<long double> z;
  for (std::size_t k = 1; k <= terms; ++k) {
    if ((k - 1) % kBlock == 0) {
      const long double arg = static_cast<long double>(k) * xl;
      z = {std::cos(arg), std::sin(arg)};
    } else {
      z *= w;
    }
    sum += static_cast<long double>(std::pow(static_cast<double>(k), -alpha)) * z.real();
  }

  const double sin_half = std::abs(std::sin(0.5 * r));
  const long double one_minus_z_abs = 2.0L * sin_half;
  FourierSum out;
  out.treatment = treatment;
  // Partial sums of z^k are bounded by 2/|1-z|; Abel summation on a decreasing
  // coefficient sequence then bounds the tail by twice its first term over |1-z|.
  const double rounding = 8.0 * static_cast<double>(terms) *
                          std::numeric_limits<long double>::epsilon();
  if (treatment == TailTreatment::direct) {
    out.value = static_cast<double>(sum / kPi);
    out.tail_bound = std::pow(static_cast<double>(terms) + 1.0, -alpha) / (kPi * sin_half) + rounding;
    return out;
  }

  // Repeated summation by parts: sum_{k>n} f(k) z^k
  //   = sum_{j<J} nabla^j f(n+1+j) z^{n+1+j} / (1-z)^{j+1} + remainder.
  constexpr int J = 6;
  const std::complex<long double> one_minus_z = 1.0L - w;
  std::complex<long double> tail = 0.0L;
  std::complex<long double> denom = one_minus_z;
  const long double n = static_cast<long double>(terms);
  for (int j = 0; j < J; ++j) {
    const long double m = n + 1 + j;
    const long double arg = m * xl;
    const std::complex<long double> zm(std::cos(arg), std::sin(arg));
    tail += backward_difference(alpha, j, m) * zm / denom;
    denom *= one_minus_z;
  }
  const long double rem = 2.0L * std::abs(backward_difference(alpha, J, n + 1 + J)) /
                          std::pow(one_minus_z_abs, static_cast<long double>(J + 1));
  out.value = static_cast<double>((sum + tail.real()) / kPi);
  out.tail_bound = static_cast<double>(rem / kPi) + rounding;
  return out;
}

KernelDecomposition kernel_decompose(const KernelSpec& spec, double x) {
  if (!(spec.alpha > 0.0 && spec.alpha < 1.0))
    throw DomainError("kernel_decompose: alpha must lie in (0, 1)");
  if (!(x > -kPi && x < kPi) || x == 0.0)
    throw DomainError("kernel_decompose: x must lie in (-pi, pi) without 0");
  const KernelValue v = kernel_eval(spec, x);
  KernelDecomposition d;
  d.singular = gamma_coefficient(spec.alpha) * std::pow(std::abs(x), spec.alpha - 1.0);
  d.regular = v.value - d.singular;
  // Nudge by ulps so that singular + regular reproduces the value bit-for-bit
  // whenever the format allows it.
  if (d.singular + d.regular != v.value) {
    double lo = d.regular;
    double hi = d.regular;
    for (int i = 0; i < 8; ++i) {
      lo = std::nextafter(lo, -std::numeric_limits<double>::infinity());
      hi = std::nextafter(hi, std::numeric_limits<double>::infinity());
      if (d.singular + lo == v.value) { d.regular = lo; break; }
      if (d.singular + hi == v.value) { d.regular = hi; break; }
    }
  }
  d.error = v.error;
  return d;
}

double kernel_zero(const KernelSpec& spec) {
  spec.validate();
  if (spec.alpha > 1.0) throw DomainError("kernel_zero: alpha must be <= 1");
  if (spec.alpha == 1.0) return kPi / 3.0;
  double lo = 1e-2;
  while (kernel_eval(spec, lo).value <= 0.0) {
    lo *= 0.1;
    if (lo < 1e-12) throw RootFindError("kernel_zero: no positive value found near 0");
  }
  double hi = kPi;
  if (kernel_eval(spec, hi).value >= 0.0) throw RootFindError("kernel_zero: K(pi) is not negative");
  for (int i = 0; i < 200 && hi - lo > 4.0 * kEps * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (kernel_eval(spec, mid).value > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

KernelValue kernel_l1_norm(const KernelSpec& spec) {
  spec.validate();
  if (spec.alpha > 1.0) throw DomainError("kernel_l1_norm: alpha must lie in (0, 1]");
  using boost::math::quadrature::gauss_kronrod;
  const double x0 = kernel_zero(spec);
  const double delta = std::min(0.25, 0.5 * x0);
  const auto& rule = quad::gauss_legendre(2 * spec.quad_nodes);

  double near_value = 0.0;
  double near_error = 0.0;
  if (spec.alpha == 1.0) {
    // -(1/pi) log(2 sin(x/2)) = -(1/pi) log x - (1/pi) log(2 sin(x/2) / x).
    near_value = (delta - delta * std::log(delta)) / kPi;
    const auto p = quad::integrate_panel(rule, 0.0, delta, [](double x) {
      return -std::log(2.0 * std::sin(0.5 * x) / x) / kPi;
    });
    near_value += p.value;
    near_error = 4.0 * kEps * p.magnitude;
  } else {
    const double g = gamma_coefficient(spec.alpha);
    near_value = g * std::pow(delta, spec.alpha) / spec.alpha;
    double err = 0.0;
    const auto p = quad::integrate_panel(rule, 0.0, delta, [&](double x) {
      const KernelValue v = kernel_eval(spec, x);
      err += v.error;
      return v.value - g * std::pow(x, spec.alpha - 1.0);
    });
    near_value += p.value;
    near_error = delta * err / static_cast<double>(rule.nodes.size()) + 4.0 * kEps * p.magnitude;
  }

  double kernel_err = 0.0;
  auto k = [&](double x) {
    const KernelValue v = kernel_eval(spec, x);
    kernel_err = std::max(kernel_err, v.error);
    return v.value;
  };
  double e1 = 0.0;
  double e2 = 0.0;
  const double positive = gauss_kronrod<double, 31>::integrate(k, delta, x0, 12, 1e-13, &e1);
  const double negative = gauss_kronrod<double, 31>::integrate(k, x0, kPi, 12, 1e-13, &e2);

  KernelValue out;
  out.value = 2.0 * (near_value + positive - negative);
  out.error = 2.0 * (near_error + e1 + e2 + kernel_err * kPi);
  check_accuracy("kernel_l1_norm: error estimate above tolerance", spec, out);
  return out;
}

}  // namespace cusp
