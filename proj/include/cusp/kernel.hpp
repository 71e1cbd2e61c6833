#pragma once

// Periodic convolution kernel of |D|^{-alpha} on the torus:
//   K_alpha(x) = (1/2pi) sum_{k != 0} |k|^{-alpha} e^{ikx}.
// Values come from the Gamma-distribution integral representation
//   K_alpha(x) = 1/(pi Gamma(alpha)) int_0^inf t^{alpha-1} (e^t cos x - 1)
//                                    / (1 - 2 e^t cos x + e^{2t}) dt,
// with an independent truncated Fourier sum kept alongside as an oracle.

#include <cstddef>

namespace cusp {

struct KernelSpec {
  double alpha = 0.5;
  std::size_t quad_nodes = 20;  // Gauss-Legendre nodes per t-panel
  double t_split = 1.0;         // boundary between the graded and the decaying panels
  double t_max = 40.0;          // truncation of the t-integral
  std::size_t fourier_terms = 1'000'000;
  double tolerance = 1e-10;     // relative (to max(1,|value|)) bound on the error estimate

  /// Throws DomainError unless alpha > 0, quad_nodes >= 4 and 0 < t_split < t_max.
  void validate() const;
};

/// A kernel quantity together with an additive error estimate.
struct KernelValue {
  double value = 0.0;
  double error = 0.0;
};

/// gamma_alpha = 1 / (2 Gamma(alpha) sin(pi (1 - alpha) / 2)), the coefficient of
/// |x|^{alpha-1} in the kernel on the real line. Requires 0 < alpha < 1.
double gamma_coefficient(double alpha);

/// K_alpha(x). Dispatches to the closed form -(1/2pi) log(2(1 - cos x)) at alpha = 1.
KernelValue kernel_eval(const KernelSpec& spec, double x);

/// K_alpha(x) through the t-integral only (no alpha = 1 shortcut).
KernelValue kernel_quadrature(const KernelSpec& spec, double x);

/// K_alpha'(x) from the differentiated integral representation.
KernelValue kernel_derivative(const KernelSpec& spec, double x);

enum class TailTreatment {
  /// Plain partial sum; the error field is a rigorous Dirichlet bound on the tail.
  direct,
  /// Partial sum plus an explicit tail from repeated summation by parts
  /// (labelled acceleration); the error field bounds the remaining tail.
  summation_by_parts,
};

struct FourierSum {
  double value = 0.0;
  double tail_bound = 0.0;
  TailTreatment treatment = TailTreatment::direct;
};

/// (1/pi) sum_{k=1}^{M} k^{-alpha} cos(kx). Convergence in M is conditional
/// (the tail only decays like M^{-alpha} / |sin(x/2)|), which `tail_bound` reflects.
FourierSum kernel_fourier_sum(double alpha, double x, std::size_t terms,
                              TailTreatment treatment = TailTreatment::direct);

struct KernelDecomposition {
  double singular = 0.0;  // gamma_alpha |x|^{alpha-1}
  double regular = 0.0;   // K_alpha(x) - singular
  double error = 0.0;
};

/// Split K_alpha(x) on (-pi, pi)\{0} into its singular and regular parts. 0 < alpha < 1.
KernelDecomposition kernel_decompose(const KernelSpec& spec, double x);

/// ||K_alpha||_{L^1(T)} for 0 < alpha <= 1.
KernelValue kernel_l1_norm(const KernelSpec& spec);

/// The unique zero of K_alpha on (0, pi), located by bisection.
double kernel_zero(const KernelSpec& spec);

}  // namespace cusp
