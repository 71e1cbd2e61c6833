#pragma once

// Even, zero-mean periodic functions as cosine series, grid transforms,
// Fourier multipliers and dyadic Hölder-Zygmund block norms.

#include <cstddef>
#include <string>
#include <vector>

namespace cusp {

/// phi(x) = sum_{k=1}^{M} a_k cos(kx); coeffs[k-1] = a_k.
struct CosineSeries {
  std::vector<double> coeffs;
  bool antisymmetric = false;  // a_k = 0 for every even k

  CosineSeries() = default;
  explicit CosineSeries(std::size_t M, bool antisym = false) : coeffs(M, 0.0), antisymmetric(antisym) {}

  std::size_t size() const { return coeffs.size(); }
  double& operator[](std::size_t k) { return coeffs[k - 1]; }  // 1-based mode index
  double operator[](std::size_t k) const { return coeffs[k - 1]; }

  /// Zero every even mode and set the flag.
  void make_antisymmetric();
  /// Largest |a_k| over even k.
  double even_defect() const;
  /// Truncate or zero-pad to M modes.
  CosineSeries resized(std::size_t M) const;
  /// Value at an arbitrary abscissa by direct summation.
  double evaluate(double x) const;
};

/// N equispaced nodes x_j = 2 pi j / N - pi, j = 0..N-1, N a power of two >= 4.
class Grid {
public:
  explicit Grid(std::size_t N);
  std::size_t size() const { return N_; }
  double node(std::size_t j) const;
  std::vector<double> nodes() const;
  /// Index of the node at -x_j (j -> N - j mod N).
  std::size_t mirror(std::size_t j) const { return (N_ - j) % N_; }
  /// Index of the node at x_j + pi.
  std::size_t shift_half(std::size_t j) const { return (j + N_ / 2) % N_; }
  /// Index of x = 0.
  std::size_t center() const { return N_ / 2; }

private:
  std::size_t N_;
};

enum class SymbolFamily { neg_order, whitham_power, bessel };

struct SymbolSpec {
  SymbolFamily family = SymbolFamily::neg_order;
  double alpha = 0.5;

  /// m(k); m(0) = 1 for the inhomogeneous families, k = 0 is rejected for neg_order.
  double operator()(double k) const;
  void validate() const;
};

SymbolFamily parse_symbol_family(const std::string& name);
std::string to_string(SymbolFamily family);

/// Grid values of the series, via a type-I discrete cosine transform.
/// Requires N >= 2M, otherwise AliasingError.
std::vector<double> synthesize(const CosineSeries& series, const Grid& grid);

/// Grid values of the odd function sum_{k=1}^{M} b_k sin(kx) (b[k-1] = b_k),
/// via a type-I discrete sine transform. Requires N >= 2M.
std::vector<double> synthesize_sine(const std::vector<double>& b, const Grid& grid);

struct AnalysisResult {
  CosineSeries series;
  double mean = 0.0;                 // removed grid mean
  double symmetry_deviation = 0.0;   // max |v_j - v_{-j}| / 2
  bool symmetry_warning = false;     // deviation above 1e-8
};

/// a_k = (2/N) sum_j v_j cos(k x_j), k = 1..M (1/N for k = N/2), after
/// symmetrisation v <- (v + v(-.))/2; the mean never enters for k >= 1.
AnalysisResult analyze_with_diagnostics(const std::vector<double>& values, const Grid& grid,
                                        std::size_t M);
CosineSeries analyze(const std::vector<double>& values, const Grid& grid, std::size_t M);

/// Raw discrete cosine moments c_m = (2/N) sum_j v_j cos(m x_j), m = 0..N/2,
/// of the symmetrised values.
std::vector<double> cosine_moments(const std::vector<double>& values, const Grid& grid);

/// a_k <- m(k) a_k.
CosineSeries apply_symbol(const CosineSeries& series, const SymbolSpec& symbol);

/// Smooth cut-off: 1 on [0, 1], 0 on [2, inf), 1 - S3(r - 1) in between with the
/// order-3 smoothstep S3(t) = t^4 (35 - 84 t + 70 t^2 - 20 t^3).
double partition_cutoff(double r);

/// rho_0(xi) = psi(|xi|), rho_j(xi) = psi(|xi|/2^j) - psi(|xi|/2^{j-1}) for j >= 1.
double partition_weight(std::size_t j, double xi);

/// sup_j 2^{js} ||rho_j(D) phi||_inf with block maxima taken on a grid of at least 8M nodes.
double zygmund_norm(const CosineSeries& series, double s);

/// Smallest power of two >= n (n >= 1).
std::size_t next_pow2(std::size_t n);

}  // namespace cusp
