#include "cusp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <utility>

#include <fftw3.h>

#include "cusp/errors.hpp"

namespace cusp {
namespace {

constexpr double kPi = std::numbers::pi;

// Plans are created once per (kind, size) under a lock and executed with the
// new-array interface, which FFTW documents as thread-safe.
fftw_plan plan_for(fftw_r2r_kind kind, int n) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, fftw_plan> cache;
  std::lock_guard lock(mutex);
  const auto key = std::make_pair(static_cast<int>(kind), n);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<double> in(static_cast<std::size_t>(n)), out(static_cast<std::size_t>(n));
  fftw_plan p = fftw_plan_r2r_1d(n, in.data(), out.data(), kind, FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (p == nullptr) throw Error("spectral: FFTW plan creation failed");
  cache.emplace(key, p);
  return p;
}

std::vector<double> r2r(fftw_r2r_kind kind, std::vector<double> in) {
  std::vector<double> out(in.size());
  fftw_execute_r2r(plan_for(kind, static_cast<int>(in.size())), in.data(), out.data());
  return out;
}

}  // namespace

void CosineSeries::make_antisymmetric() {
  for (std::size_t k = 2; k <= coeffs.size(); k += 2) (*this)[k] = 0.0;
  antisymmetric = true;
}

double CosineSeries::even_defect() const {
  double d = 0.0;
  for (std::size_t k = 2; k <= coeffs.size(); k += 2) d = std::max(d, std::abs((*this)[k]));
  return d;
}

CosineSeries CosineSeries::resized(std::size_t M) const {
  CosineSeries out(M, antisymmetric);
  std::copy_n(coeffs.begin(), std::min(M, coeffs.size()), out.coeffs.begin());
  return out;
}

double CosineSeries::evaluate(double x) const {
  double s = 0.0;
  for (std::size_t k = coeffs.size(); k >= 1; --k) s += coeffs[k - 1] * std::cos(static_cast<double>(k) * x);
  return s;
}

Grid::Grid(std::size_t N) : N_(N) {
  if (N < 4 || (N & (N - 1)) != 0) throw DomainError("Grid: N must be a power of two >= 4");
}

double Grid::node(std::size_t j) const {
  return 2.0 * kPi * static_cast<double>(j) / static_cast<double>(N_) - kPi;
}

std::vector<double> Grid::nodes() const {
  std::vector<double> x(N_);
  for (std::size_t j = 0; j < N_; ++j) x[j] = node(j);
  return x;
}

double SymbolSpec::operator()(double k) const {
  const double a = std::abs(k);
  switch (family) {
    case SymbolFamily::neg_order:
      if (a == 0.0) throw DomainError("neg_order symbol is undefined at k = 0");
      return std::pow(a, -alpha);
    case SymbolFamily::whitham_power:
      if (a == 0.0) return 1.0;
      return std::pow(std::tanh(a) / a, alpha);
    case SymbolFamily::bessel:
      return std::pow(1.0 + a * a, -0.5 * alpha);
  }
  return 0.0;
}

void SymbolSpec::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError("SymbolSpec: alpha must be > 0");
}

SymbolFamily parse_symbol_family(const std::string& name) {
  if (name == "neg_order") return SymbolFamily::neg_order;
  if (name == "whitham_power") return SymbolFamily::whitham_power;
  if (name == "bessel") return SymbolFamily::bessel;
  throw DomainError("unknown symbol family '" + name + "'");
}

std::string to_string(SymbolFamily family) {
  switch (family) {
    case SymbolFamily::neg_order: return "neg_order";
    case SymbolFamily::whitham_power: return "whitham_power";
    case SymbolFamily::bessel: return "bessel";
  }
  return "?";
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

std::vector<double> synthesize(const CosineSeries& series, const Grid& grid) {
  const std::size_t N = grid.size();
  const std::size_t M = series.size();
  if (N < 2 * M) throw AliasingError("synthesize: grid needs N >= 2M");
  const std::size_t h = N / 2;
  std::vector<double> A(h + 1, 0.0);
  for (std::size_t k = 1; k <= M; ++k) A[k] = (k == h) ? series[k] : 0.5 * series[k];
  const std::vector<double> y = r2r(FFTW_REDFT00, std::move(A));
  std::vector<double> v(N);
  for (std::size_t j = 0; j <= h; ++j) {
    v[(j + h) % N] = y[j];
    v[h - j] = y[j];
  }
  return v;
}

std::vector<double> synthesize_sine(const std::vector<double>& b, const Grid& grid) {
  const std::size_t N = grid.size();
  const std::size_t M = b.size();
  if (N < 2 * M) throw AliasingError("synthesize_sine: grid needs N >= 2M");
  const std::size_t h = N / 2;
  // RODFT00 of length h-1: Y_k = 2 sum_j X_j sin(pi (j+1)(k+1) / h).
  std::vector<double> X(h - 1, 0.0);
  for (std::size_t k = 1; k <= std::min(M, h - 1); ++k) X[k - 1] = 0.5 * b[k - 1];
  const std::vector<double> y = r2r(FFTW_RODFT00, std::move(X));
  std::vector<double> v(N, 0.0);
  for (std::size_t j = 1; j < h; ++j) {
    v[h + j] = y[j - 1];
    v[h - j] = -y[j - 1];
  }
  return v;
}

std::vector<double> cosine_moments(const std::vector<double>& values, const Grid& grid) {
  const std::size_t N = grid.size();
  if (values.size() != N) throw DomainError("cosine_moments: values must match the grid");
  const std::size_t h = N / 2;
  std::vector<double> y(h + 1);
  for (std::size_t j = 0; j <= h; ++j) {
    const std::size_t i = (j + h) % N;
    y[j] = 0.5 * (values[i] + values[grid.mirror(i)]);
  }
  std::vector<double> c = r2r(FFTW_REDFT00, std::move(y));
  const double scale = 2.0 / static_cast<double>(N);
  for (double& v : c) v *= scale;
  return c;
}

AnalysisResult analyze_with_diagnostics(const std::vector<double>& values, const Grid& grid,
                                        std::size_t M) {
  const std::size_t N = grid.size();
  if (values.size() != N) throw DomainError("analyze: values must match the grid");
  if (2 * M > N) throw AliasingError("analyze: grid needs N >= 2M");
  AnalysisResult out;
  for (std::size_t j = 0; j < N; ++j)
    out.symmetry_deviation =
        std::max(out.symmetry_deviation, 0.5 * std::abs(values[j] - values[grid.mirror(j)]));
  out.symmetry_warning = out.symmetry_deviation > 1e-8;
  const std::vector<double> c = cosine_moments(values, grid);
  out.mean = 0.5 * c[0];
  out.series = CosineSeries(M);
  for (std::size_t k = 1; k <= M; ++k) out.series[k] = (k == N / 2) ? 0.5 * c[k] : c[k];
  return out;
}

CosineSeries analyze(const std::vector<double>& values, const Grid& grid, std::size_t M) {
  return analyze_with_diagnostics(values, grid, M).series;
}

CosineSeries apply_symbol(const CosineSeries& series, const SymbolSpec& symbol) {
  CosineSeries out = series;
  for (std::size_t k = 1; k <= out.size(); ++k) out[k] *= symbol(static_cast<double>(k));
  return out;
}

double partition_cutoff(double r) {
  if (r <= 1.0) return 1.0;
  if (r >= 2.0) return 0.0;
  const double t = r - 1.0;
  const double t2 = t * t;
  return 1.0 - t2 * t2 * (35.0 - 84.0 * t + 70.0 * t2 - 20.0 * t2 * t);
}

double partition_weight(std::size_t j, double xi) {
  const double a = std::abs(xi);
  if (j == 0) return partition_cutoff(a);
  const double scale = std::ldexp(1.0, static_cast<int>(j));
  return partition_cutoff(a / scale) - partition_cutoff(2.0 * a / scale);
}

double zygmund_norm(const CosineSeries& series, double s) {
  if (!(s >= 0.0)) throw DomainError("zygmund_norm: s must be >= 0");
  const std::size_t M = series.size();
  if (M == 0) return 0.0;
  const Grid fine(next_pow2(std::max<std::size_t>(8 * M, 16)));
  double norm = 0.0;
  for (std::size_t j = 0;; ++j) {
    const double lower = j == 0 ? 0.0 : std::ldexp(1.0, static_cast<int>(j) - 1);
    if (lower > static_cast<double>(M)) break;
    CosineSeries block(M);
    bool any = false;
    for (std::size_t k = 1; k <= M; ++k) {
      const double w = partition_weight(j, static_cast<double>(k));
      block[k] = w * series[k];
      any = any || block[k] != 0.0;
    }
    if (!any) continue;
    const std::vector<double> v = synthesize(block, fine);
    double mx = 0.0;
    for (double x : v) mx = std::max(mx, std::abs(x));
    norm = std::max(norm, std::pow(2.0, static_cast<double>(j) * s) * mx);
  }
  return norm;
}

}  // namespace cusp
