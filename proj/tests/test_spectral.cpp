#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "cusp/errors.hpp"
#include "cusp/spectral.hpp"
#include "support/oracles.hpp"

using namespace cusp;

namespace {
constexpr double kPi = std::numbers::pi;

CosineSeries random_series(std::size_t M, unsigned seed, double decay = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  CosineSeries s(M);
  for (std::size_t k = 1; k <= M; ++k) s[k] = n(rng) / std::pow(static_cast<double>(k), decay);
  return s;
}
}  // namespace

TEST_CASE("grid layout") {
  const Grid g(16);
  CHECK(g.node(0) == doctest::Approx(-kPi));
  CHECK(g.node(g.center()) == doctest::Approx(0.0));
  for (std::size_t j = 0; j < 16; ++j) {
    CHECK(g.node(g.mirror(j)) == doctest::Approx(j == 0 ? -kPi : -g.node(j)));
    CHECK(std::remainder(g.node(g.shift_half(j)) - g.node(j) - kPi, 2.0 * kPi) == doctest::Approx(0.0));
  }
  CHECK_THROWS_AS(Grid(12), DomainError);
  CHECK_THROWS_AS(Grid(2), DomainError);
}

TEST_CASE("synthesis matches direct summation") {
  const CosineSeries s = random_series(40, 3);
  const Grid g(128);
  const std::vector<double> fast = synthesize(s, g);
  const std::vector<double> slow = oracle::synth_direct(s.coeffs, 128);
  for (std::size_t j = 0; j < 128; ++j) CHECK(fast[j] == doctest::Approx(slow[j]).epsilon(1e-12));
  CHECK(s.evaluate(g.node(5)) == doctest::Approx(slow[5]).epsilon(1e-12));
  CHECK_THROWS_AS(synthesize(random_series(65, 1), g), AliasingError);
}

TEST_CASE("sine synthesis matches direct summation") {
  const std::vector<double> b{0.5, -0.25, 0.125, 1.0};
  const Grid g(32);
  const std::vector<double> v = synthesize_sine(b, g);
  for (std::size_t j = 0; j < 32; ++j) {
    double ref = 0.0;
    for (std::size_t m = 1; m <= b.size(); ++m) ref += b[m - 1] * std::sin(m * g.node(j));
    CHECK(v[j] == doctest::Approx(ref).epsilon(1e-13).scale(1.0));
  }
}

TEST_CASE("analysis inverts synthesis and removes the mean") {
  const CosineSeries s = random_series(64, 5);
  const Grid g(256);
  std::vector<double> v = synthesize(s, g);
  for (double& x : v) x += 3.0;
  const AnalysisResult r = analyze_with_diagnostics(v, g, 64);
  CHECK(r.mean == doctest::Approx(3.0).epsilon(1e-13));
  CHECK_FALSE(r.symmetry_warning);
  for (std::size_t k = 1; k <= 64; ++k) CHECK(r.series[k] == doctest::Approx(s[k]).epsilon(1e-12).scale(1.0));
}

TEST_CASE("analysis flags asymmetric input") {
  const Grid g(64);
  std::vector<double> v(64);
  for (std::size_t j = 0; j < 64; ++j) v[j] = std::cos(g.node(j)) + 1e-3 * std::sin(g.node(j));
  const AnalysisResult r = analyze_with_diagnostics(v, g, 8);
  CHECK(r.symmetry_warning);
  CHECK(r.symmetry_deviation == doctest::Approx(1e-3).epsilon(1e-6));
  CHECK(r.series[1] == doctest::Approx(1.0));
}

TEST_CASE("cosine moments of a product give the Jacobian stencil") {
  const Grid g(64);
  std::vector<double> v(64);
  for (std::size_t j = 0; j < 64; ++j) v[j] = std::cos(3.0 * g.node(j)) * std::cos(5.0 * g.node(j));
  const std::vector<double> c = cosine_moments(v, g);
  CHECK(c.size() == 33);
  CHECK(c[2] == doctest::Approx(0.5));
  CHECK(c[8] == doctest::Approx(0.5));
  CHECK(std::abs(c[4]) < 1e-15);
}

TEST_CASE("symbols") {
  SymbolSpec neg{SymbolFamily::neg_order, 0.5};
  CHECK(neg(4.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(neg(0.0), DomainError);
  SymbolSpec wh{SymbolFamily::whitham_power, 1.0};
  CHECK(wh(0.0) == 1.0);
  CHECK(wh(2.0) == doctest::Approx(std::tanh(2.0) / 2.0));
  SymbolSpec be{SymbolFamily::bessel, 2.0};
  CHECK(be(3.0) == doctest::Approx(0.1));
  CHECK_THROWS_AS((SymbolSpec{SymbolFamily::neg_order, -1.0}.validate()), DomainError);
  CHECK(parse_symbol_family(to_string(SymbolFamily::bessel)) == SymbolFamily::bessel);
  CHECK_THROWS_AS(parse_symbol_family("kdv"), DomainError);
  const CosineSeries s = random_series(10, 9);
  const CosineSeries t = apply_symbol(s, neg);
  for (std::size_t k = 1; k <= 10; ++k) CHECK(t[k] == doctest::Approx(s[k] / std::sqrt(double(k))));
}

TEST_CASE("antisymmetric subspace") {
  CosineSeries s = random_series(12, 2);
  CHECK(s.even_defect() > 0.0);
  s.make_antisymmetric();
  CHECK(s.antisymmetric);
  CHECK(s.even_defect() == 0.0);
  const Grid g(64);
  const std::vector<double> v = synthesize(s, g);
  for (std::size_t j = 0; j < 64; ++j) CHECK(std::abs(v[g.shift_half(j)] + v[j]) < 1e-13);
  CHECK(s.resized(20).size() == 20);
  CHECK(s.resized(5)[5] == s[5]);
}

TEST_CASE("dyadic partition of unity") {
  for (double xi : {0.0, 0.5, 1.0, 1.7, 3.0, 10.0, 123.4}) {
    double total = 0.0;
    for (std::size_t j = 0; j < 20; ++j) total += partition_weight(j, xi);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(partition_cutoff(0.5) == 1.0);
  CHECK(partition_cutoff(2.5) == 0.0);
  CHECK(partition_cutoff(1.5) == doctest::Approx(0.5));
  // rho_j is supported on [2^{j-1}, 2^{j+1}].
  CHECK(partition_weight(3, 3.9) == 0.0);
  CHECK(partition_weight(3, 16.1) == 0.0);
  CHECK(partition_weight(3, 8.0) == doctest::Approx(1.0));
}

TEST_CASE("Zygmund norm of single modes and monotonicity in s") {
  for (double s : {0.0, 0.5, 1.3}) {
    CosineSeries c(16);
    c[8] = 1.0;
    CHECK(zygmund_norm(c, s) == doctest::Approx(std::pow(8.0, s)).epsilon(1e-12));
  }
  const CosineSeries r = random_series(64, 4, 2.0);
  CHECK(zygmund_norm(r, 0.2) <= zygmund_norm(r, 0.8));
  CHECK_THROWS_AS(zygmund_norm(r, -1.0), DomainError);
}

TEST_CASE("smoothing: |D|^{-alpha} raises the Zygmund exponent by alpha") {
  // A series with a_k = k^{-1.5} sits in C*^{0.5}; after the multiplier its
  // C*^{0.5+alpha} norm stays comparable to the C*^{0.5} norm of the input.
  CosineSeries c(512);
  for (std::size_t k = 1; k <= 512; ++k) c[k] = std::pow(double(k), -1.5);
  const SymbolSpec m{SymbolFamily::neg_order, 0.5};
  const double before = zygmund_norm(c, 0.5);
  const double after = zygmund_norm(apply_symbol(c, m), 1.0);
  CHECK(after < 4.0 * before);
  CHECK(after > 0.25 * before);
}

TEST_CASE("next_pow2") {
  CHECK(next_pow2(1) == 1);
  CHECK(next_pow2(5) == 8);
  CHECK(next_pow2(64) == 64);
}
