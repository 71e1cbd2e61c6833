#include <cmath>

#include "doctest.h"

#include "cusp/errors.hpp"
#include "cusp/nonlinearity.hpp"
#include "support/oracles.hpp"

using namespace cusp;

TEST_CASE("eps = 0 closed forms") {
  const NonlinearitySpec a{NonlinearityKind::abs, 2.5, 0.0};
  CHECK(n_eval(a, -2.0, 0) == doctest::Approx(std::pow(2.0, 2.5)));
  CHECK(n_eval(a, -2.0, 1) == doctest::Approx(-2.5 * std::pow(2.0, 1.5)));
  CHECK(n_eval(a, 2.0, 2) == doctest::Approx(2.5 * 1.5 * std::sqrt(2.0)));
  const NonlinearitySpec s{NonlinearityKind::sgn, 2.5, 0.0};
  CHECK(n_eval(s, -2.0, 0) == doctest::Approx(-std::pow(2.0, 2.5)));
  CHECK(n_eval(s, -2.0, 1) == doctest::Approx(2.5 * std::pow(2.0, 1.5)));
}

TEST_CASE("regularised forms approach the eps = 0 forms") {
  for (auto kind : {NonlinearityKind::abs, NonlinearityKind::sgn}) {
    const NonlinearitySpec lim{kind, 2.3, 0.0};
    const NonlinearitySpec reg{kind, 2.3, 1e-6};
    for (double x : {-0.8, 0.3, 1.7}) {
      CHECK(n_eval(reg, x, 0) == doctest::Approx(n_eval(lim, x, 0)).epsilon(1e-8));
      // sgn carries an eps^{p-1} offset in n'.
      CHECK(n_eval(reg, x, 1) == doctest::Approx(n_eval(lim, x, 1)).epsilon(1e-6));
    }
  }
}

TEST_CASE("derivatives are consistent with central differences") {
  for (auto kind : {NonlinearityKind::abs, NonlinearityKind::sgn}) {
    for (double p : {1.5, 2.0, 3.2}) {
      const NonlinearitySpec n{kind, p, 0.1};
      for (double x : {-0.7, -0.05, 0.0, 0.2, 1.3}) {
        const double h = 1e-6;
        CHECK(n_eval(n, x, 1) == doctest::Approx((n_eval(n, x + h, 0) - n_eval(n, x - h, 0)) / (2 * h)).epsilon(1e-7));
        CHECK(n_eval(n, x, 2) == doctest::Approx((n_eval(n, x + h, 1) - n_eval(n, x - h, 1)) / (2 * h)).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("Taylor coefficients at 0 match the hand expansion") {
  const double p = 2.5, eps = 0.1;
  const NonlinearitySpec a{NonlinearityKind::abs, p, eps};
  CHECK(n_eval(a, 0.0, 2) / 2.0 == doctest::Approx(oracle::abs_q2(p, eps)));
  const NonlinearitySpec s{NonlinearityKind::sgn, p, eps};
  const double x = 1e-4;
  CHECK(n_eval(s, x, 0) / (x * x * x) == doctest::Approx(oracle::sgn_q3(p, eps)).epsilon(1e-5));
  CHECK(n_eval(s, 0.0, 1) == 0.0);
}

TEST_CASE("small-argument evaluation keeps relative accuracy") {
  const NonlinearitySpec a{NonlinearityKind::abs, 2.5, 1.0};
  const double x = 1e-9;
  CHECK(n_eval(a, x, 0) == doctest::Approx(1.25 * x * x).epsilon(1e-8));
}

TEST_CASE("nonsmooth points") {
  CHECK_THROWS_AS(n_eval({NonlinearityKind::abs, 1.5, 0.0}, 0.0, 2), NonsmoothPointError);
  CHECK_THROWS_AS(n_eval({NonlinearityKind::sgn, 2.0, 0.0}, 0.0, 2), NonsmoothPointError);
  CHECK(n_eval({NonlinearityKind::abs, 2.0, 0.0}, 0.0, 2) == 2.0);
  CHECK(n_eval({NonlinearityKind::sgn, 3.0, 0.0}, 0.0, 2) == 0.0);
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(n_eval({NonlinearityKind::abs, 1.0, 0.0}, 1.0, 0), DomainError);
  CHECK_THROWS_AS(n_eval({NonlinearityKind::abs, 2.0, -1.0}, 1.0, 0), DomainError);
  CHECK_THROWS_AS(n_eval({NonlinearityKind::abs, 2.0, 0.0}, 1.0, 3), DomainError);
  CHECK(parse_nonlinearity_kind("sgn") == NonlinearityKind::sgn);
  CHECK_THROWS_AS(parse_nonlinearity_kind("cubic"), DomainError);
}

TEST_CASE("mu_of_speed inverts the derivative") {
  CHECK(mu_of_speed({NonlinearityKind::abs, 2.0, 0.0}, 1.2) == doctest::Approx(0.6));
  CHECK(mu_of_speed({NonlinearityKind::abs, 3.0, 0.0}, 1.2) == doctest::Approx(std::sqrt(0.4)));
  for (auto kind : {NonlinearityKind::abs, NonlinearityKind::sgn}) {
    for (double p : {1.5, 2.0, 2.718281828}) {
      for (double eps : {1e-3, 0.1, 1.0}) {
        for (double c : {0.5, 1.1, 5.0}) {
          const NonlinearitySpec n{kind, p, eps};
          const double mu = mu_of_speed(n, c);
          CHECK(mu == doctest::Approx(oracle::mu_bisect(kind == NonlinearityKind::sgn, p, eps, c)).epsilon(1e-12));
        }
      }
    }
  }
  CHECK_THROWS_AS(mu_of_speed({NonlinearityKind::abs, 2.0, 0.1}, 0.0), DomainError);
}
