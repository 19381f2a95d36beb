#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "blowup/model.hpp"

using namespace blowup;

namespace {
ModelParams base() {
  ModelParams mp;
  mp.p = 3.0;
  mp.a = 1.0;
  mp.mu = 1.0;
  mp.hbar = 0.04;
  return mp;
}
} // namespace

TEST_CASE("reaction term at reference points") {
  ModelParams mp = base();
  CHECK(eval_F(0.0, mp) == 0.0);
  // F(1) = 1 + 1/log 3, frozen
  CHECK(eval_F(1.0, mp) == doctest::Approx(1.9102392266268373).epsilon(1e-15));
  // mu = 0 reduces to the pure power
  mp.mu = 0.0;
  CHECK(eval_F(2.0, mp) == doctest::Approx(8.0).epsilon(1e-15));
  CHECK(eval_F(1.7, mp) == doctest::Approx(1.7 * 1.7 * 1.7).epsilon(1e-15));
}

TEST_CASE("reaction term rejects bad input") {
  ModelParams mp = base();
  CHECK_THROWS_AS(eval_F(-1.0, mp), std::domain_error);
  CHECK_THROWS_AS(eval_F(std::nan(""), mp), std::domain_error);
  CHECK_THROWS_AS(eval_F(INFINITY, mp), std::domain_error);
}

TEST_CASE("perturbation h and the full F are consistent") {
  ModelParams mp = base();
  for (double u : {0.3, 1.0, 2.5, 7.0, 40.0}) {
    const double up = std::pow(u, mp.p);
    CHECK(eval_F(u, mp) == doctest::Approx(up + eval_h(u, mp)).epsilon(1e-14));
  }
  CHECK(eval_h(0.0, mp) == 0.0);
  // h is odd
  CHECK(eval_h(-2.0, mp) == doctest::Approx(-eval_h(2.0, mp)).epsilon(1e-14));
}

TEST_CASE("h' against a finite-difference oracle") {
  for (double a : {0.1, 1.0, 10.0}) {
    ModelParams mp = base();
    mp.a = a;
    for (double z : {0.4, 1.0, 3.0, 12.0, 100.0}) {
      const double d = 1e-6 * z;
      const double fd = (eval_h(z + d, mp) - eval_h(z - d, mp)) / (2.0 * d);
      CHECK(eval_h_prime(z, mp) == doctest::Approx(fd).epsilon(1e-7));
    }
  }
}

TEST_CASE("H against direct quadrature of h") {
  // trapezoid oracle, independent of the integration-by-parts identity
  for (double a : {0.1, 1.0, 10.0}) {
    ModelParams mp = base();
    mp.a = a;
    for (double z : {0.8, 2.0, 6.0}) {
      const int n = 40000;
      double acc = 0.0;
      for (int i = 0; i < n; ++i) {
        const double x0 = z * i / n;
        const double x1 = z * (i + 1) / n;
        acc += 0.5 * (eval_h(x0, mp) + eval_h(x1, mp)) * (x1 - x0);
      }
      CHECK(eval_H(z, mp) == doctest::Approx(acc).epsilon(1e-7));
    }
  }
  ModelParams mp = base();
  CHECK(eval_H(0.0, mp) == 0.0);
  // H is even
  CHECK(eval_H(-3.0, mp) == doctest::Approx(eval_H(3.0, mp)).epsilon(1e-12));
}

TEST_CASE("kappa and profile constants") {
  ModelParams mp = base();
  CHECK(kappa(mp) == doctest::Approx(0.7071067811865476).epsilon(1e-16));
  CHECK(profile_cp(mp) == doctest::Approx(1.0 / 6.0).epsilon(1e-16));
  CHECK(profile_f(0.0, mp) == doctest::Approx(kappa(mp)).epsilon(1e-16));
  // f(1) = kappa (7/6)^{-1/2}, frozen
  CHECK(profile_f(1.0, mp) ==
        doctest::Approx(0.6546536707079772).epsilon(1e-15));
  mp.p = 2.0;
  CHECK(kappa(mp) == doctest::Approx(1.0).epsilon(1e-16));
}

TEST_CASE("threshold relation M = 8 hbar for the reference data") {
  for (double hb : {0.04, 0.02, 0.01, 0.005}) {
    ModelParams mp = base();
    mp.hbar = hb;
    mp.set_thresholds(4.0);
    CHECK(mp.m0 == doctest::Approx(4.0 * hb).epsilon(1e-16));
    CHECK(mp.m == doctest::Approx(8.0 * hb).epsilon(1e-16));
  }
}

TEST_CASE("parameter validation") {
  ModelParams mp = base();
  CHECK_NOTHROW(mp.validate());
  mp.c_delta = 0.6;
  CHECK_THROWS_AS(mp.validate(), std::invalid_argument);
  mp = base();
  mp.alpha = 1.0;
  CHECK_THROWS_AS(mp.validate(), std::invalid_argument);
  mp = base();
  mp.p = 1.0;
  CHECK_THROWS_AS(mp.validate(), std::invalid_argument);
  mp = base();
  mp.lambda_inv = 1;
  CHECK_THROWS_AS(mp.validate(), std::invalid_argument);
}
