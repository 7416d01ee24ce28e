#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ppdim/dimensions.hpp"
#include "ppdim/oracle.hpp"

using namespace ppdim;

TEST_CASE("quadrature closed forms") {
  const AtomicMeasure one({{0.0, 1.0}});
  for (double eps : {1e-3, 0.1, 3.0}) {
    const auto r = quad_box_integral(one, 0.5, eps);
    CHECK(r.converged);
    CHECK(std::abs(r.value - 2.0) <= 1e-7);
  }
  const AtomicMeasure two({{0.0, 0.5}, {1.0, 0.5}});
  const auto r = quad_box_integral(two, 0.5, 0.1);
  CHECK(r.value == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("quadrature against the sweep on random measures") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto mu = random_measure(seed, 100);
    for (double q : {0.3, 2.0}) {
      const double eps = 0.004 * static_cast<double>(seed);
      const auto r = quad_box_integral(mu, q, eps);
      REQUIRE(r.converged);
      const double fast = box_integral(mu, q, eps);
      CHECK(std::abs(fast - r.value) / r.value <= 1e-6);
    }
  }
}

TEST_CASE("naive ball mass") {
  const AtomicMeasure two({{0.0, 0.5}, {1.0, 0.5}});
  CHECK(naive_ball_mass(two, 0.5, 0.5) == 0.0);
  CHECK(naive_ball_mass(two, 0.5, 0.6) == 1.0);
  const auto mu = random_measure(3, 50);
  CHECK(naive_correlation_sum(mu, 0.5, 5.0) ==
        doctest::Approx(std::pow(mu.total_mass(), -0.5) * mu.total_mass()).epsilon(1e-14));
}

TEST_CASE("corpus passes and detects an injected fault") {
  CorpusOptions opt;
  opt.quad_trials = 5;
  opt.naive_trials = 10;
  const auto ok = run_corpus(opt);
  REQUIRE_FALSE(ok.empty());
  for (const auto& r : ok) {
    INFO(r.name);
    CHECK(r.passed);
  }
  opt.fault = Fault::perturb_sweep;
  const auto bad = run_corpus(opt);
  bool any_failed = false;
  for (const auto& r : bad) {
    any_failed = any_failed || !r.passed;
  }
  CHECK(any_failed);
}

TEST_CASE("zeta") {
  CHECK(zeta(2.0) == doctest::Approx(std::numbers::pi * std::numbers::pi / 6).epsilon(1e-14));
}
