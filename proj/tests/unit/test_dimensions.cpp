#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ppdim/dimensions.hpp"
#include "ppdim/oracle.hpp"
#include "ppdim/spectra.hpp"
#include "ppdim/states.hpp"

using namespace ppdim;

TEST_CASE("correlation sum closed forms") {
  const AtomicMeasure one({{0.3, 1.0}});
  for (double q : {0.2, 0.5, 2.0}) {
    for (double eps : {1e-9, 0.1, 10.0}) {
      CHECK(correlation_sum(one, q, eps) == 1.0);
      CHECK(box_integral(one, q, eps) == doctest::Approx(2.0).epsilon(1e-15));
    }
  }
  const AtomicMeasure two({{0.0, 0.5}, {1.0, 0.5}});
  CHECK(correlation_sum(two, 0.5, 0.1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(correlation_sum(two, 0.5, 2.0) == 1.0);
  CHECK(box_integral(two, 0.5, 0.1) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
  // eps = 1.5: both atoms on (-0.5, 1.5), one atom on two unit pieces
  const double want = (2.0 * 1.0 + 2.0 * std::sqrt(0.5)) / 1.5;
  CHECK(box_integral(two, 0.5, 1.5) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("two-pointer sum equals the naive sum bit for bit") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto mu = random_measure(seed, 200);
    for (double eps : {1e-4, 3e-3, 0.05, 0.4}) {
      REQUIRE(correlation_sum(mu, 0.5, eps) == naive_correlation_sum(mu, 0.5, eps));
    }
  }
}

TEST_CASE("grids") {
  const auto g = geometric_grid(1e-2, 1e-4, 0.1);
  REQUIRE(g.size() == 3);
  CHECK(g[2] == doctest::Approx(1e-4));
  const AtomicMeasure mu({{0.0, 1.0}, {0.5, 1.0}, {0.6, 1.0}});
  CHECK(resolution_floor(mu) == doctest::Approx(0.05));
  const auto d = default_epsilon_grid(mu);
  CHECK(d.front() == doctest::Approx(0.5));
  CHECK(d.back() >= 0.05);
}

TEST_CASE("single atom scan") {
  const AtomicMeasure one({{0.0, 1.0}});
  const auto g = geometric_grid(1e-1, 1e-6);
  const auto s = scan(one, 0.5, g);
  for (const auto& x : s.samples) {
    CHECK(x.d_I == 0.0);
  }
  CHECK(s.all_checks_passed());
}

TEST_CASE("hybrid bound holds at every scale") {
  const auto f = EigenvalueFamily::hydrogen();
  const auto st = hybrid_state({}, 1, 2.0, 0.5, 2000);
  const auto mu = spectral_measure(st, f);
  const double S = st.provenance().metadata.at("S_q");
  const auto s = scan(mu, 0.5, geometric_grid(1e-1, 1e-12));
  for (const auto& x : s.samples) {
    REQUIRE(x.I <= S);
  }
  CHECK(s.all_checks_passed());
  const auto& last = s.samples.back();
  CHECK(last.d_I <= std::log(S) / (0.5 * -std::log(last.eps)) + 1e-15);
}

TEST_CASE("subsequence scan of the power state") {
  const auto f = EigenvalueFamily::hydrogen();
  const auto st = power_state(10, 1 << 13);
  const std::vector<std::size_t> ns{256, 512, 1024, 2048, 4096};
  const auto s = subsequence_scan(st, f, 0.5, ns);
  REQUIRE(s.samples.size() == ns.size());
  CHECK(s.samples.front().level == 256);
  CHECK(s.samples.front().eps > s.samples.back().eps);
  CHECK(s.all_checks_passed());
  CHECK(s.summary.regression_D_I > 0.2);
  CHECK(s.summary.regression_D_I < 0.36);
  // atoms 1..N are isolated at eps_N
  const auto mu = spectral_measure(st, f);
  const double e = subsequence_epsilon(f, 100);
  for (std::size_t n = 1; n <= 100; ++n) {
    REQUIRE(ball_mass(mu, f.eigenvalue(n), e) == st.weight(n));
  }
  CHECK_THROWS(subsequence_scan(st, f, 0.5, std::vector<std::size_t>{1u << 13}));
}

TEST_CASE("scale invariance of the regression") {
  const auto f = EigenvalueFamily::hydrogen();
  const auto mu = spectral_measure(power_state(10, 4096), f);
  const auto grid = geometric_grid(1e-3, 1e-8);
  const auto a = scan(mu, 0.5, grid);
  const double c = 7.25;
  const auto b = scan(mu.scaled(c), 0.5, grid);
  CHECK(std::abs(a.summary.regression_D_I - b.summary.regression_D_I) <= 1e-12);
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    const double shift = 0.5 * std::log(c) / (-0.5 * std::log(a.samples[i].eps));
    CHECK(b.samples[i].d_I - a.samples[i].d_I == doctest::Approx(shift).epsilon(1e-9));
  }
}

TEST_CASE("envelope of a single atom") {
  const AtomicMeasure one({{0.0, 1.0}});
  const auto s = scan(one, 0.5, geometric_grid(1e-3, 1e-9));
  const auto r = upper_envelope_check(one, s, 1.0 / 3.0);
  CHECK(r.passed);
  // L = 2 for one atom, so d_L = ln 2 / ((q - 1) ln eps), largest at the coarsest scale
  CHECK(r.margin == doctest::Approx(1.0 / 3.0 - std::log(2.0) / (0.5 * std::log(1e3))));
}

TEST_CASE("scan csv") {
  const AtomicMeasure two({{0.0, 0.5}, {1.0, 0.5}});
  const auto s = scan(two, 0.5, geometric_grid(0.4, 0.1));
  std::ostringstream out;
  write_scan_csv(out, s);
  CHECK(out.str().rfind("epsilon,I,L,d_I,d_L,degenerate\n", 0) == 0);
}
