#include <doctest.h>

#include <cmath>

#include "ppdim/oracle.hpp"
#include "ppdim/spectra.hpp"

using namespace ppdim;

TEST_CASE("hydrogen eigenvalues and gaps") {
  const auto h = EigenvalueFamily::hydrogen(0.25);
  CHECK(h.eigenvalue(1) == -0.25);
  CHECK(h.eigenvalue(2) == -0.0625);
  CHECK(h.gap(1) == doctest::Approx(0.1875).epsilon(1e-15));
  CHECK(h.increasing());
  CHECK(h.accumulation_point() == 0.0);
  CHECK(dimension_ceiling(h) == doctest::Approx(1.0 / 3.0));
  for (std::size_t n : {1u, 7u, 1000u, 99999u}) {
    CHECK(h.gap(n) == doctest::Approx(h.eigenvalue(n + 1) - h.eigenvalue(n)).epsilon(1e-6));
  }
  const double n = 1000;
  CHECK(std::abs(n * n * n * h.gap(1000) - 0.5) / 0.5 <= 0.005);
  const auto k = EigenvalueFamily::hydrogen_from_kappa(1.0);
  CHECK(k.eigenvalue(3) == h.eigenvalue(3));
}

TEST_CASE("gap constant and scale index") {
  const auto h = EigenvalueFamily::hydrogen();
  CHECK(gap_lower_constant(h, 100000) == doctest::Approx(0.999 * 0.1875));
  const auto s = n_epsilon(h, 1e-6, 0.1873);
  CHECK(s.n == 57);
  CHECK_FALSE(s.degenerate);
  CHECK(h.gap(57) > 1e-6);
  CHECK(n_epsilon(h, 0.2, 0.1873).degenerate);
  CHECK(subsequence_epsilon(h, 1) == doctest::Approx(0.09375).epsilon(1e-15));
  // every level below N_eps is separated by more than eps
  const double C = gap_lower_constant(h, 100000);
  for (double eps : {1e-4, 1e-6, 1e-9, 1e-12}) {
    const auto idx = n_epsilon(h, eps, C);
    for (std::size_t m = 1; m <= idx.n; ++m) {
      REQUIRE(h.gap(m) > eps);
    }
  }
}

TEST_CASE("power law") {
  const auto f = EigenvalueFamily::power_law(1.0, 1.0);
  CHECK(f.eigenvalue(4) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_FALSE(f.increasing());
  CHECK(subsequence_epsilon(f, 4) == doctest::Approx(0.025).epsilon(1e-14));
  CHECK(gap_lower_constant(f, 1000) == doctest::Approx(0.999 * 0.5));
  CHECK(1e6 * 1e6 * f.gap(1000000) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(n_epsilon(f, 1e-6, 0.4995).n == 706);
  const auto g = EigenvalueFamily::power_law(1.0, -2.0, 3.0);
  CHECK(g.increasing());
  CHECK(g.eigenvalue(2) == doctest::Approx(2.0));
  CHECK_THROWS(EigenvalueFamily::power_law(0.0, 1.0));
}

TEST_CASE("custom family") {
  std::vector<double> v;
  for (int n = 1; n <= 200; ++n) {
    v.push_back(-1.0 / (n * double(n)));
  }
  const auto c = EigenvalueFamily::custom(v);
  CHECK(c.decay_exponent() == doctest::Approx(2.0).epsilon(0.05));
  CHECK(c.name() == "custom");
  std::vector<double> flat;
  for (int n = 1; n <= 50; ++n) {
    flat.push_back(n);
  }
  CHECK_THROWS(EigenvalueFamily::custom(flat));
  CHECK_THROWS(EigenvalueFamily::custom({0.0, 1.0, 0.5}));
}

TEST_CASE("partial sums") {
  const auto r2 = highprec_partial_sums(2.0, std::vector<std::size_t>{4});
  CHECK(r2[0].compensated == doctest::Approx(1.4236111111111).epsilon(1e-13));
  const auto r = highprec_partial_sums(0.55, std::vector<std::size_t>{1u << 18});
  CHECK(r[0].rel_deviation <= 1e-8);
  // tail beyond N against the integral
  const std::size_t N = 1000;
  const auto part = highprec_partial_sums(1.1, std::vector<std::size_t>{N - 1});
  const double tail = zeta(1.1) - part[0].euler_maclaurin;
  CHECK(tail == doctest::Approx(std::pow(double(N), -0.1) / 0.1).epsilon(0.01));
}
