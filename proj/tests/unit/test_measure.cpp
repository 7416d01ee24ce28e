#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ppdim/measure.hpp"
#include "ppdim/spectra.hpp"

using namespace ppdim;

TEST_CASE("open ball mass") {
  const AtomicMeasure one({{0.0, 1.0}});
  CHECK(ball_mass(one, 0.0, 0.1) == 1.0);
  const AtomicMeasure two({{0.0, 0.5}, {1.0, 0.5}});
  CHECK(ball_mass(two, 0.5, 0.6) == 1.0);
  // boundary points excluded
  CHECK(ball_mass(two, 0.5, 0.5) == 0.0);
  CHECK(ball_mass(two, 1.0, 1.0) == 0.5);
}

TEST_CASE("ball near an accumulation point compares distances") {
  const AtomicMeasure mu({{-0.25, 1.0}, {std::nextafter(-0.25, 0.0), 1.0}});
  const double d = mu.positions()[1] - mu.positions()[0];
  CHECK(ball_mass(mu, mu.positions()[0], d) == 1.0);
  CHECK(ball_mass(mu, mu.positions()[0], std::nextafter(d, 1.0)) == 2.0);
}

TEST_CASE("normalize") {
  const auto a = normalize(AtomicMeasure({{0.0, 2.0}}));
  CHECK(a.weights()[0] == 1.0);
  const auto b = normalize(AtomicMeasure({{0.0, 1.0}, {1.0, 3.0}}));
  CHECK(b.weights()[0] == 0.25);
  CHECK(b.weights()[1] == 0.75);
  const auto c = normalize(b);
  CHECK(c.weights()[0] == b.weights()[0]);
  CHECK(c.weights()[1] == b.weights()[1]);
}

TEST_CASE("merge, sort and validation") {
  const AtomicMeasure mu({{1.0, 1.0}, {0.0, 2.0}, {1.0, 0.5}});
  REQUIRE(mu.size() == 2);
  CHECK(mu.positions()[0] == 0.0);
  CHECK(mu.weights()[1] == 1.5);
  CHECK(mu.total_mass() == 3.5);
  CHECK_THROWS(AtomicMeasure({{0.0, -1.0}}));
  CHECK_THROWS(AtomicMeasure({{std::nan(""), 1.0}}));
}

TEST_CASE("gaps") {
  CHECK(min_gap(AtomicMeasure({{0.0, 1.0}, {1.0, 1.0}, {3.0, 1.0}})) == 1.0);
  CHECK(max_gap(AtomicMeasure({{0.0, 1.0}, {1.0, 1.0}, {3.0, 1.0}})) == 2.0);
  const auto h = EigenvalueFamily::hydrogen();
  const AtomicMeasure mu({{h.eigenvalue(1), 1.0}, {h.eigenvalue(2), 1.0}, {h.eigenvalue(3), 1.0}});
  CHECK(min_gap(mu) == doctest::Approx(0.0347222222).epsilon(1e-9));
  const AtomicMeasure merged({{0.0, 1.0}, {0.0, 1.0}, {2.0, 1.0}});
  CHECK(min_gap(merged) == 2.0);
}

TEST_CASE("csv round trip") {
  const AtomicMeasure mu({{-0.25, 0.1}, {-0.0625, 1.0 / 3.0}});
  std::stringstream ss;
  write_csv(ss, mu);
  CHECK(ss.str().rfind("position,weight\n", 0) == 0);
  const auto back = read_measure_csv(ss);
  REQUIRE(back.size() == 2);
  CHECK(back.positions()[0] == mu.positions()[0]);
  CHECK(back.weights()[1] == mu.weights()[1]);
}
