#include "ppdim/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <stdexcept>

#include "ppdim/dimensions.hpp"
#include "ppdim/exact_sum.hpp"
#include "ppdim/parallel.hpp"

namespace ppdim {

namespace {

double unit(std::mt19937_64& rng) { return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53; }

std::string q_tag(double q) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_q%g", q);
  return buf;
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo * std::exp(unit(rng) * std::log(hi / lo));
}

// B_2k / (2k)!, k = 1..8
constexpr std::array<long double, 8> kBernoulliOverFactorial = {
    1.0L / 6 / 2,
    -1.0L / 30 / 24,
    1.0L / 42 / 720,
    -1.0L / 30 / 40320,
    5.0L / 66 / 3628800,
    -691.0L / 2730 / 479001600,
    7.0L / 6 / 87178291200.0L,
    -3617.0L / 510 / 20922789888000.0L,
};

// sum_k B_2k/(2k)! (r)_(2k-1) x^(-r-2k+1)
long double em_corrections(long double r, long double x) {
  long double sum = 0;
  long double rising = r;  // (r)_1
  long double power = std::pow(x, -r - 1);
  for (std::size_t k = 0; k < kBernoulliOverFactorial.size(); ++k) {
    sum += kBernoulliOverFactorial[k] * rising * power;
    const long double m = 2.0L * k + 1;  // extend (r)_(2k+1) to (r)_(2k+3)
    rising *= (r + m) * (r + m + 1);
    power /= x * x;
  }
  return sum;
}

}  // namespace

OracleReport make_report(std::string name, double fast, double oracle, double tolerance,
                         bool converged) {
  OracleReport r;
  r.name = std::move(name);
  r.fast_value = fast;
  r.oracle_value = oracle;
  r.abs_deviation = std::abs(fast - oracle);
  r.rel_deviation = oracle != 0.0 ? r.abs_deviation / std::abs(oracle) : r.abs_deviation;
  r.tolerance = tolerance;
  r.converged = converged;
  r.passed = converged && r.rel_deviation <= tolerance;
  return r;
}

QuadResult quad_box_integral(const AtomicMeasure& mu, double q, double eps,
                             std::size_t grid_points, std::size_t cap) {
  if (mu.empty()) {
    throw std::invalid_argument("quad_box_integral: zero measure");
  }
  if (!(eps > 0.0) || !(q > 0.0)) {
    throw std::invalid_argument("quad_box_integral: eps and q must be positive");
  }
  if (grid_points < 1000) {
    throw std::invalid_argument("quad_box_integral: need at least 1000 points");
  }
  const auto pos = mu.positions();
  const auto w = mu.weights();
  const long double le = eps;

  // The integrand only changes at x_i +- eps. Sort those numerically, give
  // each piece a brute-force mass, then count the grid midpoints per piece:
  // this is the midpoint sum itself, evaluated without visiting every point.
  std::vector<long double> cuts;
  cuts.reserve(2 * pos.size());
  for (double p : pos) {
    cuts.push_back(p - le);
    cuts.push_back(p + le);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<long double> power(cuts.size(), 0.0L);
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    if (!(cuts[k + 1] > cuts[k])) {
      continue;
    }
    const long double mid = 0.5L * (cuts[k] + cuts[k + 1]);
    ExactSum mass;
    for (std::size_t j = 0; j < pos.size(); ++j) {
      if (std::abs(pos[j] - mid) < le) {
        mass.add(w[j]);
      }
    }
    power[k] = std::pow(static_cast<long double>(mass.value()), static_cast<long double>(q));
  }
  const long double a = cuts.front();
  const long double b = cuts.back();

  auto riemann = [&](std::size_t m) {
    const long double h = (b - a) / m;
    const auto first_point = [&](long double x) {
      const long double j = std::ceil((x - a) / h - 0.5L);
      return std::clamp(j, 0.0L, static_cast<long double>(m));
    };
    long double sum = 0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      if (power[k] > 0) {
        sum += (first_point(cuts[k + 1]) - first_point(cuts[k])) * power[k];
      }
    }
    return static_cast<double>(sum * h / le);
  };

  QuadResult out;
  double prev = riemann(grid_points);
  out.trail.push_back(prev);
  out.points = grid_points;
  // A single small step can be a coincidence of the discontinuity phases;
  // demand three in a row.
  int stable = 0;
  for (std::size_t m = 2 * grid_points; m <= cap; m *= 2) {
    const double cur = riemann(m);
    out.trail.push_back(cur);
    out.points = m;
    stable = std::abs(cur - prev) <= 1e-7 * std::abs(cur) ? stable + 1 : 0;
    if (stable == 3) {
      out.value = cur;
      out.converged = true;
      return out;
    }
    prev = cur;
  }
  out.value = prev;
  out.converged = false;
  return out;
}

double naive_ball_mass(const AtomicMeasure& mu, double x, double eps) {
  ExactSum sum;
  const auto pos = mu.positions();
  const auto w = mu.weights();
  for (std::size_t j = 0; j < pos.size(); ++j) {
    if (std::abs(pos[j] - x) < eps) {
      sum.add(w[j]);
    }
  }
  return sum.value();
}

double naive_correlation_sum(const AtomicMeasure& mu, double q, double eps) {
  const auto pos = mu.positions();
  const auto w = mu.weights();
  double total = 0.0;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    total += std::pow(naive_ball_mass(mu, pos[i], eps), q - 1.0) * w[i];
  }
  return total;
}

double zeta(double r) {
  if (r == 1.0 || !std::isfinite(r)) {
    throw std::invalid_argument("zeta: r must be finite and != 1");
  }
  constexpr int kCut = 64;
  const long double lr = r;
  long double head = 0;
  for (int n = kCut - 1; n >= 1; --n) {
    head += std::pow(static_cast<long double>(n), -lr);
  }
  const long double m = kCut;
  return static_cast<double>(head + std::pow(m, 1 - lr) / (lr - 1) + 0.5L * std::pow(m, -lr) +
                             em_corrections(lr, m));
}

std::vector<PartialSum> highprec_partial_sums(double r, std::span<const std::size_t> n_list) {
  if (!(r > 0.0)) {
    throw std::invalid_argument("highprec_partial_sums: exponent must be positive");
  }
  for (std::size_t k = 0; k < n_list.size(); ++k) {
    if (n_list[k] < 1 || (k > 0 && !(n_list[k] > n_list[k - 1]))) {
      throw std::invalid_argument("highprec_partial_sums: N list must be increasing, >= 1");
    }
  }
  std::vector<PartialSum> out;
  const long double z = r == 1.0 ? 0.0L : zeta(r);
  double sum = 0.0;
  double comp = 0.0;
  std::size_t n = 0;
  for (std::size_t target : n_list) {
    while (n < target) {
      ++n;
      const double y = std::pow(static_cast<double>(n), -r) - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
    PartialSum p;
    p.n = target;
    p.compensated = sum;
    if (r == 1.0) {
      p.euler_maclaurin = std::numeric_limits<double>::quiet_NaN();
      p.rel_deviation = std::numeric_limits<double>::quiet_NaN();
    } else {
      const long double N = static_cast<long double>(target);
      const long double lr = r;
      const long double em =
          z + std::pow(N, 1 - lr) / (1 - lr) + 0.5L * std::pow(N, -lr) - em_corrections(lr, N);
      p.euler_maclaurin = static_cast<double>(em);
      p.rel_deviation = std::abs(p.compensated - p.euler_maclaurin) / std::abs(p.euler_maclaurin);
    }
    out.push_back(p);
  }
  return out;
}

AtomicMeasure random_measure(std::uint64_t seed, std::size_t atoms) {
  if (atoms < 1) {
    throw std::invalid_argument("random_measure: need at least one atom");
  }
  std::mt19937_64 rng(seed);
  std::vector<Atom> a(atoms);
  for (Atom& x : a) {
    x.position = unit(rng) - 1.0;
    x.weight = 0.1 + 0.9 * unit(rng);
  }
  return AtomicMeasure(std::move(a));
}

std::vector<OracleReport> run_corpus(const CorpusOptions& options) {
  constexpr std::array<double, 4> kQ = {0.3, 0.5, 0.7, 2.0};
  const double perturb = options.fault == Fault::perturb_sweep ? 1.0 + 1e-4 : 1.0;
  std::vector<OracleReport> out;

  // Sweep-line box integral against midpoint quadrature.
  std::vector<OracleReport> quad(options.quad_trials);
  parallel_for(options.quad_trials, options.threads, [&](std::size_t t) {
    std::mt19937_64 rng(options.seed * 1000003u + t);
    const AtomicMeasure mu = random_measure(rng(), 100);
    const double eps = log_uniform(rng, 1e-3, 5e-2);
    const double q = kQ[rng() % kQ.size()];
    const QuadResult qr = quad_box_integral(mu, q, eps);
    OracleReport r = make_report("box_integral_vs_quadrature#" + std::to_string(t),
                                 box_integral(mu, q, eps) * perturb, qr.value, 1e-6, qr.converged);
    r.trail = qr.trail;
    quad[t] = std::move(r);
  });
  out.insert(out.end(), quad.begin(), quad.end());

  // Two-pointer correlation sum against the all-pairs sum, bit for bit.
  std::vector<OracleReport> naive(options.naive_trials);
  parallel_for(options.naive_trials, options.threads, [&](std::size_t t) {
    std::mt19937_64 rng(options.seed * 7919u + t);
    const std::size_t atoms = 1 + rng() % 1000;
    const AtomicMeasure mu = random_measure(rng(), atoms);
    const double eps = log_uniform(rng, 1e-5, 1.0);
    const double q = kQ[rng() % kQ.size()];
    naive[t] = make_report("correlation_sum_vs_naive#" + std::to_string(t),
                           correlation_sum(mu, q, eps), naive_correlation_sum(mu, q, eps), 0.0);
  });
  out.insert(out.end(), naive.begin(), naive.end());

  // Closed forms.
  {
    const AtomicMeasure mu = random_measure(options.seed, 200);
    const double eps = 0.49 * min_gap(mu);
    for (double q : kQ) {
      const double s = isolated_power_sum(mu, q);
      out.push_back(make_report("isolated_I_eq_power_sum" + q_tag(q),
                                correlation_sum(mu, q, eps), s, 1e-12));
      out.push_back(make_report("isolated_L_eq_twice_power_sum" + q_tag(q),
                                box_integral(mu, q, eps) * perturb, 2.0 * s, 1e-12));
    }
    const double m = mu.total_mass();
    out.push_back(make_report("wide_ball_I_eq_total_mass_power", correlation_sum(mu, 0.5, 4.0),
                              std::pow(m, -0.5) * m, 1e-12));
  }
  {
    const AtomicMeasure one({{0.0, 1.0}});
    const QuadResult qr = quad_box_integral(one, 0.5, 0.1);
    out.push_back(make_report("quadrature_single_atom", qr.value, 2.0, 1e-7, qr.converged));
    const AtomicMeasure two({{0.0, 0.5}, {1.0, 0.5}});
    const QuadResult q2 = quad_box_integral(two, 0.5, 0.1);
    out.push_back(make_report("quadrature_two_atoms", q2.value, 2.0 * std::sqrt(2.0), 1e-6,
                              q2.converged));
    out.push_back(make_report("box_integral_two_atoms", box_integral(two, 0.5, 0.1) * perturb,
                              2.0 * std::sqrt(2.0), 1e-12));
  }

  // Partial sums by two methods.
  {
    const std::size_t four[] = {4};
    const auto p = highprec_partial_sums(2.0, four);
    out.push_back(make_report("partial_sum_r2_N4_direct", p[0].compensated,
                              1.0 + 0.25 + 1.0 / 9.0 + 0.0625, 1e-15));
    const std::size_t big[] = {std::size_t{1} << 18};
    const auto s = highprec_partial_sums(0.55, big);
    out.push_back(make_report("partial_sum_r0.55_kahan_vs_em", s[0].compensated,
                              s[0].euler_maclaurin, 1e-8));
  }
  return out;
}

}  // namespace ppdim
