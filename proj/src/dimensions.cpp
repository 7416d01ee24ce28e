#include "ppdim/dimensions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "ppdim/exact_sum.hpp"
#include "ppdim/parallel.hpp"
#include "ppdim/regression.hpp"

namespace ppdim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_args(const AtomicMeasure& mu, double q, double eps) {
  if (!(q > 0.0) || !std::isfinite(q) || q == 1.0) {
    throw std::invalid_argument("q must be positive, finite and != 1");
  }
  if (!(eps > 0.0) || !std::isfinite(eps)) {
    throw std::invalid_argument("eps must be positive and finite");
  }
  if (mu.empty()) {
    throw std::invalid_argument("zero measure");
  }
}

double dimension_estimate(double value, double q, double eps) {
  return std::log(value) / ((q - 1.0) * std::log(eps));
}

}  // namespace

double correlation_sum(const AtomicMeasure& mu, double q, double eps) {
  check_args(mu, q, eps);
  const auto pos = mu.positions();
  const auto w = mu.weights();
  const std::size_t n = pos.size();
  ExactSum window;
  std::size_t lo = 0;
  std::size_t hi = 0;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    while (hi < n && pos[hi] - pos[i] < eps) {
      window.add(w[hi]);
      ++hi;
    }
    while (!(pos[i] - pos[lo] < eps)) {
      window.subtract(w[lo]);
      ++lo;
    }
    const double bm = (hi - lo == 1) ? w[i] : window.value();
    total += std::pow(bm, q - 1.0) * w[i];
  }
  return total;
}

double box_integral(const AtomicMeasure& mu, double q, double eps) {
  check_args(mu, q, eps);
  const auto pos = mu.positions();
  const auto w = mu.weights();
  const std::size_t n = pos.size();
  const double two_eps = 2.0 * eps;

  // Events: enter_i at pos_i - eps, leave_i at pos_i + eps. enter_e precedes
  // leave_l iff pos_e - pos_l < 2 eps; offsets stay relative to positions so
  // nothing is lost when eps is below the spacing of doubles.
  ExactSum mass;
  std::size_t e = 0;
  std::size_t l = 0;
  std::size_t live = 0;
  double prev_pos = 0.0;
  double prev_side = 0.0;  // -1 for enter, +1 for leave
  double total = 0.0;
  while (l < n) {
    const bool enter = e < n && pos[e] - pos[l] < two_eps;
    const double at = enter ? pos[e] : pos[l];
    const double side = enter ? -1.0 : 1.0;
    if (live > 0) {
      const double len = (at - prev_pos) + (side - prev_side) * eps;
      // live atoms are [l, e)
      const double m = live == 1 ? w[l] : mass.value();
      total += len * std::pow(m, q);
    }
    if (enter) {
      mass.add(w[e]);
      ++e;
      ++live;
    } else {
      mass.subtract(w[l]);
      ++l;
      --live;
    }
    prev_pos = at;
    prev_side = side;
  }
  return total / eps;
}

double isolated_power_sum(const AtomicMeasure& mu, double q) {
  if (!(q > 0.0) || !std::isfinite(q)) {
    throw std::invalid_argument("q must be positive and finite");
  }
  double total = 0.0;
  for (double w : mu.weights()) {
    total += std::pow(w, q - 1.0) * w;
  }
  return total;
}

double resolution_floor(const AtomicMeasure& mu) {
  if (mu.size() < 2) {
    return 0.0;
  }
  return 0.5 * min_gap(mu);
}

std::vector<double> geometric_grid(double eps_hi, double eps_lo, double ratio) {
  if (!(eps_hi > 0.0) || !(eps_lo > 0.0) || !(eps_lo <= eps_hi)) {
    throw std::invalid_argument("geometric_grid: need 0 < eps_lo <= eps_hi");
  }
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw std::invalid_argument("geometric_grid: ratio must lie in (0,1)");
  }
  std::vector<double> grid;
  const double lr = std::log(ratio);
  for (int k = 0;; ++k) {
    const double eps = eps_hi * std::exp(k * lr);
    if (eps < eps_lo) {
      break;
    }
    grid.push_back(eps);
  }
  return grid;
}

std::vector<double> default_epsilon_grid(const AtomicMeasure& mu) {
  if (mu.size() < 2) {
    throw std::invalid_argument("default_epsilon_grid: need at least two atoms");
  }
  return geometric_grid(max_gap(mu), resolution_floor(mu));
}

bool DimensionScan::all_checks_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

ScanSummary summarize(const DimensionScan& s, double eps_lo, double eps_hi) {
  std::vector<double> ln_eps;
  std::vector<double> ln_I;
  std::vector<double> ln_L;
  std::vector<double> inv;
  std::vector<double> d_I;
  ScanSummary out;
  out.eps_lo = kNaN;
  out.eps_hi = kNaN;
  out.d_min = out.d_L_min = std::numeric_limits<double>::infinity();
  out.d_max = out.d_L_max = -std::numeric_limits<double>::infinity();
  for (const ScanSample& x : s.samples) {
    if (x.degenerate || x.eps < eps_lo || x.eps > eps_hi) {
      continue;
    }
    ln_eps.push_back(std::log(x.eps));
    ln_I.push_back(std::log(x.I));
    ln_L.push_back(std::log(x.L));
    inv.push_back(-1.0 / std::log(x.eps));
    d_I.push_back(x.d_I);
    out.d_min = std::min(out.d_min, x.d_I);
    out.d_max = std::max(out.d_max, x.d_I);
    out.d_L_min = std::min(out.d_L_min, x.d_L);
    out.d_L_max = std::max(out.d_L_max, x.d_L);
    out.eps_lo = std::isnan(out.eps_lo) ? x.eps : std::min(out.eps_lo, x.eps);
    out.eps_hi = std::isnan(out.eps_hi) ? x.eps : std::max(out.eps_hi, x.eps);
  }
  out.count = ln_eps.size();
  if (out.count == 0) {
    out.d_min = out.d_max = out.d_L_min = out.d_L_max = kNaN;
  }
  if (out.count < 2) {
    out.slope_I = out.slope_L = out.regression_D_I = out.regression_D_L = out.extrapolated_D = kNaN;
    return out;
  }
  out.slope_I = fit_line(ln_eps, ln_I).slope;
  out.slope_L = fit_line(ln_eps, ln_L).slope;
  out.regression_D_I = out.slope_I / (s.q - 1.0);
  out.regression_D_L = out.slope_L / (s.q - 1.0);
  out.extrapolated_D = fit_line(inv, d_I).intercept;
  return out;
}

namespace {

ScanSample evaluate(const AtomicMeasure& mu, double q, double eps, double floor) {
  ScanSample x;
  x.eps = eps;
  x.I = correlation_sum(mu, q, eps);
  x.L = box_integral(mu, q, eps);
  x.d_I = dimension_estimate(x.I, q, eps);
  x.d_L = dimension_estimate(x.L, q, eps);
  x.degenerate = eps < floor || !(eps < 1.0) || !std::isfinite(x.d_I) || !std::isfinite(x.d_L);
  return x;
}

void add_bound_checks(DimensionScan& s, double power_sum) {
  const bool below_one = s.q < 1.0;
  // q < 1: I grows as eps shrinks and never exceeds the isolated value.
  // q > 1: both directions flip.
  Check mono{below_one ? "I_nondecreasing_as_eps_shrinks" : "I_nonincreasing_as_eps_shrinks",
             true, 0.0, ""};
  for (std::size_t k = 1; k < s.samples.size(); ++k) {
    const double prev = s.samples[k - 1].I;
    const double cur = s.samples[k].I;
    if (below_one ? cur < prev : cur > prev) {
      mono.passed = false;
      mono.value = s.samples[k].eps;
      mono.detail = "violated at eps index " + std::to_string(k);
      break;
    }
  }
  s.checks.push_back(mono);

  Check bound{below_one ? "I_le_isolated_power_sum" : "I_ge_isolated_power_sum", true, power_sum,
              ""};
  for (const ScanSample& x : s.samples) {
    if (below_one ? x.I > power_sum : x.I < power_sum) {
      bound.passed = false;
      bound.detail = "violated at eps index " + std::to_string(&x - s.samples.data());
      break;
    }
  }
  s.checks.push_back(bound);
}

void add_window_check(DimensionScan& s) {
  Check c{"window_has_two_samples", s.summary.count >= 2, static_cast<double>(s.summary.count),
          ""};
  s.checks.push_back(c);
}

}  // namespace

DimensionScan scan(const AtomicMeasure& mu, double q, std::span<const double> grid,
                   const ScanOptions& options) {
  if (grid.empty()) {
    throw std::invalid_argument("scan: empty grid");
  }
  check_args(mu, q, grid.front());
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] < grid[k - 1]) || !(grid[k] > 0.0)) {
      throw std::invalid_argument("scan: grid must be positive and strictly decreasing");
    }
  }
  const double floor = resolution_floor(mu);
  DimensionScan s;
  s.q = q;
  s.samples.resize(grid.size());
  parallel_for(grid.size(), options.threads,
               [&](std::size_t k) { s.samples[k] = evaluate(mu, q, grid[k], floor); });
  s.summary = summarize(s, 0.0, std::numeric_limits<double>::infinity());
  add_bound_checks(s, isolated_power_sum(mu, q));
  add_window_check(s);
  return s;
}

DimensionScan subsequence_scan(const BoundState& state, const EigenvalueFamily& f, double q,
                               std::span<const std::size_t> n_list, const ScanOptions& options) {
  if (n_list.empty()) {
    throw std::invalid_argument("subsequence_scan: empty N list");
  }
  for (std::size_t k = 0; k < n_list.size(); ++k) {
    if (n_list[k] < 1) {
      throw std::invalid_argument("subsequence_scan: levels start at 1");
    }
    if (k > 0 && !(n_list[k] > n_list[k - 1])) {
      throw std::invalid_argument("subsequence_scan: N list must be strictly increasing");
    }
  }
  if (n_list.back() + 1 > state.size()) {
    throw std::invalid_argument("subsequence_scan: max N + 1 = " +
                                std::to_string(n_list.back() + 1) + " exceeds state length " +
                                std::to_string(state.size()));
  }
  const AtomicMeasure mu = spectral_measure(state, f);
  check_args(mu, q, 1.0);
  const double floor = resolution_floor(mu);
  const std::size_t m = n_list.size();

  DimensionScan s;
  s.q = q;
  s.samples.resize(m);
  std::vector<double> lower(m);
  parallel_for(m, options.threads, [&](std::size_t k) {
    const std::size_t N = n_list[k];  // eps_N decreases with N
    const double eps = subsequence_epsilon(f, N);
    ScanSample x = evaluate(mu, q, eps, floor);
    x.level = N;
    s.samples[k] = x;
    // Isolated atoms contribute w^(q-1) w to I; sum them with the same
    // expression and in the same atom order, skipping the rest.
    const double edge = f.eigenvalue(N);
    const auto pos = mu.positions();
    const auto w = mu.weights();
    double lb = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      const bool isolated = f.increasing() ? pos[i] <= edge : pos[i] >= edge;
      if (isolated) {
        lb += std::pow(w[i], q - 1.0) * w[i];
      }
    }
    lower[k] = lb;
  });
  s.summary = summarize(s, 0.0, std::numeric_limits<double>::infinity());
  add_bound_checks(s, isolated_power_sum(mu, q));

  Check lb{"I_ge_isolated_prefix_sum", true, 0.0, ""};
  for (std::size_t k = 0; k < m; ++k) {
    const bool ok = q < 1.0 ? s.samples[k].I >= lower[k] : s.samples[k].I <= lower[k];
    if (!ok) {
      lb.passed = false;
      lb.value = static_cast<double>(s.samples[k].level);
      lb.detail = "violated at N = " + std::to_string(s.samples[k].level);
      break;
    }
  }
  s.checks.push_back(lb);
  add_window_check(s);
  return s;
}

EnvelopeReport upper_envelope_check(const AtomicMeasure& mu, const DimensionScan& s,
                                    double ceiling, double slack) {
  EnvelopeReport r;
  r.ceiling = ceiling;
  r.slack = slack;
  r.max_d_L = -std::numeric_limits<double>::infinity();
  r.eps_at_max = kNaN;
  // L(c mu) = c^q L(mu): rescale to the probability measure.
  const double ln_z = std::log(mu.total_mass());
  for (const ScanSample& x : s.samples) {
    if (x.degenerate) {
      continue;
    }
    const double d = (std::log(x.L) - s.q * ln_z) / ((s.q - 1.0) * std::log(x.eps));
    if (d > r.max_d_L) {
      r.max_d_L = d;
      r.eps_at_max = x.eps;
    }
  }
  if (std::isnan(r.eps_at_max)) {
    r.max_d_L = kNaN;
    r.margin = kNaN;
    r.passed = false;
    return r;
  }
  r.margin = ceiling - r.max_d_L;
  r.passed = r.max_d_L <= ceiling + slack;
  return r;
}

void write_scan_csv(std::ostream& out, const DimensionScan& s) {
  out << "epsilon,I,L,d_I,d_L,degenerate\n";
  char buf[160];
  for (const ScanSample& x : s.samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", x.eps, x.I, x.L, x.d_I,
                  x.d_L, x.degenerate ? 1 : 0);
    out << buf;
  }
}

}  // namespace ppdim
