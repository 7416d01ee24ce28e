#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ppdim/measure.hpp"
#include "ppdim/spectra.hpp"
#include "ppdim/states.hpp"

namespace ppdim {

/// I(q, eps) = sum_i mu(B(x_i, eps))^(q-1) w_i, summed in ascending position
/// order. Ball masses are correctly rounded, so the value does not depend on
/// how they are obtained.
[[nodiscard]] double correlation_sum(const AtomicMeasure& mu, double q, double eps);

/// L(q, eps) = eps^-1 * integral of mu(B(x, eps))^q dx, exact up to rounding:
/// the integrand is piecewise constant between the breakpoints x_i +- eps.
[[nodiscard]] double box_integral(const AtomicMeasure& mu, double q, double eps);

/// sum_i w_i^(q-1) w_i: the value of I once every ball holds a single atom.
[[nodiscard]] double isolated_power_sum(const AtomicMeasure& mu, double q);

/// Half the smallest gap between retained atoms (0 for a single atom).
[[nodiscard]] double resolution_floor(const AtomicMeasure& mu);

/// eps_hi * ratio^k for k = 0, 1, ... while the value stays >= eps_lo.
[[nodiscard]] std::vector<double> geometric_grid(double eps_hi, double eps_lo,
                                                 double ratio = 0.70710678118654752);

/// Geometric grid, ratio 2^-1/2, from the largest gap down to the
/// resolution floor.
[[nodiscard]] std::vector<double> default_epsilon_grid(const AtomicMeasure& mu);

struct ScanSample {
  double eps{0.0};
  double I{0.0};
  double L{0.0};
  double d_I{0.0};
  double d_L{0.0};
  /// Below the resolution floor, or eps >= 1 where ln eps does not resolve.
  bool degenerate{false};
  /// Subsequence level N for subsequence scans, else 0.
  std::size_t level{0};
};

struct Check {
  std::string name;
  bool passed{true};
  double value{0.0};
  std::string detail;
};

struct ScanSummary {
  double eps_lo{0.0};
  double eps_hi{0.0};
  std::size_t count{0};
  double d_min{0.0};
  double d_max{0.0};
  double d_L_min{0.0};
  double d_L_max{0.0};
  double slope_I{0.0};
  double slope_L{0.0};
  double regression_D_I{0.0};
  double regression_D_L{0.0};
  /// Intercept of d_I = D + c / (-ln eps); diagnostic only.
  double extrapolated_D{0.0};
};

struct DimensionScan {
  double q{0.5};
  /// Sorted by decreasing eps.
  std::vector<ScanSample> samples;
  ScanSummary summary;
  std::vector<Check> checks;

  [[nodiscard]] bool all_checks_passed() const;
};

struct ScanOptions {
  unsigned threads{1};
};

/// Evaluates I and L on a strictly decreasing grid. Samples below the
/// resolution floor are flagged degenerate and left out of the summary.
/// Checks (q < 1): I nondecreasing as eps shrinks, I <= isolated_power_sum.
[[nodiscard]] DimensionScan scan(const AtomicMeasure& mu, double q, std::span<const double> grid,
                                 const ScanOptions& options = {});

/// Scan at eps_N = gap(N) / 2 for N in n_list, where levels 1..N are
/// isolated. Adds the per-sample check I(q, eps_N) >= sum_{n<=N} p_n^q.
[[nodiscard]] DimensionScan subsequence_scan(const BoundState& state, const EigenvalueFamily& f,
                                             double q, std::span<const std::size_t> n_list,
                                             const ScanOptions& options = {});

/// Summary over the non-degenerate samples with eps_lo <= eps <= eps_hi.
/// Fields that need two points are NaN when fewer exist.
[[nodiscard]] ScanSummary summarize(const DimensionScan& s, double eps_lo, double eps_hi);

struct EnvelopeReport {
  double ceiling{0.0};
  double slack{0.0};
  double max_d_L{0.0};
  double eps_at_max{0.0};
  /// ceiling - max_d_L
  double margin{0.0};
  bool passed{false};
};

/// Largest d_L over the window of `s`, evaluated for the probability measure
/// proportional to `mu`, against ceiling + slack.
[[nodiscard]] EnvelopeReport upper_envelope_check(const AtomicMeasure& mu, const DimensionScan& s,
                                                  double ceiling, double slack = 0.05);

/// CSV `epsilon,I,L,d_I,d_L,degenerate`.
void write_scan_csv(std::ostream& out, const DimensionScan& s);

}  // namespace ppdim
