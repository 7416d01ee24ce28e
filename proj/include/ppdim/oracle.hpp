#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ppdim/measure.hpp"

namespace ppdim {

struct OracleReport {
  std::string name;
  double fast_value{0.0};
  double oracle_value{0.0};
  double abs_deviation{0.0};
  double rel_deviation{0.0};
  double tolerance{0.0};
  bool converged{true};
  bool passed{false};
  /// Successive quadrature values, coarse to fine.
  std::vector<double> trail;
};

/// Fills deviations and sets passed = converged && rel_deviation <= tolerance.
[[nodiscard]] OracleReport make_report(std::string name, double fast, double oracle,
                                       double tolerance, bool converged = true);

struct QuadResult {
  double value{0.0};
  bool converged{false};
  std::size_t points{0};
  std::vector<double> trail;
};

/// Midpoint rule for eps^-1 * integral of mu(B(x,eps))^q over
/// [min - eps, max + eps], doubling the point count from `grid_points` until
/// three successive doublings each change the value by relative < 1e-7, or
/// `cap` is exceeded.
/// Breakpoints are formed as x_i +- eps in long double, so eps must not be
/// far below the spacing of doubles near the atoms.
[[nodiscard]] QuadResult quad_box_integral(const AtomicMeasure& mu, double q, double eps,
                                           std::size_t grid_points = 1000,
                                           std::size_t cap = std::size_t{1} << 50);

/// All-atom scan with |x_j - x| < eps.
[[nodiscard]] double naive_ball_mass(const AtomicMeasure& mu, double x, double eps);

/// O(N^2) correlation sum; same term expression and order as the fast path.
[[nodiscard]] double naive_correlation_sum(const AtomicMeasure& mu, double q, double eps);

struct PartialSum {
  std::size_t n{0};
  /// Kahan-compensated ascending sum.
  double compensated{0.0};
  /// zeta(r) + N^(1-r)/(1-r) + N^-r/2 - sum_k B_2k/(2k)! (r)_(2k-1) N^(1-r-2k)
  double euler_maclaurin{0.0};
  double rel_deviation{0.0};
};

/// sum_{n<=N} n^-r for each N in n_list (increasing).
[[nodiscard]] std::vector<PartialSum> highprec_partial_sums(double r,
                                                            std::span<const std::size_t> n_list);

/// Riemann zeta by Euler-Maclaurin at cutoff 64 (r != 1; r < 1 is the
/// analytic continuation).
[[nodiscard]] double zeta(double r);

/// Seeded measure: positions U[-1, 0], weights U[0.1, 1].
[[nodiscard]] AtomicMeasure random_measure(std::uint64_t seed, std::size_t atoms);

enum class Fault { none, perturb_sweep };

struct CorpusOptions {
  std::uint64_t seed{1};
  std::size_t quad_trials{20};
  std::size_t naive_trials{50};
  Fault fault{Fault::none};
  unsigned threads{1};
};

/// Every fast path against its oracle on a seeded corpus.
[[nodiscard]] std::vector<OracleReport> run_corpus(const CorpusOptions& options);

}  // namespace ppdim
