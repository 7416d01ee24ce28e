#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ppdim/measure.hpp"
#include "ppdim/spectra.hpp"

namespace ppdim {

struct Provenance {
  std::string recipe;
  /// Construction parameters, formatted with 17 significant digits.
  std::map<std::string, std::string> params;
  /// Closed-form bound on the mass beyond the truncation.
  double neglected_tail_mass{0.0};
  /// Derived quantities such as S_q, M1, M2.
  std::map<std::string, double> metadata;
};

/// Per-level occupation weights p_n, n = 1..size(). Level degeneracy is
/// collapsed: p_n is the total weight of the eigenspace of level n.
class BoundState {
 public:
  BoundState(std::vector<double> weights, Provenance provenance);

  [[nodiscard]] std::span<const double> weights() const { return weights_; }
  /// p_n for 1-based n; 0 beyond the stored length.
  [[nodiscard]] double weight(std::size_t n) const;
  [[nodiscard]] std::size_t size() const { return weights_.size(); }
  [[nodiscard]] bool normalized() const { return normalized_; }
  /// Correctly rounded sum of the weights.
  [[nodiscard]] double total_weight() const { return total_; }
  [[nodiscard]] const Provenance& provenance() const { return provenance_; }

 private:
  std::vector<double> weights_;
  Provenance provenance_;
  double total_{0.0};
  bool normalized_{false};
};

/// p_n = n^-(1 + 1/j), n <= n_max.
[[nodiscard]] BoundState power_state(std::uint64_t j, std::size_t n_max, bool normalized = false);

/// p_n = prefix_n for n < k, n^-(2s) for k <= n <= n_max. Records
/// S_q = sum p_n^q (metadata "S_q") together with an upper bound on its
/// untruncated tail ("S_q_tail_bound").
[[nodiscard]] BoundState hybrid_state(std::span<const double> prefix, std::size_t k, double s,
                                      double q_check, std::size_t n_max);

struct SigmaChoice {
  std::size_t m1{0};
  std::size_t m2{0};
};

/// p_n = base_n for n <= M1, 0 for M1 < n < M2, n^-(1 + 1/j) for
/// M2 <= n <= n_max, with M1 and M2 the smallest values keeping both tails
/// below sigma^2. Metadata holds M1, M2, both tails and the squared
/// amplitude distance to `base`.
[[nodiscard]] BoundState sigma_state(const BoundState& base, std::uint64_t j, double sigma,
                                     std::size_t n_max);

/// Single level n0 with weight 1.
[[nodiscard]] BoundState eigen_state(std::size_t n0, std::size_t n_max);

/// Seeded random state p_n = u_n n^-(1 + s), u_n ~ U(0,1), s ~ U(0.05, 1).
[[nodiscard]] BoundState random_state(std::uint64_t seed, std::size_t n_max, bool normalized = true);

/// Atoms (eigenvalue(n), p_n) for every p_n > 0.
[[nodiscard]] AtomicMeasure spectral_measure(const BoundState& state, const EigenvalueFamily& f);

/// CSV `n,weight`.
void write_csv(std::ostream& out, const BoundState& state);
[[nodiscard]] BoundState read_state_csv(std::istream& in);

}  // namespace ppdim
