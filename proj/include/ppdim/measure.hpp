#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace ppdim {

struct Atom {
  double position{0.0};
  double weight{0.0};
};

/// Finite pure-point measure: Dirac atoms at strictly increasing positions
/// with strictly positive weights.
///
/// Construction sorts the atoms and merges coincident positions by summing
/// their weights. Immutable afterwards; all queries are const and safe to
/// call from several threads.
class AtomicMeasure {
 public:
  AtomicMeasure() = default;
  explicit AtomicMeasure(std::vector<Atom> atoms);

  [[nodiscard]] std::span<const double> positions() const { return positions_; }
  [[nodiscard]] std::span<const double> weights() const { return weights_; }
  [[nodiscard]] std::size_t size() const { return positions_.size(); }
  [[nodiscard]] bool empty() const { return positions_.empty(); }

  /// Correctly rounded sum of the weights.
  [[nodiscard]] double total_mass() const { return total_mass_; }
  [[nodiscard]] double min_position() const;
  [[nodiscard]] double max_position() const;

  /// Same atoms with every weight multiplied by `factor` (> 0).
  [[nodiscard]] AtomicMeasure scaled(double factor) const;

 private:
  std::vector<double> positions_;
  std::vector<double> weights_;
  double total_mass_{0.0};
};

/// Half-open index range [first, last) of the atoms in the open ball
/// (x - eps, x + eps). Distances are compared as |position - x| < eps, never
/// as shifted endpoints, so the result stays right when eps is below the
/// spacing of doubles near x.
[[nodiscard]] std::pair<std::size_t, std::size_t> ball_range(const AtomicMeasure& mu, double x,
                                                            double eps);

/// Mass of the open ball (x - eps, x + eps); O(log N + hits).
[[nodiscard]] double ball_mass(const AtomicMeasure& mu, double x, double eps);

/// Probability measure proportional to `mu`.
[[nodiscard]] AtomicMeasure normalize(const AtomicMeasure& mu);

/// Smallest distance between consecutive atoms. Needs at least two atoms.
[[nodiscard]] double min_gap(const AtomicMeasure& mu);

/// Largest distance between consecutive atoms. Needs at least two atoms.
[[nodiscard]] double max_gap(const AtomicMeasure& mu);

/// CSV with header `position,weight`, 17 significant digits.
void write_csv(std::ostream& out, const AtomicMeasure& mu);
[[nodiscard]] AtomicMeasure read_measure_csv(std::istream& in);

}  // namespace ppdim
