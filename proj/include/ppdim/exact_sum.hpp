#pragma once

#include <array>
#include <cstdint>

namespace ppdim {

/// Exact accumulator for sums and differences of doubles.
///
/// The running value is kept as a fixed-point integer that spans the whole
/// binary64 exponent range (32-bit limbs held in 64-bit cells, so carries can
/// be deferred), hence `add` and `subtract` never round. `value()` returns the
/// sum rounded once to nearest, ties to even. Because the result is the
/// correctly rounded exact sum, it does not depend on the order in which the
/// terms were supplied; sliding-window and brute-force ball masses built on
/// this class agree bit for bit.
class ExactSum {
 public:
  ExactSum() = default;

  void add(double x) { deposit(x, false); }
  void subtract(double x) { deposit(x, true); }
  void clear();

  /// Correctly rounded value. Normalizes the limbs in place; the represented
  /// value is unchanged.
  [[nodiscard]] double value();
  [[nodiscard]] bool is_zero();

 private:
  static constexpr int kLimbBits = 32;
  // Two zero limbs below bit 2^-1074 keep the rounding window in range.
  static constexpr int kPad = 2;
  static constexpr int kLimbs = 72;

  void deposit(double x, bool negate);
  void normalize();

  std::array<std::int64_t, kLimbs> limb_{};
  int lo_ = kLimbs;
  int hi_ = -1;
  std::uint32_t pending_ = 0;
};

}  // namespace ppdim
