#include "ppdim/exact_sum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace ppdim {

namespace {

using u128 = unsigned __int128;

constexpr std::int64_t kLimbMask = (std::int64_t{1} << 32) - 1;

// Carry-propagates limbs [lo, hi] so that every limb below the top lies in
// [0, 2^32); the top limb keeps the sign. Returns the new top index.
template <std::size_t N>
int propagate(std::array<std::int64_t, N>& limb, int lo, int hi) {
  for (int i = lo; i < hi; ++i) {
    const std::int64_t carry = limb[i] >> 32;
    limb[i] &= kLimbMask;
    limb[i + 1] += carry;
  }
  while (hi + 1 < static_cast<int>(N) && limb[hi] > kLimbMask) {
    limb[hi + 1] += limb[hi] >> 32;
    limb[hi] &= kLimbMask;
    ++hi;
  }
  return hi;
}

// Rounds a nonnegative normalized magnitude held in limb[lo..hi] (top limb
// nonzero, kPad >= 2 zero limbs below the subnormal LSB).
template <std::size_t N>
double round_magnitude(const std::array<std::int64_t, N>& limb, int lo, int hi, int pad) {
  const u128 top = (static_cast<u128>(limb[hi]) << 64) |
                   (static_cast<u128>(limb[hi - 1]) << 32) |
                   static_cast<u128>(limb[hi - 2]);
  bool sticky = false;
  for (int i = lo; i < hi - 2; ++i) {
    if (limb[i] != 0) {
      sticky = true;
      break;
    }
  }
  const int high_word = static_cast<int>(top >> 64) != 0
                            ? 64 + std::bit_width(static_cast<std::uint64_t>(top >> 64))
                            : std::bit_width(static_cast<std::uint64_t>(top));
  // Exponent of the least significant bit of `top`.
  const int lsb_exp = 32 * (hi - 2 - pad) - 1074;
  int shift = std::max(high_word - 53, 0);
  shift = std::max(shift, -1074 - lsb_exp);

  u128 mant = shift >= 128 ? 0 : (top >> shift);
  if (shift > 0) {
    const u128 rem = shift >= 128 ? top : (top & ((u128{1} << shift) - 1));
    const u128 half = u128{1} << (shift - 1);
    if (rem > half || (rem == half && (sticky || (mant & 1) != 0))) {
      ++mant;
    }
  }
  return std::ldexp(static_cast<double>(static_cast<std::uint64_t>(mant)), lsb_exp + shift);
}

}  // namespace

void ExactSum::clear() {
  if (hi_ >= 0) {
    std::fill(limb_.begin() + lo_, limb_.begin() + hi_ + 1, 0);
  }
  lo_ = kLimbs;
  hi_ = -1;
  pending_ = 0;
}

void ExactSum::deposit(double x, bool negate) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("ExactSum: non-finite term");
  }
  const auto bits = std::bit_cast<std::uint64_t>(x);
  const auto biased = static_cast<int>((bits >> 52) & 0x7FF);
  std::uint64_t mant = bits & ((std::uint64_t{1} << 52) - 1);
  int pos = 0;  // bit position of mant's LSB, counted from 2^-1074
  if (biased != 0) {
    mant |= std::uint64_t{1} << 52;
    pos = biased - 1;
  }
  if (mant == 0) {
    return;
  }
  if ((bits >> 63) != 0) {
    negate = !negate;
  }
  const int index = pos / kLimbBits + kPad;
  const u128 v = static_cast<u128>(mant) << (pos % kLimbBits);
  const auto p0 = static_cast<std::int64_t>(v & 0xFFFFFFFFu);
  const auto p1 = static_cast<std::int64_t>((v >> 32) & 0xFFFFFFFFu);
  const auto p2 = static_cast<std::int64_t>(v >> 64);
  if (negate) {
    limb_[index] -= p0;
    limb_[index + 1] -= p1;
    limb_[index + 2] -= p2;
  } else {
    limb_[index] += p0;
    limb_[index + 1] += p1;
    limb_[index + 2] += p2;
  }
  lo_ = std::min(lo_, index);
  hi_ = std::max(hi_, index + 2);
  // Each deposit moves a limb by < 2^32; flush long before 2^63.
  if (++pending_ >= (1u << 29)) {
    normalize();
  }
}

void ExactSum::normalize() {
  pending_ = 0;
  if (hi_ < lo_) {
    return;
  }
  hi_ = propagate(limb_, lo_, hi_);
  while (hi_ >= lo_ && limb_[hi_] == 0) {
    --hi_;
  }
  while (lo_ <= hi_ && limb_[lo_] == 0) {
    ++lo_;
  }
  if (hi_ < lo_) {
    lo_ = kLimbs;
    hi_ = -1;
  }
}

bool ExactSum::is_zero() {
  normalize();
  return hi_ < 0;
}

double ExactSum::value() {
  normalize();
  if (hi_ < 0) {
    return 0.0;
  }
  if (limb_[hi_] > 0) {
    return round_magnitude(limb_, lo_, hi_, kPad);
  }
  // Negative: round the two's-complement magnitude.
  std::array<std::int64_t, kLimbs> mag{};
  for (int i = lo_; i <= hi_; ++i) {
    mag[i] = -limb_[i];
  }
  int top = propagate(mag, lo_, hi_);
  while (top > lo_ && mag[top] == 0) {
    --top;
  }
  return -round_magnitude(mag, lo_, top, kPad);
}

}  // namespace ppdim
