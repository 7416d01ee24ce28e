#pragma once

#include <span>

namespace ppdim {

struct LineFit {
  double slope{0.0};
  double intercept{0.0};
  double rms_residual{0.0};
  double slope_stderr{0.0};
};

/// Ordinary least squares y = intercept + slope * x. Needs two distinct x.
[[nodiscard]] LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace ppdim
