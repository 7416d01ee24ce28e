#include "ppdim/regression.hpp"

#include <cmath>
#include <stdexcept>

namespace ppdim {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("fit_line: size mismatch");
  }
  const std::size_t n = x.size();
  if (n < 2) {
    throw std::invalid_argument("fit_line: need at least two points");
  }
  long double mx = 0;
  long double my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  long double sxx = 0;
  long double sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0)) {
    throw std::invalid_argument("fit_line: abscissae are all equal");
  }
  LineFit fit;
  fit.slope = static_cast<double>(sxy / sxx);
  fit.intercept = static_cast<double>(my - sxy / sxx * mx);
  long double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.rms_residual = static_cast<double>(std::sqrt(ss / n));
  fit.slope_stderr = n > 2 ? static_cast<double>(std::sqrt(ss / (n - 2) / sxx)) : 0.0;
  return fit;
}

}  // namespace ppdim
