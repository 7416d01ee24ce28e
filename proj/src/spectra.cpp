#include "ppdim/spectra.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ppdim/regression.hpp"

namespace ppdim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

EigenvalueFamily EigenvalueFamily::hydrogen(double lambda, std::size_t horizon) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("hydrogen: Lambda must be positive");
  }
  if (horizon < 2) {
    throw std::invalid_argument("hydrogen: horizon must be >= 2");
  }
  EigenvalueFamily f;
  f.params_ = HydrogenParams{lambda};
  f.alpha_ = 2.0;
  f.horizon_ = horizon;
  f.increasing_ = true;
  f.validate_gaps();
  return f;
}

EigenvalueFamily EigenvalueFamily::hydrogen_from_kappa(double kappa, std::size_t horizon) {
  if (!(kappa > 0.0)) {
    throw std::invalid_argument("hydrogen: kappa must be positive");
  }
  return hydrogen(kappa * kappa / 4.0, horizon);
}

EigenvalueFamily EigenvalueFamily::power_law(double alpha, double L, double sigma0,
                                             std::size_t horizon) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("power_law: alpha must be positive");
  }
  if (L == 0.0 || !std::isfinite(L) || !std::isfinite(sigma0)) {
    throw std::invalid_argument("power_law: L must be finite and nonzero");
  }
  if (horizon < 2) {
    throw std::invalid_argument("power_law: horizon must be >= 2");
  }
  EigenvalueFamily f;
  f.params_ = PowerLawParams{alpha, L, sigma0};
  f.alpha_ = alpha;
  f.horizon_ = horizon;
  f.increasing_ = L < 0.0;
  f.validate_gaps();
  return f;
}

EigenvalueFamily EigenvalueFamily::custom(std::vector<double> values) {
  if (values.size() < 3) {
    throw std::invalid_argument("custom: need at least three eigenvalues");
  }
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("custom: non-finite eigenvalue");
    }
  }
  const bool up = values[1] > values[0];
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (up ? !(values[i] > values[i - 1]) : !(values[i] < values[i - 1])) {
      throw std::invalid_argument("custom: eigenvalues must be strictly monotone");
    }
  }
  EigenvalueFamily f;
  f.horizon_ = values.size();
  f.increasing_ = up;

  // Gap law: ln gap_n ~ const - (1 + alpha) ln n.
  std::vector<double> ln_n;
  std::vector<double> ln_gap;
  for (std::size_t n = 1; n < values.size(); ++n) {
    ln_n.push_back(std::log(static_cast<double>(n)));
    ln_gap.push_back(std::log(std::abs(values[n] - values[n - 1])));
  }
  f.params_ = CustomParams{std::move(values)};
  f.validate_gaps();

  const LineFit fit = fit_line(ln_n, ln_gap);
  f.alpha_ = -fit.slope - 1.0;
  f.fit_residual_ = fit.rms_residual;
  if (!(f.alpha_ > 0.0)) {
    throw std::invalid_argument("custom: fitted gap exponent gives alpha <= 0");
  }
  if (fit.rms_residual > 0.01) {
    f.warning_ = "custom: log-log gap fit residual " + std::to_string(fit.rms_residual) +
                 " exceeds 1%; the power law is approximate";
  }
  return f;
}

void EigenvalueFamily::check_level(std::size_t n) const {
  if (n == 0) {
    throw std::invalid_argument("eigenvalue: levels start at n = 1");
  }
  if (std::holds_alternative<CustomParams>(params_) && n > horizon_) {
    throw std::out_of_range("eigenvalue: level beyond the custom list");
  }
}

double EigenvalueFamily::eigenvalue(std::size_t n) const {
  check_level(n);
  const auto dn = static_cast<double>(n);
  return std::visit(overloaded{
                        [&](const HydrogenParams& h) { return -h.lambda / (dn * dn); },
                        [&](const PowerLawParams& p) {
                          return p.sigma0 + p.L * std::pow(dn, -p.alpha);
                        },
                        [&](const CustomParams& c) { return c.values[n - 1]; },
                    },
                    params_);
}

double EigenvalueFamily::gap(std::size_t n) const {
  check_level(n);
  const auto dn = static_cast<double>(n);
  return std::visit(
      overloaded{
          [&](const HydrogenParams& h) {
            // Lambda (1/n^2 - 1/(n+1)^2) = Lambda (2n+1) / (n^2 (n+1)^2)
            const double np1 = dn + 1.0;
            return h.lambda * (2.0 * dn + 1.0) / (dn * dn) / (np1 * np1);
          },
          [&](const PowerLawParams& p) {
            // |L| n^-alpha (1 - (1 + 1/n)^-alpha)
            const double rel = -std::expm1(-p.alpha * std::log1p(1.0 / dn));
            return std::abs(p.L) * std::pow(dn, -p.alpha) * rel;
          },
          [&](const CustomParams& c) {
            if (n >= c.values.size()) {
              throw std::out_of_range("gap: level n + 1 beyond the custom list");
            }
            return std::abs(c.values[n] - c.values[n - 1]);
          },
      },
      params_);
}

double EigenvalueFamily::accumulation_point() const {
  return std::visit(overloaded{
                        [](const HydrogenParams&) { return 0.0; },
                        [](const PowerLawParams& p) { return p.sigma0; },
                        [](const CustomParams& c) { return c.values.back(); },
                    },
                    params_);
}

std::string EigenvalueFamily::name() const {
  return std::visit(overloaded{
                        [](const HydrogenParams&) { return std::string("hydrogen"); },
                        [](const PowerLawParams&) { return std::string("powerlaw"); },
                        [](const CustomParams&) { return std::string("custom"); },
                    },
                    params_);
}

void EigenvalueFamily::validate_gaps() const {
  const std::size_t last = std::holds_alternative<CustomParams>(params_) ? horizon_ - 1 : horizon_;
  double prev = gap(1);
  if (!(prev > 0.0)) {
    throw std::invalid_argument(name() + ": zero gap at n = 1");
  }
  for (std::size_t n = 2; n <= last; ++n) {
    const double g = gap(n);
    if (!(g < prev) || !(g > 0.0)) {
      throw std::invalid_argument(name() + ": gaps do not vanish monotonically (n = " +
                                  std::to_string(n) + ")");
    }
    prev = g;
  }
}

double gap_lower_constant(const EigenvalueFamily& f, std::size_t horizon) {
  if (horizon < 2) {
    throw std::invalid_argument("gap_lower_constant: horizon must be >= 2");
  }
  std::size_t last = std::min(horizon, f.horizon());
  if (std::holds_alternative<CustomParams>(f.params())) {
    last = std::min(last, f.horizon() - 1);
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n <= last; ++n) {
    const double scaled = std::pow(static_cast<double>(n), f.gap_exponent()) * f.gap(n);
    best = std::min(best, scaled);
  }
  return 0.999 * best;
}

ScaleIndex n_epsilon(const EigenvalueFamily& f, double eps, double C) {
  if (!(eps > 0.0) || !(C > 0.0)) {
    throw std::invalid_argument("n_epsilon: eps and C must be positive");
  }
  const double e = f.gap_exponent();
  const double ratio = C / eps;
  double n = std::floor(std::pow(ratio, 1.0 / e));
  // pow may land one off an exact integer root.
  while (n > 0.0 && std::pow(n, e) > ratio) {
    n -= 1.0;
  }
  while (std::pow(n + 1.0, e) <= ratio) {
    n += 1.0;
  }
  ScaleIndex out;
  out.n = static_cast<std::size_t>(n);
  out.degenerate = eps >= C || out.n == 0;
  return out;
}

double subsequence_epsilon(const EigenvalueFamily& f, std::size_t N) {
  if (N == 0) {
    throw std::invalid_argument("subsequence_epsilon: N must be >= 1");
  }
  return 0.5 * f.gap(N);
}

double dimension_ceiling(const EigenvalueFamily& f) { return 1.0 / f.gap_exponent(); }

}  // namespace ppdim
