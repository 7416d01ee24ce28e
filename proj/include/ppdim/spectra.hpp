#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ppdim {

struct HydrogenParams {
  double lambda{0.25};
};

struct PowerLawParams {
  double alpha{1.0};
  double L{1.0};
  double sigma0{0.0};
};

struct CustomParams {
  std::vector<double> values;
};

/// Eigenvalue sequence of a pure-point operator, indexed by level n >= 1.
///
/// Hydrogen: lambda_n = -Lambda / n^2. PowerLaw: sigma_n = sigma0 + L / n^alpha.
/// Custom: a caller-supplied strictly monotone list whose gaps shrink
/// strictly toward the accumulation end.
///
/// Every family carries a decay exponent alpha (2 for Hydrogen) such that the
/// gaps behave like n^-(1+alpha). Gap monotonicity is checked numerically at
/// construction for all n below the horizon.
class EigenvalueFamily {
 public:
  static constexpr std::size_t kDefaultHorizon = 1'000'000;

  static EigenvalueFamily hydrogen(double lambda = 0.25,
                                   std::size_t horizon = kDefaultHorizon);
  /// Lambda = kappa^2 / 4.
  static EigenvalueFamily hydrogen_from_kappa(double kappa,
                                              std::size_t horizon = kDefaultHorizon);
  static EigenvalueFamily power_law(double alpha, double L, double sigma0 = 0.0,
                                    std::size_t horizon = kDefaultHorizon);
  static EigenvalueFamily custom(std::vector<double> values);

  [[nodiscard]] double eigenvalue(std::size_t n) const;
  /// |lambda_{n+1} - lambda_n| from a cancellation-free closed form.
  [[nodiscard]] double gap(std::size_t n) const;

  [[nodiscard]] double decay_exponent() const { return alpha_; }
  [[nodiscard]] double gap_exponent() const { return 1.0 + alpha_; }
  [[nodiscard]] double accumulation_point() const;
  /// Largest admissible level index.
  [[nodiscard]] std::size_t horizon() const { return horizon_; }
  /// True when eigenvalues increase with n.
  [[nodiscard]] bool increasing() const { return increasing_; }
  [[nodiscard]] std::string name() const;

  /// Set for Custom families whose log-log gap fit is poor.
  [[nodiscard]] const std::optional<std::string>& warning() const { return warning_; }
  /// RMS residual of the log-log gap fit (Custom only, else 0).
  [[nodiscard]] double fit_residual() const { return fit_residual_; }

  [[nodiscard]] const std::variant<HydrogenParams, PowerLawParams, CustomParams>& params() const {
    return params_;
  }

 private:
  EigenvalueFamily() = default;
  void validate_gaps() const;
  void check_level(std::size_t n) const;

  std::variant<HydrogenParams, PowerLawParams, CustomParams> params_;
  double alpha_{2.0};
  std::size_t horizon_{kDefaultHorizon};
  bool increasing_{true};
  double fit_residual_{0.0};
  std::optional<std::string> warning_;
};

/// Constant C with gap(n) > C / n^(1+alpha) for every n <= horizon: the
/// minimum of n^(1+alpha) * gap(n) over that range, deflated by 0.999.
[[nodiscard]] double gap_lower_constant(const EigenvalueFamily& f, std::size_t horizon);

struct ScaleIndex {
  std::size_t n{0};
  /// eps >= C: the scale is too coarse for any level to be guaranteed isolated.
  bool degenerate{false};
};

/// N_eps = floor((C / eps)^(1 / (1 + alpha))).
[[nodiscard]] ScaleIndex n_epsilon(const EigenvalueFamily& f, double eps, double C);

/// eps_N = gap(N) / 2; atoms 1..N are isolated at this scale.
[[nodiscard]] double subsequence_epsilon(const EigenvalueFamily& f, std::size_t N);

/// Ceiling 1 / (1 + alpha) of the upper dimension for this eigenvalue law.
[[nodiscard]] double dimension_ceiling(const EigenvalueFamily& f);

}  // namespace ppdim
