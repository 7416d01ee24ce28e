#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ppdim::cli {

/// Raised for unreadable, unknown or inconsistent configuration. Maps to exit
/// code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FamilyConfig {
  std::string type{"hydrogen"};
  double lambda{0.25};
  std::optional<double> kappa;
  double alpha{1.0};
  double L{1.0};
  double sigma0{0.0};
  std::size_t horizon{1'000'000};
  std::vector<double> values;
  /// Custom: file of eigenvalues, comma or newline separated. Used when
  /// `values` is empty.
  std::string custom_path;
};

struct StateConfig {
  std::string recipe{"power"};
  std::uint64_t j{10};
  std::size_t n_max{524'288};
  bool normalized{false};
  std::size_t k{1};
  double s{2.0};
  double q_check{0.5};
  double sigma{0.3};
  std::uint64_t base_j{10};
  std::size_t base_n_max{100};
  std::size_t n0{1};
  std::string path;
};

struct GapsConfig {
  std::size_t n_max{100'000};
  /// 0 writes every n.
  int per_decade{20};
};

struct ScanConfig {
  std::vector<double> q{0.5};
  /// "default" (largest gap down to the resolution floor) or "geometric".
  std::string grid{"default"};
  double eps_hi{1e-2};
  double eps_lo{1e-12};
  double ratio{0.70710678118654752};
  std::vector<std::size_t> n_list;
  int n_pow2_min{10};
  int n_pow2_max{18};
  double ceiling_slack{0.05};
};

struct DynamicsConfig {
  std::string basis{"scrambled"};
  std::size_t levels{512};
  /// 0 means K = levels.
  std::size_t K{0};
  double p{1.0};
  int per_decade{32};
  /// 0 selects the first dephasing time 1 / gap(1).
  double t_min{0.0};
  /// 0 selects the saturation time.
  double t_max{0.0};
  bool write_w{false};
  double gsb_slack{0.1};
  int phase_sign{-1};
};

struct VerifyConfig {
  std::size_t quad_trials{20};
  std::size_t naive_trials{50};
  std::string fault{"none"};
};

struct RunConfig {
  std::string out{"out"};
  std::optional<std::uint64_t> seed;
  unsigned threads{1};
};

struct ExperimentConfig {
  FamilyConfig family;
  StateConfig state;
  GapsConfig gaps;
  ScanConfig scan;
  DynamicsConfig dynamics;
  VerifyConfig verify;
  RunConfig run;
};

/// Line-based `key = value` with `[section]` headers; `#` starts a comment.
/// Lists are comma separated. Unknown sections or keys are errors.
[[nodiscard]] ExperimentConfig parse_config(std::istream& in, const std::string& origin = "config");
[[nodiscard]] ExperimentConfig load_config(const std::string& path);

/// Every key with its default value, in parseable form.
void print_defaults(std::ostream& out);

}  // namespace ppdim::cli
