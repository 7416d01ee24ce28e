#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ppdim/spectra.hpp"
#include "ppdim/states.hpp"

namespace ppdim {

enum class BasisKind { eigen, scrambled, random_orthogonal };

/// K x N matrix of coefficients c_{k,n} = <k|n> over levels 1..N, rows
/// orthonormal.
struct Basis {
  BasisKind kind{BasisKind::eigen};
  std::uint64_t seed{0};
  Eigen::MatrixXd coeff;

  [[nodiscard]] std::size_t rows() const { return static_cast<std::size_t>(coeff.rows()); }
  [[nodiscard]] std::size_t levels() const { return static_cast<std::size_t>(coeff.cols()); }
};

[[nodiscard]] Basis eigen_basis(std::size_t n, std::size_t k);
/// DCT-IV rows: sqrt(2/N) cos(pi/N (k - 1/2)(n - 1/2)).
[[nodiscard]] Basis scrambled_basis(std::size_t n, std::size_t k);
/// First K rows of the orthogonal factor of a seeded Gaussian N x N matrix.
[[nodiscard]] Basis random_orthogonal_basis(std::size_t n, std::size_t k, std::uint64_t seed);
/// max |C C^T - I|
[[nodiscard]] double gram_deviation(const Basis& b);
[[nodiscard]] std::string to_string(BasisKind kind);
[[nodiscard]] BasisKind basis_kind_from_string(const std::string& name);

/// (1/t) integral_0^t exp(-i delta s) ds
[[nodiscard]] std::complex<double> time_avg_kernel(double delta, double t);

/// a_n = sqrt(p_n) for n = 1..n, zero-padded.
[[nodiscard]] Eigen::VectorXd amplitudes(const BoundState& state, std::size_t n);

/// W_k(t) = sum_{n,m} c_{k,n} c_{k,m} a_n a_m Re K(lambda_n - lambda_m, t).
/// `phase_sign` selects exp(-i delta s) (-1) or exp(+i delta s) (+1).
[[nodiscard]] Eigen::VectorXd averaged_probabilities(const Eigen::VectorXd& a,
                                                     const EigenvalueFamily& f, const Basis& b,
                                                     double t, int phase_sign = -1);

/// (sum_k k^p W_k)^(1/p), k = 1..K.
[[nodiscard]] double moment(const Eigen::VectorXd& w, double p);

/// 200 / min_gap: beyond it every off-diagonal kernel is below 1e-2.
[[nodiscard]] double saturation_time(double min_gap);
/// Saturation time of levels 1..n.
[[nodiscard]] double saturation_time(const EigenvalueFamily& f, std::size_t n);

/// Geometric grid from the first dephasing time 1 / gap(1) up to the
/// saturation time of levels 1..n.
[[nodiscard]] std::vector<double> default_time_grid(const EigenvalueFamily& f, std::size_t n,
                                                    int per_decade = 32);

struct TransportEstimate {
  double beta_minus{0.0};
  double beta_plus{0.0};
  double regression_beta{0.0};
  double t_lo{0.0};
  double t_hi{0.0};
  std::size_t count{0};
  bool beyond_saturation{false};
};

struct MomentTrace {
  double p{1.0};
  std::vector<double> times;
  /// K x T; column j is W(times[j]).
  Eigen::MatrixXd W;
  std::vector<double> r;
  double saturation_time{0.0};
  TransportEstimate estimate;
};

struct DynamicsOptions {
  unsigned threads{1};
  int phase_sign{-1};
};

/// W and r_p at every time, then transport exponents over the whole grid.
[[nodiscard]] MomentTrace simulate_moments(const Eigen::VectorXd& a, const EigenvalueFamily& f,
                                           const Basis& b, std::span<const double> times,
                                           double p, const DynamicsOptions& options = {});

/// Min, max and least-squares slope of ln r against ln t over the grid
/// points inside [t_lo, t_hi], from secants between neighbours.
[[nodiscard]] TransportEstimate transport_exponents(const MomentTrace& trace, double t_lo,
                                                    double t_hi);

struct GsbReport {
  double beta_plus{0.0};
  double dimension{0.0};
  double margin{0.0};
  double slack{0.0};
  bool passed{false};
};

/// beta_plus >= D - slack
[[nodiscard]] GsbReport gsb_check(double beta_plus, double dimension, double slack = 0.1);

/// CSV `t,r_p` then W_1..W_K when `with_w`.
void write_trace_csv(std::ostream& out, const MomentTrace& trace, bool with_w);

}  // namespace ppdim
