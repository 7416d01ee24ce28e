#include "ppdim/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

#include "ppdim/parallel.hpp"
#include "ppdim/regression.hpp"

namespace ppdim {

namespace {

void check_shape(std::size_t n, std::size_t k) {
  if (n < 1) {
    throw std::invalid_argument("basis: N must be >= 1");
  }
  if (k < 1 || k > n) {
    throw std::invalid_argument("basis: need 1 <= K <= N");
  }
}

}  // namespace

Basis eigen_basis(std::size_t n, std::size_t k) {
  check_shape(n, k);
  Basis b;
  b.kind = BasisKind::eigen;
  b.coeff = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(n));
  return b;
}

Basis scrambled_basis(std::size_t n, std::size_t k) {
  check_shape(n, k);
  Basis b;
  b.kind = BasisKind::scrambled;
  const auto N = static_cast<Eigen::Index>(n);
  b.coeff.resize(static_cast<Eigen::Index>(k), N);
  const double scale = std::sqrt(2.0 / static_cast<double>(n));
  const double w = std::numbers::pi / static_cast<double>(n);
  for (Eigen::Index r = 0; r < b.coeff.rows(); ++r) {
    for (Eigen::Index c = 0; c < N; ++c) {
      b.coeff(r, c) = scale * std::cos(w * (static_cast<double>(r) + 0.5) *
                                       (static_cast<double>(c) + 0.5));
    }
  }
  return b;
}

Basis random_orthogonal_basis(std::size_t n, std::size_t k, std::uint64_t seed) {
  check_shape(n, k);
  const auto N = static_cast<Eigen::Index>(n);
  std::mt19937_64 rng(seed);
  auto unit = [&rng] { return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53; };
  Eigen::MatrixXd g(N, N);
  for (Eigen::Index r = 0; r < N; ++r) {
    for (Eigen::Index c = 0; c < N; ++c) {
      // Box-Muller
      const double u1 = unit();
      const double u2 = unit();
      g(r, c) = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
  }
  const Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(N, N);
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (Eigen::Index i = 0; i < N; ++i) {
    if (r(i, i) < 0.0) {
      q.col(i) *= -1.0;
    }
  }
  Basis b;
  b.kind = BasisKind::random_orthogonal;
  b.seed = seed;
  b.coeff = q.topRows(static_cast<Eigen::Index>(k));
  return b;
}

double gram_deviation(const Basis& b) {
  const Eigen::MatrixXd gram = b.coeff * b.coeff.transpose();
  return (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
}

std::string to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::eigen:
      return "eigen";
    case BasisKind::scrambled:
      return "scrambled";
    case BasisKind::random_orthogonal:
      return "random_orthogonal";
  }
  return "unknown";
}

BasisKind basis_kind_from_string(const std::string& name) {
  if (name == "eigen") {
    return BasisKind::eigen;
  }
  if (name == "scrambled") {
    return BasisKind::scrambled;
  }
  if (name == "random_orthogonal") {
    return BasisKind::random_orthogonal;
  }
  throw std::invalid_argument("unknown basis '" + name + "'");
}

std::complex<double> time_avg_kernel(double delta, double t) {
  if (!(t > 0.0)) {
    throw std::invalid_argument("time_avg_kernel: t must be positive");
  }
  if (delta == 0.0) {
    return {1.0, 0.0};
  }
  // (1 - e^{-ix}) / (ix) = sin x / x - i 2 sin^2(x/2) / x
  const double x = delta * t;
  const double h = std::sin(0.5 * x);
  return {std::sin(x) / x, -2.0 * h * h / x};
}

Eigen::VectorXd amplitudes(const BoundState& state, std::size_t n) {
  if (state.size() > n) {
    throw std::invalid_argument("amplitudes: state has more levels than the basis");
  }
  Eigen::VectorXd a = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t i = 1; i <= state.size(); ++i) {
    a(static_cast<Eigen::Index>(i - 1)) = std::sqrt(state.weight(i));
  }
  return a;
}

Eigen::VectorXd averaged_probabilities(const Eigen::VectorXd& a, const EigenvalueFamily& f,
                                       const Basis& b, double t, int phase_sign) {
  if (static_cast<std::size_t>(a.size()) != b.levels()) {
    throw std::invalid_argument("averaged_probabilities: amplitude length " +
                                std::to_string(a.size()) + " != basis N " +
                                std::to_string(b.levels()));
  }
  if (!(t > 0.0)) {
    throw std::invalid_argument("averaged_probabilities: t must be positive");
  }
  if (phase_sign != 1 && phase_sign != -1) {
    throw std::invalid_argument("averaged_probabilities: phase sign must be +-1");
  }
  if ((a.array() < 0.0).any()) {
    throw std::invalid_argument("averaged_probabilities: amplitudes must be nonnegative");
  }
  const Eigen::Index n = a.size();
  std::vector<double> lambda(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    lambda[static_cast<std::size_t>(i)] = f.eigenvalue(static_cast<std::size_t>(i) + 1);
  }
  // Re K = sin x / x with x = -phase_sign * delta * t
  Eigen::MatrixXd s(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double delta =
          lambda[static_cast<std::size_t>(i)] - lambda[static_cast<std::size_t>(m)];
      const double x = -phase_sign * delta * t;
      s(i, m) = x == 0.0 ? 1.0 : std::sin(x) / x;
    }
  }
  const Eigen::MatrixXd bmat = b.coeff * a.asDiagonal();
  return (bmat * s).cwiseProduct(bmat).rowwise().sum();
}

double moment(const Eigen::VectorXd& w, double p) {
  if (!(p > 0.0) || !std::isfinite(p)) {
    throw std::invalid_argument("moment: p must be positive");
  }
  if (w.size() == 0 || (w.array() == 0.0).all()) {
    throw std::invalid_argument("moment: all-zero W");
  }
  if ((w.array() < -1e-10).any()) {
    throw std::invalid_argument("moment: W must be nonnegative");
  }
  double sum = 0.0;
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    sum += std::pow(static_cast<double>(k + 1), p) * std::max(w(k), 0.0);
  }
  return std::pow(sum, 1.0 / p);
}

double saturation_time(double min_gap) {
  if (!(min_gap > 0.0)) {
    throw std::invalid_argument("saturation_time: gap must be positive");
  }
  return 200.0 / min_gap;
}

double saturation_time(const EigenvalueFamily& f, std::size_t n) {
  if (n < 2) {
    throw std::invalid_argument("saturation_time: need at least two levels");
  }
  double g = f.gap(1);
  for (std::size_t i = 2; i < n; ++i) {
    g = std::min(g, f.gap(i));
  }
  return saturation_time(g);
}

std::vector<double> default_time_grid(const EigenvalueFamily& f, std::size_t n, int per_decade) {
  if (per_decade < 1) {
    throw std::invalid_argument("default_time_grid: need >= 1 point per decade");
  }
  const double t0 = 1.0 / f.gap(1);
  const double t_sat = saturation_time(f, n);
  std::vector<double> grid;
  for (int k = 0;; ++k) {
    const double t = t0 * std::pow(10.0, static_cast<double>(k) / per_decade);
    if (t > t_sat) {
      break;
    }
    grid.push_back(t);
  }
  return grid;
}

MomentTrace simulate_moments(const Eigen::VectorXd& a, const EigenvalueFamily& f, const Basis& b,
                             std::span<const double> times, double p,
                             const DynamicsOptions& options) {
  if (times.empty()) {
    throw std::invalid_argument("simulate_moments: empty time grid");
  }
  for (std::size_t j = 0; j < times.size(); ++j) {
    if (!(times[j] > 0.0) || (j > 0 && !(times[j] > times[j - 1]))) {
      throw std::invalid_argument("simulate_moments: times must be positive and increasing");
    }
  }
  MomentTrace trace;
  trace.p = p;
  trace.times.assign(times.begin(), times.end());
  trace.W.resize(b.coeff.rows(), static_cast<Eigen::Index>(times.size()));
  trace.r.resize(times.size());
  parallel_for(times.size(), options.threads, [&](std::size_t j) {
    const Eigen::VectorXd w = averaged_probabilities(a, f, b, times[j], options.phase_sign);
    trace.W.col(static_cast<Eigen::Index>(j)) = w;
    trace.r[j] = moment(w, p);
  });
  trace.saturation_time = b.levels() >= 2 ? saturation_time(f, b.levels())
                                          : std::numeric_limits<double>::infinity();
  if (times.size() >= 2) {
    trace.estimate = transport_exponents(trace, times.front(), times.back());
  }
  return trace;
}

TransportEstimate transport_exponents(const MomentTrace& trace, double t_lo, double t_hi) {
  std::vector<double> ln_t;
  std::vector<double> ln_r;
  for (std::size_t j = 0; j < trace.times.size(); ++j) {
    if (trace.times[j] >= t_lo && trace.times[j] <= t_hi) {
      ln_t.push_back(std::log(trace.times[j]));
      ln_r.push_back(std::log(trace.r[j]));
    }
  }
  if (ln_t.size() < 2) {
    throw std::invalid_argument("transport_exponents: window holds fewer than two times");
  }
  TransportEstimate e;
  e.t_lo = t_lo;
  e.t_hi = t_hi;
  e.count = ln_t.size();
  e.beyond_saturation = t_hi > trace.saturation_time;
  e.beta_minus = std::numeric_limits<double>::infinity();
  e.beta_plus = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j < ln_t.size(); ++j) {
    const double slope = (ln_r[j] - ln_r[j - 1]) / (ln_t[j] - ln_t[j - 1]);
    e.beta_minus = std::min(e.beta_minus, slope);
    e.beta_plus = std::max(e.beta_plus, slope);
  }
  e.regression_beta = fit_line(ln_t, ln_r).slope;
  return e;
}

GsbReport gsb_check(double beta_plus, double dimension, double slack) {
  GsbReport r;
  r.beta_plus = beta_plus;
  r.dimension = dimension;
  r.slack = slack;
  r.margin = beta_plus - dimension;
  r.passed = r.margin >= -slack;
  return r;
}

void write_trace_csv(std::ostream& out, const MomentTrace& trace, bool with_w) {
  out << "t,r_p";
  if (with_w) {
    for (Eigen::Index k = 0; k < trace.W.rows(); ++k) {
      out << ",W_" << (k + 1);
    }
  }
  out << '\n';
  char buf[48];
  for (std::size_t j = 0; j < trace.times.size(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g", trace.times[j], trace.r[j]);
    out << buf;
    if (with_w) {
      for (Eigen::Index k = 0; k < trace.W.rows(); ++k) {
        std::snprintf(buf, sizeof buf, ",%.17g", trace.W(k, static_cast<Eigen::Index>(j)));
        out << buf;
      }
    }
    out << '\n';
  }
}

}  // namespace ppdim
