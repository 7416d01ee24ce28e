#include "ppdim/states.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "ppdim/exact_sum.hpp"

namespace ppdim {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// sum_{n > N} n^-a <= N^(1-a) / (a-1), a > 1
double integral_tail(std::size_t N, double a) {
  return std::pow(static_cast<double>(N), 1.0 - a) / (a - 1.0);
}

double correctly_rounded_sum(std::span<const double> v) {
  ExactSum s;
  for (double x : v) {
    s.add(x);
  }
  return s.value();
}

void scale_in_place(std::vector<double>& w, double factor) {
  for (double& x : w) {
    x *= factor;
  }
}

}  // namespace

BoundState::BoundState(std::vector<double> weights, Provenance provenance)
    : weights_(std::move(weights)), provenance_(std::move(provenance)) {
  for (double w : weights_) {
    if (!std::isfinite(w) || w < 0.0) {
      throw std::invalid_argument("BoundState: weights must be finite and nonnegative");
    }
  }
  while (weights_.size() > 1 && weights_.back() == 0.0) {
    weights_.pop_back();
  }
  if (weights_.empty()) {
    throw std::invalid_argument("BoundState: need at least one level");
  }
  total_ = correctly_rounded_sum(weights_);
  normalized_ = std::abs(total_ - 1.0) <= 1e-12;
}

double BoundState::weight(std::size_t n) const {
  if (n == 0) {
    throw std::invalid_argument("BoundState: levels start at n = 1");
  }
  return n <= weights_.size() ? weights_[n - 1] : 0.0;
}

BoundState power_state(std::uint64_t j, std::size_t n_max, bool normalized) {
  if (j < 1) {
    throw std::invalid_argument("power_state: j must be >= 1");
  }
  if (n_max < 2) {
    throw std::invalid_argument("power_state: N_max must be >= 2");
  }
  const double a = 1.0 + 1.0 / static_cast<double>(j);
  std::vector<double> w(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    w[n - 1] = std::pow(static_cast<double>(n), -a);
  }
  Provenance prov;
  prov.recipe = "power";
  prov.params = {{"j", std::to_string(j)},
                 {"n_max", std::to_string(n_max)},
                 {"normalized", normalized ? "true" : "false"}};
  prov.neglected_tail_mass = integral_tail(n_max, a);
  if (normalized) {
    const double z = correctly_rounded_sum(w);
    scale_in_place(w, 1.0 / z);
    prov.neglected_tail_mass /= z;
    prov.metadata["partial_sum"] = z;
  }
  return BoundState(std::move(w), std::move(prov));
}

BoundState hybrid_state(std::span<const double> prefix, std::size_t k, double s, double q_check,
                        std::size_t n_max) {
  if (!(q_check > 0.0 && q_check < 1.0)) {
    throw std::invalid_argument("hybrid_state: q_check must lie in (0,1)");
  }
  if (!(2.0 * s * q_check > 1.0)) {
    throw std::invalid_argument("hybrid_state: tail not q-summable, 2*s*q = " +
                                fmt(2.0 * s * q_check) + " <= 1");
  }
  if (k < 1 || k > n_max) {
    throw std::invalid_argument("hybrid_state: need 1 <= k <= N_max");
  }
  std::vector<double> w(n_max, 0.0);
  for (std::size_t n = 1; n < k; ++n) {
    const double p = n <= prefix.size() ? prefix[n - 1] : 0.0;
    if (!std::isfinite(p) || p < 0.0) {
      throw std::invalid_argument("hybrid_state: prefix weights must be nonnegative");
    }
    w[n - 1] = p;
  }
  for (std::size_t n = k; n <= n_max; ++n) {
    w[n - 1] = std::pow(static_cast<double>(n), -2.0 * s);
  }
  // Same term expression and order as the isolated-atom power sum.
  double S = 0.0;
  for (double p : w) {
    if (p > 0.0) {
      S += std::pow(p, q_check - 1.0) * p;
    }
  }
  Provenance prov;
  prov.recipe = "hybrid";
  prov.params = {{"k", std::to_string(k)},
                 {"s", fmt(s)},
                 {"q_check", fmt(q_check)},
                 {"n_max", std::to_string(n_max)},
                 {"prefix_len", std::to_string(std::min(prefix.size(), k - 1))}};
  prov.neglected_tail_mass = integral_tail(n_max, 2.0 * s);
  prov.metadata["S_q"] = S;
  prov.metadata["S_q_tail_bound"] = integral_tail(n_max, 2.0 * s * q_check);
  return BoundState(std::move(w), std::move(prov));
}

BoundState sigma_state(const BoundState& base, std::uint64_t j, double sigma, std::size_t n_max) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("sigma_state: sigma must be positive");
  }
  if (j < 1) {
    throw std::invalid_argument("sigma_state: j must be >= 1");
  }
  if (n_max < 2) {
    throw std::invalid_argument("sigma_state: N_max must be >= 2");
  }
  const double s2 = sigma * sigma;
  const double a = 1.0 + 1.0 / static_cast<double>(j);
  const auto bw = base.weights();

  // base_tail[m] = sum_{n > m} base_n, m = 0..len
  const std::size_t len = bw.size();
  std::vector<double> base_tail(len + 1, 0.0);
  {
    ExactSum acc;
    for (std::size_t m = len; m-- > 0;) {
      acc.add(bw[m]);
      base_tail[m] = acc.value();
    }
  }
  auto base_tail_at = [&](std::size_t m) { return m >= len ? 0.0 : base_tail[m]; };

  // pow_tail[m] = sum_{m <= n <= n_max} n^-a
  std::vector<double> pow_tail(n_max + 2, 0.0);
  {
    ExactSum acc;
    for (std::size_t n = n_max; n >= 1; --n) {
      acc.add(std::pow(static_cast<double>(n), -a));
      pow_tail[n] = acc.value();
    }
  }

  std::size_t m1 = 0;
  while (m1 < n_max && !(base_tail_at(m1) < s2)) {
    ++m1;
  }
  std::size_t m2 = m1 + 1;
  while (m2 <= n_max && !(pow_tail[m2] < s2)) {
    ++m2;
  }
  if (m1 >= n_max || m2 > n_max) {
    const double need = std::max(base_tail_at(n_max - 1), pow_tail[n_max]);
    throw std::invalid_argument("sigma_state: no M1 < M2 <= N_max; achievable sigma > " +
                                fmt(std::sqrt(need)));
  }

  std::vector<double> w(n_max, 0.0);
  for (std::size_t n = 1; n <= m1 && n <= len; ++n) {
    w[n - 1] = bw[n - 1];
  }
  for (std::size_t n = m2; n <= n_max; ++n) {
    w[n - 1] = std::pow(static_cast<double>(n), -a);
  }

  // ||base - result||^2 over amplitudes sqrt(p_n)
  ExactSum dist;
  for (std::size_t n = 1; n <= std::max(len, n_max); ++n) {
    const double b = base.weight(n);
    const double r = n <= n_max ? w[n - 1] : 0.0;
    const double d = std::sqrt(b) - std::sqrt(r);
    dist.add(d * d);
  }
  const double discrepancy = dist.value();
  if (!(discrepancy < 2.0 * s2)) {
    throw std::logic_error("sigma_state: discrepancy bound violated");
  }

  Provenance prov;
  prov.recipe = "sigma";
  prov.params = {{"j", std::to_string(j)},
                 {"sigma", fmt(sigma)},
                 {"n_max", std::to_string(n_max)},
                 {"base", base.provenance().recipe}};
  prov.neglected_tail_mass = integral_tail(n_max, a);
  prov.metadata["M1"] = static_cast<double>(m1);
  prov.metadata["M2"] = static_cast<double>(m2);
  prov.metadata["base_tail"] = base_tail_at(m1);
  prov.metadata["power_tail"] = pow_tail[m2];
  prov.metadata["discrepancy"] = discrepancy;
  return BoundState(std::move(w), std::move(prov));
}

BoundState eigen_state(std::size_t n0, std::size_t n_max) {
  if (n0 < 1 || n0 > n_max) {
    throw std::invalid_argument("eigen_state: need 1 <= n0 <= N_max");
  }
  std::vector<double> w(n0, 0.0);
  w[n0 - 1] = 1.0;
  Provenance prov;
  prov.recipe = "eigen";
  prov.params = {{"n0", std::to_string(n0)}, {"n_max", std::to_string(n_max)}};
  return BoundState(std::move(w), std::move(prov));
}

BoundState random_state(std::uint64_t seed, std::size_t n_max, bool normalized) {
  if (n_max < 2) {
    throw std::invalid_argument("random_state: N_max must be >= 2");
  }
  std::mt19937_64 rng(seed);
  // (0, 1], platform independent
  auto unit = [&rng] { return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53; };
  const double s = 0.05 + 0.95 * unit();
  std::vector<double> w(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    w[n - 1] = unit() * std::pow(static_cast<double>(n), -(1.0 + s));
  }
  Provenance prov;
  prov.recipe = "random";
  prov.params = {{"seed", std::to_string(seed)},
                 {"n_max", std::to_string(n_max)},
                 {"normalized", normalized ? "true" : "false"}};
  prov.metadata["s"] = s;
  prov.neglected_tail_mass = integral_tail(n_max, 1.0 + s);
  if (normalized) {
    const double z = correctly_rounded_sum(w);
    scale_in_place(w, 1.0 / z);
    prov.neglected_tail_mass /= z;
  }
  return BoundState(std::move(w), std::move(prov));
}

AtomicMeasure spectral_measure(const BoundState& state, const EigenvalueFamily& f) {
  if (state.size() > f.horizon()) {
    throw std::invalid_argument("spectral_measure: state length " + std::to_string(state.size()) +
                                " exceeds family horizon " + std::to_string(f.horizon()));
  }
  std::vector<Atom> atoms;
  atoms.reserve(state.size());
  for (std::size_t n = 1; n <= state.size(); ++n) {
    const double p = state.weight(n);
    if (p > 0.0) {
      atoms.push_back({f.eigenvalue(n), p});
    }
  }
  if (atoms.empty()) {
    throw std::invalid_argument("spectral_measure: zero measure");
  }
  return AtomicMeasure(std::move(atoms));
}

void write_csv(std::ostream& out, const BoundState& state) {
  out << "n,weight\n";
  char buf[64];
  for (std::size_t n = 1; n <= state.size(); ++n) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", n, state.weight(n));
    out << buf;
  }
}

BoundState read_state_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("n,weight", 0) != 0) {
    throw std::runtime_error("state csv: expected header 'n,weight'");
  }
  std::vector<double> w;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) {
      continue;
    }
    std::istringstream fields(line);
    std::size_t n = 0;
    double p = 0.0;
    char comma = 0;
    if (!(fields >> n >> comma >> p) || comma != ',' || n == 0) {
      throw std::runtime_error("state csv: malformed row " + std::to_string(row));
    }
    if (n <= w.size()) {
      throw std::runtime_error("state csv: levels must be strictly increasing");
    }
    w.resize(n, 0.0);
    w[n - 1] = p;
  }
  Provenance prov;
  prov.recipe = "csv";
  return BoundState(std::move(w), std::move(prov));
}

}  // namespace ppdim
