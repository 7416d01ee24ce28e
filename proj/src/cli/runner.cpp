#include "ppdim/cli/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ppdim/dimensions.hpp"
#include "ppdim/dynamics.hpp"
#include "ppdim/oracle.hpp"

namespace ppdim::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::ofstream open_output(const ExperimentConfig& cfg, const std::string& name) {
  const fs::path dir(cfg.run.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory '" + cfg.run.out + "'");
  }
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot write '" + (dir / name).string() + "'");
  }
  return out;
}

std::string q_label(double q) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", q);
  return buf;
}

std::uint64_t require_seed(const RunConfig& run, const std::string& why) {
  if (!run.seed) {
    throw ConfigError("a seed is required for " + why + " (set [run] seed or --seed)");
  }
  return *run.seed;
}

json checks_json(const std::vector<Check>& checks) {
  json out = json::object();
  for (const Check& c : checks) {
    out[c.name] = {{"passed", c.passed}, {"value", c.value}, {"detail", c.detail}};
  }
  return out;
}

json scan_json(const DimensionScan& s) {
  json j;
  j["q"] = s.q;
  j["window"] = {s.summary.eps_lo, s.summary.eps_hi};
  j["d_min"] = s.summary.d_min;
  j["d_max"] = s.summary.d_max;
  j["d_L_min"] = s.summary.d_L_min;
  j["d_L_max"] = s.summary.d_L_max;
  j["regression_D_I"] = s.summary.regression_D_I;
  j["regression_D_L"] = s.summary.regression_D_L;
  j["extrapolated_D"] = s.summary.extrapolated_D;
  j["samples_in_window"] = s.summary.count;
  j["checks"] = checks_json(s.checks);
  return j;
}

// Ceiling check for q < 1, then both files. Returns pass flag. The ceiling
// is only gated on subsequence scans; a plain grid reaches coarse scales
// where one dominant atom alone gives d_L = ln 2 / ((q - 1) ln eps).
bool emit_scan(const ExperimentConfig& cfg, const EigenvalueFamily& f, const AtomicMeasure& mu,
               DimensionScan& s, json extra, std::ostream& log, bool gate_envelope) {
  json envelope;
  if (s.q < 1.0) {
    const EnvelopeReport env =
        upper_envelope_check(mu, s, dimension_ceiling(f), cfg.scan.ceiling_slack);
    const std::string detail =
        "ceiling " + q_label(env.ceiling) + ", margin " + q_label(env.margin);
    if (gate_envelope) {
      s.checks.push_back({"upper_envelope", env.passed, env.max_d_L, detail});
    } else {
      envelope = {{"passed", env.passed}, {"value", env.max_d_L}, {"detail", detail},
                  {"gated", false}};
    }
  }
  const std::string tag = q_label(s.q);
  {
    auto out = open_output(cfg, "scan_q" + tag + ".csv");
    write_scan_csv(out, s);
  }
  json j = scan_json(s);
  j.update(extra);
  if (!envelope.is_null()) {
    j["upper_envelope"] = envelope;
  }
  {
    auto out = open_output(cfg, "summary_q" + tag + ".json");
    out << j.dump(2) << '\n';
  }
  log << "q=" << tag << " regression_D_I=" << s.summary.regression_D_I
      << " regression_D_L=" << s.summary.regression_D_L
      << " checks=" << (s.all_checks_passed() ? "pass" : "FAIL") << '\n';
  return s.all_checks_passed();
}

std::vector<std::size_t> level_list(const ScanConfig& c) {
  if (!c.n_list.empty()) {
    return c.n_list;
  }
  if (c.n_pow2_min < 0 || c.n_pow2_max < c.n_pow2_min || c.n_pow2_max > 40) {
    throw ConfigError("n_pow2_min/n_pow2_max must satisfy 0 <= min <= max <= 40");
  }
  std::vector<std::size_t> out;
  for (int k = c.n_pow2_min; k <= c.n_pow2_max; ++k) {
    out.push_back(std::size_t{1} << k);
  }
  return out;
}

}  // namespace

Command command_from_string(const std::string& name) {
  if (name == "gaps") return Command::gaps;
  if (name == "scan") return Command::scan;
  if (name == "subseq") return Command::subseq;
  if (name == "dynamics") return Command::dynamics;
  if (name == "verify") return Command::verify;
  throw ConfigError("unknown command '" + name + "'");
}

EigenvalueFamily make_family(const FamilyConfig& c) {
  if (c.type == "hydrogen") {
    return c.kappa ? EigenvalueFamily::hydrogen_from_kappa(*c.kappa, c.horizon)
                   : EigenvalueFamily::hydrogen(c.lambda, c.horizon);
  }
  if (c.type == "powerlaw") {
    return EigenvalueFamily::power_law(c.alpha, c.L, c.sigma0, c.horizon);
  }
  if (!c.values.empty() || c.custom_path.empty()) {
    return EigenvalueFamily::custom(c.values);
  }
  std::ifstream in(c.custom_path);
  if (!in) {
    throw ConfigError("cannot open custom eigenvalues '" + c.custom_path + "'");
  }
  std::stringstream text;
  text << in.rdbuf();
  std::string all = text.str();
  std::replace(all.begin(), all.end(), '\n', ',');
  std::vector<double> values;
  std::stringstream items(all);
  std::string item;
  while (std::getline(items, item, ',')) {
    std::stringstream one(item);
    double v = 0.0;
    std::string rest;
    if (!(one >> std::ws).eof()) {
      if (!(one >> v) || (one >> rest)) {
        throw ConfigError("custom eigenvalues: bad number '" + item + "'");
      }
      values.push_back(v);
    }
  }
  return EigenvalueFamily::custom(values);
}

BoundState make_state(const StateConfig& c, const RunConfig& run) {
  if (c.recipe == "power") {
    return power_state(c.j, c.n_max, c.normalized);
  }
  if (c.recipe == "hybrid") {
    return hybrid_state({}, c.k, c.s, c.q_check, c.n_max);
  }
  if (c.recipe == "sigma") {
    return sigma_state(power_state(c.base_j, c.base_n_max, true), c.j, c.sigma, c.n_max);
  }
  if (c.recipe == "eigen") {
    return eigen_state(c.n0, c.n_max);
  }
  if (c.recipe == "random") {
    return random_state(require_seed(run, "state recipe 'random'"), c.n_max, c.normalized);
  }
  std::ifstream in(c.path);
  if (!in) {
    throw ConfigError("cannot open state csv '" + c.path + "'");
  }
  return read_state_csv(in);
}

int run_gaps(const ExperimentConfig& cfg, std::ostream& log) {
  const EigenvalueFamily f = make_family(cfg.family);
  std::size_t n_max = cfg.gaps.n_max;
  if (n_max < 1) {
    throw ConfigError("gaps.n_max must be >= 1");
  }
  const std::size_t limit =
      std::holds_alternative<CustomParams>(f.params()) ? f.horizon() - 1 : f.horizon();
  if (n_max > limit) {
    throw ConfigError("gaps.n_max exceeds the family's last gap index " + std::to_string(limit));
  }
  std::set<std::size_t> levels;
  if (cfg.gaps.per_decade <= 0) {
    for (std::size_t n = 1; n <= n_max; ++n) {
      levels.insert(n);
    }
  } else {
    for (int k = 0;; ++k) {
      const double v = std::round(std::pow(10.0, static_cast<double>(k) / cfg.gaps.per_decade));
      if (v > static_cast<double>(n_max)) {
        break;
      }
      levels.insert(static_cast<std::size_t>(v));
    }
    levels.insert(n_max);
  }
  auto out = open_output(cfg, "gaps.csv");
  out << "n,gap,scaled_gap\n";
  char buf[96];
  for (std::size_t n : levels) {
    const double g = f.gap(n);
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", n, g,
                  std::pow(static_cast<double>(n), f.gap_exponent()) * g);
    out << buf;
  }
  if (f.warning()) {
    log << "warning: " << *f.warning() << '\n';
  }
  log << "gaps: " << levels.size() << " rows, family " << f.name() << '\n';
  return 0;
}

int run_scan(const ExperimentConfig& cfg, std::ostream& log) {
  const EigenvalueFamily f = make_family(cfg.family);
  const BoundState state = make_state(cfg.state, cfg.run);
  const AtomicMeasure mu = spectral_measure(state, f);
  std::vector<double> grid;
  if (cfg.scan.grid == "default") {
    if (mu.size() < 2) {
      // One atom: no gap to anchor the default grid.
      grid = geometric_grid(cfg.scan.eps_hi, cfg.scan.eps_lo, cfg.scan.ratio);
    } else {
      grid = default_epsilon_grid(mu);
    }
  } else {
    grid = geometric_grid(cfg.scan.eps_hi, cfg.scan.eps_lo, cfg.scan.ratio);
  }
  bool ok = true;
  for (double q : cfg.scan.q) {
    DimensionScan s = scan(mu, q, grid, {cfg.run.threads});
    const json extra = {{"family", f.name()},
                        {"state", state.provenance().recipe},
                        {"atoms", mu.size()},
                        {"resolution_floor", resolution_floor(mu)}};
    ok = emit_scan(cfg, f, mu, s, extra, log, false) && ok;
  }
  return ok ? 0 : 1;
}

int run_subseq(const ExperimentConfig& cfg, std::ostream& log) {
  const EigenvalueFamily f = make_family(cfg.family);
  const BoundState state = make_state(cfg.state, cfg.run);
  const std::vector<std::size_t> levels = level_list(cfg.scan);
  const AtomicMeasure mu = spectral_measure(state, f);
  bool ok = true;
  for (double q : cfg.scan.q) {
    DimensionScan s = subsequence_scan(state, f, q, levels, {cfg.run.threads});
    const json extra = {{"family", f.name()},
                        {"state", state.provenance().recipe},
                        {"atoms", mu.size()},
                        {"n_list", levels}};
    ok = emit_scan(cfg, f, mu, s, extra, log, true) && ok;
  }
  return ok ? 0 : 1;
}

int run_dynamics(const ExperimentConfig& cfg, std::ostream& log) {
  const DynamicsConfig& d = cfg.dynamics;
  const EigenvalueFamily f = make_family(cfg.family);
  const BoundState state = make_state(cfg.state, cfg.run);
  const std::size_t n = d.levels;
  if (n < 2) {
    throw ConfigError("dynamics.levels must be >= 2");
  }
  if (state.size() > n) {
    throw ConfigError("state has " + std::to_string(state.size()) +
                      " levels, more than dynamics.levels = " + std::to_string(n));
  }
  const std::size_t k = d.K == 0 ? n : d.K;
  const BasisKind kind = basis_kind_from_string(d.basis);
  Basis basis;
  switch (kind) {
    case BasisKind::eigen:
      basis = eigen_basis(n, k);
      break;
    case BasisKind::scrambled:
      basis = scrambled_basis(n, k);
      break;
    case BasisKind::random_orthogonal:
      basis = random_orthogonal_basis(n, k, require_seed(cfg.run, "basis random_orthogonal"));
      break;
  }
  const Eigen::VectorXd a = amplitudes(state, n);

  std::vector<double> times;
  if (d.t_min == 0.0 && d.t_max == 0.0) {
    times = default_time_grid(f, n, d.per_decade);
  } else {
    const double lo = d.t_min > 0.0 ? d.t_min : 1.0 / f.gap(1);
    const double hi = d.t_max > 0.0 ? d.t_max : saturation_time(f, n);
    if (!(hi > lo) || d.per_decade < 1) {
      throw ConfigError("dynamics: need t_min < t_max and per_decade >= 1");
    }
    for (int j = 0;; ++j) {
      const double t = lo * std::pow(10.0, static_cast<double>(j) / d.per_decade);
      if (t > hi) {
        break;
      }
      times.push_back(t);
    }
  }
  if (times.size() < 2) {
    throw ConfigError("dynamics: time grid holds fewer than two points");
  }
  const MomentTrace trace =
      simulate_moments(a, f, basis, times, d.p, {cfg.run.threads, d.phase_sign});

  std::vector<Check> checks;
  const double gram = gram_deviation(basis);
  checks.push_back({"gram_deviation", gram <= 1e-12, gram, "max |C C^T - I|"});
  const double mass = a.squaredNorm();
  double w_lo = std::numeric_limits<double>::infinity();
  double w_hi = -std::numeric_limits<double>::infinity();
  double drift = 0.0;
  for (Eigen::Index j = 0; j < trace.W.cols(); ++j) {
    drift = std::max(drift, std::abs(trace.W.col(j).sum() - mass));
    w_lo = std::min(w_lo, trace.W.col(j).minCoeff());
    w_hi = std::max(w_hi, trace.W.col(j).maxCoeff());
  }
  if (k == n) {
    checks.push_back({"mass_conservation", drift <= 1e-10, drift, "max_t |sum_k W_k - mass|"});
  }
  checks.push_back({"W_range", w_lo >= -1e-10 && w_hi <= mass + 1e-10, w_lo,
                    "W within [0, mass] up to 1e-10"});
  checks.push_back({"window_before_saturation", !trace.estimate.beyond_saturation,
                    trace.estimate.t_hi, "t_hi <= saturation time"});

  // Dimension side of the transport bound, at q = 1/(1+p).
  const double q = 1.0 / (1.0 + d.p);
  const AtomicMeasure mu = spectral_measure(state, f);
  double dimension = std::numeric_limits<double>::quiet_NaN();
  if (mu.size() == 1) {
    dimension = 0.0;
  } else {
    std::vector<std::size_t> levels;
    for (std::size_t m = 2; m + 1 <= state.size(); m *= 2) {
      levels.push_back(m);
    }
    if (levels.size() >= 2) {
      dimension = subsequence_scan(state, f, q, levels, {cfg.run.threads}).summary.regression_D_I;
    }
  }
  const GsbReport gsb = gsb_check(trace.estimate.beta_plus, dimension, d.gsb_slack);

  {
    auto out = open_output(cfg, "trace.csv");
    write_trace_csv(out, trace, d.write_w);
  }
  json j;
  j["p"] = d.p;
  j["beta_minus_est"] = trace.estimate.beta_minus;
  j["beta_plus_est"] = trace.estimate.beta_plus;
  j["regression_beta"] = trace.estimate.regression_beta;
  j["saturation_time"] = trace.saturation_time;
  j["gsb_margin"] = gsb.margin;
  j["gsb"] = {{"q", q},
              {"dimension", gsb.dimension},
              {"slack", gsb.slack},
              {"passed", gsb.passed},
              {"gated", false}};
  j["window"] = {trace.estimate.t_lo, trace.estimate.t_hi};
  j["basis"] = d.basis;
  j["K"] = k;
  j["N"] = n;
  j["checks"] = checks_json(checks);
  {
    auto out = open_output(cfg, "dynamics.json");
    out << j.dump(2) << '\n';
  }
  bool ok = true;
  for (const Check& c : checks) {
    ok = ok && c.passed;
  }
  log << "dynamics: beta_plus_est=" << trace.estimate.beta_plus
      << " regression_beta=" << trace.estimate.regression_beta << " gsb_margin=" << gsb.margin
      << " checks=" << (ok ? "pass" : "FAIL") << '\n';
  return ok ? 0 : 1;
}

int run_verify(const ExperimentConfig& cfg, std::ostream& log) {
  CorpusOptions opt;
  opt.seed = require_seed(cfg.run, "verify");
  opt.quad_trials = cfg.verify.quad_trials;
  opt.naive_trials = cfg.verify.naive_trials;
  opt.fault = cfg.verify.fault == "perturb_sweep" ? Fault::perturb_sweep : Fault::none;
  opt.threads = cfg.run.threads;
  const std::vector<OracleReport> reports = run_corpus(opt);
  auto out = open_output(cfg, "verify.jsonl");
  std::size_t passed = 0;
  for (const OracleReport& r : reports) {
    const json j = {{"name", r.name},
                    {"fast_value", r.fast_value},
                    {"oracle_value", r.oracle_value},
                    {"abs_deviation", r.abs_deviation},
                    {"rel_deviation", r.rel_deviation},
                    {"tolerance", r.tolerance},
                    {"converged", r.converged},
                    {"passed", r.passed},
                    {"trail", r.trail}};
    const std::string line = j.dump();
    out << line << '\n';
    log << line << '\n';
    passed += r.passed ? 1 : 0;
  }
  const json summary = {{"name", "summary"},
                        {"total", reports.size()},
                        {"passed", passed},
                        {"failed", reports.size() - passed}};
  out << summary.dump() << '\n';
  log << summary.dump() << '\n';
  return passed == reports.size() ? 0 : 1;
}

int run_command(Command cmd, const ExperimentConfig& cfg, std::ostream& log) {
  try {
    switch (cmd) {
      case Command::gaps:
        return run_gaps(cfg, log);
      case Command::scan:
        return run_scan(cfg, log);
      case Command::subseq:
        return run_subseq(cfg, log);
      case Command::dynamics:
        return run_dynamics(cfg, log);
      case Command::verify:
        return run_verify(cfg, log);
    }
  } catch (const std::invalid_argument& e) {
    // Library preconditions violated by configured parameters.
    throw ConfigError(e.what());
  } catch (const std::out_of_range& e) {
    throw ConfigError(e.what());
  }
  return 2;
}

}  // namespace ppdim::cli
