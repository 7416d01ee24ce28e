#include "ppdim/cli/config.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>

namespace ppdim::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) {
    return "";
  }
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) {
    throw ConfigError("expected a number, got '" + v + "'");
  }
  return out;
}

std::uint64_t to_u64(const std::string& v) {
  std::uint64_t out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) {
    throw ConfigError("expected a nonnegative integer, got '" + v + "'");
  }
  return out;
}

int to_int(const std::string& v) {
  int out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size()) {
    throw ConfigError("expected an integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& v) {
  if (v == "true") {
    return true;
  }
  if (v == "false") {
    return false;
  }
  throw ConfigError("expected true or false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) {
      out.push_back(item);
    }
  }
  return out;
}

std::string one_of(const std::string& v, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed) {
    if (v == a) {
      return v;
    }
  }
  std::string msg = "expected one of";
  for (const char* a : allowed) {
    msg += std::string(" ") + a;
  }
  throw ConfigError(msg + ", got '" + v + "'");
}

using Setter = std::function<void(ExperimentConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"family.type",
       [](auto& c, const auto& v) { c.family.type = one_of(v, {"hydrogen", "powerlaw", "custom"}); }},
      {"family.lambda", [](auto& c, const auto& v) { c.family.lambda = to_double(v); }},
      {"family.kappa", [](auto& c, const auto& v) { c.family.kappa = to_double(v); }},
      {"family.alpha", [](auto& c, const auto& v) { c.family.alpha = to_double(v); }},
      {"family.L", [](auto& c, const auto& v) { c.family.L = to_double(v); }},
      {"family.sigma0", [](auto& c, const auto& v) { c.family.sigma0 = to_double(v); }},
      {"family.horizon", [](auto& c, const auto& v) { c.family.horizon = to_u64(v); }},
      {"family.values",
       [](auto& c, const auto& v) {
         c.family.values.clear();
         for (const auto& x : split_list(v)) {
           c.family.values.push_back(to_double(x));
         }
       }},
      {"family.custom_path", [](auto& c, const auto& v) { c.family.custom_path = v; }},
      {"state.recipe",
       [](auto& c, const auto& v) {
         c.state.recipe = one_of(v, {"power", "hybrid", "sigma", "eigen", "random", "csv"});
       }},
      {"state.j", [](auto& c, const auto& v) { c.state.j = to_u64(v); }},
      {"state.n_max", [](auto& c, const auto& v) { c.state.n_max = to_u64(v); }},
      {"state.normalized", [](auto& c, const auto& v) { c.state.normalized = to_bool(v); }},
      {"state.k", [](auto& c, const auto& v) { c.state.k = to_u64(v); }},
      {"state.s", [](auto& c, const auto& v) { c.state.s = to_double(v); }},
      {"state.q_check", [](auto& c, const auto& v) { c.state.q_check = to_double(v); }},
      {"state.sigma", [](auto& c, const auto& v) { c.state.sigma = to_double(v); }},
      {"state.base_j", [](auto& c, const auto& v) { c.state.base_j = to_u64(v); }},
      {"state.base_n_max", [](auto& c, const auto& v) { c.state.base_n_max = to_u64(v); }},
      {"state.n0", [](auto& c, const auto& v) { c.state.n0 = to_u64(v); }},
      {"state.path", [](auto& c, const auto& v) { c.state.path = v; }},
      {"gaps.n_max", [](auto& c, const auto& v) { c.gaps.n_max = to_u64(v); }},
      {"gaps.per_decade", [](auto& c, const auto& v) { c.gaps.per_decade = to_int(v); }},
      {"scan.q",
       [](auto& c, const auto& v) {
         c.scan.q.clear();
         for (const auto& x : split_list(v)) {
           c.scan.q.push_back(to_double(x));
         }
       }},
      {"scan.grid",
       [](auto& c, const auto& v) { c.scan.grid = one_of(v, {"default", "geometric"}); }},
      {"scan.eps_hi", [](auto& c, const auto& v) { c.scan.eps_hi = to_double(v); }},
      {"scan.eps_lo", [](auto& c, const auto& v) { c.scan.eps_lo = to_double(v); }},
      {"scan.ratio", [](auto& c, const auto& v) { c.scan.ratio = to_double(v); }},
      {"scan.n_list",
       [](auto& c, const auto& v) {
         c.scan.n_list.clear();
         for (const auto& x : split_list(v)) {
           c.scan.n_list.push_back(to_u64(x));
         }
       }},
      {"scan.n_pow2_min", [](auto& c, const auto& v) { c.scan.n_pow2_min = to_int(v); }},
      {"scan.n_pow2_max", [](auto& c, const auto& v) { c.scan.n_pow2_max = to_int(v); }},
      {"scan.ceiling_slack", [](auto& c, const auto& v) { c.scan.ceiling_slack = to_double(v); }},
      {"dynamics.basis",
       [](auto& c, const auto& v) {
         c.dynamics.basis = one_of(v, {"eigen", "scrambled", "random_orthogonal"});
       }},
      {"dynamics.levels", [](auto& c, const auto& v) { c.dynamics.levels = to_u64(v); }},
      {"dynamics.K", [](auto& c, const auto& v) { c.dynamics.K = to_u64(v); }},
      {"dynamics.p", [](auto& c, const auto& v) { c.dynamics.p = to_double(v); }},
      {"dynamics.per_decade", [](auto& c, const auto& v) { c.dynamics.per_decade = to_int(v); }},
      {"dynamics.t_min", [](auto& c, const auto& v) { c.dynamics.t_min = to_double(v); }},
      {"dynamics.t_max", [](auto& c, const auto& v) { c.dynamics.t_max = to_double(v); }},
      {"dynamics.write_w", [](auto& c, const auto& v) { c.dynamics.write_w = to_bool(v); }},
      {"dynamics.gsb_slack", [](auto& c, const auto& v) { c.dynamics.gsb_slack = to_double(v); }},
      {"dynamics.phase_sign",
       [](auto& c, const auto& v) {
         const int s = to_int(v);
         if (s != 1 && s != -1) {
           throw ConfigError("phase_sign must be 1 or -1");
         }
         c.dynamics.phase_sign = s;
       }},
      {"verify.quad_trials", [](auto& c, const auto& v) { c.verify.quad_trials = to_u64(v); }},
      {"verify.naive_trials", [](auto& c, const auto& v) { c.verify.naive_trials = to_u64(v); }},
      {"verify.fault",
       [](auto& c, const auto& v) { c.verify.fault = one_of(v, {"none", "perturb_sweep"}); }},
      {"run.out", [](auto& c, const auto& v) { c.run.out = v; }},
      {"run.seed", [](auto& c, const auto& v) { c.run.seed = to_u64(v); }},
      {"run.threads",
       [](auto& c, const auto& v) {
         const auto t = to_u64(v);
         if (t < 1 || t > 1024) {
           throw ConfigError("threads must lie in [1, 1024]");
         }
         c.run.threads = static_cast<unsigned>(t);
       }},
  };
  return table;
}

// Shortest form that reads back to the same double.
std::string num(double v) {
  char buf[40];
  for (int digits = 15; digits <= 17; ++digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    if (std::strtod(buf, nullptr) == v) {
      break;
    }
  }
  return buf;
}

template <class T>
std::string join(const std::vector<T>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i > 0) {
      out += ", ";
    }
    if constexpr (std::is_floating_point_v<T>) {
      out += num(v[i]);
    } else {
      out += std::to_string(v[i]);
    }
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, const std::string& origin) {
  ExperimentConfig cfg;
  std::string section;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const std::string where = origin + ":" + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError(where + "malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      static const char* known[] = {"family", "state", "gaps", "scan", "dynamics", "verify", "run"};
      bool ok = false;
      for (const char* k : known) {
        ok = ok || section == k;
      }
      if (!ok) {
        throw ConfigError(where + "unknown section [" + section + "]");
      }
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(where + "expected key = value");
    }
    if (section.empty()) {
      throw ConfigError(where + "key outside any section");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = setters().find(section + "." + key);
    if (it == setters().end()) {
      throw ConfigError(where + "unknown key '" + key + "' in [" + section + "]");
    }
    try {
      it->second(cfg, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + key + ": " + e.what());
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config '" + path + "'");
  }
  return parse_config(in, path);
}

void print_defaults(std::ostream& out) {
  const ExperimentConfig d;
  out << "[family]\n"
      << "type = " << d.family.type << "  # hydrogen | powerlaw | custom\n"
      << "lambda = " << num(d.family.lambda) << "  # hydrogen: lambda_n = -lambda / n^2\n"
      << "# kappa = 1  # hydrogen alternative: lambda = kappa^2 / 4\n"
      << "alpha = " << num(d.family.alpha) << "  # powerlaw: sigma_n = sigma0 + L n^-alpha\n"
      << "L = " << num(d.family.L) << '\n'
      << "sigma0 = " << num(d.family.sigma0) << '\n'
      << "horizon = " << d.family.horizon << "  # largest admissible level\n"
      << "# values = -1, -0.25, -0.111  # custom: strictly monotone eigenvalues\n"
      << "# custom_path = eigenvalues.txt  # custom: comma or newline separated\n"
      << "\n[state]\n"
      << "recipe = " << d.state.recipe << "  # power | hybrid | sigma | eigen | random | csv\n"
      << "j = " << d.state.j << "  # power, sigma: p_n = n^-(1 + 1/j)\n"
      << "n_max = " << d.state.n_max << '\n'
      << "normalized = " << (d.state.normalized ? "true" : "false") << '\n'
      << "k = " << d.state.k << "  # hybrid: tail starts at level k\n"
      << "s = " << num(d.state.s) << "  # hybrid: tail p_n = n^-2s\n"
      << "q_check = " << num(d.state.q_check) << "  # hybrid: needs 2 s q_check > 1\n"
      << "sigma = " << num(d.state.sigma) << "  # sigma: distance scale\n"
      << "base_j = " << d.state.base_j << "  # sigma: base is normalized power(base_j)\n"
      << "base_n_max = " << d.state.base_n_max << '\n'
      << "n0 = " << d.state.n0 << "  # eigen: occupied level\n"
      << "# path = state.csv  # csv: columns n,weight\n"
      << "\n[gaps]\n"
      << "n_max = " << d.gaps.n_max << '\n'
      << "per_decade = " << d.gaps.per_decade << "  # 0 writes every n\n"
      << "\n[scan]\n"
      << "q = " << join(d.scan.q) << '\n'
      << "grid = " << d.scan.grid << "  # default | geometric (scan only)\n"
      << "eps_hi = " << num(d.scan.eps_hi) << '\n'
      << "eps_lo = " << num(d.scan.eps_lo) << '\n'
      << "ratio = " << num(d.scan.ratio) << '\n'
      << "# n_list = 1024, 2048  # subseq: explicit levels, overrides n_pow2_*\n"
      << "n_pow2_min = " << d.scan.n_pow2_min << '\n'
      << "n_pow2_max = " << d.scan.n_pow2_max << '\n'
      << "ceiling_slack = " << num(d.scan.ceiling_slack) << '\n'
      << "\n[dynamics]\n"
      << "basis = " << d.dynamics.basis << "  # eigen | scrambled | random_orthogonal\n"
      << "levels = " << d.dynamics.levels << '\n'
      << "K = " << d.dynamics.K << "  # 0: K = levels\n"
      << "p = " << num(d.dynamics.p) << '\n'
      << "per_decade = " << d.dynamics.per_decade << '\n'
      << "t_min = " << num(d.dynamics.t_min) << "  # 0: 1 / gap(1)\n"
      << "t_max = " << num(d.dynamics.t_max) << "  # 0: saturation time 200 / min gap\n"
      << "write_w = " << (d.dynamics.write_w ? "true" : "false") << '\n'
      << "gsb_slack = " << num(d.dynamics.gsb_slack) << '\n'
      << "phase_sign = " << d.dynamics.phase_sign << '\n'
      << "\n[verify]\n"
      << "quad_trials = " << d.verify.quad_trials << '\n'
      << "naive_trials = " << d.verify.naive_trials << '\n'
      << "fault = " << d.verify.fault << "  # none | perturb_sweep\n"
      << "\n[run]\n"
      << "out = " << d.run.out << '\n'
      << "# seed = 1  # required by random states, random_orthogonal, verify\n"
      << "threads = " << d.run.threads << '\n';
}

}  // namespace ppdim::cli
