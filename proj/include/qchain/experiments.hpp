// Copyright 2026 The qchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Preset experiments producing ObservableRecord rows, plus the JSON config
// reader and the CSV writer.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "qchain/dynamics.hpp"
#include "qchain/model.hpp"
#include "qchain/observables.hpp"

namespace qchain {

enum class Preset { TwoQubit, Fig2a, Fig2b, Fig2c, Fig3a, Fig3b, Custom };

inline const std::map<std::string, Preset>& preset_names() {
  static const std::map<std::string, Preset> names{
      {"two_qubit", Preset::TwoQubit}, {"fig2a", Preset::Fig2a}, {"fig2b", Preset::Fig2b}, {"fig2c", Preset::Fig2c},
      {"fig3a", Preset::Fig3a},        {"fig3b", Preset::Fig3b}, {"custom", Preset::Custom}};
  return names;
}

inline Preset parse_preset(const std::string& s) {
  const auto& names = preset_names();
  auto it = names.find(s);
  if (it == names.end()) throw std::invalid_argument("unknown preset '" + s + "'");
  return it->second;
}

inline std::string to_string(Preset p) {
  for (const auto& [name, value] : preset_names())
    if (value == p) return name;
  return "?";
}

struct ExperimentConfig {
  Preset preset = Preset::Custom;
  ChainConfig chain{};
  std::vector<int> n_list;
  double t_max = 0.0;  // 0: preset default
  double conv_tol = 1e-10;
  std::string output_path;

  [[nodiscard]] bool is_sweep() const {
    return preset == Preset::Fig2b || preset == Preset::Fig3a || preset == Preset::Fig3b;
  }

  void validate() const {
    if (!(conv_tol > 0.0)) throw std::invalid_argument("conv_tol must be positive");
    if (t_max < 0.0) throw std::invalid_argument("t_max must be non-negative");
    if (preset == Preset::TwoQubit) {
      if (chain.n != 2 || chain.geometry != Geometry::A) throw std::invalid_argument("two_qubit preset needs n = 2");
      chain.validate();
      return;
    }
    if (is_sweep()) {
      if (n_list.empty()) throw std::invalid_argument("n_list must not be empty");
      for (int n : n_list) {
        if (n < 4 || n % 2 != 0) throw std::invalid_argument("n_list entries must be even and >= 4");
        if (n > kMaxDenseLiouvillianDim) throw std::invalid_argument("n_list entry exceeds the sector solver limit");
        ChainConfig c = chain;
        c.n = n;
        c.validate();
      }
    } else {
      if (chain.n < 4) throw std::invalid_argument("n must be >= 4 for chain presets");
      if (chain.n > kMaxDenseLiouvillianDim) throw std::invalid_argument("n exceeds the sector solver limit");
      chain.validate();
    }
  }
};

inline std::vector<int> even_range(int lo, int hi) {
  std::vector<int> out;
  for (int n = lo; n <= hi; n += 2) out.push_back(n);
  return out;
}

// Defaults: delta = 1, Gamma = 0.1, kappa = theta = 0.2; geometry B sweeps
// add gamma = 0.05.
inline ExperimentConfig preset_defaults(Preset p) {
  ExperimentConfig cfg;
  cfg.preset = p;
  ChainConfig& c = cfg.chain;
  switch (p) {
    case Preset::TwoQubit:
      c.geometry = Geometry::A;
      c.n = 2;
      cfg.t_max = 200.0;
      break;
    case Preset::Fig2a:
    case Preset::Fig2c:
    case Preset::Custom:
      c.geometry = Geometry::A;
      c.n = 8;
      break;
    case Preset::Fig2b:
      c.geometry = Geometry::A;
      cfg.n_list = even_range(4, 20);
      break;
    case Preset::Fig3a:
    case Preset::Fig3b:
      c.geometry = Geometry::B;
      c.gamma_dephasing = 0.05;
      cfg.n_list = even_range(4, 12);
      break;
  }
  return cfg;
}

struct ObservableRecord {
  std::string experiment;
  int n = 0;
  int i = -1;
  int j = -1;  // -1 for single-site observables
  std::string observable;
  double value_re = 0.0;
  double value_im = 0.0;
  double value_abs = 0.0;
  bool converged = true;

  static ObservableRecord make(std::string exp, int n, int i, int j, std::string obs, Complex v, bool conv) {
    return {std::move(exp), n, i, j, std::move(obs), v.real(), v.imag(), std::abs(v), conv};
  }
};

// ---------------------------------------------------------------------------
// Steady-state sweep points

struct SweepPoint {
  ChainConfig chain;
  SectorState state;
  SteadyStateResult steady;
};

// Single-excitation steady state reached from the standard initial state.
inline SweepPoint solve_sector_steady_state(const ChainConfig& chain, double t_max, double tol) {
  const ReducedModel red = sector_model(chain, 1);
  const Liouvillian l = build_liouvillian(red.hamiltonian, red.terms);
  SteadyStateOptions opt;
  opt.tol = tol;
  opt.t_max = t_max > 0.0 ? t_max : default_t_max(chain);
  const SectorState init = initial_sector_state(chain, red.sector);
  SteadyStateResult ss = steady_state_from_initial(init.rho, l, opt);
  return {chain, SectorState{red.sector, ss.state}, ss};
}

// Sweep points run concurrently; results come back in n order.
inline std::vector<SweepPoint> solve_sweep(const ChainConfig& base, const std::vector<int>& ns, double t_max,
                                           double tol) {
  std::vector<std::future<SweepPoint>> jobs;
  for (int n : ns) {
    ChainConfig c = base;
    c.n = n;
    jobs.push_back(std::async(std::launch::async, [c, t_max, tol] { return solve_sector_steady_state(c, t_max, tol); }));
  }
  std::vector<SweepPoint> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

// Least-squares c for y = c / n; R^2 against the mean of y.
struct InverseFit {
  double c = 0.0;
  double r_squared = 0.0;
};

inline InverseFit fit_inverse_n(const std::vector<int>& ns, const std::vector<double>& ys) {
  if (ns.size() != ys.size() || ns.empty()) throw std::invalid_argument("fit_inverse_n: bad input");
  double sxy = 0.0, sxx = 0.0, mean = 0.0;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    const double x = 1.0 / ns[k];
    sxy += x * ys[k];
    sxx += x * x;
    mean += ys[k];
  }
  mean /= static_cast<double>(ys.size());
  InverseFit f;
  f.c = sxy / sxx;
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    ss_res += std::pow(ys[k] - f.c / ns[k], 2);
    ss_tot += std::pow(ys[k] - mean, 2);
  }
  f.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : (ss_res == 0.0 ? 1.0 : 0.0);
  return f;
}

namespace detail {

inline void append_point_diagnostics(std::vector<ObservableRecord>& out, const std::string& exp, const SweepPoint& p) {
  out.push_back(ObservableRecord::make(exp, p.chain.n, -1, -1, "residual", p.steady.residual, p.steady.converged));
  out.push_back(ObservableRecord::make(exp, p.chain.n, -1, -1, "purity", purity(p.state.rho), p.steady.converged));
}

inline std::vector<ObservableRecord> run_two_qubit(const ExperimentConfig& cfg) {
  const std::string exp = "two_qubit";
  const ChainConfig& c = cfg.chain;
  const SiteMap map = SiteMap::for_config(c);
  const Operator h = build_hamiltonian(c);
  const std::vector<LindbladTerm> terms = build_jumps(c);
  const Liouvillian gen = build_liouvillian(h, terms);
  StateVector psi_plus = StateVector::Zero(4);
  psi_plus(static_cast<Index>(site_bit(1, 2))) = 1.0 / std::sqrt(2.0);
  psi_plus(static_cast<Index>(site_bit(2, 2))) = 1.0 / std::sqrt(2.0);

  const double t_end = cfg.t_max > 0.0 ? cfg.t_max : 200.0;
  const EvolutionResult traj = evolve_exact(initial_state(c, map), gen, t_end, 1.0);
  const double residual = residual_norm(gen, traj.states.back());
  const bool conv = residual < cfg.conv_tol;
  std::vector<ObservableRecord> out;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const int idx = static_cast<int>(k);
    out.push_back(ObservableRecord::make(exp, 2, idx, -1, "time", traj.times[k], conv));
    out.push_back(
        ObservableRecord::make(exp, 2, idx, -1, "fidelity_psi_plus", fidelity_pure(traj.states[k].cleaned(), psi_plus), conv));
  }
  out.push_back(ObservableRecord::make(exp, 2, -1, -1, "residual", residual, conv));
  return out;
}

}  // namespace detail

inline std::vector<ObservableRecord> run_preset(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::string exp = to_string(cfg.preset);
  std::vector<ObservableRecord> out;

  switch (cfg.preset) {
    case Preset::TwoQubit:
      return detail::run_two_qubit(cfg);

    case Preset::Fig2a:
    case Preset::Fig2c:
    case Preset::Custom: {
      const SweepPoint p = solve_sector_steady_state(cfg.chain, cfg.t_max, cfg.conv_tol);
      const int n = cfg.chain.n;
      const bool conv = p.steady.converged;
      const bool corr = cfg.preset != Preset::Fig2c;
      const bool neg = cfg.preset != Preset::Fig2a;
      std::vector<std::pair<int, int>> pairs = pairs_from_first(n);
      if (cfg.preset == Preset::Custom) {
        pairs.clear();
        for (int i = 1; i <= n; ++i)
          for (int j = i + 1; j <= n; ++j) pairs.emplace_back(i, j);
      }
      for (auto [i, j] : pairs) {
        if (corr) out.push_back(ObservableRecord::make(exp, n, i, j, "corr", correlator(p.state, i, j), conv));
        if (neg) out.push_back(ObservableRecord::make(exp, n, i, j, "negativity", pair_negativity(p.state, i, j), conv));
      }
      if (cfg.preset != Preset::Fig2c) {
        for (int s = 1; s <= n; ++s) out.push_back(ObservableRecord::make(exp, n, s, -1, "sigma_z", sigma_z(p.state, s), conv));
      }
      detail::append_point_diagnostics(out, exp, p);
      break;
    }

    case Preset::Fig2b:
    case Preset::Fig3a:
    case Preset::Fig3b: {
      const auto points = solve_sweep(cfg.chain, cfg.n_list, cfg.t_max, cfg.conv_tol);
      std::vector<double> abs_corr;
      for (const auto& p : points) {
        const int n = p.chain.n;
        const bool conv = p.steady.converged;
        if (cfg.preset == Preset::Fig3b) {
          out.push_back(ObservableRecord::make(exp, n, 1, n, "negativity", pair_negativity(p.state, 1, n), conv));
        } else {
          const Complex v = correlator(p.state, 1, n);
          abs_corr.push_back(std::abs(v));
          out.push_back(ObservableRecord::make(exp, n, 1, n, "corr", v, conv));
          if (cfg.preset == Preset::Fig2b) {
            out.push_back(ObservableRecord::make(exp, n, 1, n, "analytic", 1.0 / (n / 2 + 1), conv));
          }
        }
        detail::append_point_diagnostics(out, exp, p);
      }
      if (cfg.preset == Preset::Fig3a) {
        const InverseFit fit = fit_inverse_n(cfg.n_list, abs_corr);
        for (std::size_t k = 0; k < points.size(); ++k) {
          const int n = points[k].chain.n;
          out.push_back(ObservableRecord::make(exp, n, 1, n, "fit_c_over_n", fit.c / n, points[k].steady.converged));
        }
      }
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr const char* kCsvHeader = "experiment,n,i,j,observable,value_re,value_im,value_abs,converged";

inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Stable order on (experiment, n, i, j); ties keep insertion order.
inline std::string format_csv(std::vector<ObservableRecord> records) {
  std::stable_sort(records.begin(), records.end(), [](const ObservableRecord& a, const ObservableRecord& b) {
    return std::tie(a.experiment, a.n, a.i, a.j) < std::tie(b.experiment, b.n, b.i, b.j);
  });
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& r : records) {
    os << r.experiment << ',' << r.n << ',' << r.i << ',' << r.j << ',' << r.observable << ','
       << format_number(r.value_re) << ',' << format_number(r.value_im) << ',' << format_number(r.value_abs) << ','
       << (r.converged ? "true" : "false") << '\n';
  }
  return os.str();
}

inline void write_csv(const std::vector<ObservableRecord>& records, const std::string& path) {
  const std::string text = format_csv(records);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error("cannot open '" + path + "' for writing");
  f << text;
  f.close();
  if (!f) throw Error("write to '" + path + "' failed");
}

// ---------------------------------------------------------------------------
// JSON config

inline ExperimentConfig parse_config(const nlohmann::json& j) {
  static const char* const known[] = {"preset",           "geometry",        "n",     "n_list",   "delta",
                                      "kappa",            "theta",           "gamma_engineered", "gamma_dephasing",
                                      "t_max",            "conv_tol",        "output_path"};
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
  if (!j.contains("preset")) throw std::invalid_argument("config is missing 'preset'");
  ExperimentConfig cfg = preset_defaults(parse_preset(j.at("preset").get<std::string>()));
  ChainConfig& c = cfg.chain;
  if (j.contains("geometry")) c.geometry = parse_geometry(j.at("geometry").get<std::string>());
  if (j.contains("n")) c.n = j.at("n").get<int>();
  if (j.contains("n_list")) cfg.n_list = j.at("n_list").get<std::vector<int>>();
  if (j.contains("delta")) c.delta = j.at("delta").get<double>();
  if (j.contains("kappa")) c.kappa = j.at("kappa").get<double>();
  if (j.contains("theta")) c.theta = j.at("theta").get<double>();
  if (j.contains("gamma_engineered")) c.gamma_engineered = j.at("gamma_engineered").get<double>();
  if (j.contains("gamma_dephasing")) c.gamma_dephasing = j.at("gamma_dephasing").get<double>();
  if (j.contains("t_max")) cfg.t_max = j.at("t_max").get<double>();
  if (j.contains("conv_tol")) cfg.conv_tol = j.at("conv_tol").get<double>();
  if (j.contains("output_path")) cfg.output_path = j.at("output_path").get<std::string>();
  cfg.validate();
  return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot read config '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(f);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("malformed config '" + path + "': " + e.what());
  }
  try {
    return parse_config(j);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("bad config '" + path + "': " + e.what());
  }
}

}  // namespace qchain
