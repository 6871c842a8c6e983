// Copyright 2026 The vdmesim Authors
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

#include "vdme/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "vdme/estimator.hpp"
#include "vdme/qpca.hpp"
#include "vdme/series.hpp"
#include "vdme/vdme.hpp"

namespace vdme {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  Config cfg;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key=value, got: " + t);
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw std::invalid_argument("config: empty key");
    cfg.kv[key] = trim(t.substr(eq + 1));
  }
  return cfg;
}

void Config::set(const std::string& key, const std::string& value) {
  kv[key] = value;
}

bool Config::has(const std::string& key) const { return kv.count(key) > 0; }

std::string Config::get(const std::string& key, const std::string& def) const {
  const auto it = kv.find(key);
  return it == kv.end() ? def : it->second;
}

double Config::get_double(const std::string& key, double def) const {
  const auto it = kv.find(key);
  if (it == kv.end()) return def;
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for key " + key);
  }
}

long Config::get_long(const std::string& key, long def) const {
  const auto it = kv.find(key);
  if (it == kv.end()) return def;
  try {
    std::size_t pos = 0;
    const long v = std::stol(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer for key " + key);
  }
}

std::uint64_t Config::get_u64(const std::string& key,
                              std::uint64_t def) const {
  const auto it = kv.find(key);
  if (it == kv.end()) return def;
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad seed for key " + key);
  }
}

std::string format_sci(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

void write_csv(const std::string& path,
               const std::vector<std::string>& comments,
               const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file: " + path);
  out << kCsvVersionLine << "\n";
  for (const auto& c : comments) out << "# " << c << "\n";
  for (std::size_t i = 0; i < header.size(); ++i)
    out << header[i] << (i + 1 < header.size() ? "," : "");
  out << "\n";
  for (const auto& row : rows) {
    if (row.size() != header.size())
      throw std::invalid_argument("csv row width mismatch");
    for (std::size_t i = 0; i < row.size(); ++i)
      out << row[i] << (i + 1 < row.size() ? "," : "");
    out << "\n";
  }
  if (!out) throw IoError("write failure: " + path);
}

CsvFile read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open csv file: " + path);
  CsvFile csv;
  std::string line;
  if (!std::getline(in, line))
    throw std::invalid_argument("csv: empty file: " + path);
  if (trim(line) != kCsvVersionLine)
    throw std::invalid_argument("csv: unknown schema version in " + path);
  bool have_header = false;
  while (std::getline(in, line)) {
    const std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '#') {
      csv.comments.push_back(trim(t.substr(1)));
      continue;
    }
    if (!have_header) {
      csv.header = split(t, ',');
      have_header = true;
    } else {
      csv.rows.push_back(split(t, ','));
    }
  }
  if (!have_header) throw std::invalid_argument("csv: missing header row");
  return csv;
}

namespace {

std::uint64_t require_seed(const Config& cfg) {
  if (!cfg.has("seed"))
    throw std::invalid_argument("seed is required for stochastic runs");
  return cfg.get_u64("seed", 0);
}

std::string require_out(const Config& cfg) {
  const std::string out = cfg.get("out", "");
  if (out.empty()) throw std::invalid_argument("out path is required");
  return out;
}

std::vector<double> log_grid(double lo, double hi, long points) {
  if (lo <= 0.0 || hi <= 0.0 || hi < lo)
    throw std::invalid_argument("grid bounds must satisfy 0 < min <= max");
  if (points < 1) throw std::invalid_argument("points must be >= 1");
  std::vector<double> xs;
  if (points == 1) {
    xs.push_back(lo);
    return xs;
  }
  const double a = std::log(lo), b = std::log(hi);
  for (long i = 0; i < points; ++i)
    xs.push_back(std::exp(a + (b - a) * static_cast<double>(i) /
                                  static_cast<double>(points - 1)));
  return xs;
}

}  // namespace

int cmd_dme_sweep(const Config& cfg) {
  const double t_evol = cfg.get_double("T", 1.0);
  const int r = static_cast<int>(
      cfg.get_long("r", default_general_segments(t_evol)));
  const int dim = static_cast<int>(cfg.get_long("dim", 2));
  const double eps_min = cfg.get_double("eps_min", 1e-8);
  const double eps_max = cfg.get_double("eps_max", 1e-1);
  const long points = cfg.get_long("points", 25);
  const std::uint64_t seed = require_seed(cfg);
  const std::string out = require_out(cfg);
  if (t_evol == 0.0)
    throw std::invalid_argument("dme-sweep: T must be nonzero");

  const DensityMatrix rho =
      random_state(dim, StateKind::mixed, derive_seed(seed, 0));
  const SuperOp target = unitary_channel(herm_exp(rho.mat, t_evol));
  const CMat seg_target = herm_exp(rho.mat, t_evol / r);
  const double pure_copies = 2.0 * default_pure_segments(t_evol);

  std::vector<std::vector<std::string>> rows;
  for (double eps : log_grid(eps_min, eps_max, points)) {
    const SeriesSpec spec = build_series(t_evol, r, eps);
    const CMat seg = truncated_series_matrix(spec, rho);
    const SuperOp mean = exact_mean_general(spec, rho, 0).mean;
    const double choi_upper =
        diamond_bounds(scale(mean, spec.overhead), target).second;
    const double pswap =
        std::max(1.0, std::ceil(t_evol * t_evol / eps));
    rows.push_back({format_sci(eps), std::to_string(spec.L),
                    std::to_string(copy_count_bound(spec)),
                    format_sci(mean_copy_count(spec)),
                    format_sci(pure_copies), format_sci(pswap),
                    format_sci(spec.overhead),
                    format_sci(op_norm(seg - seg_target)),
                    format_sci(choi_upper)});
  }
  write_csv(out,
            {"command=dme-sweep", "T=" + format_sci(t_evol),
             "r=" + std::to_string(r), "dim=" + std::to_string(dim),
             "seed=" + std::to_string(seed)},
            {"eps", "L", "worst_copies", "mean_copies", "pure_copies",
             "pswap_copies", "overhead", "opnorm_err", "choi_upper"},
            rows);
  return kExitOk;
}

int cmd_mc_estimate(const Config& cfg) {
  const int dim = static_cast<int>(cfg.get_long("dim", 4));
  const int n_slots = static_cast<int>(cfg.get_long("slots", 2));
  const double t_evol = cfg.get_double("T", 0.5);
  const double gamma = cfg.get_double("gamma", std::sqrt(2.0));
  const double eps = cfg.get_double("eps", 1e-3);
  const long shots = cfg.get_long("shots", 10000);
  const int workers = static_cast<int>(cfg.get_long("workers", 1));
  const std::string kind_s = cfg.get("kind", "general");
  const std::string obs_s = cfg.get("obs", "random");
  const std::uint64_t seed = require_seed(cfg);
  const std::string out = require_out(cfg);
  if (n_slots < 1) throw std::invalid_argument("mc-estimate: slots < 1");

  SlotKind kind;
  if (kind_s == "general")
    kind = SlotKind::general;
  else if (kind_s == "pure")
    kind = SlotKind::pure;
  else if (kind_s == "controlled")
    kind = SlotKind::controlled;
  else
    throw std::invalid_argument("mc-estimate: unknown kind " + kind_s);

  int slot_dim = static_cast<int>(cfg.get_long(
      "slot_dim", kind == SlotKind::controlled ? dim / 2 : dim));
  if (slot_dim < 2) throw std::invalid_argument("mc-estimate: slot_dim < 2");

  const DensityMatrix sigma =
      random_state(dim, StateKind::mixed, derive_seed(seed, 1));
  Rng rng(derive_seed(seed, 2), 0);
  std::vector<CMat> layers;
  for (int m = 0; m <= n_slots; ++m) layers.push_back(random_unitary(dim, rng));
  Observable obs;
  if (obs_s == "identity")
    obs = make_observable(CMat::Identity(dim, dim));
  else if (obs_s == "random")
    obs = make_observable(random_hermitian(dim, rng, 1.0));
  else
    throw std::invalid_argument("mc-estimate: unknown obs " + obs_s);

  std::vector<SlotSpec> slots;
  for (int m = 0; m < n_slots; ++m) {
    SlotSpec s;
    s.kind = kind;
    s.T = t_evol;
    s.eps = eps;
    s.rho = random_state(slot_dim,
                         kind == SlotKind::pure ? StateKind::pure
                                                : StateKind::mixed,
                         derive_seed(seed, 100 + m));
    slots.push_back(s);
  }
  CircuitPlan plan = make_circuit_plan(sigma, obs, layers, slots);
  choose_segments(plan, gamma);
  const ExactEstimate exact = estimate_exact(plan);
  const EstimatorReport rep =
      estimate_shots(plan, shots, derive_seed(seed, 7), workers);

  write_csv(
      out,
      {"command=mc-estimate", "dim=" + std::to_string(dim),
       "slots=" + std::to_string(n_slots), "kind=" + kind_s, "obs=" + obs_s,
       "T=" + format_sci(t_evol), "gamma=" + format_sci(gamma),
       "seed=" + std::to_string(seed), "shots=" + std::to_string(shots)},
      {"mean", "std_error", "overhead", "variance_amplification",
       "bias_bound", "exact_value", "ideal_value", "samples", "copies_min",
       "copies_mean", "copies_max"},
      {{format_sci(rep.mean), format_sci(rep.std_error),
        format_sci(rep.overhead), format_sci(rep.variance_amplification),
        format_sci(rep.bias_bound), format_sci(exact.value),
        format_sci(exact.ideal), std::to_string(rep.samples),
        std::to_string(rep.copies_min), format_sci(rep.copies_mean),
        std::to_string(rep.copies_max)}});
  return kExitOk;
}

int cmd_filter_design(const Config& cfg) {
  const double eta = cfg.get_double("eta", 0.2);
  const double eps1 = cfg.get_double("eps1", 1e-3);
  const double eps2 = cfg.get_double("eps2", 1e-3);
  const int cap = static_cast<int>(cfg.get_long("max_order", 200));
  const std::string out = require_out(cfg);

  const FilterSpec fs = design_filter(eta, eps1, eps2, cap);
  std::vector<std::vector<std::string>> rows;
  for (int k = 0; k <= fs.order; ++k)
    rows.push_back({std::to_string(k), format_sci(fs.coeff[k])});
  write_csv(out,
            {"command=filter-design", "order=" + std::to_string(fs.order),
             "eta=" + format_sci(eta), "eps1=" + format_sci(eps1),
             "eps2=" + format_sci(eps2), "dev_low=" + format_sci(fs.dev_low),
             "dev_high=" + format_sci(fs.dev_high)},
            {"k", "f"}, rows);
  return kExitOk;
}

int cmd_qpca_compare(const Config& cfg) {
  const double lambda = cfg.get_double("lambda", 0.2);
  const double eta = cfg.get_double("eta", lambda);
  const int dim = static_cast<int>(cfg.get_long("dim", 4));
  const double onorm = cfg.get_double("onorm", 1.0);
  const double delta_min = cfg.get_double("delta_min", 1e-8);
  const double delta_max = cfg.get_double("delta_max", 1e-1);
  const long points = cfg.get_long("points", 15);
  const int workers = static_cast<int>(cfg.get_long("workers", 1));
  const std::uint64_t seed = require_seed(cfg);
  const std::string out = require_out(cfg);

  std::vector<double> spectrum;
  if (cfg.has("err_spectrum")) {
    for (const auto& tok : split(cfg.get("err_spectrum", ""), ','))
      spectrum.push_back(std::stod(tok));
  }
  const NoiseModel nm = make_noise_model(dim, lambda, eta, seed, spectrum);
  const std::vector<double> deltas = log_grid(delta_min, delta_max, points);
  const std::vector<SweepRow> sweep = compare_sweep(nm, deltas, onorm, workers);

  std::vector<std::vector<std::string>> rows;
  for (const auto& row : sweep)
    rows.push_back({format_sci(row.delta), row.method, format_sci(row.copies),
                    format_sci(row.p25), format_sci(row.p50),
                    format_sci(row.p95), format_sci(row.overhead)});
  write_csv(out,
            {"command=qpca-compare", "lambda=" + format_sci(lambda),
             "eta=" + format_sci(eta), "dim=" + std::to_string(dim),
             "onorm=" + format_sci(onorm), "seed=" + std::to_string(seed)},
            {"delta", "method", "copies", "p25", "p50", "p95", "overhead"},
            rows);
  return kExitOk;
}

int cmd_pure_dme_check(const Config& cfg) {
  const long per_combo = cfg.get_long("instances", 2);
  const std::uint64_t seed = require_seed(cfg);
  const std::string out = cfg.get("out", "");
  const double dims[] = {2, 4, 8};
  const double times[] = {0.5, 1.0, kPi, 2.0 * kPi};
  double max_resid = 0.0;
  double max_overhead = 0.0;
  std::vector<std::vector<std::string>> rows;
  std::uint64_t idx = 0;
  for (double dd : dims)
    for (double t_evol : times)
      for (long i = 0; i < per_combo; ++i) {
        const int d = static_cast<int>(dd);
        const DensityMatrix psi =
            random_state(d, StateKind::pure, derive_seed(seed, idx++));
        const PureSpec ps = make_pure_spec(t_evol);
        const SuperOp mean = exact_mean_pure(ps, psi.mat);
        const double resid =
            diamond_bounds(scale(mean, ps.overhead),
                           unitary_channel(herm_exp(psi.mat, t_evol)))
                .second;
        max_resid = std::max(max_resid, resid);
        max_overhead = std::max(max_overhead, ps.overhead);
        rows.push_back({std::to_string(d), format_sci(t_evol),
                        format_sci(resid), format_sci(ps.overhead)});
      }
  std::cout << "pure-dme-check max residual " << format_sci(max_resid)
            << " max overhead " << format_sci(max_overhead) << "\n";
  if (!out.empty())
    write_csv(out, {"command=pure-dme-check", "seed=" + std::to_string(seed)},
              {"d", "T", "residual", "overhead"}, rows);
  const bool pass =
      max_resid <= 1e-9 && max_overhead <= std::exp(1.0) + 1e-6;
  return pass ? kExitOk : 1;
}

int run_command(int (*cmd)(const Config&), const Config& cfg) {
  try {
    return cmd(cfg);
  } catch (const InfeasibleDesign& e) {
    std::cerr << "infeasible design: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace vdme
