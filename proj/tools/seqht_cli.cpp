// Copyright 2026 The seqht Authors
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

// Command-line driver: decompose | bounds | eigen | asp | scan | magic | resources.
//
// CSV output starts with "# key = value" lines echoing the resolved config,
// then a header row; floats use 4 decimals. JSON carries full precision.
// Exit codes: 0 success, 2 config error, 1 runtime error.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "seqht/circuit.hpp"
#include "seqht/evolution.hpp"
#include "seqht/field.hpp"
#include "seqht/hierarchy.hpp"
#include "seqht/magic.hpp"
#include "seqht/walsh.hpp"

namespace {

using json = nlohmann::ordered_json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Config

struct RunConfig {
  std::string nq = "";
  double phi_max = 4.0;
  double lambda = 10.0;
  std::string nu_cut = "14";
  std::string nu_cut_phi2 = "none";
  std::string dt = "";
  std::string steps = "";
  int order = 2;
  int p = 4;
  double sigma = 1.0 / std::sqrt(2.0);
  std::string connectivity = "all";
  std::string output_path = "-";
  std::string format = "csv";
  std::string qasm_path;
  std::optional<std::uint64_t> nu_max;
  bool exact = false;
  bool profile = false;
  bool all_sequencies = false;
  bool truncated_target = false;
  unsigned workers = 0;
};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& raw, const char* what) {
  const std::string s = trim(raw);
  T v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || s.empty())
    throw ConfigError(std::string("bad ") + what + ": '" + raw + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

// "5", "5,6,8" or "3..9".
std::vector<int> parse_int_list(const std::string& s, const char* what) {
  std::vector<int> out;
  for (const auto& part : split(s, ',')) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_number<int>(part, what));
    } else {
      const int a = parse_number<int>(part.substr(0, dots), what);
      const int b = parse_number<int>(part.substr(dots + 2), what);
      if (b < a) throw ConfigError(std::string("empty range for ") + what);
      for (int v = a; v <= b; ++v) out.push_back(v);
    }
  }
  if (out.empty()) throw ConfigError(std::string("empty list for ") + what);
  return out;
}

// "0.1", "0.1,0.2" or "start:stop:step" (inclusive).
std::vector<double> parse_real_list(const std::string& s, const char* what) {
  std::vector<double> out;
  for (const auto& part : split(s, ',')) {
    const auto f = split(part, ':');
    if (f.size() == 1) {
      out.push_back(parse_number<double>(f[0], what));
    } else if (f.size() == 3) {
      const double a = parse_number<double>(f[0], what);
      const double b = parse_number<double>(f[1], what);
      const double st = parse_number<double>(f[2], what);
      if (!(st > 0.0) || b < a) throw ConfigError(std::string("bad range for ") + what);
      const auto n = std::int64_t(std::floor((b - a) / st + 1e-9));
      for (std::int64_t i = 0; i <= n; ++i) out.push_back(std::round((a + double(i) * st) * 1e12) / 1e12);
    } else {
      throw ConfigError(std::string("bad ") + what + ": '" + part + "'");
    }
  }
  if (out.empty()) throw ConfigError(std::string("empty list for ") + what);
  return out;
}

std::optional<std::uint64_t> parse_cut(const std::string& s, const char* what) {
  if (trim(s) == "none") return std::nullopt;
  const int v = parse_number<int>(s, what);
  if (v < 0 || v % 2 != 0) throw ConfigError(std::string(what) + " must be a non-negative even integer");
  return std::uint64_t(v);
}

std::string fmt_full(double v) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

// ---------------------------------------------------------------------------
// Tabular output

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
  std::vector<std::pair<std::string, std::string>> header;  // echoed config
  json config = json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  json extra = json::object();  // JSON-only payload
  std::vector<std::pair<std::string, Cell>> summary;  // scalar results
  bool json_rows = true;

  void set(const std::string& k, const json& v) {
    config[k] = v;
    header.emplace_back(k, v.is_string() ? v.get<std::string>()
                           : v.is_number_float() ? fmt_full(v.get<double>())
                                                  : v.dump());
  }
};

std::string csv_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (std::isnan(*d)) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", *d == 0.0 ? 0.0 : *d);
    if (std::string(buf) == "-0.0000") return "0.0000";
    return buf;
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

json json_cell(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return std::isnan(*d) ? json(nullptr) : json(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

void write_table(const Table& t, const RunConfig& cfg, std::ostream& os) {
  if (cfg.format == "json") {
    json j;
    j["config"] = t.config;
    for (const auto& [k, v] : t.summary) j[k] = json_cell(v);
    if (t.json_rows && !t.columns.empty()) {
      j["columns"] = t.columns;
      json rows = json::array();
      for (const auto& r : t.rows) {
        json row = json::array();
        for (const auto& c : r) row.push_back(json_cell(c));
        rows.push_back(std::move(row));
      }
      j["rows"] = std::move(rows);
    }
    for (const auto& [k, v] : t.extra.items()) j[k] = v;
    os << j.dump(2) << "\n";
    return;
  }
  for (const auto& [k, v] : t.header) os << "# " << k << " = " << v << "\n";
  for (const auto& [k, v] : t.summary) os << "# " << k << " = " << csv_cell(v) << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  if (!t.columns.empty()) os << "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_cell(r[i]);
    os << "\n";
  }
}

void emit(const Table& t, const RunConfig& cfg) {
  if (cfg.output_path == "-" || cfg.output_path.empty()) {
    write_table(t, cfg, std::cout);
    return;
  }
  std::ofstream f(cfg.output_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file '" + cfg.output_path + "'");
  write_table(t, cfg, f);
  if (!f) throw std::runtime_error("write failed for '" + cfg.output_path + "'");
}

std::string hex_mask(seqht::Mask m) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(m));
  return buf;
}

json cut_json(const std::optional<std::uint64_t>& c) {
  return c ? json(*c) : json("none");
}

void warn_coarse(int n, const std::optional<std::uint64_t>& cut) {
  if (cut && n < 5)
    std::cerr << "warning: n_q = " << n << " is too coarse for sequency truncation to matter\n";
}

int single_nq(const RunConfig& cfg, int fallback) {
  if (cfg.nq.empty()) return fallback;
  const auto v = parse_int_list(cfg.nq, "--nq");
  if (v.size() != 1) throw ConfigError("this subcommand takes a single --nq value");
  return v.front();
}

void check_nq(int n, int lo, int hi) {
  if (n < lo || n > hi)
    throw ConfigError("n_q = " + std::to_string(n) + " outside [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
}

void check_phi_max(double pm) {
  if (!(pm > 0.0) || !std::isfinite(pm)) throw ConfigError("--phi-max must be positive");
}

seqht::Connectivity connectivity(const RunConfig& cfg) {
  if (cfg.connectivity == "all") return seqht::Connectivity::kAllToAll;
  if (cfg.connectivity == "linear") return seqht::Connectivity::kLinearChain;
  throw ConfigError("--connectivity must be 'all' or 'linear'");
}

// ---------------------------------------------------------------------------
// Subcommands

Table cmd_decompose(const RunConfig& cfg) {
  const auto nqs = parse_int_list(cfg.nq.empty() ? "5,6,7,8,10,11,12" : cfg.nq, "--nq");
  for (int n : nqs) check_nq(n, 1, 16);
  check_phi_max(cfg.phi_max);
  if (cfg.p < 1) throw ConfigError("--p must be >= 1");
  Table t;
  t.set("subcommand", "decompose");
  t.set("p", cfg.p);
  t.set("phi_max", cfg.phi_max);
  t.set("nq", nqs);
  t.set("nu_max", cfg.nu_max ? json(*cfg.nu_max) : json("none"));

  std::vector<seqht::WalshSpectrum> specs;
  for (int n : nqs) specs.push_back(seqht::decompose(seqht::phi_power_operator(seqht::FieldGrid(n, cfg.phi_max), cfg.p)));

  std::set<std::uint64_t> support;
  for (const auto& s : specs)
    for (auto nu : s.support()) support.insert(nu);

  if (nqs.size() == 1) {
    t.columns = {"nu", "zmask_hex", "label", "coefficient"};
    const int n = nqs.front();
    for (auto nu : support) {
      if (cfg.nu_max && nu > *cfg.nu_max) continue;
      const auto op = seqht::SequencyOp::from_sequency(nu, n);
      t.rows.push_back({std::int64_t(nu), hex_mask(op.z_mask), op.label(), specs.front().at(nu)});
    }
    return t;
  }
  t.columns = {"nu"};
  for (int n : nqs) t.columns.push_back("nq" + std::to_string(n));
  t.columns.push_back("continuum");
  for (auto nu : support) {
    if (cfg.nu_max && nu > *cfg.nu_max) continue;
    std::vector<Cell> row{std::int64_t(nu)};
    for (std::size_t i = 0; i < nqs.size(); ++i)
      row.push_back(nu < seqht::dim_of(nqs[i]) ? Cell(specs[i].at(nu)) : Cell(std::nan("")));
    row.push_back(seqht::continuum_coefficient(cfg.p, nu, cfg.phi_max));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table cmd_bounds(const RunConfig& cfg) {
  const int n = single_nq(cfg, 8);
  check_nq(n, 1, 16);
  check_phi_max(cfg.phi_max);
  if (cfg.p < 0) throw ConfigError("--p must be >= 0");
  Table t;
  t.set("subcommand", "bounds");
  t.set("p", cfg.p);
  t.set("x_max", cfg.phi_max);
  t.set("nq", n);
  t.set("even_only", !cfg.all_sequencies);
  const auto prof = seqht::bound_profile(cfg.p, cfg.phi_max, n, !cfg.all_sequencies);
  t.columns = {"nu", "coeff", "bound"};
  for (const auto& [nu, e] : prof.entries) t.rows.push_back({std::int64_t(nu), e.beta_tilde, e.bound});
  t.summary.emplace_back("violations", std::int64_t(prof.violations()));
  return t;
}

Table cmd_eigen(const RunConfig& cfg) {
  const int n = single_nq(cfg, 5);
  check_nq(n, 1, 12);
  check_phi_max(cfg.phi_max);
  if (!(cfg.lambda >= 0.0)) throw ConfigError("--lambda must be >= 0");
  const auto cut = parse_cut(cfg.nu_cut, "--nu-cut");
  const auto cut2 = parse_cut(cfg.nu_cut_phi2, "--nu-cut-phi2");
  warn_coarse(n, cut);
  Table t;
  t.set("subcommand", "eigen");
  t.set("nq", n);
  t.set("phi_max", cfg.phi_max);
  t.set("lambda", cfg.lambda);
  t.set("nu_cut", cut_json(cut));
  t.set("nu_cut_phi2", cut_json(cut2));
  const seqht::FieldGrid g(n, cfg.phi_max), go(n, seqht::optimal_phi_max(n));
  seqht::HamiltonianSpec full, trunc, free;
  full.lambda = trunc.lambda = cfg.lambda;
  trunc.nu_cut_phi4 = cut;
  trunc.nu_cut_phi2 = cut2;
  const auto et = seqht::eigenvalues(seqht::build_hamiltonian(g, trunc));
  const auto ef = seqht::eigenvalues(seqht::build_hamiltonian(g, full));
  const auto e0 = seqht::eigenvalues(seqht::build_hamiltonian(g, free));
  const auto eo = seqht::eigenvalues(seqht::build_hamiltonian(go, free));
  t.set("optimal_phi_max", seqht::optimal_phi_max(n));
  t.columns = {"index", "truncated", "full", "free", "free_optimal", "analytic"};
  for (Eigen::Index i = 0; i < et.size(); ++i)
    t.rows.push_back({std::int64_t(i), et[i], ef[i], e0[i], eo[i], double(i) + 0.5});
  return t;
}

seqht::AspSchedule schedule_from(const RunConfig& cfg, double dt, int steps) {
  seqht::AspSchedule sch;
  sch.n_steps = steps;
  sch.dt = dt;
  sch.trotter_order = cfg.order;
  sch.lambda_target = cfg.lambda;
  sch.cutoffs.nu_cut_phi4 = parse_cut(cfg.nu_cut, "--nu-cut");
  sch.cutoffs.nu_cut_phi2 = parse_cut(cfg.nu_cut_phi2, "--nu-cut-phi2");
  try {
    sch.validate();
  } catch (const seqht::DomainError& e) {
    throw ConfigError(e.what());
  }
  return sch;
}

double single_real(const std::string& s, const char* what, double fallback) {
  if (s.empty()) return fallback;
  const auto v = parse_real_list(s, what);
  if (v.size() != 1) throw ConfigError(std::string("this subcommand takes a single ") + what);
  return v.front();
}

int single_int(const std::string& s, const char* what, int fallback) {
  if (s.empty()) return fallback;
  const auto v = parse_int_list(s, what);
  if (v.size() != 1) throw ConfigError(std::string("this subcommand takes a single ") + what);
  return v.front();
}

Table cmd_asp(const RunConfig& cfg) {
  const int n = single_nq(cfg, 5);
  check_nq(n, 2, cfg.exact ? 8 : 16);
  check_phi_max(cfg.phi_max);
  const double dt = single_real(cfg.dt, "--dt", 1.0);
  const int steps = single_int(cfg.steps, "--steps", 5);
  const auto sch = schedule_from(cfg, dt, steps);
  warn_coarse(n, sch.cutoffs.nu_cut_phi4);
  Table t;
  t.set("subcommand", "asp");
  t.set("nq", n);
  t.set("phi_max", cfg.phi_max);
  t.set("lambda", cfg.lambda);
  t.set("nu_cut", cut_json(sch.cutoffs.nu_cut_phi4));
  t.set("nu_cut_phi2", cut_json(sch.cutoffs.nu_cut_phi2));
  t.set("dt", dt);
  t.set("steps", steps);
  t.set("order", cfg.order);
  t.set("propagator", cfg.exact ? "exact" : "trotter");
  t.set("ramp", "lambda*k/(steps+1)");

  const seqht::FieldGrid g(n, cfg.phi_max);
  const seqht::StateVector psi =
      cfg.exact ? seqht::run_asp_exact(steps, dt * steps, cfg.lambda, g, sch.cutoffs)
                : seqht::run_asp(sch, g);
  const seqht::StateVector target = seqht::target_ground_state(g, cfg.lambda);
  t.summary.emplace_back("fidelity", Cell(seqht::fidelity(target, psi)));
  t.summary.emplace_back("amplitude_overlap", Cell(seqht::amplitude_overlap(target, psi)));

  t.columns = {"index", "phi", "evolved_re", "evolved_im", "target"};
  for (std::size_t j = 0; j < psi.size(); ++j)
    t.rows.push_back({std::int64_t(j), g.values[j], psi[j].real(), psi[j].imag(), target[j].real()});

  const auto obs = seqht::zz_expectations(psi);
  const auto obs_t = seqht::zz_expectations(target);
  json zz = json::array();
  for (const auto& [ij, v] : obs.zz) {
    const auto op = seqht::SequencyOp::from_mask(
        (seqht::Mask{1} << seqht::bit_of_qubit(ij.first, n)) |
            (seqht::Mask{1} << seqht::bit_of_qubit(ij.second, n)), n);
    zz.push_back({{"nu", op.nu}, {"i", ij.first}, {"j", ij.second}, {"evolved", v},
                  {"target", obs_t.at(ij.first, ij.second)}});
  }
  t.extra["observables"] = std::move(zz);
  return t;
}

Table cmd_scan(const RunConfig& cfg) {
  const int n = single_nq(cfg, 5);
  check_nq(n, 2, 14);
  check_phi_max(cfg.phi_max);
  const auto dts = parse_real_list(cfg.dt.empty() ? "0.10:0.55:0.03" : cfg.dt, "--dt");
  const auto steps = parse_int_list(cfg.steps.empty() ? "1..14" : cfg.steps, "--steps");
  for (double d : dts) schedule_from(cfg, d, 1);
  for (int s : steps)
    if (s < 0) throw ConfigError("--steps must be >= 0");
  seqht::ScanConfig sc;
  sc.n_qubits = n;
  sc.phi_max = cfg.phi_max;
  sc.lambda_target = cfg.lambda;
  sc.trotter_order = cfg.order;
  sc.cutoffs.nu_cut_phi4 = parse_cut(cfg.nu_cut, "--nu-cut");
  sc.cutoffs.nu_cut_phi2 = parse_cut(cfg.nu_cut_phi2, "--nu-cut-phi2");
  sc.truncated_target = cfg.truncated_target;
  sc.workers = cfg.workers;
  warn_coarse(n, sc.cutoffs.nu_cut_phi4);
  Table t;
  t.set("subcommand", "scan");
  t.set("nq", n);
  t.set("phi_max", cfg.phi_max);
  t.set("lambda", cfg.lambda);
  t.set("nu_cut", cut_json(sc.cutoffs.nu_cut_phi4));
  t.set("nu_cut_phi2", cut_json(sc.cutoffs.nu_cut_phi2));
  t.set("order", cfg.order);
  t.set("target", cfg.truncated_target ? "truncated" : "full");
  t.set("dt", dts);
  t.set("steps", steps);
  const auto f = seqht::scan_fidelity(dts, steps, sc);
  t.columns = {"steps"};
  for (double d : dts) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "dt=%.2f", d);
    t.columns.push_back(buf);
  }
  for (std::size_t r = 0; r < steps.size(); ++r) {
    std::vector<Cell> row{std::int64_t(steps[r])};
    for (double v : f[r]) row.push_back(v);
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table cmd_magic(const RunConfig& cfg) {
  if (!(cfg.sigma > 0.0)) throw ConfigError("--sigma must be positive");
  check_phi_max(cfg.phi_max);
  Table t;
  t.set("subcommand", "magic");
  t.set("phi_max", cfg.phi_max);
  t.set("sigma", cfg.sigma);
  if (cfg.profile) {
    const int n = single_nq(cfg, 9);
    check_nq(n, 1, seqht::kMaxMagicQubits);
    const seqht::FieldGrid g(n, cfg.phi_max);
    std::vector<std::uint64_t> cuts;
    if (cfg.nu_max) {
      for (std::uint64_t c = 0; c <= *cfg.nu_max && c < g.size(); c += 2) cuts.push_back(c);
    } else {
      for (std::uint64_t c = 0; c < g.size(); c += 2) cuts.push_back(c);
    }
    t.set("nq", n);
    t.set("mode", "profile");
    const auto prof = seqht::truncated_magic_profile(seqht::gaussian_state(cfg.sigma, 0.0, g), cuts);
    t.columns = {"nu_cut", "m_lin"};
    for (const auto& [c, r] : prof) t.rows.push_back({std::int64_t(c), r.m_lin});
    return t;
  }
  const auto nqs = parse_int_list(cfg.nq.empty() ? "3..9" : cfg.nq, "--nq");
  for (int n : nqs) check_nq(n, 1, seqht::kMaxMagicQubits);
  t.set("nq", nqs);
  t.set("mode", "sweep");
  t.columns = {"nq", "m_lin"};
  for (int n : nqs) {
    const seqht::FieldGrid g(n, cfg.phi_max);
    t.rows.push_back({std::int64_t(n), seqht::linear_magic(seqht::gaussian_state(cfg.sigma, 0.0, g)).m_lin});
  }
  return t;
}

Table cmd_resources(const RunConfig& cfg) {
  const int n = single_nq(cfg, 5);
  check_nq(n, 2, 10);
  check_phi_max(cfg.phi_max);
  const double dt = single_real(cfg.dt, "--dt", 0.4);
  const int steps = single_int(cfg.steps, "--steps", 2);
  if (cfg.order != 2) throw ConfigError("resources: circuit assembly supports --order 2 only");
  const auto sch = schedule_from(cfg, dt, steps);
  seqht::AspCircuitOptions opt;
  opt.connectivity = connectivity(cfg);
  Table t;
  t.set("subcommand", "resources");
  t.set("nq", n);
  t.set("phi_max", cfg.phi_max);
  t.set("lambda", cfg.lambda);
  t.set("nu_cut", cut_json(sch.cutoffs.nu_cut_phi4));
  t.set("nu_cut_phi2", cut_json(sch.cutoffs.nu_cut_phi2));
  t.set("dt", dt);
  t.set("steps", steps);
  t.set("order", cfg.order);
  t.set("connectivity", cfg.connectivity);
  const seqht::FieldGrid g(n, cfg.phi_max);
  const auto circ = seqht::assemble_asp_circuit(sch, g, opt);
  const auto rep = seqht::count_resources(circ);
  if (!cfg.qasm_path.empty()) {
    std::ofstream f(cfg.qasm_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open QASM file '" + cfg.qasm_path + "'");
    f << seqht::export_qasm(circ);
  }
  json blocks = json::object();
  for (const auto& [name, b] : rep.by_block) blocks[name] = {{"count", b.count}, {"depth", b.depth}};
  t.json_rows = false;
  t.extra["count"] = rep.two_qubit_count;
  t.extra["depth"] = rep.two_qubit_depth;
  t.extra["by_block"] = std::move(blocks);
  t.columns = {"block", "count", "depth"};
  for (const auto& [name, b] : rep.by_block)
    t.rows.push_back({name, std::int64_t(b.count), std::int64_t(b.depth)});
  t.rows.push_back({std::string("total"), std::int64_t(rep.two_qubit_count),
                    std::int64_t(rep.two_qubit_depth)});
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sequency hierarchy truncation toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::optional<int> nu_max;

  auto add_common = [&](CLI::App* s) {
    s->add_option("--nq", cfg.nq, "Qubit count: N, N,M,... or A..B");
    s->add_option("--phi-max", cfg.phi_max, "Field cutoff phi_max (x_M for bounds)");
    s->add_option("--out", cfg.output_path, "Output path, - for stdout");
    s->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };
  auto add_physics = [&](CLI::App* s) {
    s->add_option("--lambda", cfg.lambda, "Target coupling");
    s->add_option("--nu-cut", cfg.nu_cut, "phi^4 sequency cutoff (even) or none");
    s->add_option("--nu-cut-phi2", cfg.nu_cut_phi2, "phi^2 sequency cutoff (even) or none");
  };
  auto add_evolution = [&](CLI::App* s) {
    s->add_option("--dt", cfg.dt, "Time step: X, X,Y,... or start:stop:step");
    s->add_option("--steps", cfg.steps, "Step count: N, N,M,... or A..B");
    s->add_option("--order", cfg.order, "Trotter order (1 or 2)");
  };

  auto* dec = app.add_subcommand("decompose", "Walsh spectrum of phi^p");
  add_common(dec);
  dec->add_option("--p", cfg.p, "Power of the field");
  dec->add_option("--nu-max", nu_max, "Largest sequency to print");

  auto* bnd = app.add_subcommand("bounds", "Normalized coefficients against sequency bounds");
  add_common(bnd);
  bnd->add_option("--p", cfg.p, "Power of the field");
  bnd->add_flag("--all", cfg.all_sequencies, "Include odd sequencies");

  auto* eig = app.add_subcommand("eigen", "Spectra of full, truncated and free Hamiltonians");
  add_common(eig);
  add_physics(eig);

  auto* asp = app.add_subcommand("asp", "Single adiabatic preparation run");
  add_common(asp);
  add_physics(asp);
  add_evolution(asp);
  asp->add_flag("--exact", cfg.exact, "Exact per-step propagators instead of Trotter factors");

  auto* scn = app.add_subcommand("scan", "Fidelity over a grid of step counts and time steps");
  add_common(scn);
  add_physics(scn);
  add_evolution(scn);
  scn->add_flag("--truncated-target", cfg.truncated_target, "Score against the truncated ground state");
  scn->add_option("--workers", cfg.workers, "Worker threads (0: all cores)");

  auto* mag = app.add_subcommand("magic", "Linear stabilizer magic of the Gaussian state");
  add_common(mag);
  mag->add_option("--sigma", cfg.sigma, "Gaussian width");
  mag->add_flag("--profile", cfg.profile, "Magic against the sequency cutoff on one register");
  mag->add_option("--nu-max", nu_max, "Largest cutoff in profile mode");

  auto* res = app.add_subcommand("resources", "Two-qubit gate counts of the preparation circuit");
  add_common(res);
  add_physics(res);
  add_evolution(res);
  res->add_option("--connectivity", cfg.connectivity, "all or linear");
  res->add_option("--qasm", cfg.qasm_path, "Write OpenQASM 2.0 to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (nu_max) {
    if (*nu_max < 0) {
      std::cerr << "error: --nu-max must be >= 0\n";
      return 2;
    }
    cfg.nu_max = std::uint64_t(*nu_max);
  }

  try {
    Table t;
    if (*dec) t = cmd_decompose(cfg);
    else if (*bnd) t = cmd_bounds(cfg);
    else if (*eig) t = cmd_eigen(cfg);
    else if (*asp) t = cmd_asp(cfg);
    else if (*scn) t = cmd_scan(cfg);
    else if (*mag) t = cmd_magic(cfg);
    else t = cmd_resources(cfg);
    emit(t, cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const seqht::DomainError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
