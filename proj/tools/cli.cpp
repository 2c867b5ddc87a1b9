#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "hypbc/hypbc.hpp"

namespace hypbc::cli {

namespace {

namespace fs = std::filesystem;

const std::map<std::string, std::vector<std::string>>& preset_params() {
  static const std::map<std::string, std::vector<std::string>> table{
      {"swe", {"u0", "v0", "g", "phi0", "fcor"}},
      {"swmhd", {"u0", "v0", "b10", "b20", "g", "phi0"}},
      {"euler", {"u0", "v0", "rho0", "e0", "p0", "dp_drho", "dp_de"}},
      {"wave", {"alpha", "beta", "h"}},
  };
  return table;
}

const std::set<std::string>& setting_keys() {
  static const std::set<std::string> keys{
      "preset", "a1_file", "a2_file",      "b_file", "s0_file",     "nx",      "ny",
      "l1",     "l2",      "t_end",        "cfl",    "output_every", "tol",    "cluster_tol",
      "samples", "snapshot", "out",        "seed"};
  return keys;
}

bool is_param_key(const std::string& k) {
  for (const auto& [name, keys] : preset_params())
    if (std::find(keys.begin(), keys.end(), k) != keys.end()) return true;
  return false;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::pair<std::string, std::string> split_pair(const std::string& item, const std::string& where) {
  const auto eq = item.find('=');
  if (eq == std::string::npos)
    throw Error(ErrorCode::InvalidArgument, where + ": expected key=value, got '" + item + "'");
  return {trim(item.substr(0, eq)), trim(item.substr(eq + 1))};
}

void check_key(const std::string& key) {
  if (!setting_keys().contains(key) && !is_param_key(key))
    throw Error(ErrorCode::UnknownKey, "unknown key '" + key + "'");
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config file '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto [k, v] = split_pair(line, path + ":" + std::to_string(lineno));
    check_key(k);
    kv[k] = v;
  }
  return kv;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty())
    throw Error(ErrorCode::InvalidArgument, key + ": not a number: '" + v + "'");
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d) || std::abs(d) > 1e9)
    throw Error(ErrorCode::InvalidArgument, key + ": not an integer: '" + v + "'");
  return static_cast<int>(d);
}

Command parse_command(const std::string& s) {
  if (s == "diagonalize") return Command::Diagonalize;
  if (s == "classify") return Command::Classify;
  if (s == "bc") return Command::Bc;
  if (s == "simulate") return Command::Simulate;
  if (s == "verify") return Command::Verify;
  if (s == "preset-list") return Command::PresetList;
  throw Error(ErrorCode::InvalidArgument,
              "unknown command '" + s +
                  "' (expected diagonalize, classify, bc, simulate, verify or preset-list)");
}

double param(const RunConfig& c, const std::string& k, double fallback) {
  const auto it = c.params.find(k);
  return it == c.params.end() ? fallback : it->second;
}

struct Problem {
  SymmetricPair pair;
  Forcing forcing;
};

Problem load_problem(const RunConfig& c) {
  Problem p;
  if (!c.preset.empty()) {
    if (c.preset == "swe") {
      SWEParams s;
      s.u0 = param(c, "u0", s.u0);
      s.v0 = param(c, "v0", s.v0);
      s.g = param(c, "g", s.g);
      s.phi0 = param(c, "phi0", s.phi0);
      s.f_cor = param(c, "fcor", s.f_cor);
      p.pair = preset_swe(s);
    } else if (c.preset == "swmhd") {
      SWMHDParams s;
      s.u0 = param(c, "u0", s.u0);
      s.v0 = param(c, "v0", s.v0);
      s.b10 = param(c, "b10", s.b10);
      s.b20 = param(c, "b20", s.b20);
      s.g = param(c, "g", s.g);
      s.phi0 = param(c, "phi0", s.phi0);
      p.pair = preset_swmhd(s);
    } else if (c.preset == "euler") {
      EulerParams s;
      s.u0 = param(c, "u0", s.u0);
      s.v0 = param(c, "v0", s.v0);
      s.rho0 = param(c, "rho0", s.rho0);
      s.e0 = param(c, "e0", s.e0);
      s.p0 = param(c, "p0", s.p0);
      s.dp_drho = param(c, "dp_drho", s.dp_drho);
      s.dp_de = param(c, "dp_de", s.dp_de);
      p.pair = preset_euler(s);
    } else {
      WaveParams s;
      s.alpha = param(c, "alpha", s.alpha);
      s.beta = param(c, "beta", s.beta);
      s.h = param(c, "h", s.h);
      p.pair = preset_wave(s);
      if (s.h != 0.0) {
        const Vector f = wave_forcing(s);
        p.forcing = [f](double, double, double) { return f; };
      }
    }
    return p;
  }
  const Matrix a1 = read_matrix_file(c.a1_file);
  const Matrix a2 = read_matrix_file(c.a2_file);
  const Matrix b = c.b_file.empty() ? Matrix() : read_matrix_file(c.b_file);
  if (!c.s0_file.empty()) {
    p.pair = symmetrize(a1, a2, b, read_matrix_file(c.s0_file));
  } else {
    p.pair.a1 = a1;
    p.pair.a2 = a2;
    if (b.size() != 0) {
      if (b.rows() != a1.rows() || b.cols() != a1.cols())
        throw Error(ErrorCode::DimensionMismatch, c.b_file + ": B does not match A1");
      p.pair.lower_order = b;
    }
  }
  p.pair.validate();
  return p;
}

CongruenceOptions congruence_options(const RunConfig& c) {
  CongruenceOptions o;
  o.tol = c.tol;
  o.eigen.cluster_tol = c.cluster_tol;
  return o;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  f << text;
}

std::ostringstream precise() {
  std::ostringstream os;
  os << std::setprecision(17);
  return os;
}

// Smooth seeded bump vanishing on the whole boundary.
StateField initial_state(const RectGrid& g, int n, std::uint32_t seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> centre(0.35, 0.65);
  std::normal_distribution<double> amp;
  const double cx = centre(rng) * g.l1();
  const double cy = centre(rng) * g.l2();
  Vector a(n);
  for (int k = 0; k < n; ++k) a(k) = amp(rng);
  return StateField::from_function(g, n, [&](double x, double y) {
    const double rx = (x - cx) / g.l1();
    const double ry = (y - cy) / g.l2();
    const double edge = 16.0 * x * (g.l1() - x) * y * (g.l2() - y) /
                        (g.l1() * g.l1() * g.l2() * g.l2());
    return Vector(a * (edge * std::exp(-40.0 * (rx * rx + ry * ry))));
  });
}

IVPConfig ivp_config(const RunConfig& c, const Problem& p, const ModeDecomposition& d) {
  IVPConfig ivp;
  ivp.pair = p.pair;
  ivp.grid = RectGrid(c.l1, c.l2, c.nx, c.ny);
  ivp.forcing = p.forcing;
  ivp.cfl = c.cfl;
  ivp.output_every = c.output_every;
  ivp.decomp = d;
  ivp.congruence = congruence_options(c);
  ivp.u0 = initial_state(ivp.grid, static_cast<int>(p.pair.order()), c.seed);
  return ivp;
}

std::string norms_csv(const EnergyReport& r) {
  auto os = precise();
  os << "t,norm\n";
  for (std::size_t k = 0; k < r.times.size(); ++k) os << r.times[k] << ',' << r.norms[k] << '\n';
  return os.str();
}

void write_snapshot(const fs::path& dir, const StateField& u) {
  const auto& g = u.grid();
  for (int c = 0; c < u.components(); ++c) {
    Matrix m(g.ny(), g.nx());
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) m(j, i) = u(i, j, c);
    write_matrix_file((dir / ("u_final_" + std::to_string(c) + ".txt")).string(), m);
  }
}

Trajectory simulate(const RunConfig& c, const Problem& p, const ModeDecomposition& d) {
  IVPConfig ivp = ivp_config(c, p, d);
  const SpatialOperator op = build_semidiscrete(ivp);
  ivp.t_end = c.t_end.value_or(2.0 * c.l1 / op.max_speed());
  return run(op, ivp);
}

std::vector<CertReport> certificates(const RunConfig& c, const ModeDecomposition& d,
                                     const std::vector<ModeBC>& bcs, const Trajectory& tr) {
  std::vector<CertReport> rows;
  const RectGrid grid(c.l1, c.l2, c.nx, c.ny);
  const std::string label = grid.label();
  const double h = std::max(grid.hx(), grid.hy());
  rows.push_back(CertReport::make("reconstruction", label, d.residuals.reconstruction, 1e-9));

  std::mt19937 rng(c.seed);
  for (std::size_t k = 0; k < d.modes.size(); ++k) {
    const std::string tag = "mode" + std::to_string(k);
    double worst = 0.0;
    if (const auto* t1 = std::get_if<TypeI>(&d.modes[k])) {
      for (int s = 0; s < c.samples; ++s) {
        const StateField u = random_admissible_field(grid, bcs[k], rng);
        const double q = positivity_residual_type1(t1->c, t1->d, u) / inner(u, u);
        worst = std::max(worst, -q);
      }
    } else {
      const auto& m = std::get<StandardTypeII>(d.modes[k]);
      const auto& bc = std::get<Type2BC>(bcs[k]);
      rows.push_back(CertReport::make(tag + "_determinant", label, std::abs(m.determinant() - 1.0), 1e-10));
      rows.push_back(CertReport::make(tag + "_bc_rank", label, has_full_rank(bc) ? 0.0 : 1.0, 0.0));
      for (int s = 0; s < c.samples; ++s) {
        const StateField u = random_admissible_field(grid, bc, rng);
        const double q = positivity_residual_type2(m, u) / inner(u, u);
        worst = std::max(worst, -q);
      }
      if (has_full_rank(bc)) {
        const auto sol =
            elliptic_steady_solve([m](double, double) { return m; }, StateField(grid, 2), bc, {});
        CertReport r = sol.uniqueness;
        r.name = tag + "_elliptic_uniqueness";
        rows.push_back(r);
      }
    }
    rows.push_back(CertReport::make(tag + "_positivity", label, worst, 5.0 * h));
  }

  const auto& rep = tr.report;
  if (rep.verdict != EnergyReport::Verdict::NotApplicable) {
    if (rep.kind == EnergyReport::Kind::Contraction)
      rows.push_back(CertReport::make("energy_monotone", label, rep.max_increase, rep.step_tol));
    rows.push_back(CertReport::make("energy_growth", label, rep.omega_hat, rep.bound + rep.step_tol,
                                    rep.omega_hat));
  }
  return rows;
}

}  // namespace

RunConfig parse_config(const std::vector<std::string>& args) {
  if (args.empty())
    throw Error(ErrorCode::MissingInput,
                "usage: hypbc <diagonalize|classify|bc|simulate|verify|preset-list> key=value ...");
  RunConfig c;
  c.command = parse_command(args[0]);

  std::map<std::string, std::string> flags;
  std::optional<std::string> config_file;
  for (std::size_t k = 1; k < args.size(); ++k) {
    auto [key, value] = split_pair(args[k], "argument");
    if (key == "config") {
      config_file = value;
      continue;
    }
    check_key(key);
    flags[key] = value;
  }
  std::map<std::string, std::string> kv;
  if (config_file) kv = read_config_file(*config_file);
  for (const auto& [k, v] : flags) kv[k] = v;

  for (const auto& [k, v] : kv) {
    if (k == "preset") c.preset = v;
    else if (k == "a1_file") c.a1_file = v;
    else if (k == "a2_file") c.a2_file = v;
    else if (k == "b_file") c.b_file = v;
    else if (k == "s0_file") c.s0_file = v;
    else if (k == "nx") c.nx = to_int(k, v);
    else if (k == "ny") c.ny = to_int(k, v);
    else if (k == "l1") c.l1 = to_double(k, v);
    else if (k == "l2") c.l2 = to_double(k, v);
    else if (k == "t_end") c.t_end = to_double(k, v);
    else if (k == "cfl") c.cfl = to_double(k, v);
    else if (k == "output_every") c.output_every = to_int(k, v);
    else if (k == "tol") c.tol = to_double(k, v);
    else if (k == "cluster_tol") c.cluster_tol = to_double(k, v);
    else if (k == "samples") c.samples = to_int(k, v);
    else if (k == "snapshot") c.snapshot = to_int(k, v) != 0;
    else if (k == "out") c.out = v;
    else if (k == "seed") c.seed = static_cast<std::uint32_t>(to_int(k, v));
    else c.params[k] = to_double(k, v);
  }

  const bool has_files = !c.a1_file.empty() || !c.a2_file.empty() || !c.b_file.empty() ||
                         !c.s0_file.empty();
  if (!c.preset.empty() && has_files)
    throw Error(ErrorCode::ConflictingSources, "give either preset= or matrix files, not both");
  if (!c.preset.empty()) {
    const auto it = preset_params().find(c.preset);
    if (it == preset_params().end())
      throw Error(ErrorCode::InvalidArgument, "unknown preset '" + c.preset + "'");
    for (const auto& [k, v] : c.params)
      if (std::find(it->second.begin(), it->second.end(), k) == it->second.end())
        throw Error(ErrorCode::UnknownKey, "key '" + k + "' is not a parameter of preset " + c.preset);
  } else if (!c.params.empty()) {
    throw Error(ErrorCode::UnknownKey,
                "key '" + c.params.begin()->first + "' needs a preset");
  }
  if (c.command != Command::PresetList) {
    if (c.preset.empty() && !has_files)
      throw Error(ErrorCode::MissingInput, "no input: give preset= or a1_file= and a2_file=");
    if (c.preset.empty() && (c.a1_file.empty() || c.a2_file.empty()))
      throw Error(ErrorCode::MissingInput, "matrix input needs both a1_file= and a2_file=");
  }
  if (c.nx < 8 || c.ny < 8) throw Error(ErrorCode::InvalidArgument, "nx and ny must be at least 8");
  if (!(c.l1 > 0.0) || !(c.l2 > 0.0)) throw Error(ErrorCode::InvalidArgument, "l1 and l2 must be positive");
  if (!(c.cfl > 0.0 && c.cfl <= 1.0)) throw Error(ErrorCode::InvalidArgument, "cfl must lie in (0, 1]");
  if (c.t_end && !(*c.t_end > 0.0)) throw Error(ErrorCode::InvalidArgument, "t_end must be positive");
  if (c.output_every < 1) throw Error(ErrorCode::InvalidArgument, "output_every must be at least 1");
  if (c.samples < 1) throw Error(ErrorCode::InvalidArgument, "samples must be at least 1");
  return c;
}

int execute(const RunConfig& c, std::ostream& out, std::ostream& err) {
  out << std::setprecision(17);
  if (c.command == Command::PresetList) {
    for (const auto& p : preset_list()) out << p.name << ": " << p.parameters << '\n';
    return 0;
  }

  const Problem problem = load_problem(c);
  const fs::path dir(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create output directory '" + c.out + "'");

  const ModeDecomposition d = simultaneous_diagonalize(problem.pair, congruence_options(c));
  auto report = precise();
  write_decomposition(report, d);

  switch (c.command) {
    case Command::Diagonalize:
      out << report.str();
      write_file(dir / "decomposition.txt", report.str());
      return 0;
    case Command::Classify:
      out << "order " << problem.pair.order() << '\n'
          << "type1 " << d.count_type1() << '\n'
          << "type2 " << d.count_type2() << '\n';
      for (std::size_t k = 0; k < d.modes.size(); ++k) {
        out << "mode " << k << ": ";
        if (const auto* t1 = std::get_if<TypeI>(&d.modes[k]))
          out << "hyperbolic lambda=" << t1->lambda() << '\n';
        else {
          const auto& m = std::get<StandardTypeII>(d.modes[k]);
          out << "elliptic mu1=" << m.mu1() << " mu2=" << m.mu2() << '\n';
        }
      }
      return 0;
    default:
      break;
  }

  const auto bcs = assemble_system_bcs(d, {});
  auto bc_text = precise();
  write_bcs(bc_text, bcs);
  if (c.command == Command::Bc) {
    out << bc_text.str();
    write_file(dir / "bcs.txt", bc_text.str());
    return 0;
  }

  const Trajectory tr = simulate(c, problem, d);
  write_file(dir / "norms.csv", norms_csv(tr.report));
  if (c.snapshot) write_snapshot(dir, tr.final_state);
  for (const auto& w : tr.warnings) err << "warning: " << w << '\n';

  if (c.command == Command::Simulate) {
    out << tr.report.summary() << '\n';
    return tr.report.verdict == EnergyReport::Verdict::Fail ? 2 : 0;
  }

  write_file(dir / "decomposition.txt", report.str());
  write_file(dir / "bcs.txt", bc_text.str());
  const auto rows = certificates(c, d, bcs, tr);
  std::string csv(CertReport::csv_header());
  csv += '\n';
  bool pass = true;
  for (const auto& r : rows) {
    csv += r.csv_row() + '\n';
    if (!r.pass) {
      pass = false;
      err << "certificate failed: " << r.name << " residual=" << r.residual << " tol=" << r.tol << '\n';
    }
  }
  write_file(dir / "cert.csv", csv);
  out << tr.report.summary() << '\n'
      << "certificates " << rows.size() << " " << (pass ? "pass" : "fail") << '\n';
  return pass ? 0 : 2;
}

int main_entry(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return execute(parse_config(args), out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace hypbc::cli
