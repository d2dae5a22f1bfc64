#include "parex/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>

#include "parex/expr.hpp"
#include "parex/parallel.hpp"

namespace parex {

double ReferenceSolution::operator()(double x) const {
  const auto& xs = mesh.nodes;
  if (x <= xs.front() || x >= xs.back()) return 0.0;
  const int e = static_cast<int>(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
  const double w = (x - xs[e]) / (xs[e + 1] - xs[e]);
  const int n = static_cast<int>(xs.size()) - 1;
  const double vl = (e == 0) ? 0.0 : values[e - 1];
  const double vr = (e + 1 == n) ? 0.0 : values[e];
  return vl + w * (vr - vl);
}

ReferenceSolution reference_solution(const ProblemSpec& problem, int base_N, int base_M, int L,
                                     int factor) {
  if (factor < 2) throw std::invalid_argument("reference_solution: factor must be >= 2");
  const int L_ref = std::min(L + 2, 5);

  struct Level {
    SpaceMesh mesh;
    std::vector<double> values;
  };
  auto solve_level = [&](int fac) -> Level {
    SpaceMesh mesh = SpaceMesh::uniform(problem.x_a, problem.x_b, base_N * fac);
    const TimeMesh tmesh = TimeMesh::uniform(problem.T, base_M * fac);
    RunOptions opts;
    opts.keep_trajectory = false;
    Trajectory traj = run(problem, mesh, tmesh, L_ref, opts);
    return Level{std::move(mesh), std::move(traj.u.back().v)};
  };

  Level coarse = solve_level(factor / 2);
  Level fine = solve_level(factor);

  const GridFunction u_coarse(coarse.mesh, coarse.values);
  const GridFunction u_fine(fine.mesh, fine.values);
  const double gap =
      sup_norm_sampled(fine.mesh, 8, [&](double x) { return u_fine(x) - u_coarse(x); });

  ReferenceSolution ref{std::move(fine.mesh), {}, gap};
  ref.values = u_fine.v;
  return ref;
}

double measure_error(const GridFunction& u_final, const std::function<double(double)>& u_ref) {
  return sup_norm_sampled(*u_final.mesh, 8,
                          [&](double x) { return u_final(x) - u_ref(x); });
}

RunResult run_single(const ProblemSpec& problem, int L, int M, int N,
                     const EllipticEstimator& estimator, int oracle_factor, bool verbose) {
  validate_problem(problem);
  const auto t_start = std::chrono::steady_clock::now();

  const SpaceMesh mesh = SpaceMesh::uniform(problem.x_a, problem.x_b, N);
  const TimeMesh tmesh = TimeMesh::uniform(problem.T, M);

  const Trajectory traj = run(problem, mesh, tmesh, L);
  const OperatorMatrices mats = assemble(problem, mesh);
  const ReconstructionSet recon = build_reconstruction(problem, traj, mats);
  const EstimatorReport report = estimate_error(problem, traj, recon, estimator);

  const ReferenceSolution oracle = reference_solution(problem, N, M, L, oracle_factor);
  const double e = measure_error(traj.u_at(M), oracle);

  RunResult res;
  res.M = M;
  res.N = N;
  res.L = L;
  res.e_M = e;
  res.p_M = std::numeric_limits<double>::quiet_NaN();
  res.eta_init = report.eta_init;
  res.eta_f = report.eta_f;
  res.eta_t = report.eta_t;
  res.eta_ell = report.eta_ell;
  res.eta_total = report.total;
  res.chi_M = report.total > 0.0 ? e / report.total : std::numeric_limits<double>::quiet_NaN();
  res.oracle_gap = oracle.gap;
  res.oracle_ok = !(oracle.gap > 0.01 * e);
  res.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

  if (verbose) {
    std::cerr << "row M=" << M << " N=" << N << " e=" << e << " eta=" << report.total
              << " gap=" << oracle.gap << " wall=" << res.wall_s << "s\n";
  }
  return res;
}

std::vector<RunResult> run_table(const ProblemSpec& problem, const RunConfig& config) {
  if (config.M_list.empty()) throw std::invalid_argument("run_table: M list is empty");
  for (std::size_t i = 1; i < config.M_list.size(); ++i) {
    if (config.M_list[i] != 2 * config.M_list[i - 1]) {
      throw std::invalid_argument("run_table: M list must be a doubling sequence");
    }
  }
  std::unique_ptr<EllipticEstimator> est;
  if (config.estimator == "default") {
    est = default_elliptic_estimator(problem);
  } else if (config.estimator == "zero") {
    est = zero_elliptic_estimator();
  } else {
    throw std::invalid_argument("run_table: unknown estimator '" + config.estimator + "'");
  }

  std::vector<RunResult> rows;
  rows.reserve(config.M_list.size());
  for (int M : config.M_list) {
    int N = config.N;
    if (config.couple_h_tau) {
      N = static_cast<int>(std::llround(M * (problem.x_b - problem.x_a) / problem.T));
    }
    if (N < 2) throw std::invalid_argument("run_table: N must be >= 2");
    RunResult row = run_single(problem, config.L, M, N, *est, config.oracle_factor,
                               config.verbose);
    if (!rows.empty()) {
      row.p_M = (std::log(rows.back().e_M) - std::log(row.e_M)) / std::log(2.0);
    }
    rows.push_back(row);
  }
  return rows;
}

namespace {

std::string fmt6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string field_or_empty(double v) { return std::isnan(v) ? std::string() : fmt6(v); }

}  // namespace

std::string format_csv(const std::vector<RunResult>& rows) {
  std::string out = "M,N,L,e_M,p_M,eta_init,eta_f,eta_t,eta_ell,eta_total,chi_M,wall_s\n";
  for (const RunResult& r : rows) {
    out += std::to_string(r.M) + ',' + std::to_string(r.N) + ',' + std::to_string(r.L) + ',';
    out += fmt6(r.e_M) + ',' + field_or_empty(r.p_M) + ',';
    out += fmt6(r.eta_init) + ',' + fmt6(r.eta_f) + ',' + fmt6(r.eta_t) + ',' + fmt6(r.eta_ell) +
           ',' + fmt6(r.eta_total) + ',';
    out += field_or_empty(r.chi_M) + ',' + fmt6(r.wall_s) + '\n';
  }
  return out;
}

std::string format_markdown(const std::vector<RunResult>& rows) {
  std::string out =
      "| M | N | L | e_M | p_M | eta_init | eta_f | eta_t | eta_ell | eta_total | chi_M | "
      "wall_s |\n";
  out += "|---|---|---|-----|-----|----------|-------|-------|---------|-----------|-------|-"
         "-------|\n";
  for (const RunResult& r : rows) {
    out += "| " + std::to_string(r.M) + " | " + std::to_string(r.N) + " | " +
           std::to_string(r.L) + " | " + fmt6(r.e_M) + " | " + field_or_empty(r.p_M) + " | " +
           fmt6(r.eta_init) + " | " + fmt6(r.eta_f) + " | " + fmt6(r.eta_t) + " | " +
           fmt6(r.eta_ell) + " | " + fmt6(r.eta_total) + " | " + field_or_empty(r.chi_M) +
           " | " + fmt6(r.wall_s) + " |\n";
  }
  return out;
}

ProblemSpec problem_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("problem file not found: " + path);

  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t comment = line.find_first_of("#;");
    if (comment != std::string::npos) line.erase(comment);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) {
        throw std::invalid_argument("problem file line " + std::to_string(lineno) +
                                    ": expected key = value");
      }
      continue;
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw std::invalid_argument("problem file line " + std::to_string(lineno) +
                                  ": empty key or value");
    }
    if (!kv.emplace(key, value).second) {
      throw std::invalid_argument("problem file: duplicate key '" + key + "'");
    }
  }

  const char* known[] = {"x_a", "x_b", "T",      "d",      "r",           "f",
                         "u0",  "kappa0", "kappa1", "kappa1_prime", "gamma"};
  for (const auto& [key, value] : kv) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw std::invalid_argument("problem file: unknown key '" + key + "'");
  }
  auto require = [&](const std::string& key) -> const std::string& {
    auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument("problem file: missing key '" + key + "'");
    return it->second;
  };
  auto constant = [&](const std::string& key, double fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    return Expression::parse(it->second)(0.0, 0.0);
  };

  ProblemSpec p;
  p.x_a = Expression::parse(require("x_a"))(0.0, 0.0);
  p.x_b = Expression::parse(require("x_b"))(0.0, 0.0);
  p.T = Expression::parse(require("T"))(0.0, 0.0);
  const Expression d = Expression::parse(require("d"));
  const Expression r = Expression::parse(require("r"));
  const Expression f = Expression::parse(require("f"));
  const Expression u0 = Expression::parse(require("u0"));
  p.d = [d](double x) { return d(x, 0.0); };
  p.r = [r](double x) { return r(x, 0.0); };
  p.f = [f](double x, double t) { return f(x, t); };
  p.u0 = [u0](double x) { return u0(x, 0.0); };
  p.green.kappa0 = constant("kappa0", 1.0);
  p.green.kappa1 = constant("kappa1", 0.0);
  p.green.kappa1_prime = constant("kappa1_prime", 0.0);
  p.green.gamma = constant("gamma", 0.0);
  validate_problem(p);
  return p;
}

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"1D parabolic P1-FEM solver with extrapolated backward Euler time stepping "
               "and a maximum-norm a posteriori error estimator"};
  app.set_config("--config", "", "INI file with long-option defaults (flags override)");

  std::string problem_arg = "builtin";
  int L = 2;
  std::string M_arg = "32,64";
  std::string N_arg = "auto";
  std::string couple = "h=tau";
  std::string estimator_arg = "default";
  std::string out_path = "-";
  std::string format = "csv";
  int oracle_factor = 16;
  int seed = 0;
  bool verbose = false;
  bool serial = false;

  app.add_option("--problem", problem_arg, "builtin | manufactured | file=<path>");
  app.add_option("--L", L, "extrapolation order (>= 2)");
  app.add_option("--M", M_arg, "comma-separated doubling list of time-interval counts");
  app.add_option("--N", N_arg, "space elements: integer, or 'auto' with --couple h=tau");
  app.add_option("--couple", couple, "h=tau | fixed")
      ->check(CLI::IsMember({"h=tau", "fixed"}));
  app.add_option("--estimator", estimator_arg, "default | zero")
      ->check(CLI::IsMember({"default", "zero"}));
  app.add_option("--out", out_path, "output path, '-' for stdout");
  app.add_option("--format", format, "csv | md")->check(CLI::IsMember({"csv", "md"}));
  app.add_option("--oracle-factor", oracle_factor, "mesh refinement factor of the reference");
  app.add_option("--seed", seed, "reserved, unused");
  app.add_flag("--verbose", verbose, "progress to stderr");
  app.add_flag("--serial", serial, "disable the OpenMP kernels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (L < 2) {
    std::cerr << "L must be >= 2\n";
    return 2;
  }
  if (oracle_factor < 2) {
    std::cerr << "--oracle-factor must be >= 2\n";
    return 2;
  }
  if (serial) par::set_enabled(false);

  RunConfig config;
  config.L = L;
  config.estimator = estimator_arg;
  config.oracle_factor = oracle_factor;
  config.verbose = verbose;

  std::stringstream ms(M_arg);
  std::string tok;
  while (std::getline(ms, tok, ',')) {
    try {
      config.M_list.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      std::cerr << "bad --M entry: '" << tok << "'\n";
      return 2;
    }
  }
  if (config.M_list.empty() || config.M_list.front() < 1) {
    std::cerr << "--M must list positive interval counts\n";
    return 2;
  }
  for (std::size_t i = 1; i < config.M_list.size(); ++i) {
    if (config.M_list[i] != 2 * config.M_list[i - 1]) {
      std::cerr << "--M must be a doubling sequence\n";
      return 2;
    }
  }

  config.couple_h_tau = (couple == "h=tau");
  if (!config.couple_h_tau || N_arg != "auto") {
    if (N_arg == "auto") {
      std::cerr << "--couple fixed requires an integer --N\n";
      return 2;
    }
    try {
      config.N = std::stoi(N_arg);
    } catch (const std::exception&) {
      std::cerr << "bad --N: '" << N_arg << "'\n";
      return 2;
    }
    if (config.couple_h_tau) {
      std::cerr << "note: --N ignored with --couple h=tau\n";
    } else if (config.N < 2) {
      std::cerr << "--N must be >= 2\n";
      return 2;
    }
  }

  ProblemSpec problem;
  try {
    if (problem_arg == "builtin") {
      problem = builtin_test_problem();
    } else if (problem_arg == "manufactured") {
      problem = manufactured_problem().spec;
    } else if (problem_arg.rfind("file=", 0) == 0) {
      problem = problem_from_file(problem_arg.substr(5));
    } else {
      std::cerr << "unknown --problem: '" << problem_arg << "'\n";
      return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "problem setup failed: " << e.what() << "\n";
    return 2;
  }

  std::vector<RunResult> rows;
  try {
    rows = run_table(problem, config);
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 1;
  }

  const std::string text = (format == "md") ? format_markdown(rows) : format_csv(rows);
  if (out_path == "-") {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "cannot open output file: " << out_path << "\n";
      return 1;
    }
    out << text;
  }

  for (const RunResult& r : rows) {
    if (!r.oracle_ok) {
      std::cerr << "oracle-not-converged: row M=" << r.M << " gap=" << r.oracle_gap
                << " exceeds 1% of e_M=" << r.e_M << "\n";
      return 1;
    }
  }
  return 0;
}

}  // namespace parex
