// Copyright 2026 The Minimax Forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "minimax/error.h"
#include "minimax/ftpl.h"
#include "minimax/gsm.h"
#include "minimax/regression.h"
#include "minimax/risk_eval.h"

namespace minimax::cli {
namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

// Shortest round-trip decimal, independent of the C locale.
std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

json to_json(const RunConfig& c) {
  return json{{"problem", c.problem},
              {"d", c.d},
              {"n", c.n},
              {"k", c.k},
              {"radius_spec", c.radius_spec},
              {"radius", c.radius},
              {"iters", c.iters},
              {"eta", c.eta},
              {"grid_width", c.grid_width},
              {"n1", c.n1},
              {"n2", c.n2},
              {"eval_grid_width", c.eval_grid_width},
              {"eval_mc", c.eval_mc},
              {"seed", c.seed},
              {"fast_fb", c.fast_fb}};
}

RunConfig from_json(const json& j) {
  RunConfig c;
  c.problem = j.at("problem").get<std::string>();
  c.d = j.at("d").get<int>();
  c.n = j.at("n").get<int>();
  c.k = j.at("k").get<int>();
  c.radius_spec = j.at("radius_spec").get<std::string>();
  c.iters = j.at("iters").get<int>();
  c.eta = j.at("eta").get<double>();
  c.grid_width = j.at("grid_width").get<double>();
  c.n1 = j.at("n1").get<int>();
  c.n2 = j.at("n2").get<int>();
  c.eval_grid_width = j.at("eval_grid_width").get<double>();
  c.eval_mc = j.at("eval_mc").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.fast_fb = j.at("fast_fb").get<bool>();
  return c;
}

std::unique_ptr<ReducedGame> make_game(const RunConfig& c) {
  if (c.problem == "regression") {
    return std::make_unique<RegressionGame>(
        RegressionProblem{c.n, c.d, c.radius},
        c.fast_fb ? special::DensityMethod::kSaddlepoint
                  : special::DensityMethod::kImhof);
  }
  const int k = c.problem == "gsm-k" ? c.k : c.d;
  return std::make_unique<GsmGame>(GsmProblem{c.d, k, c.radius});
}

EvalConfig eval_config(const RunConfig& c) {
  return {c.eval_grid_width, c.eval_mc, c.seed, c.threads};
}

json point_json(const ReducedPoint& b, int dim) {
  if (dim == 1) return b[0];
  return json::array({b[0], b[1]});
}

std::string point_csv(const ReducedPoint& b, int dim) {
  return dim == 1 ? num(b[0]) : num(b[0]) + "," + num(b[1]);
}

json scan_json(const ScanResult& s, int dim) {
  return json{{"risk", s.worst_risk()},
              {"stderr", s.worst_stderr()},
              {"argmax", point_json(s.worst_point(), dim)}};
}

std::ofstream open_out(const std::string& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream out(fs::path(dir) / name);
  if (!out) throw ConfigError("cannot write " + (fs::path(dir) / name).string());
  out.imbue(std::locale::classic());
  return out;
}

void write_scan_csv(const std::string& dir, const json& config,
                    const ScanResult& scan, int dim) {
  auto out = open_out(dir, "eval.csv");
  out << "# " << config.dump() << "\n";
  out << (dim == 1 ? "b" : "b1,b2") << ",risk,stderr\n";
  for (const auto& p : scan.points) {
    out << point_csv(p.b, dim) << "," << num(p.risk) << "," << num(p.stderr)
        << "\n";
  }
}

// Rebuilds the iterate priors stored in a report as prior rows.
PriorRows rows_from_report(const json& report, int dim) {
  PriorRows rows;
  std::map<ReducedPoint, std::uint32_t> index;
  for (const auto& it : report.at("iterates")) {
    auto& row = rows.rows.emplace_back();
    double total = 0.0;
    for (const auto& entry : it) total += entry.at(1).get<double>();
    for (const auto& entry : it) {
      ReducedPoint b{0.0, 0.0};
      if (dim == 1) {
        b[0] = entry.at(0).get<double>();
      } else {
        b = {entry.at(0).at(0).get<double>(), entry.at(0).at(1).get<double>()};
      }
      auto [pos, inserted] =
          index.emplace(b, static_cast<std::uint32_t>(rows.support.size()));
      if (inserted) rows.support.push_back(b);
      row.emplace_back(pos->second, entry.at(1).get<double>() / total);
    }
  }
  if (rows.rows.empty()) throw ConfigError("report has no iterates");
  return rows;
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("malformed report " + path + ": " + e.what());
  }
}

void add_problem_options(CLI::App& app, RunConfig& c) {
  app.add_option("--dim,-d", c.d, "Dimension d");
  app.add_option("--n", c.n, "Regression sample size (default 2d)");
  app.add_option("--k", c.k, "Loss coordinates for gsm-k");
  app.add_option("--radius,-B", c.radius_spec,
                 "Radius: number, sqrt_d or <c>_sqrt_d");
  app.add_option("--eval-grid-width", c.eval_grid_width,
                 "Evaluation grid width (default 0.05 B)");
  app.add_option("--eval-mc", c.eval_mc, "Monte Carlo draws per point");
  app.add_option("--seed", c.seed, "Random seed");
  app.add_flag("--fast", c.fast_fb, "Saddlepoint Fisher-Bingham constants");
  app.add_option("--threads", c.threads, "Worker threads (0: all cores)");
  app.add_option("--out,-o", c.out_dir, "Output directory");
}

}  // namespace

double parse_radius(const std::string& spec, int d) {
  const std::string suffix = "sqrt_d";
  double factor = 1.0;
  std::string head = spec;
  bool scaled = false;
  if (spec.size() >= suffix.size() &&
      spec.compare(spec.size() - suffix.size(), suffix.size(), suffix) == 0) {
    scaled = true;
    head = spec.substr(0, spec.size() - suffix.size());
    if (!head.empty()) {
      if (head.back() != '_') throw ConfigError("bad radius: " + spec);
      head.pop_back();
    }
  }
  if (!head.empty()) {
    const auto res =
        std::from_chars(head.data(), head.data() + head.size(), factor);
    if (res.ec != std::errc() || res.ptr != head.data() + head.size()) {
      throw ConfigError("bad radius: " + spec);
    }
  }
  const double r = scaled ? factor * std::sqrt(static_cast<double>(d)) : factor;
  if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("bad radius: " + spec);
  return r;
}

void resolve(RunConfig& c) {
  if (c.problem != "gsm" && c.problem != "gsm-k" && c.problem != "regression") {
    throw ConfigError("unknown problem: " + c.problem);
  }
  if (c.d < 1) throw ConfigError("--dim must be >= 1");
  if (c.problem == "gsm") c.k = c.d;
  if (c.problem == "gsm-k" && (c.k < 1 || c.k >= c.d)) {
    throw ConfigError("gsm-k needs 1 <= k < d");
  }
  if (c.problem == "regression") {
    if (c.n == 0) c.n = 2 * c.d;
    if (c.d < 2 || c.n < c.d) throw ConfigError("regression needs d >= 2, n >= d");
  }
  c.radius = parse_radius(c.radius_spec, c.d);
  if (c.iters < 1 || c.n1 < 1 || c.n2 < 1 || c.eval_mc < 1) {
    throw ConfigError("iteration and sample counts must be >= 1");
  }
  if (c.eta < 0.0 || c.grid_width < 0.0 || c.eval_grid_width < 0.0) {
    throw ConfigError("eta and grid widths must be >= 0");
  }
  if (c.grid_width > c.radius || c.eval_grid_width > c.radius) {
    throw ConfigError("grid widths must not exceed the radius");
  }
}

int cmd_solve(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const auto game = make_game(cfg);
  GameConfig gc;
  gc.iters = cfg.iters;
  gc.eta = cfg.eta;
  gc.grid_width = cfg.grid_width;
  gc.n_risk = cfg.n1;
  gc.n_prior = cfg.n2;
  gc.seed = cfg.seed;
  gc.threads = cfg.threads;
  const FtplSolution sol = solve(*game, gc);
  const Certificate cert = certify(*game, sol, eval_config(cfg));
  const double wall = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  const int dim = game->dim_reduced();
  const json config = to_json(cfg);

  json iterates = json::array();
  for (const auto& p : sol.log.priors) {
    json row = json::array();
    for (std::size_t i = 0; i < p.index.size(); ++i) {
      row.push_back(json::array({point_json(sol.grid[p.index[i]], dim), p.count[i]}));
    }
    iterates.push_back(std::move(row));
  }
  json avg = json::array();
  for (std::size_t j = 0; j < sol.grid.size(); ++j) {
    if (sol.average_prior[j] > 0.0) {
      avg.push_back(json::array({point_json(sol.grid[j], dim), sol.average_prior[j]}));
    }
  }
  json lfp = json::array();
  for (std::size_t i = 0; i < cert.lfp.point.size(); ++i) {
    lfp.push_back(json::array({point_json(cert.lfp.point[i], dim), cert.lfp.mass[i]}));
  }
  json report{
      {"config", config},
      {"seed", cfg.seed},
      {"resolved", {{"eta", sol.config.eta},
                    {"grid_width", sol.config.grid_width},
                    {"grid_size", sol.grid.size()},
                    {"eval_grid_width", cfg.eval_grid_width > 0.0
                                            ? cfg.eval_grid_width
                                            : 0.05 * cfg.radius}}},
      {"iterates", iterates},
      {"average_prior", avg},
      {"worst_case_risk", scan_json(cert.averaged, dim)},
      {"bayes_risk_avg_prior",
       {{"risk", cert.bayes_avg_prior.risk},
        {"stderr", cert.bayes_avg_prior.stderr}}},
      {"duality_gap", cert.duality_gap},
      {"duality_gap_stderr", cert.gap_stderr},
      {"weak_duality_holds", cert.weak_duality_holds()},
      {"bayes_responder_worst_case", scan_json(cert.bayes_responder, dim)},
      {"lfp", {{"radial_mass", lfp},
               {"density", "proportional to |theta|^(1-d) * radial_mass(|theta|)"}}},
      {"wall_time_s", wall}};

  auto rep = open_out(cfg.out_dir, "report.json");
  rep << report.dump(2) << "\n";
  auto prior = open_out(cfg.out_dir, "prior.csv");
  prior << "# " << config.dump() << "\n";
  prior << (dim == 1 ? "radius" : "b1,b2") << ",mass\n";
  for (std::size_t i = 0; i < cert.lfp.point.size(); ++i) {
    prior << point_csv(cert.lfp.point[i], dim) << "," << num(cert.lfp.mass[i])
          << "\n";
  }
  auto its = open_out(cfg.out_dir, "iterates.jsonl");
  its << json{{"config", config}}.dump() << "\n";
  for (std::size_t t = 0; t < iterates.size(); ++t) {
    its << json{{"t", t}, {"prior", iterates[t]}}.dump() << "\n";
  }

  std::cout << "worst_case_risk " << num(cert.averaged.worst_risk())
            << " stderr " << num(cert.averaged.worst_stderr()) << "\n"
            << "bayes_risk_avg_prior " << num(cert.bayes_avg_prior.risk)
            << " stderr " << num(cert.bayes_avg_prior.stderr) << "\n"
            << "duality_gap " << num(cert.duality_gap) << "\n";
  if (!cert.weak_duality_holds()) {
    std::cerr << "warning: Bayes risk exceeds worst-case risk by more than "
                 "2 standard errors\n";
  }
  return 0;
}

int cmd_eval_baseline(const RunConfig& cfg, const std::string& baseline,
                      double lambda) {
  const auto game = make_game(cfg);
  const int dim = game->dim_reduced();
  const EvalConfig ec = eval_config(cfg);
  json config = to_json(cfg);
  config["baseline"] = baseline;
  ScanResult scan;
  std::string name = baseline;
  std::replace(name.begin(), name.end(), '_', '-');
  if (cfg.problem == "regression") {
    const auto& rg = static_cast<const RegressionGame&>(*game);
    if (name == "ols") {
      scan = worst_case_scan(rg, *ols_estimator(rg.problem()), ec);
    } else if (name == "ridge") {
      scan = worst_case_scan(rg, *ridge_estimator(rg.problem(), lambda), ec);
      config["lambda"] = lambda;
    } else if (name == "ridge-best") {
      const RidgeChoice choice = best_ridge(rg, ec);
      scan = choice.scan;
      config["lambda"] = choice.lambda();
      config["lambda_grid"] = choice.lambdas;
    } else {
      throw ConfigError("unknown regression baseline: " + baseline);
    }
  } else {
    const auto& gg = static_cast<const GsmGame&>(*game);
    const auto est = gsm_baseline(gsm_baseline_from_name(name), gg.problem());
    scan = worst_case_scan(gg, *est, ec);
  }
  write_scan_csv(cfg.out_dir, config, scan, dim);
  std::cout << "worst_case_risk " << num(scan.worst_risk()) << " stderr "
            << num(scan.worst_stderr()) << " at "
            << point_csv(scan.worst_point(), dim);
  if (config.contains("lambda")) {
    std::cout << " lambda " << num(config["lambda"].get<double>());
  }
  std::cout << "\n";
  return 0;
}

int cmd_eval_report(const std::string& report_path, const RunConfig& overrides,
                    bool have_eval_overrides) {
  const json report = read_json(report_path);
  RunConfig cfg = from_json(report.at("config"));
  resolve(cfg);
  cfg.threads = overrides.threads;
  cfg.out_dir = overrides.out_dir;
  if (have_eval_overrides) {
    cfg.eval_mc = overrides.eval_mc;
    cfg.eval_grid_width = overrides.eval_grid_width;
    cfg.seed = overrides.seed;
  }
  const auto game = make_game(cfg);
  const int dim = game->dim_reduced();
  const auto est = game->respond(rows_from_report(report, dim));
  const ScanResult scan = worst_case_scan(*game, *est, eval_config(cfg));
  json config = to_json(cfg);
  config["report"] = report_path;
  write_scan_csv(cfg.out_dir, config, scan, dim);
  const double stored = report.at("worst_case_risk").at("risk").get<double>();
  const double stored_se =
      report.at("worst_case_risk").at("stderr").get<double>();
  const double se = std::hypot(stored_se, scan.worst_stderr());
  std::cout << "worst_case_risk " << num(scan.worst_risk()) << " stderr "
            << num(scan.worst_stderr()) << " at "
            << point_csv(scan.worst_point(), dim) << " stored " << num(stored)
            << " z " << num(se > 0.0 ? (scan.worst_risk() - stored) / se : 0.0)
            << "\n";
  return 0;
}

int cmd_contour(const std::string& report_path, const ContourGrid& grid,
                const std::string& out_dir) {
  const json report = read_json(report_path);
  RunConfig cfg = from_json(report.at("config"));
  resolve(cfg);
  if (cfg.problem != "gsm-k" || cfg.k != 1) {
    throw ConfigError("contour needs a gsm-k report with k = 1");
  }
  if (grid.x1_steps < 1 || grid.rest_steps < 1) {
    throw ConfigError("contour grid needs at least one point per axis");
  }
  const GsmProblem problem{cfg.d, cfg.k, cfg.radius};
  const auto est = gsm_min_oracle(problem, rows_from_report(report, 2));
  const double x1_max = grid.x1_max > 0.0 ? grid.x1_max : 2.0 * cfg.radius;
  const double rest_max =
      grid.rest_max > 0.0 ? grid.rest_max
                          : 2.0 * (cfg.radius + std::sqrt(static_cast<double>(cfg.d)));
  const auto axis = [](double hi, int steps, int i) {
    return steps == 1 ? 0.0 : hi * i / (steps - 1);
  };

  auto out = open_out(out_dir, "contour.csv");
  json config = to_json(cfg);
  config["report"] = report_path;
  out << "# " << config.dump() << "\n";
  out << "x1,rest_norm,theta1\n";
  std::vector<double> x(cfg.d, 0.0);
  std::vector<double> theta(cfg.d, 0.0);
  bool monotone = true;
  for (int i = 0; i < grid.x1_steps; ++i) {
    double previous = INFINITY;
    for (int j = 0; j < grid.rest_steps; ++j) {
      std::fill(x.begin(), x.end(), 0.0);
      x[0] = axis(x1_max, grid.x1_steps, i);
      if (cfg.d > 1) x[1] = axis(rest_max, grid.rest_steps, j);
      est->predict(x, theta);
      out << num(x[0]) << "," << num(x[1 % cfg.d]) << "," << num(theta[0])
          << "\n";
      if (i == grid.x1_steps - 1) {
        if (std::abs(theta[0]) > previous + 1e-12) monotone = false;
        previous = std::abs(theta[0]);
      }
    }
  }
  if (!monotone) {
    std::cerr << "warning: |theta(1)| is not nonincreasing in |X(2:d)| at "
                 "X(1) = "
              << num(x1_max) << "\n";
  }
  return 0;
}

int run(int argc, char** argv) {
  CLI::App app{"Minimax estimators and least favorable priors"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* solve_cmd = app.add_subcommand("solve", "Solve a minimax game");
  solve_cmd->add_option("problem", cfg.problem, "gsm, gsm-k or regression")
      ->required();
  add_problem_options(*solve_cmd, cfg);
  solve_cmd->add_option("--iters,-T", cfg.iters, "FTPL iterations");
  solve_cmd->add_option("--eta", cfg.eta, "Perturbation rate (default: theory)");
  solve_cmd->add_option("--grid-width", cfg.grid_width, "Grid width (default 0.05 B)");
  solve_cmd->add_option("--n1", cfg.n1, "Monte Carlo draws per risk estimate");
  solve_cmd->add_option("--n2", cfg.n2, "Perturbation samples per prior");

  auto* eval_cmd = app.add_subcommand("eval", "Worst-case risk of an estimator");
  std::string baseline;
  std::string report;
  double lambda = 1.0;
  auto* base_opt = eval_cmd->add_option("--baseline", baseline, "Baseline estimator");
  auto* rep_opt = eval_cmd->add_option("--report", report, "Solve report to re-evaluate");
  base_opt->excludes(rep_opt);
  eval_cmd->add_option("--problem", cfg.problem, "gsm, gsm-k or regression");
  eval_cmd->add_option("--lambda", lambda, "Ridge penalty for --baseline ridge");
  add_problem_options(*eval_cmd, cfg);

  auto* contour_cmd = app.add_subcommand("contour", "Estimator contour data");
  ContourGrid grid;
  std::string contour_report;
  contour_cmd->add_option("--report", contour_report, "gsm-k solve report")->required();
  contour_cmd->add_option("--x1-max", grid.x1_max, "Largest X(1)");
  contour_cmd->add_option("--x1-steps", grid.x1_steps, "Points along X(1)");
  contour_cmd->add_option("--rest-max", grid.rest_max, "Largest |X(2:d)|");
  contour_cmd->add_option("--rest-steps", grid.rest_steps, "Points along |X(2:d)|");
  contour_cmd->add_option("--out,-o", cfg.out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (solve_cmd->parsed()) {
      resolve(cfg);
      return cmd_solve(cfg);
    }
    if (eval_cmd->parsed()) {
      if (!report.empty()) {
        const bool overrides = eval_cmd->count("--eval-mc") > 0 ||
                               eval_cmd->count("--eval-grid-width") > 0 ||
                               eval_cmd->count("--seed") > 0;
        return cmd_eval_report(report, cfg, overrides);
      }
      if (baseline.empty()) throw ConfigError("eval needs --baseline or --report");
      resolve(cfg);
      return cmd_eval_baseline(cfg, baseline, lambda);
    }
    return cmd_contour(contour_report, grid, cfg.out_dir);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}

int run(const std::vector<std::string>& args) {
  std::vector<std::string> storage = args;
  storage.insert(storage.begin(), "minimax-forge");
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace minimax::cli
