#pragma once

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include "bhc/checks.hpp"
#include "bhc/continuation.hpp"
#include "bhc/dataio.hpp"
#include "bhc/errors.hpp"
#include "bhc/init.hpp"
#include "bhc/postprocess.hpp"

namespace bhc::cli {

// Exit codes: 0 ok, 1 check-suite failure, 2 config/usage, 3 data parse,
// 4 numerical failure, 5 I/O.
enum ExitCode { kOk = 0, kCheckFailed = 1, kConfig = 2, kParse = 3, kNumeric = 4, kIo = 5 };

struct RunConfig {
  std::string subcommand;
  std::string config_path;
  std::string input;
  std::string output;
  std::string model_text = "I";
  std::size_t k = 3;
  double lambda0 = 1e-6;
  double mu0 = 100.0;
  double sigma1 = 1.0;
  double sigma2 = 0.5;
  double lambda_max = -1.0;  // set -> derive sigma1
  double mu_min = -1.0;      // set -> derive sigma2
  std::size_t n_outer = 27;
  std::size_t n_inner = 20;
  double tol = 1e-6;
  std::uint64_t seed = 1;
  std::size_t starts = 1;
  double gamma = -1.0;  // < 0: drawn uniformly per start
  double r0 = 0.1;
  std::size_t n_probes = 10;
  std::size_t threads = 0;
  std::size_t repeats = 3;
  std::size_t samples = 100;
  std::string inject_bug;
  std::string centers_text;
  long long total_center = -1;
  bool sigma1_given = false, sigma2_given = false;
  bool lambda_max_given = false, mu_min_given = false;
};

inline Model parse_model(const std::string& text) {
  if (text == "I" || text == "1" || text == "i") return Model::one;
  if (text == "II" || text == "2" || text == "ii") return Model::two;
  throw DomainError("model must be I or II");
}

// Flat key=value config file ('#' comments). Command-line flags win over
// file values; `given` carries the option names seen on the command line.
inline void apply_config_file(RunConfig& cfg, const std::set<std::string>& given) {
  std::ifstream in(cfg.config_path);
  if (!in) throw DomainError("cannot open config file '" + cfg.config_path + "'");

  auto as_double = [](const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size() || v.empty())
      throw DomainError("config: bad number for '" + key + "'");
    return x;
  };
  auto as_count = [&](const std::string& key, const std::string& v) {
    const double x = as_double(key, v);
    if (x < 0 || x != std::floor(x)) throw DomainError("config: bad count for '" + key + "'");
    return static_cast<std::size_t>(x);
  };

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw DomainError("config: expected key=value at line " + std::to_string(lineno));
    std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    for (char& c : key)
      if (c == '_') c = '-';
    if (given.count(key)) continue;

    if (key == "input") cfg.input = value;
    else if (key == "output") cfg.output = value;
    else if (key == "model") cfg.model_text = value;
    else if (key == "k") cfg.k = as_count(key, value);
    else if (key == "lambda0") cfg.lambda0 = as_double(key, value);
    else if (key == "mu0") cfg.mu0 = as_double(key, value);
    else if (key == "sigma1") { cfg.sigma1 = as_double(key, value); cfg.sigma1_given = true; }
    else if (key == "sigma2") { cfg.sigma2 = as_double(key, value); cfg.sigma2_given = true; }
    else if (key == "lambda-max") { cfg.lambda_max = as_double(key, value); cfg.lambda_max_given = true; }
    else if (key == "mu-min") { cfg.mu_min = as_double(key, value); cfg.mu_min_given = true; }
    else if (key == "n-outer") cfg.n_outer = as_count(key, value);
    else if (key == "n-inner") cfg.n_inner = as_count(key, value);
    else if (key == "tol") cfg.tol = as_double(key, value);
    else if (key == "seed") cfg.seed = as_count(key, value);
    else if (key == "starts") cfg.starts = as_count(key, value);
    else if (key == "gamma") cfg.gamma = as_double(key, value);
    else if (key == "r0") cfg.r0 = as_double(key, value);
    else if (key == "n-probes") cfg.n_probes = as_count(key, value);
    else if (key == "threads") cfg.threads = as_count(key, value);
    else if (key == "repeats") cfg.repeats = as_count(key, value);
    else throw DomainError("config: unknown key '" + key + "'");
  }
}

inline ContinuationSchedule build_schedule(const RunConfig& cfg) {
  if (cfg.sigma1_given && cfg.lambda_max_given)
    throw DomainError("give either --sigma1 or --lambda-max, not both");
  if (cfg.sigma2_given && cfg.mu_min_given)
    throw DomainError("give either --sigma2 or --mu-min, not both");
  double sigma1 = cfg.sigma1;
  double sigma2 = cfg.sigma2;
  if (cfg.lambda_max_given)
    sigma1 = derive_sigmas(cfg.lambda0, cfg.lambda_max, 1.0, 1.0, cfg.n_outer).first;
  if (cfg.mu_min_given)
    sigma2 = derive_sigmas(cfg.lambda0, cfg.lambda0, cfg.mu0, cfg.mu_min, cfg.n_outer).second;
  return ContinuationSchedule::from_sigmas(cfg.lambda0, sigma1, cfg.mu0, sigma2, cfg.n_outer,
                                           cfg.n_inner);
}

inline void print_summary(const SolveReport& r, double elapsed_s) {
  std::printf("model %s  k=%zu  m=%zu  n=%zu\n", model_name(r.model).c_str(), r.k, r.m, r.n);
  std::printf("snapped cost: %.10g\n", r.snapped_cost);
  std::printf("cluster centers (0-based):");
  for (std::size_t c : r.snapped.cluster_centers) std::printf(" %zu", c);
  std::printf("\ntotal center: %zu\n", r.snapped.total_center);
  std::printf("total inner iterations: %zu\n", r.total_inner_iterations);
  std::printf("wall time: %.3f s\n", elapsed_s);
}

inline int cmd_solve(const RunConfig& cfg) {
  const Matrix data = read_points_file(cfg.input);
  const ProblemFamily family(data, cfg.k, parse_model(cfg.model_text));
  const ContinuationSchedule schedule = build_schedule(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  const MultiStartResult res = multi_start(family, schedule, cfg.starts, cfg.seed,
                                           {.tol = cfg.tol}, cfg.threads, cfg.gamma);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  print_summary(res.best, elapsed);
  if (!cfg.output.empty()) {
    emit_report(res.best, cfg.output);
    std::printf("report: %s\n", cfg.output.c_str());
  }
  return kOk;
}

inline int cmd_radial_search(const RunConfig& cfg) {
  const Matrix data = read_points_file(cfg.input);
  const ProblemFamily family(data, cfg.k, parse_model(cfg.model_text));
  const ContinuationSchedule schedule = build_schedule(cfg);
  const StartSpec spec{.gamma = cfg.gamma, .r0 = cfg.r0, .n_probes = cfg.n_probes,
                       .seed = cfg.seed};
  const auto t0 = std::chrono::steady_clock::now();
  const RadialSearchResult res =
      radial_search(family, schedule, spec, {.tol = cfg.tol}, cfg.threads);
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("radial profile (radius  cost):\n");
  for (const auto& [radius, cost] : res.profile) std::printf("  %-8g %.10g\n", radius, cost);
  print_summary(res.best, elapsed);
  if (!cfg.output.empty()) {
    emit_report(res.best, cfg.output);
    std::printf("report: %s\n", cfg.output.c_str());
  }
  return kOk;
}

inline int cmd_eval_cost(const RunConfig& cfg) {
  const Matrix data = read_points_file(cfg.input);
  std::vector<std::size_t> centers;
  std::string tok;
  std::istringstream iss(cfg.centers_text);
  while (std::getline(iss, tok, ',')) {
    if (tok.empty()) continue;
    char* end = nullptr;
    const long long v = std::strtoll(tok.c_str(), &end, 10);
    if (end != tok.c_str() + tok.size() || v < 0 ||
        static_cast<std::size_t>(v) >= data.rows())
      throw DomainError("--centers: bad node index '" + tok + "'");
    centers.push_back(static_cast<std::size_t>(v));
  }
  if (centers.empty()) throw DomainError("--centers requires a comma-separated index list");
  std::size_t total;
  if (cfg.total_center >= 0) {
    if (static_cast<std::size_t>(cfg.total_center) >= data.rows())
      throw DomainError("--total: node index out of range");
    total = static_cast<std::size_t>(cfg.total_center);
  } else {
    total = pick_total_center(centers, data);
    std::printf("total center (chosen): %zu\n", total);
  }
  std::printf("cost: %.10g\n", tree_cost(centers, total, data));
  return kOk;
}

inline int cmd_bench(const RunConfig& cfg) {
  const Matrix data = read_points_file(cfg.input);
  const ContinuationSchedule schedule = build_schedule(cfg);
  std::string name = cfg.input;
  if (const auto slash = name.find_last_of('/'); slash != std::string::npos)
    name = name.substr(slash + 1);
  if (const auto dot = name.find_last_of('.'); dot != std::string::npos) name = name.substr(0, dot);

  std::string table =
      "name\tCost1\tCost2\tTime1\tTime2\tIter1\tIter2\tk\tm\tn\n";
  for (std::size_t rep = 0; rep < cfg.repeats; ++rep) {
    const std::uint64_t seed = cfg.seed + rep;
    double cost[2], time[2];
    std::size_t iter[2];
    for (int model = 0; model < 2; ++model) {
      const ProblemFamily family(data, cfg.k, model == 0 ? Model::one : Model::two);
      const auto t0 = std::chrono::steady_clock::now();
      const MultiStartResult res =
          multi_start(family, schedule, cfg.starts, seed, {.tol = cfg.tol}, cfg.threads,
                      cfg.gamma);
      time[model] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      cost[model] = res.best.snapped_cost;
      iter[model] = res.best.total_inner_iterations;
    }
    char row[256];
    std::snprintf(row, sizeof row, "%s\t%.6g\t%.6g\t%.4g\t%.4g\t%zu\t%zu\t%zu\t%zu\t%zu\n",
                  name.c_str(), cost[0], cost[1], time[0], time[1], iter[0], iter[1], cfg.k,
                  data.rows(), data.cols());
    table += row;
  }
  std::fputs(table.c_str(), stdout);
  if (!cfg.output.empty()) {
    std::ofstream out(cfg.output, std::ios::binary);
    if (!out) throw IoError("cannot write '" + cfg.output + "'");
    out << table;
  }
  return kOk;
}

inline int cmd_check(const RunConfig& cfg) {
  checks::CheckOptions opt;
  opt.seed = cfg.seed;
  opt.samples = cfg.samples;
  if (cfg.inject_bug == "model1-grad-h1") opt.mutation = checks::Mutation::model1_grad_h1;
  else if (cfg.inject_bug == "model2-conjugate") opt.mutation = checks::Mutation::model2_conjugate;
  else if (!cfg.inject_bug.empty()) throw DomainError("unknown --inject-bug value");
  const auto results = checks::run_all(opt);
  for (const auto& r : results) {
    std::printf("[%s] %-28s samples=%zu worst=%.3g%s%s\n", r.passed ? "pass" : "FAIL",
                r.name.c_str(), r.samples, r.worst, r.detail.empty() ? "" : "  ",
                r.detail.c_str());
  }
  return checks::all_passed(results) ? kOk : kCheckFailed;
}

inline int dispatch(const RunConfig& cfg) {
  try {
    if (cfg.subcommand == "solve") return cmd_solve(cfg);
    if (cfg.subcommand == "radial-search") return cmd_radial_search(cfg);
    if (cfg.subcommand == "eval-cost") return cmd_eval_cost(cfg);
    if (cfg.subcommand == "bench") return cmd_bench(cfg);
    if (cfg.subcommand == "check") return cmd_check(cfg);
    std::fprintf(stderr, "error: no subcommand given (see --help)\n");
    return kConfig;
  } catch (const ParseError& e) {
    std::fprintf(stderr, "error: %s: %s\n", cfg.input.c_str(), e.what());
    return kParse;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kIo;
  } catch (const NumericalFailure& e) {
    std::fprintf(stderr, "error: numerical failure: %s\n", e.what());
    return kNumeric;
  } catch (const DomainError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfig;
  } catch (const DimensionError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

// Adds the options shared by the solver-style subcommands.
inline void add_solver_options(CLI::App* sub, RunConfig& cfg) {
  sub->set_config("--config", "", "read options from a key=value file");
  sub->add_option("-i,--input", cfg.input, "points file (TSPLIB node-coord or CSV)")->required();
  sub->add_option("-o,--output", cfg.output, "write the best run report here");
  sub->add_option("-m,--model", cfg.model_text, "model: I (centroid total center) or II (free)");
  sub->add_option("-k", cfg.k, "number of cluster centers");
  sub->add_option("--lambda0", cfg.lambda0, "initial penalty");
  sub->add_option("--mu0", cfg.mu0, "initial smoothing");
  sub->add_option("--sigma1", cfg.sigma1, "penalty growth per outer iteration")
      ->each([&](const std::string&) { cfg.sigma1_given = true; });
  sub->add_option("--sigma2", cfg.sigma2, "smoothing decay per outer iteration")
      ->each([&](const std::string&) { cfg.sigma2_given = true; });
  sub->add_option("--lambda-max", cfg.lambda_max, "final penalty (derives sigma1)")
      ->each([&](const std::string&) { cfg.lambda_max_given = true; });
  sub->add_option("--mu-min", cfg.mu_min, "final smoothing (derives sigma2)")
      ->each([&](const std::string&) { cfg.mu_min_given = true; });
  sub->add_option("--n-outer", cfg.n_outer, "outer iterations");
  sub->add_option("--n-inner", cfg.n_inner, "inner DCA iterations per outer");
  sub->add_option("--tol", cfg.tol, "relative step tolerance (0 disables early stop)");
  sub->add_option("--seed", cfg.seed, "random seed");
  sub->add_option("--gamma", cfg.gamma, "fixed start radius multiplier (default: random)");
  sub->add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
}

inline int run(const std::vector<std::string>& args) {
  RunConfig cfg;
  CLI::App app{"bilevel hierarchical clustering solver (DCA with Nesterov smoothing)"};
  app.require_subcommand(0, 1);

  CLI::App* solve = app.add_subcommand("solve", "multi-start continuation solve");
  add_solver_options(solve, cfg);
  solve->add_option("--starts", cfg.starts, "number of random starts");

  CLI::App* radial = app.add_subcommand("radial-search", "probe increasing start radii");
  add_solver_options(radial, cfg);
  radial->add_option("--r0", cfg.r0, "radius step");
  radial->add_option("--n-probes", cfg.n_probes, "number of radii to probe");

  CLI::App* evalc = app.add_subcommand("eval-cost", "discrete tree cost of given node indices");
  evalc->add_option("-i,--input", cfg.input, "points file")->required();
  evalc->add_option("--centers", cfg.centers_text, "comma-separated 0-based node indices")
      ->required();
  evalc->add_option("--total", cfg.total_center,
                    "total-center node index (default: best remaining node)");

  CLI::App* bench = app.add_subcommand("bench", "models I and II side by side over repeats");
  add_solver_options(bench, cfg);
  bench->add_option("--starts", cfg.starts, "number of random starts per run");
  bench->add_option("--repeats", cfg.repeats, "table rows (seed, seed+1, ...)");

  CLI::App* check = app.add_subcommand("check", "run the numerical property suites");
  check->add_option("--seed", cfg.seed, "random seed");
  check->add_option("--samples", cfg.samples, "samples per suite");
  check->add_option("--inject-bug", cfg.inject_bug,
                    "corrupt one computation (model1-grad-h1 | model2-conjugate)")
      ->check(CLI::IsMember({"model1-grad-h1", "model2-conjugate"}));

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("bhc");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  for (CLI::App* sub : {solve, radial, evalc, bench, check})
    if (sub->parsed()) cfg.subcommand = sub->get_name();
  return dispatch(cfg);
}

}  // namespace bhc::cli
