#pragma once

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "bhc/dca.hpp"
#include "bhc/errors.hpp"
#include "bhc/matrix.hpp"
#include "bhc/model_one.hpp"
#include "bhc/model_two.hpp"
#include "bhc/postprocess.hpp"

namespace bhc {

// sigma1 = (lambda_max/lambda0)^(1/N), sigma2 = (mu_min/mu0)^(1/N).
inline std::pair<double, double> derive_sigmas(double lambda0, double lambda_max, double mu0,
                                               double mu_min, std::size_t n_outer) {
  if (!(lambda0 > 0.0) || !(lambda_max > 0.0) || !(mu0 > 0.0) || !(mu_min > 0.0))
    throw DomainError("derive_sigmas: parameters must be positive");
  if (lambda_max < lambda0) throw DomainError("derive_sigmas: lambda_max must be >= lambda0");
  if (mu_min > mu0) throw DomainError("derive_sigmas: mu_min must be <= mu0");
  if (n_outer < 1) throw DomainError("derive_sigmas: n_outer must be >= 1");
  const double inv_n = 1.0 / static_cast<double>(n_outer);
  return {std::pow(lambda_max / lambda0, inv_n), std::pow(mu_min / mu0, inv_n)};
}

// Geometric penalty growth / smoothing decay over n_outer outer iterations
// of n_inner DCA steps each. lambda_max and mu_min double as caps, so both
// construction pathways (direct sigmas, derived from targets) share one
// update rule.
struct ContinuationSchedule {
  double lambda0 = 1e-6;
  double sigma1 = 1.0;
  double mu0 = 100.0;
  double sigma2 = 0.5;
  double lambda_max = 0.0;  // filled by the factories
  double mu_min = 0.0;
  std::size_t n_outer = 27;
  std::size_t n_inner = 20;

  static ContinuationSchedule from_sigmas(double lambda0, double sigma1, double mu0,
                                          double sigma2, std::size_t n_outer,
                                          std::size_t n_inner) {
    if (!(lambda0 > 0.0) || !(mu0 > 0.0)) throw DomainError("schedule: lambda0, mu0 must be > 0");
    if (!(sigma1 >= 1.0)) throw DomainError("schedule: sigma1 must be >= 1");
    if (!(sigma2 > 0.0) || !(sigma2 <= 1.0)) throw DomainError("schedule: sigma2 must be in (0,1]");
    if (n_outer < 1 || n_inner < 1) throw DomainError("schedule: iteration counts must be >= 1");
    ContinuationSchedule s;
    s.lambda0 = lambda0;
    s.sigma1 = sigma1;
    s.mu0 = mu0;
    s.sigma2 = sigma2;
    s.n_outer = n_outer;
    s.n_inner = n_inner;
    s.lambda_max = lambda0 * std::pow(sigma1, static_cast<double>(n_outer));
    s.mu_min = mu0 * std::pow(sigma2, static_cast<double>(n_outer));
    return s;
  }

  static ContinuationSchedule from_targets(double lambda0, double lambda_max, double mu0,
                                           double mu_min, std::size_t n_outer,
                                           std::size_t n_inner) {
    auto [s1, s2] = derive_sigmas(lambda0, lambda_max, mu0, mu_min, n_outer);
    ContinuationSchedule s = from_sigmas(lambda0, s1, mu0, s2, n_outer, n_inner);
    s.lambda_max = lambda_max;
    s.mu_min = mu_min;
    return s;
  }

};

enum class Model { one, two };

inline std::string model_name(Model m) { return m == Model::one ? "I" : "II"; }

// Dataset + cluster count + model choice; produces oracle sets at fixed
// (lambda, mu) for the continuation loop.
struct ProblemFamily {
  Matrix data;
  std::size_t k = 2;
  Model model = Model::one;

  ProblemFamily(Matrix data_, std::size_t k_, Model model_)
      : data(std::move(data_)), k(k_), model(model_) {
    if (data.rows() == 0 || data.cols() == 0) throw DomainError("problem family: empty data");
    if (!data.all_finite()) throw DomainError("problem family: data has non-finite entries");
    if (k < 2) throw DomainError("problem family: k must be >= 2");
    const std::size_t need = model == Model::one ? k : k + 1;
    if (need > data.rows())
      throw DomainError("problem family: not enough nodes for the requested centers");
  }

  std::size_t center_rows() const { return model == Model::one ? k : k + 1; }

  DcOracles oracles_at(double lambda, double mu) const {
    if (model == Model::one)
      return model1::make_oracles(ModelOneProblem(data, k, lambda, mu));
    return model2::make_oracles(ModelTwoProblem(data, k, lambda, mu));
  }
};

struct OuterTrace {
  double lambda = 0.0;
  double mu = 0.0;
  std::size_t inner_iterations = 0;
  double objective = 0.0;                // smoothed objective after this outer pass
  std::vector<double> inner_objectives;  // f at the warm start, then each inner iterate
};

struct SolveReport {
  Model model = Model::one;
  std::uint64_t seed = 0;
  std::size_t start_index = 0;
  double gamma = -1.0;   // start radius multiplier when randomly started
  double radius = -1.0;  // radial-search probe radius when applicable
  std::size_t k = 0;
  std::size_t m = 0;
  std::size_t n = 0;
  ContinuationSchedule schedule;
  double tol = 0.0;
  Matrix final_centers;
  std::vector<OuterTrace> outer;
  SnappedSolution snapped;
  double snapped_cost = std::numeric_limits<double>::infinity();
  std::size_t total_inner_iterations = 0;
  double wall_time_s = 0.0;  // console/bench only; never serialized
  std::vector<std::pair<double, double>> radial_profile;  // (probe radius, cost)
  std::string error;  // set when a probe failed inside a driver

  std::vector<double> smoothed_cost_trace() const {
    std::vector<double> t;
    t.reserve(outer.size());
    for (const OuterTrace& o : outer) t.push_back(o.objective);
    return t;
  }
};

struct SolveOptions {
  double tol = 1e-6;
  bool keep_inner_objectives = true;
  bool keep_outer_centers = false;  // retain per-outer start/end centers (tests)
};

struct OuterCenters {
  std::vector<Matrix> start;
  std::vector<Matrix> end;
};

// Outer continuation loop: for i = 0..n_outer-1 build oracles at
// (lambda_i, mu_i), run n_inner DCA steps warm-started from the previous
// centers, then grow lambda and shrink mu. Stops after n_outer passes,
// i.e. once lambda has reached lambda_max and mu has reached mu_min.
inline SolveReport solve(const ProblemFamily& family, const ContinuationSchedule& schedule,
                         const Matrix& x0, const SolveOptions& options = {},
                         OuterCenters* centers_out = nullptr) {
  if (x0.rows() != family.center_rows() || x0.cols() != family.data.cols())
    throw DimensionError("solve: starting centers have the wrong shape");
  const auto t0 = std::chrono::steady_clock::now();

  SolveReport report;
  report.model = family.model;
  report.k = family.k;
  report.m = family.data.rows();
  report.n = family.data.cols();
  report.schedule = schedule;
  report.tol = options.tol;

  Matrix x = x0;
  double lambda = schedule.lambda0;
  double mu = schedule.mu0;
  for (std::size_t i = 0; i < schedule.n_outer; ++i) {
    const DcOracles oracles = family.oracles_at(lambda, mu);
    if (centers_out) centers_out->start.push_back(x);
    DcaTrace trace;
    try {
      trace = dca_run(oracles, x, schedule.n_inner, options.tol);
    } catch (const NumericalFailure& e) {
      throw NumericalFailure("outer iteration " + std::to_string(i) + ": " + e.what(),
                             e.iteration());
    }
    x = trace.last;
    if (centers_out) centers_out->end.push_back(x);

    OuterTrace ot;
    ot.lambda = lambda;
    ot.mu = mu;
    ot.inner_iterations = trace.iterations_run;
    ot.objective = trace.objective_values.back();
    if (options.keep_inner_objectives) ot.inner_objectives = std::move(trace.objective_values);
    report.total_inner_iterations += trace.iterations_run;
    report.outer.push_back(std::move(ot));

    lambda = std::min(lambda * schedule.sigma1, schedule.lambda_max);
    mu = std::max(mu * schedule.sigma2, schedule.mu_min);
  }

  report.final_centers = std::move(x);
  report.snapped = snap_solution(report.final_centers, family.data, family.k);
  report.snapped_cost = report.snapped.cost;
  report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

}  // namespace bhc
