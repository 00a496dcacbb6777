#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <thread>
#include <utility>
#include <vector>

#include "bhc/continuation.hpp"
#include "bhc/errors.hpp"
#include "bhc/matrix.hpp"
#include "bhc/rng.hpp"

namespace bhc {

// Starting-point generation parameters: gamma < 0 means "draw gamma
// uniformly from (0,1) per start"; r0 and n_probes drive the radial search.
struct StartSpec {
  double gamma = -1.0;
  double r0 = 0.1;
  std::size_t n_probes = 10;
  std::uint64_t seed = 1;
};

// Coordinatewise median of the data rows (mid-average for even counts).
inline Vector median_point(const Matrix& a) {
  if (a.rows() == 0) throw DomainError("median_point: empty data");
  Vector med(a.cols());
  std::vector<double> col(a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    for (std::size_t i = 0; i < a.rows(); ++i) col[i] = a(i, j);
    std::sort(col.begin(), col.end());
    const std::size_t mid = a.rows() / 2;
    med[j] = a.rows() % 2 == 1 ? col[mid] : 0.5 * (col[mid - 1] + col[mid]);
  }
  return med;
}

// rad(A) = max distance from the median point to any node.
inline double rad(const Matrix& a) {
  const Vector med = median_point(a);
  double r = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    r = std::max(r, dist(a.row(i), std::span<const double>(med)));
  return r;
}

// k rows of independent uniformly-random unit vectors.
inline Matrix random_unit_rows(std::size_t k, std::size_t n, Rng& rng) {
  Matrix u(k, n);
  for (std::size_t l = 0; l < k; ++l) {
    double nrm = 0.0;
    do {
      for (std::size_t j = 0; j < n; ++j) u(l, j) = rng.normal();
      nrm = norm(u.row(l));
    } while (nrm < 1e-12);
    const double inv = 1.0 / nrm;
    for (std::size_t j = 0; j < n; ++j) u(l, j) *= inv;
  }
  return u;
}

// X0 = median(A) + gamma rad(A) U: every row sits at distance
// gamma*rad(A) from the median point.
inline Matrix random_start_at(const Matrix& a, std::size_t k_rows, double gamma, Rng& rng) {
  if (k_rows < 1) throw DomainError("random_start: k_rows must be >= 1");
  const Vector med = median_point(a);
  const double scale = gamma * rad(a);
  Matrix x = random_unit_rows(k_rows, a.cols(), rng);
  for (std::size_t l = 0; l < k_rows; ++l)
    for (std::size_t j = 0; j < a.cols(); ++j) x(l, j) = med[j] + scale * x(l, j);
  return x;
}

inline Matrix random_start(const Matrix& a, std::size_t k_rows, const StartSpec& spec) {
  Rng rng(spec.seed);
  const double gamma = spec.gamma < 0.0 ? rng.uniform01() : spec.gamma;
  return random_start_at(a, k_rows, gamma, rng);
}

namespace detail {

// Run jobs 0..count-1 across up to `threads` workers; each job writes only
// its own slot, so the collected output is scheduling-independent.
template <typename Fn>
void parallel_for(std::size_t count, std::size_t threads, Fn&& fn) {
  if (threads == 0) threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  for (std::thread& t : pool) t.join();
}

inline std::size_t best_report_index(const std::vector<SolveReport>& reports) {
  std::size_t best = reports.size();
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (!reports[i].error.empty()) continue;
    if (best == reports.size() || reports[i].snapped_cost < reports[best].snapped_cost) best = i;
  }
  return best;
}

}  // namespace detail

struct MultiStartResult {
  SolveReport best;
  std::vector<SolveReport> all;
};

// Injectable solver for the start drivers; defaults to bhc::solve.
using SolveFn = std::function<SolveReport(const ProblemFamily&, const ContinuationSchedule&,
                                          const Matrix&, const SolveOptions&)>;

// Independent randomized starts; per-start RNG streams are split
// deterministically from the seed, so results do not depend on thread
// scheduling or the number of workers.
inline MultiStartResult multi_start(const ProblemFamily& family,
                                    const ContinuationSchedule& schedule, std::size_t n_starts,
                                    std::uint64_t seed, const SolveOptions& options = {},
                                    std::size_t threads = 0, double fixed_gamma = -1.0,
                                    const SolveFn& solver = {}) {
  if (n_starts < 1) throw DomainError("multi_start: n_starts must be >= 1");
  std::vector<SolveReport> reports(n_starts);
  detail::parallel_for(n_starts, threads, [&](std::size_t s) {
    Rng rng(Rng::derive_stream(seed, s));
    const double gamma = fixed_gamma < 0.0 ? rng.uniform01() : fixed_gamma;
    const Matrix x0 = random_start_at(family.data, family.center_rows(), gamma, rng);
    try {
      reports[s] = solver ? solver(family, schedule, x0, options)
                          : solve(family, schedule, x0, options);
    } catch (const std::exception& e) {
      reports[s].error = e.what();
    }
    reports[s].seed = seed;
    reports[s].start_index = s;
    reports[s].gamma = gamma;
  });
  const std::size_t best = detail::best_report_index(reports);
  if (best == reports.size())
    throw NumericalFailure("multi_start: every start failed; first error: " + reports[0].error);
  return {reports[best], std::move(reports)};
}

struct RadialSearchResult {
  SolveReport best;
  std::vector<SolveReport> all;
  std::vector<std::pair<double, double>> profile;  // (probe radius, snapped cost)
};

// Radial search: one random direction matrix U, probed at increasing radii
// gamma_i = i * r0 for i = 1..n_probes. A failing probe is recorded and the
// remaining probes still run.
inline RadialSearchResult radial_search(const ProblemFamily& family,
                                        const ContinuationSchedule& schedule,
                                        const StartSpec& spec, const SolveOptions& options = {},
                                        std::size_t threads = 0, const SolveFn& solver = {}) {
  if (spec.n_probes < 1) throw DomainError("radial_search: n_probes must be >= 1");
  if (!(spec.r0 > 0.0)) throw DomainError("radial_search: r0 must be > 0");

  Rng rng(Rng::derive_stream(spec.seed, 0));
  const Matrix u = random_unit_rows(family.center_rows(), family.data.cols(), rng);
  const Vector med = median_point(family.data);
  const double data_rad = rad(family.data);

  std::vector<SolveReport> reports(spec.n_probes);
  detail::parallel_for(spec.n_probes, threads, [&](std::size_t i) {
    const double gamma = static_cast<double>(i + 1) * spec.r0;
    Matrix x0 = u;
    for (std::size_t l = 0; l < x0.rows(); ++l)
      for (std::size_t j = 0; j < x0.cols(); ++j)
        x0(l, j) = med[j] + gamma * data_rad * x0(l, j);
    try {
      reports[i] = solver ? solver(family, schedule, x0, options)
                          : solve(family, schedule, x0, options);
    } catch (const std::exception& e) {
      reports[i].error = e.what();
    }
    reports[i].seed = spec.seed;
    reports[i].start_index = i;
    reports[i].gamma = gamma;
    reports[i].radius = gamma;
  });

  RadialSearchResult result;
  result.profile.reserve(spec.n_probes);
  for (const SolveReport& r : reports)
    result.profile.emplace_back(r.radius,
                                r.error.empty() ? r.snapped_cost
                                                : std::numeric_limits<double>::infinity());
  const std::size_t best = detail::best_report_index(reports);
  if (best == reports.size())
    throw NumericalFailure("radial_search: every probe failed; first error: " + reports[0].error);
  result.best = reports[best];
  result.best.radial_profile = result.profile;
  result.all = std::move(reports);
  return result;
}

}  // namespace bhc
