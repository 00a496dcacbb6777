#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "bhc/continuation.hpp"
#include "bhc/init.hpp"
#include "bhc/postprocess.hpp"
#include "oracles.hpp"

using bhc::ContinuationSchedule;
using bhc::Matrix;
using bhc::Model;
using bhc::ProblemFamily;
using bhc::SolveOptions;
using Catch::Approx;

namespace {

Matrix well_separated(std::size_t per_cluster, double gap, std::uint64_t seed) {
  oracle::Gen gen(seed);
  Matrix a(2 * per_cluster, 2);
  for (std::size_t i = 0; i < per_cluster; ++i) {
    a(i, 0) = gen.uniform(-1, 1);
    a(i, 1) = gen.uniform(-1, 1);
    a(i + per_cluster, 0) = gap + gen.uniform(-1, 1);
    a(i + per_cluster, 1) = gen.uniform(-1, 1);
  }
  return a;
}

}  // namespace

TEST_CASE("sigma derivation") {
  SECTION("equal endpoints give sigma1 = 1") {
    const auto [s1, s2] = bhc::derive_sigmas(0.5, 0.5, 10.0, 1.0, 8);
    CHECK(s1 == 1.0);
    CHECK(s2 == Approx(std::pow(0.1, 0.125)).epsilon(1e-14));
  }
  SECTION("halving schedule recovered from its endpoints") {
    const double mu0 = 100.0;
    const double mu_min = 100.0 * std::pow(0.5, 10);
    const auto [s1, s2] = bhc::derive_sigmas(1.0, 1.0, mu0, mu_min, 10);
    CHECK(s2 == Approx(0.5).epsilon(1e-12));
    CHECK(s1 == 1.0);
  }
  SECTION("round-trip: sigma^N * start = target") {
    oracle::Gen gen(167);
    for (int t = 0; t < 50; ++t) {
      const double l0 = gen.uniform(1e-8, 1e-2);
      const double lmax = l0 * gen.uniform(1.0, 1e9);
      const double m0 = gen.uniform(1.0, 1e4);
      const double mmin = m0 * gen.uniform(1e-9, 1.0);
      const std::size_t n = 1 + static_cast<std::size_t>(gen.uniform(0, 40));
      const auto [s1, s2] = bhc::derive_sigmas(l0, lmax, m0, mmin, n);
      CHECK(l0 * std::pow(s1, static_cast<double>(n)) == Approx(lmax).epsilon(1e-9));
      CHECK(m0 * std::pow(s2, static_cast<double>(n)) == Approx(mmin).epsilon(1e-9));
    }
  }
  SECTION("invalid inputs rejected") {
    CHECK_THROWS_AS(bhc::derive_sigmas(-1.0, 1.0, 1.0, 1.0, 5), bhc::DomainError);
    CHECK_THROWS_AS(bhc::derive_sigmas(2.0, 1.0, 1.0, 1.0, 5), bhc::DomainError);
    CHECK_THROWS_AS(bhc::derive_sigmas(1.0, 2.0, 1.0, 2.0, 5), bhc::DomainError);
    CHECK_THROWS_AS(bhc::derive_sigmas(1.0, 2.0, 1.0, 0.5, 0), bhc::DomainError);
  }
  SECTION("factory pathways agree when consistent") {
    const auto direct = ContinuationSchedule::from_sigmas(1e-6, 2.0, 64.0, 0.5, 6, 10);
    const auto derived =
        ContinuationSchedule::from_targets(1e-6, 1e-6 * 64.0, 64.0, 1.0, 6, 10);
    CHECK(direct.sigma1 == Approx(derived.sigma1).epsilon(1e-12));
    CHECK(direct.sigma2 == Approx(derived.sigma2).epsilon(1e-12));
    CHECK(direct.lambda_max == Approx(derived.lambda_max).epsilon(1e-12));
    CHECK(direct.mu_min == Approx(derived.mu_min).epsilon(1e-12));
  }
}

TEST_CASE("continuation solve") {
  const Matrix a = well_separated(6, 25.0, 173);
  const ProblemFamily fam(a, 2, Model::one);
  oracle::Gen gen(179);

  SECTION("one outer iteration means one inner run") {
    const auto sched = ContinuationSchedule::from_sigmas(1e-3, 1.0, 5.0, 1.0, 1, 12);
    const Matrix x0 = gen.matrix(2, 2, 5.0);
    const auto report = bhc::solve(fam, sched, x0, {.tol = 0.0});
    CHECK(report.outer.size() == 1);
    CHECK(report.total_inner_iterations == 12);
  }
  SECTION("parameter trace is monotone and warm starts chain") {
    const auto sched = ContinuationSchedule::from_sigmas(1e-4, 7500.0, 10.0, 0.5, 8, 5);
    const Matrix x0 = gen.matrix(2, 2, 5.0);
    bhc::OuterCenters centers;
    const auto report = bhc::solve(fam, sched, x0, {.tol = 0.0}, &centers);
    REQUIRE(report.outer.size() == 8);
    for (std::size_t i = 1; i < 8; ++i) {
      CHECK(report.outer[i].lambda >= report.outer[i - 1].lambda);
      CHECK(report.outer[i].mu <= report.outer[i - 1].mu);
      CHECK(centers.start[i] == centers.end[i - 1]);
    }
    CHECK(centers.start[0] == x0);
    CHECK(report.final_centers == centers.end[7]);
  }
  SECTION("sigma = 1 degenerates to one long dca run, bit for bit") {
    const auto sched = ContinuationSchedule::from_sigmas(1e-3, 1.0, 5.0, 1.0, 4, 6);
    const Matrix x0 = gen.matrix(2, 2, 5.0);
    const auto report = bhc::solve(fam, sched, x0, {.tol = 0.0});
    const bhc::ModelOneProblem p(a, 2, 1e-3, 5.0);
    const auto trace = bhc::dca_run(bhc::model1::make_oracles(p), x0, 24, 0.0);
    CHECK(report.final_centers == trace.last);
    CHECK(report.total_inner_iterations == trace.iterations_run);
    CHECK(report.outer.back().objective == trace.objective_values.back());
  }
  SECTION("snapped centers match the enumeration optimum on separated clusters") {
    const auto sched = ContinuationSchedule::from_sigmas(1e-4, 10.0, 8.0, 0.5, 12, 10);
    const Matrix x0 = bhc::random_start(a, 2, {.gamma = 0.4, .seed = 7});
    const auto report = bhc::solve(fam, sched, x0, {});
    const auto opt = bhc::discrete_optimum(a, 2);
    CHECK(report.snapped_cost == Approx(opt.cost).margin(1e-9));
    // per-cluster 1-medians: one center in each cluster
    const bool split = (report.snapped.cluster_centers[0] < 6) !=
                       (report.snapped.cluster_centers[1] < 6);
    CHECK(split);
  }
  SECTION("wrong starting shape refused") {
    const auto sched = ContinuationSchedule::from_sigmas(1e-3, 1.0, 5.0, 1.0, 1, 2);
    CHECK_THROWS_AS(bhc::solve(fam, sched, Matrix(3, 2), {}), bhc::DimensionError);
  }
  SECTION("model II path produces a valid snapped solution") {
    const ProblemFamily fam2(a, 2, Model::two);
    const auto sched = ContinuationSchedule::from_sigmas(1e-4, 10.0, 8.0, 0.5, 12, 10);
    const Matrix x0 = bhc::random_start(a, 3, {.gamma = 0.4, .seed = 11});
    const auto report = bhc::solve(fam2, sched, x0, {});
    CHECK(report.snapped.cluster_centers.size() == 2);
    CHECK(report.snapped.total_center != report.snapped.cluster_centers[0]);
    CHECK(report.snapped.total_center != report.snapped.cluster_centers[1]);
    CHECK(report.snapped_cost ==
          Approx(bhc::tree_cost(report.snapped, a)).margin(1e-12));
  }
}

TEST_CASE("inner descent across the continuation") {
  const Matrix a = well_separated(5, 30.0, 181);
  for (Model model : {Model::one, Model::two}) {
    const ProblemFamily fam(a, 2, model);
    const auto sched = ContinuationSchedule::from_sigmas(1e-5, 50.0, 20.0, 0.5, 10, 8);
    const Matrix x0 = bhc::random_start(a, fam.center_rows(), {.gamma = 0.3, .seed = 3});
    const auto report = bhc::solve(fam, sched, x0, {.tol = 0.0});
    for (const auto& outer : report.outer) {
      const double slack = 1e-9 * (1.0 + std::fabs(outer.inner_objectives.front()));
      for (std::size_t i = 1; i < outer.inner_objectives.size(); ++i)
        CHECK(outer.inner_objectives[i] <= outer.inner_objectives[i - 1] + slack);
    }
  }
}
