#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "bhc/dca.hpp"
#include "bhc/model_one.hpp"
#include "oracles.hpp"

using bhc::DcOracles;
using bhc::Matrix;
using Catch::Approx;

namespace {

// g(x) = |x|^2/2, h(x) = <c, x>: dg*(y) = y, dh(x) = c, f minimized at c.
DcOracles toy_oracles(const Matrix& c) {
  DcOracles o;
  o.h_subgrad = [c](const Matrix&) { return c; };
  o.g_conj_grad = [](const Matrix& y) { return y; };
  o.grad_g = [](const Matrix& x) { return x; };
  o.objective = [c](const Matrix& x) {
    return 0.5 * bhc::frobenius_inner(x, x) - bhc::frobenius_inner(c, x);
  };
  return o;
}

Matrix four_point_data() {
  return Matrix(4, 2, {0, 0, 1, 0, 10, 10, 11, 10});
}

}  // namespace

TEST_CASE("dca on a quadratic-linear toy program") {
  const Matrix c(2, 2, {1, -2, 3, 0.5});
  const DcOracles o = toy_oracles(c);
  const Matrix x0(2, 2, {5, 5, 5, 5});

  SECTION("lands on the minimizer after one step") {
    const auto trace = bhc::dca_run(o, x0, 10, 1e-9);
    CHECK(trace.last == c);
    CHECK(trace.iterations_run == 2);  // second step detects the fixed point
    CHECK(trace.objective_values.back() ==
          Approx(-0.5 * bhc::frobenius_inner(c, c)).margin(1e-12));
  }
  SECTION("fixed starting point stops after a single iteration") {
    const auto trace = bhc::dca_run(o, c, 10, 1e-9);
    CHECK(trace.iterations_run == 1);
    CHECK(trace.step_norms.back() <= 1e-9 * (1.0 + bhc::frobenius_norm(c)));
  }
}

TEST_CASE("dca run mechanics") {
  const Matrix c(1, 2, {2, 2});
  const DcOracles o = toy_oracles(c);
  const Matrix x0(1, 2, {0, 0});

  SECTION("objective recorded for the start and every iterate") {
    const auto trace = bhc::dca_run(o, x0, 5, 0.0);
    CHECK(trace.objective_values.size() == trace.iterations_run + 1);
    CHECK(trace.step_norms.size() == trace.iterations_run);
  }
  SECTION("iterates kept only on request") {
    CHECK(bhc::dca_run(o, x0, 3, 0.0).iterates.empty());
    const auto trace = bhc::dca_run(o, x0, 3, 0.0, true);
    CHECK(trace.iterates.size() == trace.iterations_run + 1);
    CHECK(trace.iterates.front() == x0);
    CHECK(trace.iterates.back() == trace.last);
  }
  SECTION("tol = 0 runs the full count") {
    CHECK(bhc::dca_run(o, x0, 7, 0.0).iterations_run == 7);
  }
  SECTION("invalid arguments") {
    CHECK_THROWS_AS(bhc::dca_run(o, x0, 0, 0.0), bhc::DomainError);
    CHECK_THROWS_AS(bhc::dca_run(o, x0, 3, -1.0), bhc::DomainError);
  }
  SECTION("non-finite oracle output reports the failing iteration") {
    DcOracles bad = o;
    bad.g_conj_grad = [](const Matrix& y) {
      Matrix z = y;
      z(0, 0) = std::numeric_limits<double>::quiet_NaN();
      return z;
    };
    try {
      bhc::dca_run(bad, x0, 5, 0.0);
      FAIL("expected NumericalFailure");
    } catch (const bhc::NumericalFailure& e) {
      CHECK(e.iteration() == 1);
    }
  }
}

TEST_CASE("dca descent on model I oracles") {
  const bhc::ModelOneProblem p(four_point_data(), 2, 0.5, 1.0);
  const DcOracles o = bhc::model1::make_oracles(p);
  oracle::Gen gen(53);
  for (int trial = 0; trial < 5; ++trial) {
    const Matrix x0 = gen.matrix(2, 2, 8.0);
    const auto trace = bhc::dca_run(o, x0, 30, 0.0);
    const double slack = 1e-9 * (1.0 + std::fabs(trace.objective_values.front()));
    for (std::size_t i = 1; i < trace.objective_values.size(); ++i)
      CHECK(trace.objective_values[i] <= trace.objective_values[i - 1] + slack);
  }
}

TEST_CASE("early stop honors the tolerance") {
  const bhc::ModelOneProblem p(four_point_data(), 2, 0.5, 1.0);
  const DcOracles o = bhc::model1::make_oracles(p);
  const Matrix x0(2, 2, {0.5, 0.5, 9.0, 9.0});
  const double tol = 1e-6;
  const auto trace = bhc::dca_run(o, x0, 500, tol, true);
  REQUIRE(trace.iterations_run < 500);
  const Matrix& before_last = trace.iterates[trace.iterates.size() - 2];
  CHECK(trace.step_norms.back() <= tol * (1.0 + bhc::frobenius_norm(before_last)));
}

TEST_CASE("criticality check") {
  SECTION("dca fixed points are critical") {
    const bhc::ModelOneProblem p(four_point_data(), 2, 0.5, 1.0);
    const DcOracles o = bhc::model1::make_oracles(p);
    const Matrix x0(2, 2, {0.5, 0.5, 9.0, 9.0});
    const auto trace = bhc::dca_run(o, x0, 2000, 1e-13);
    CHECK(bhc::is_critical(o, trace.last, 1e-6));
  }
  SECTION("far-from-optimal points are not") {
    const bhc::ModelOneProblem p(four_point_data(), 2, 0.5, 1.0);
    const DcOracles o = bhc::model1::make_oracles(p);
    const Matrix x(2, 2, {100, -50, -80, 60});
    CHECK_FALSE(bhc::is_critical(o, x, 1e-6));
  }
  SECTION("g = h makes every point critical") {
    DcOracles o;
    o.grad_g = [](const Matrix& x) { return x; };
    o.h_subgrad = [](const Matrix& x) { return x; };
    o.g_conj_grad = [](const Matrix& y) { return y; };
    o.objective = [](const Matrix&) { return 0.0; };
    oracle::Gen gen(59);
    for (int t = 0; t < 20; ++t) CHECK(bhc::is_critical(o, gen.matrix(3, 2, 5.0), 1e-6));
  }
}
