#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bhc/dca.hpp"
#include "bhc/matrix.hpp"
#include "bhc/model_one.hpp"
#include "bhc/model_two.hpp"
#include "bhc/rng.hpp"
#include "bhc/smoothing.hpp"

namespace bhc::checks {

// Runtime self-test suites behind `bhc check`: finite differences for every
// differentiable component, conjugate round-trips, the smoothing sandwich,
// subgradient inequalities and DCA descent, all on seeded random instances.
// A Mutation deliberately corrupts one computation so the corresponding
// suite's failure path can be exercised.

enum class Mutation { none, model1_grad_h1, model2_conjugate };

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::size_t samples = 0;
  double worst = 0.0;
  std::string detail;
};

struct CheckOptions {
  std::uint64_t seed = 1;
  std::size_t samples = 100;
  Mutation mutation = Mutation::none;
};

namespace detail {

inline Matrix random_matrix(Rng& rng, std::size_t r, std::size_t c, double scale) {
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = scale * rng.normal();
  return m;
}

inline Matrix fd_gradient(const std::function<double(const Matrix&)>& f, const Matrix& x) {
  Matrix g(x.rows(), x.cols());
  Matrix xp = x;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) {
      const double h = 1e-5 * (1.0 + std::fabs(x(i, j)));
      const double saved = xp(i, j);
      xp(i, j) = saved + h;
      const double fp = f(xp);
      xp(i, j) = saved - h;
      const double fm = f(xp);
      xp(i, j) = saved;
      g(i, j) = (fp - fm) / (2.0 * h);
    }
  return g;
}

inline double rel_err(const Matrix& approx, const Matrix& exact) {
  return frobenius_norm(approx - exact) / (1.0 + frobenius_norm(exact));
}

inline void record(SuiteResult& s, double err, double tol, const std::string& what) {
  s.worst = std::max(s.worst, err);
  ++s.samples;
  if (err > tol && s.passed) {
    s.passed = false;
    s.detail = what + ": error " + std::to_string(err) + " exceeds " + std::to_string(tol);
  }
}

// lambda/mu sampling ranges shared by the gradient suites
inline double sample_lambda(Rng& rng) { return std::pow(10.0, -6.0 + 7.0 * rng.uniform01()); }
inline double sample_mu(Rng& rng) { return std::pow(10.0, -2.0 + 4.0 * rng.uniform01()); }

}  // namespace detail

inline SuiteResult check_sandwich(const CheckOptions& opt) {
  SuiteResult s{.name = "smoothing sandwich"};
  Rng rng(Rng::derive_stream(opt.seed, 101));
  const std::size_t count = opt.samples * 10;
  for (std::size_t t = 0; t < count; ++t) {
    Vector x(3), a(3);
    for (int j = 0; j < 3; ++j) {
      x[j] = 5.0 * rng.normal();
      a[j] = 5.0 * rng.normal();
    }
    const double mu = detail::sample_mu(rng);
    const double phi = dist(x, a);
    const double phimu = smooth_norm(x, a, SmoothingParam(mu));
    detail::record(s, phimu - phi, 1e-12, "upper bound");
    detail::record(s, phi - (phimu + mu / 2.0), 1e-12, "lower bound");
  }
  return s;
}

inline SuiteResult check_gradients_model1(const CheckOptions& opt) {
  SuiteResult s{.name = "model I finite differences"};
  Rng rng(Rng::derive_stream(opt.seed, 102));
  for (std::size_t t = 0; t < opt.samples; ++t) {
    Matrix data = detail::random_matrix(rng, 6, 2, 3.0);
    const ModelOneProblem p(data, 3, detail::sample_lambda(rng), detail::sample_mu(rng));
    const Matrix x = detail::random_matrix(rng, 3, 2, 3.0);

    const Matrix gg = model1::grad_g(p, x);
    const Matrix gg_fd = detail::fd_gradient(
        [&](const Matrix& z) { return model1::value_g1(p, z) + model1::value_g2(p, z); }, x);
    detail::record(s, detail::rel_err(gg_fd, gg), 1e-6, "grad g");

    Matrix h1 = model1::grad_h1(p, x);
    if (opt.mutation == Mutation::model1_grad_h1) h1(0, 0) += 1e-3 * (1.0 + std::fabs(h1(0, 0)));
    const Matrix h1_fd =
        detail::fd_gradient([&](const Matrix& z) { return model1::value_h1(p, z); }, x);
    detail::record(s, detail::rel_err(h1_fd, h1), 1e-6, "grad h1");

    const Matrix h2 = model1::grad_h2(p, x);
    const Matrix h2_fd =
        detail::fd_gradient([&](const Matrix& z) { return model1::value_h2(p, z); }, x);
    detail::record(s, detail::rel_err(h2_fd, h2), 1e-6, "grad h2");
  }
  return s;
}

inline SuiteResult check_gradients_model2(const CheckOptions& opt) {
  SuiteResult s{.name = "model II finite differences"};
  Rng rng(Rng::derive_stream(opt.seed, 103));
  for (std::size_t t = 0; t < opt.samples; ++t) {
    Matrix data = detail::random_matrix(rng, 6, 2, 3.0);
    const ModelTwoProblem p(data, 3, detail::sample_lambda(rng), detail::sample_mu(rng));
    const Matrix x = detail::random_matrix(rng, 4, 2, 3.0);

    detail::record(s,
                   detail::rel_err(detail::fd_gradient(
                                       [&](const Matrix& z) {
                                         return model2::value_g1(p, z) + model2::value_g2(p, z);
                                       },
                                       x),
                                   model2::grad_g(p, x)),
                   1e-6, "grad g");
    detail::record(
        s,
        detail::rel_err(
            detail::fd_gradient([&](const Matrix& z) { return model2::value_h1(p, z); }, x),
            model2::grad_h1(p, x)),
        1e-6, "grad h1");
    detail::record(
        s,
        detail::rel_err(
            detail::fd_gradient([&](const Matrix& z) { return model2::value_h2(p, z); }, x),
            model2::grad_h2(p, x)),
        1e-6, "grad h2");
    detail::record(
        s,
        detail::rel_err(
            detail::fd_gradient([&](const Matrix& z) { return model2::value_h3(p, z); }, x),
            model2::grad_h3(p, x)),
        1e-6, "grad h3");
    detail::record(
        s,
        detail::rel_err(
            detail::fd_gradient([&](const Matrix& z) { return model2::value_h4(p, z); }, x),
            model2::grad_h4(p, x)),
        1e-6, "grad h4");
  }
  return s;
}

inline SuiteResult check_conjugates(const CheckOptions& opt) {
  SuiteResult s{.name = "conjugate round-trips"};
  Rng rng(Rng::derive_stream(opt.seed, 104));
  for (std::size_t t = 0; t < opt.samples; ++t) {
    Matrix data = detail::random_matrix(rng, 7, 2, 4.0);
    const double lambda = detail::sample_lambda(rng);
    const double mu = detail::sample_mu(rng);

    const ModelOneProblem p1(data, 3, lambda, mu);
    const Matrix x1 = detail::random_matrix(rng, 3, 2, 4.0);
    const Matrix back1 = model1::grad_g_conj(p1, model1::grad_g(p1, x1));
    detail::record(s, frobenius_norm(back1 - x1) / (1.0 + frobenius_norm(x1)), 1e-8,
                   "model I round-trip");

    const ModelTwoProblem p2(data, 3, lambda, mu);
    const Matrix x2 = detail::random_matrix(rng, 4, 2, 4.0);
    Matrix back2 = model2::grad_g_conj(p2, model2::grad_g(p2, x2));
    if (opt.mutation == Mutation::model2_conjugate)
      back2(0, 0) += 1e-3 * (1.0 + std::fabs(back2(0, 0)));
    detail::record(s, frobenius_norm(back2 - x2) / (1.0 + frobenius_norm(x2)), 1e-8,
                   "model II round-trip");
  }
  return s;
}

inline SuiteResult check_subgradients(const CheckOptions& opt) {
  SuiteResult s{.name = "subgradient inequalities"};
  Rng rng(Rng::derive_stream(opt.seed, 105));
  Matrix data = detail::random_matrix(rng, 6, 2, 3.0);
  const ModelOneProblem p1(data, 3, 1.4, 0.6);
  const ModelTwoProblem p2(data, 3, 1.4, 0.6);
  for (std::size_t t = 0; t < opt.samples; ++t) {
    const Matrix x1 = detail::random_matrix(rng, 3, 2, 4.0);
    const Matrix z1 = detail::random_matrix(rng, 3, 2, 4.0);
    detail::record(s,
                   model1::value_h3(p1, x1) + frobenius_inner(model1::subgrad_h3(p1, x1), z1 - x1) -
                       model1::value_h3(p1, z1),
                   1e-9, "model I h3");
    detail::record(s,
                   model1::value_h4(p1, x1) + frobenius_inner(model1::subgrad_h4(p1, x1), z1 - x1) -
                       model1::value_h4(p1, z1),
                   1e-9, "model I h4");
    const Matrix x2 = detail::random_matrix(rng, 4, 2, 4.0);
    const Matrix z2 = detail::random_matrix(rng, 4, 2, 4.0);
    detail::record(s,
                   model2::value_h5(p2, x2) + frobenius_inner(model2::subgrad_h5(p2, x2), z2 - x2) -
                       model2::value_h5(p2, z2),
                   1e-9, "model II h5");
    detail::record(s,
                   model2::value_h6(p2, x2) + frobenius_inner(model2::subgrad_h6(p2, x2), z2 - x2) -
                       model2::value_h6(p2, z2),
                   1e-9, "model II h6");
  }
  return s;
}

inline SuiteResult check_descent(const CheckOptions& opt) {
  SuiteResult s{.name = "dca descent"};
  Rng rng(Rng::derive_stream(opt.seed, 106));
  Matrix data(10, 2);
  for (std::size_t i = 0; i < 5; ++i) {
    data(i, 0) = rng.normal();
    data(i, 1) = rng.normal();
    data(i + 5, 0) = 20.0 + rng.normal();
    data(i + 5, 1) = rng.normal();
  }
  const std::size_t runs = std::max<std::size_t>(3, opt.samples / 20);
  for (std::size_t t = 0; t < runs; ++t) {
    for (int model = 0; model < 2; ++model) {
      DcOracles o;
      std::size_t rows;
      if (model == 0) {
        o = model1::make_oracles(ModelOneProblem(data, 2, 0.3, 2.0));
        rows = 2;
      } else {
        o = model2::make_oracles(ModelTwoProblem(data, 2, 0.3, 2.0));
        rows = 3;
      }
      const Matrix x0 = detail::random_matrix(rng, rows, 2, 8.0);
      const DcaTrace trace = dca_run(o, x0, 30, 0.0);
      const double slack = 1e-9 * (1.0 + std::fabs(trace.objective_values.front()));
      for (std::size_t i = 1; i < trace.objective_values.size(); ++i)
        detail::record(s, trace.objective_values[i] - trace.objective_values[i - 1], slack,
                       model == 0 ? "model I descent" : "model II descent");
    }
  }
  return s;
}

inline std::vector<SuiteResult> run_all(const CheckOptions& opt = {}) {
  return {check_sandwich(opt),     check_gradients_model1(opt), check_gradients_model2(opt),
          check_conjugates(opt),   check_subgradients(opt),     check_descent(opt)};
}

inline bool all_passed(const std::vector<SuiteResult>& results) {
  for (const SuiteResult& r : results)
    if (!r.passed) return false;
  return true;
}

}  // namespace bhc::checks
