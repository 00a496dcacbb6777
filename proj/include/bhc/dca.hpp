#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "bhc/errors.hpp"
#include "bhc/matrix.hpp"

namespace bhc {

// One DC program instance at fixed parameters: f = g - h with
//   h_subgrad(X)    a selection Y in dh(X),
//   g_conj_grad(Y)  the X with grad_g(X) = Y (i.e. X in dg*(Y)),
//   grad_g(X)       used for criticality checks,
//   objective(X)    the value of f.
// All maps must be pure; a DcOracles value is shareable across threads.
struct DcOracles {
  std::function<Matrix(const Matrix&)> h_subgrad;
  std::function<Matrix(const Matrix&)> g_conj_grad;
  std::function<Matrix(const Matrix&)> grad_g;
  std::function<double(const Matrix&)> objective;
};

struct DcaTrace {
  std::vector<Matrix> iterates;          // filled only when keep_iterates
  std::vector<double> objective_values;  // f(X0), f(X1), ..., f(X_last)
  std::vector<double> step_norms;        // |X_k - X_{k-1}|_F per step
  std::size_t iterations_run = 0;
  Matrix last;
};

// Alternate Y_k in dh(X_{k-1}), X_k in dg*(Y_k) for up to n_inner steps,
// stopping early once the relative step |X_k - X_{k-1}|_F falls to
// tol * (1 + |X_{k-1}|_F). tol = 0 reproduces a fixed-count run.
inline DcaTrace dca_run(const DcOracles& oracles, const Matrix& x0, std::size_t n_inner,
                        double tol, bool keep_iterates = false) {
  if (n_inner < 1) throw DomainError("dca_run: n_inner must be >= 1");
  if (tol < 0.0) throw DomainError("dca_run: tol must be >= 0");

  DcaTrace trace;
  Matrix x = x0;
  trace.objective_values.push_back(oracles.objective(x));
  if (keep_iterates) trace.iterates.push_back(x);

  for (std::size_t k = 1; k <= n_inner; ++k) {
    const Matrix y = oracles.h_subgrad(x);
    if (!y.all_finite()) throw NumericalFailure("dca_run: h_subgrad produced non-finite values", k);
    Matrix next = oracles.g_conj_grad(y);
    if (!next.all_finite())
      throw NumericalFailure("dca_run: g_conj_grad produced non-finite values", k);

    const double prev_norm = frobenius_norm(x);
    const double step = frobenius_norm(next - x);
    x = std::move(next);
    trace.iterations_run = k;
    trace.step_norms.push_back(step);
    trace.objective_values.push_back(oracles.objective(x));
    if (keep_iterates) trace.iterates.push_back(x);
    if (tol > 0.0 && step <= tol * (1.0 + prev_norm)) break;
  }

  trace.last = std::move(x);
  return trace;
}

// Sufficient criticality check through the available selections:
// grad_g(x) close to the chosen subgradient of h means dg(x) and dh(x) meet.
inline bool is_critical(const DcOracles& oracles, const Matrix& x, double eps) {
  if (eps < 0.0) throw DomainError("is_critical: eps must be >= 0");
  const Matrix gg = oracles.grad_g(x);
  const Matrix hs = oracles.h_subgrad(x);
  return frobenius_norm(gg - hs) <= eps * (1.0 + frobenius_norm(gg));
}

}  // namespace bhc
