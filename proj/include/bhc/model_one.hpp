#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "bhc/dca.hpp"
#include "bhc/errors.hpp"
#include "bhc/matrix.hpp"
#include "bhc/smoothing.hpp"

namespace bhc {

// Model I instance: k artificial cluster centers (rows of a k x n variable
// matrix X), the total center fixed to their centroid, penalty lambda and
// smoothing mu. The data matrix A is m x n with one node per row.
struct ModelOneProblem {
  Matrix data;
  std::size_t k;
  double lambda;
  double mu;

  ModelOneProblem(Matrix data_, std::size_t k_, double lambda_, double mu_)
      : data(std::move(data_)), k(k_), lambda(lambda_), mu(mu_) {
    if (data.rows() == 0 || data.cols() == 0) throw DomainError("model I: empty data");
    if (!data.all_finite()) throw DomainError("model I: data has non-finite entries");
    if (k < 2) throw DomainError("model I: k must be >= 2");
    if (k > data.rows()) throw DomainError("model I: k must be <= number of nodes");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("model I: lambda must be > 0");
    if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("model I: mu must be > 0");
    node_sum_.assign(data.cols(), 0.0);
    for (std::size_t i = 0; i < data.rows(); ++i)
      for (std::size_t j = 0; j < data.cols(); ++j) node_sum_[j] += data(i, j);
  }

  std::size_t m() const { return data.rows(); }
  std::size_t n() const { return data.cols(); }
  // Column sums of A; the row every row of S = E_km A equals.
  const std::vector<double>& node_sum() const { return node_sum_; }

 private:
  std::vector<double> node_sum_;
};

struct TrueObjective {
  double varphi;    // tree cost: node-to-nearest-center plus center-to-centroid links
  double phi;       // penalty: per-center distance to the nearest node
  double f_lambda;  // varphi + lambda * phi
};

namespace model1 {

inline void require_shape(const ModelOneProblem& p, const Matrix& x) {
  if (x.rows() != p.k || x.cols() != p.n())
    throw DimensionError("model I: X must be k x n");
}

inline Vector centroid_row(const Matrix& x) {
  Vector c(x.cols(), 0.0);
  for (std::size_t l = 0; l < x.rows(); ++l)
    for (std::size_t j = 0; j < x.cols(); ++j) c[j] += x(l, j);
  const double inv = 1.0 / static_cast<double>(x.rows());
  for (double& v : c) v *= inv;
  return c;
}

inline TrueObjective true_objective(const ModelOneProblem& p, const Matrix& x) {
  require_shape(p, x);
  const Vector c = centroid_row(x);
  double varphi = 0.0;
  for (std::size_t i = 0; i < p.m(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < p.k; ++l) best = std::min(best, dist(x.row(l), p.data.row(i)));
    varphi += best;
  }
  for (std::size_t l = 0; l < p.k; ++l) varphi += dist(x.row(l), c);
  double phi = 0.0;
  for (std::size_t l = 0; l < p.k; ++l) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.m(); ++i) best = std::min(best, dist(x.row(l), p.data.row(i)));
    phi += best;
  }
  return {varphi, phi, varphi + p.lambda * phi};
}

// --- DC components -------------------------------------------------------
//
// f_{lambda,mu} = (g1 + g2) - (h1 + h2 + h3 + h4) with
//   g1 = (1+lambda)/(2mu) sum_i sum_l |x^l - a^i|^2
//   g2 = 1/(2mu) sum_l |x^l - x*|^2
//   h1 = (1+lambda)(mu/2) sum_i sum_l d((x^l - a^i)/mu; B)^2
//   h2 = (mu/2) sum_l d((x^l - x*)/mu; B)^2
//   h3 = sum_i max_r sum_{l != r} |x^l - a^i|
//   h4 = lambda sum_l max_s sum_{i != s} |x^l - a^i|

inline double value_g1(const ModelOneProblem& p, const Matrix& x) {
  require_shape(p, x);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.m(); ++i)
    for (std::size_t l = 0; l < p.k; ++l) {
      const double r = dist(x.row(l), p.data.row(i));
      acc += r * r;
    }
  return (1.0 + p.lambda) / (2.0 * p.mu) * acc;
}

inline double value_g2(const ModelOneProblem& p, const Matrix& x) {
  require_shape(p, x);
  const Vector c = centroid_row(x);
  double acc = 0.0;
  for (std::size_t l = 0; l < p.k; ++l) {
    const double r = dist(x.row(l), c);
    acc += r * r;
  }
  return acc / (2.0 * p.mu);
}

inline double value_h1(const ModelOneProblem& p, const Matrix& x) {
  require_shape(p, x);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.m(); ++i)
    for (std::size_t l = 0; l < p.k; ++l)
      acc += smoothed_dist_excess(dist(x.row(l), p.data.row(i)), p.mu);
  return (1.0 + p.lambda) * acc;
}

inline double value_h2(const ModelOneProblem& p, const Matrix& x) {
  require_shape(p, x);
  const Vector c = centroid_row(x);
  double acc = 0.0;
  for (std::size_t l = 0; l < p.k; ++l)
    acc += smoothed_dist_excess(dist(x.row(l), c), p.mu);
  return acc;
}

inline double value_h3(const ModelOneProblem& p, const Matrix& x) {
  require_shape(p, x);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.m(); ++i) {
    double total = 0.0, nearest = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < p.k; ++l) {
      const double r = dist(x.row(l), p.data.row(i));
      total += r;
      nearest = std::min(nearest, r);
    }
    acc += total - nearest;  // max_r of the sum excluding r drops the nearest term
  }
  return acc;
}

inline double value_h4(const ModelOneProblem& p, const Matrix& x) {
  require_shape(p, x);
  double acc = 0.0;
  for (std::size_t l = 0; l < p.k; ++l) {
    double total = 0.0, nearest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.m(); ++i) {
      const double r = dist(x.row(l), p.data.row(i));
      total += r;
      nearest = std::min(nearest, r);
    }
    acc += total - nearest;
  }
  return p.lambda * acc;
}

// f_{lambda,mu} = g - h evaluated in the recombined per-term form
//   sum_i min_l |x^l-a^i|  +  lambda sum_l min_i |x^l-a^i|
//   + (1+lambda) sum_i sum_l [phi_mu - |.|]  + lambda-free link terms,
// which is algebraically identical but avoids the huge mutually-cancelling
// quadratic sums at small mu / large lambda.
inline double smoothed_objective(const ModelOneProblem& p, const Matrix& x) {
  require_shape(p, x);
  const Vector c = centroid_row(x);
  double min_node = 0.0, min_center = 0.0, gap = 0.0, links = 0.0;
  for (std::size_t i = 0; i < p.m(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < p.k; ++l) {
      const double r = dist(x.row(l), p.data.row(i));
      nearest = std::min(nearest, r);
      gap += smoothed_dist_gap(r, p.mu);
    }
    min_node += nearest;
  }
  for (std::size_t l = 0; l < p.k; ++l) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.m(); ++i)
      nearest = std::min(nearest, dist(x.row(l), p.data.row(i)));
    min_center += nearest;
    links += smoothed_dist(dist(x.row(l), c), p.mu);
  }
  return min_node + p.lambda * min_center + (1.0 + p.lambda) * gap + links;
}

// grad g = (1/mu)[(((1+lambda)m + 1) I - J) X - (1+lambda) S],
// J = (1/k) E_kk, S = E_km A. JX replicates the centroid row and every row
// of S is the column-sum row of A, so neither matrix is materialized.
inline Matrix grad_g(const ModelOneProblem& p, const Matrix& x) {
  require_shape(p, x);
  const Vector c = centroid_row(x);
  const std::vector<double>& s = p.node_sum();
  const double diag = (1.0 + p.lambda) * static_cast<double>(p.m()) + 1.0;
  const double inv_mu = 1.0 / p.mu;
  Matrix g(p.k, p.n());
  for (std::size_t l = 0; l < p.k; ++l)
    for (std::size_t j = 0; j < p.n(); ++j)
      g(l, j) = inv_mu * (diag * x(l, j) - c[j] - (1.0 + p.lambda) * s[j]);
  return g;
}

// grad g* via the paper's closed-form inverse of (c I - J) with
// c = 1 + (1+lambda) m:
//   X = [(1/c) I + (1/(c (1+lambda) m)) J] ((1+lambda) S + mu Y).
inline Matrix grad_g_conj(const ModelOneProblem& p, const Matrix& y) {
  require_shape(p, y);
  const std::vector<double>& s = p.node_sum();
  const double lam1 = 1.0 + p.lambda;
  const double c = 1.0 + lam1 * static_cast<double>(p.m());
  Matrix r(p.k, p.n());
  for (std::size_t l = 0; l < p.k; ++l)
    for (std::size_t j = 0; j < p.n(); ++j)
      r(l, j) = lam1 * s[j] + p.mu * y(l, j);
  const Vector rbar = centroid_row(r);  // (JR)_l = mean row of R
  const double coupling = 1.0 / (c * lam1 * static_cast<double>(p.m()));
  Matrix x(p.k, p.n());
  for (std::size_t l = 0; l < p.k; ++l)
    for (std::size_t j = 0; j < p.n(); ++j)
      x(l, j) = r(l, j) / c + coupling * rbar[j];
  return x;
}

inline Matrix grad_h1(const ModelOneProblem& p, const Matrix& x) {
  require_shape(p, x);
  Matrix g(p.k, p.n());
  const double lam1 = 1.0 + p.lambda;
  for (std::size_t l = 0; l < p.k; ++l) {
    auto xl = x.row(l);
    auto gl = g.row(l);
    for (std::size_t i = 0; i < p.m(); ++i) {
      auto ai = p.data.row(i);
      const double r = dist(xl, ai);
      if (r > p.mu) {
        // (x-a)/mu - P((x-a)/mu; B) = ((r - mu)/(mu r)) (x - a)
        const double w = lam1 * (r - p.mu) / (p.mu * r);
        for (std::size_t j = 0; j < p.n(); ++j) gl[j] += w * (xl[j] - ai[j]);
      }
    }
  }
  return g;
}

inline Matrix grad_h2(const ModelOneProblem& p, const Matrix& x) {
  require_shape(p, x);
  const Vector c = centroid_row(x);
  Matrix q(p.k, p.n());
  for (std::size_t l = 0; l < p.k; ++l) {
    auto xl = x.row(l);
    const double r = dist(xl, std::span<const double>(c));
    if (r > p.mu) {
      const double w = (r - p.mu) / (p.mu * r);
      for (std::size_t j = 0; j < p.n(); ++j) q(l, j) = w * (xl[j] - c[j]);
    }
  }
  const Vector qbar = centroid_row(q);  // the -(1/k) sum_j coupling term
  for (std::size_t l = 0; l < p.k; ++l)
    for (std::size_t j = 0; j < p.n(); ++j) q(l, j) -= qbar[j];
  return q;
}

// Subgradient of h3. For each node i the active index r* is the one whose
// excluded term is the nearest center (that maximizes the remaining sum);
// ties take the smallest index, and coincident center/node rows contribute
// the zero element of the norm's subdifferential.
inline Matrix subgrad_h3(const ModelOneProblem& p, const Matrix& x) {
  require_shape(p, x);
  Matrix w(p.k, p.n());
  std::vector<double> d(p.k);
  for (std::size_t i = 0; i < p.m(); ++i) {
    auto ai = p.data.row(i);
    std::size_t rstar = 0;
    for (std::size_t l = 0; l < p.k; ++l) {
      d[l] = dist(x.row(l), ai);
      if (d[l] < d[rstar]) rstar = l;
    }
    for (std::size_t l = 0; l < p.k; ++l) {
      if (l == rstar || d[l] == 0.0) continue;
      auto xl = x.row(l);
      auto wl = w.row(l);
      const double inv = 1.0 / d[l];
      for (std::size_t j = 0; j < p.n(); ++j) wl[j] += inv * (xl[j] - ai[j]);
    }
  }
  return w;
}

inline Matrix subgrad_h4(const ModelOneProblem& p, const Matrix& x) {
  require_shape(p, x);
  Matrix w(p.k, p.n());
  std::vector<double> d(p.m());
  for (std::size_t l = 0; l < p.k; ++l) {
    auto xl = x.row(l);
    std::size_t sstar = 0;
    for (std::size_t i = 0; i < p.m(); ++i) {
      d[i] = dist(xl, p.data.row(i));
      if (d[i] < d[sstar]) sstar = i;
    }
    auto wl = w.row(l);
    for (std::size_t i = 0; i < p.m(); ++i) {
      if (i == sstar || d[i] == 0.0) continue;
      auto ai = p.data.row(i);
      const double inv = p.lambda / d[i];
      for (std::size_t j = 0; j < p.n(); ++j) wl[j] += inv * (xl[j] - ai[j]);
    }
  }
  return w;
}

inline DcOracles make_oracles(const ModelOneProblem& p) {
  DcOracles o;
  o.h_subgrad = [p](const Matrix& x) {
    Matrix y = grad_h1(p, x);
    y += grad_h2(p, x);
    y += subgrad_h3(p, x);
    y += subgrad_h4(p, x);
    return y;
  };
  o.g_conj_grad = [p](const Matrix& y) { return grad_g_conj(p, y); };
  o.grad_g = [p](const Matrix& x) { return grad_g(p, x); };
  o.objective = [p](const Matrix& x) { return smoothed_objective(p, x); };
  return o;
}

}  // namespace model1
}  // namespace bhc
