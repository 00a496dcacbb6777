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

// Model II instance: k cluster centers plus a free total center occupying
// row k+1 of a (k+1) x n variable matrix.
struct ModelTwoProblem {
  Matrix data;
  std::size_t k;
  double lambda;
  double mu;

  ModelTwoProblem(Matrix data_, std::size_t k_, double lambda_, double mu_)
      : data(std::move(data_)), k(k_), lambda(lambda_), mu(mu_) {
    if (data.rows() == 0 || data.cols() == 0) throw DomainError("model II: empty data");
    if (!data.all_finite()) throw DomainError("model II: data has non-finite entries");
    if (k < 2) throw DomainError("model II: k must be >= 2");
    if (k + 1 > data.rows()) throw DomainError("model II: k+1 must be <= number of nodes");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("model II: lambda must be > 0");
    if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("model II: mu must be > 0");
    node_sum_.assign(data.cols(), 0.0);
    for (std::size_t i = 0; i < data.rows(); ++i)
      for (std::size_t j = 0; j < data.cols(); ++j) node_sum_[j] += data(i, j);
  }

  std::size_t m() const { return data.rows(); }
  std::size_t n() const { return data.cols(); }
  std::size_t rows() const { return k + 1; }
  const std::vector<double>& node_sum() const { return node_sum_; }
  // c1 = 1 + (1+lambda) m, the diagonal weight of the g-gradient system.
  double c1() const { return 1.0 + (1.0 + lambda) * static_cast<double>(m()); }

 private:
  std::vector<double> node_sum_;
};

struct TrueObjective2 {
  double varphi;
  double phi;
  double f_lambda;
};

namespace model2 {

inline void require_shape(const ModelTwoProblem& p, const Matrix& x) {
  if (x.rows() != p.rows() || x.cols() != p.n())
    throw DimensionError("model II: X must be (k+1) x n");
}

inline TrueObjective2 true_objective(const ModelTwoProblem& p, const Matrix& x) {
  require_shape(p, x);
  auto total = x.row(p.k);
  double varphi = 0.0;
  for (std::size_t i = 0; i < p.m(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < p.k; ++l) best = std::min(best, dist(x.row(l), p.data.row(i)));
    varphi += best;
  }
  for (std::size_t l = 0; l < p.k; ++l) varphi += dist(x.row(l), total);
  double phi = 0.0;
  for (std::size_t l = 0; l < p.rows(); ++l) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.m(); ++i) best = std::min(best, dist(x.row(l), p.data.row(i)));
    phi += best;
  }
  return {varphi, phi, varphi + p.lambda * phi};
}

// --- DC components -------------------------------------------------------
//
//   g1 = (1+lambda)/(2mu) sum_i sum_{l=1..k+1} |x^l - a^i|^2
//   g2 = 1/(2mu) sum_{l<=k} |x^l - x^{k+1}|^2
//   h1 = 1/(2mu) sum_i |x^{k+1} - a^i|^2
//   h2 = lambda (mu/2) sum_i d((x^{k+1} - a^i)/mu; B)^2
//   h3 = (1+lambda)(mu/2) sum_i sum_{l<=k} d((x^l - a^i)/mu; B)^2
//   h4 = (mu/2) sum_{l<=k} d((x^l - x^{k+1})/mu; B)^2
//   h5 = sum_i max_{r<=k} sum_{l<=k, l!=r} |x^l - a^i|
//   h6 = lambda sum_{l=1..k+1} max_s sum_{i!=s} |x^l - a^i|

inline double value_g1(const ModelTwoProblem& p, const Matrix& x) {
  require_shape(p, x);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.m(); ++i)
    for (std::size_t l = 0; l < p.rows(); ++l) {
      const double r = dist(x.row(l), p.data.row(i));
      acc += r * r;
    }
  return (1.0 + p.lambda) / (2.0 * p.mu) * acc;
}

inline double value_g2(const ModelTwoProblem& p, const Matrix& x) {
  require_shape(p, x);
  auto total = x.row(p.k);
  double acc = 0.0;
  for (std::size_t l = 0; l < p.k; ++l) {
    const double r = dist(x.row(l), total);
    acc += r * r;
  }
  return acc / (2.0 * p.mu);
}

inline double value_h1(const ModelTwoProblem& p, const Matrix& x) {
  require_shape(p, x);
  auto total = x.row(p.k);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.m(); ++i) {
    const double r = dist(total, p.data.row(i));
    acc += r * r;
  }
  return acc / (2.0 * p.mu);
}

inline double value_h2(const ModelTwoProblem& p, const Matrix& x) {
  require_shape(p, x);
  auto total = x.row(p.k);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.m(); ++i)
    acc += smoothed_dist_excess(dist(total, p.data.row(i)), p.mu);
  return p.lambda * acc;
}

inline double value_h3(const ModelTwoProblem& p, const Matrix& x) {
  require_shape(p, x);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.m(); ++i)
    for (std::size_t l = 0; l < p.k; ++l)
      acc += smoothed_dist_excess(dist(x.row(l), p.data.row(i)), p.mu);
  return (1.0 + p.lambda) * acc;
}

inline double value_h4(const ModelTwoProblem& p, const Matrix& x) {
  require_shape(p, x);
  auto total = x.row(p.k);
  double acc = 0.0;
  for (std::size_t l = 0; l < p.k; ++l)
    acc += smoothed_dist_excess(dist(x.row(l), total), p.mu);
  return acc;
}

inline double value_h5(const ModelTwoProblem& p, const Matrix& x) {
  require_shape(p, x);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.m(); ++i) {
    double totald = 0.0, nearest = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < p.k; ++l) {
      const double r = dist(x.row(l), p.data.row(i));
      totald += r;
      nearest = std::min(nearest, r);
    }
    acc += totald - nearest;
  }
  return acc;
}

inline double value_h6(const ModelTwoProblem& p, const Matrix& x) {
  require_shape(p, x);
  double acc = 0.0;
  for (std::size_t l = 0; l < p.rows(); ++l) {
    double totald = 0.0, nearest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.m(); ++i) {
      const double r = dist(x.row(l), p.data.row(i));
      totald += r;
      nearest = std::min(nearest, r);
    }
    acc += totald - nearest;
  }
  return p.lambda * acc;
}

// g - h in the cancellation-free recombined form (see model I).
inline double smoothed_objective(const ModelTwoProblem& p, const Matrix& x) {
  require_shape(p, x);
  auto total = x.row(p.k);
  double min_node = 0.0, gap_clusters = 0.0;
  for (std::size_t i = 0; i < p.m(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < p.k; ++l) {
      const double r = dist(x.row(l), p.data.row(i));
      nearest = std::min(nearest, r);
      gap_clusters += smoothed_dist_gap(r, p.mu);
    }
    min_node += nearest;
  }
  double min_center = 0.0, gap_all = gap_clusters, links = 0.0;
  for (std::size_t l = 0; l < p.rows(); ++l) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.m(); ++i) {
      const double r = dist(x.row(l), p.data.row(i));
      nearest = std::min(nearest, r);
      if (l == p.k) gap_all += smoothed_dist_gap(r, p.mu);
    }
    min_center += nearest;
  }
  for (std::size_t l = 0; l < p.k; ++l)
    links += smoothed_dist(dist(x.row(l), total), p.mu);
  return min_node + gap_clusters + p.lambda * (min_center + gap_all) + links;
}

// grad g = (1/mu)[c1 I + T] X - ((1+lambda)/mu) E A. T couples the cluster
// rows with the total-center row: row l<=k picks up -x^{k+1}, row k+1 picks
// up (k-1) x^{k+1} - sum_{l<=k} x^l.
inline Matrix grad_g(const ModelTwoProblem& p, const Matrix& x) {
  require_shape(p, x);
  const std::vector<double>& s = p.node_sum();
  const double lam1 = 1.0 + p.lambda;
  const double c1 = p.c1();
  const double inv_mu = 1.0 / p.mu;
  Vector colsum(p.n(), 0.0);
  for (std::size_t l = 0; l < p.k; ++l)
    for (std::size_t j = 0; j < p.n(); ++j) colsum[j] += x(l, j);
  Matrix g(p.rows(), p.n());
  for (std::size_t l = 0; l < p.k; ++l)
    for (std::size_t j = 0; j < p.n(); ++j)
      g(l, j) = inv_mu * (c1 * x(l, j) - x(p.k, j) - lam1 * s[j]);
  for (std::size_t j = 0; j < p.n(); ++j)
    g(p.k, j) =
        inv_mu * ((c1 + static_cast<double>(p.k) - 1.0) * x(p.k, j) - colsum[j] - lam1 * s[j]);
  return g;
}

// Closed-form solution of [c1 I + T] X = (1+lambda) E A + mu Y, rowwise:
//   x^l      = (R_l + x^{k+1}) / c1                        for l <= k
//   x^{k+1}  = (c1 R_{k+1} + sum_l R_l) / ((c1 + k)(c1 - 1))
inline Matrix grad_g_conj(const ModelTwoProblem& p, const Matrix& y) {
  require_shape(p, y);
  const std::vector<double>& s = p.node_sum();
  const double lam1 = 1.0 + p.lambda;
  const double c1 = p.c1();
  const double denom = (c1 + static_cast<double>(p.k)) * (c1 - 1.0);
  if (!(denom > 0.0)) throw NumericalFailure("model II conjugate: singular system");
  Matrix r(p.rows(), p.n());
  for (std::size_t l = 0; l < p.rows(); ++l)
    for (std::size_t j = 0; j < p.n(); ++j)
      r(l, j) = lam1 * s[j] + p.mu * y(l, j);
  Vector rsum(p.n(), 0.0);
  for (std::size_t l = 0; l < p.k; ++l)
    for (std::size_t j = 0; j < p.n(); ++j) rsum[j] += r(l, j);
  Matrix x(p.rows(), p.n());
  for (std::size_t j = 0; j < p.n(); ++j)
    x(p.k, j) = (c1 * r(p.k, j) + rsum[j]) / denom;
  for (std::size_t l = 0; l < p.k; ++l)
    for (std::size_t j = 0; j < p.n(); ++j)
      x(l, j) = (r(l, j) + x(p.k, j)) / c1;
  return x;
}

// h1 touches only the total-center row.
inline Matrix grad_h1(const ModelTwoProblem& p, const Matrix& x) {
  require_shape(p, x);
  const std::vector<double>& s = p.node_sum();
  Matrix g(p.rows(), p.n());
  for (std::size_t j = 0; j < p.n(); ++j)
    g(p.k, j) = (static_cast<double>(p.m()) * x(p.k, j) - s[j]) / p.mu;
  return g;
}

inline Matrix grad_h2(const ModelTwoProblem& p, const Matrix& x) {
  require_shape(p, x);
  auto total = x.row(p.k);
  Matrix g(p.rows(), p.n());
  auto gt = g.row(p.k);
  for (std::size_t i = 0; i < p.m(); ++i) {
    auto ai = p.data.row(i);
    const double r = dist(total, ai);
    if (r > p.mu) {
      const double w = p.lambda * (r - p.mu) / (p.mu * r);
      for (std::size_t j = 0; j < p.n(); ++j) gt[j] += w * (total[j] - ai[j]);
    }
  }
  return g;
}

inline Matrix grad_h3(const ModelTwoProblem& p, const Matrix& x) {
  require_shape(p, x);
  const double lam1 = 1.0 + p.lambda;
  Matrix g(p.rows(), p.n());
  for (std::size_t l = 0; l < p.k; ++l) {
    auto xl = x.row(l);
    auto gl = g.row(l);
    for (std::size_t i = 0; i < p.m(); ++i) {
      auto ai = p.data.row(i);
      const double r = dist(xl, ai);
      if (r > p.mu) {
        const double w = lam1 * (r - p.mu) / (p.mu * r);
        for (std::size_t j = 0; j < p.n(); ++j) gl[j] += w * (xl[j] - ai[j]);
      }
    }
  }
  return g;
}

inline Matrix grad_h4(const ModelTwoProblem& p, const Matrix& x) {
  require_shape(p, x);
  auto total = x.row(p.k);
  Matrix g(p.rows(), p.n());
  auto gt = g.row(p.k);
  for (std::size_t l = 0; l < p.k; ++l) {
    auto xl = x.row(l);
    const double r = dist(xl, total);
    if (r > p.mu) {
      const double w = (r - p.mu) / (p.mu * r);
      auto gl = g.row(l);
      for (std::size_t j = 0; j < p.n(); ++j) {
        const double v = w * (xl[j] - total[j]);
        gl[j] = v;
        gt[j] -= v;
      }
    }
  }
  return g;
}

// Subgradient of h5; the total-center row never participates.
inline Matrix subgrad_h5(const ModelTwoProblem& p, const Matrix& x) {
  require_shape(p, x);
  Matrix w(p.rows(), p.n());
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

// Subgradient of h6; covers all k+1 rows.
inline Matrix subgrad_h6(const ModelTwoProblem& p, const Matrix& x) {
  require_shape(p, x);
  Matrix w(p.rows(), p.n());
  std::vector<double> d(p.m());
  for (std::size_t l = 0; l < p.rows(); ++l) {
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

inline DcOracles make_oracles(const ModelTwoProblem& p) {
  DcOracles o;
  o.h_subgrad = [p](const Matrix& x) {
    Matrix y = grad_h1(p, x);
    y += grad_h2(p, x);
    y += grad_h3(p, x);
    y += grad_h4(p, x);
    y += subgrad_h5(p, x);
    y += subgrad_h6(p, x);
    return y;
  };
  o.g_conj_grad = [p](const Matrix& y) { return grad_g_conj(p, y); };
  o.grad_g = [p](const Matrix& x) { return grad_g(p, x); };
  o.objective = [p](const Matrix& x) { return smoothed_objective(p, x); };
  return o;
}

}  // namespace model2
}  // namespace bhc
