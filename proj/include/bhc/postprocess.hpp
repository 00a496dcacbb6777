#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

#include "bhc/errors.hpp"
#include "bhc/matrix.hpp"

namespace bhc {

// Discrete solution after snapping: k cluster-center node indices, a total
// center drawn from the remaining nodes, the per-node assignment (values
// 0..k-1 for cluster slots, k for the total center) and the tree cost.
struct SnappedSolution {
  std::vector<std::size_t> cluster_centers;
  std::size_t total_center = 0;
  std::vector<std::size_t> assignment;
  double cost = 0.0;
};

// Map each of the first k_rows center rows to its nearest node. Ties break
// to the smallest node index; a node already taken by an earlier center is
// skipped so the k snapped centers stay distinct.
inline std::vector<std::size_t> snap_centers(const Matrix& x, const Matrix& a,
                                             std::size_t k_rows) {
  if (a.rows() == 0) throw DomainError("snap_centers: empty data");
  if (k_rows > x.rows()) throw DimensionError("snap_centers: k_rows exceeds center rows");
  if (k_rows > a.rows()) throw DomainError("snap_centers: more centers than nodes");
  if (x.cols() != a.cols()) throw DimensionError("snap_centers: dimension mismatch");
  std::vector<std::size_t> centers;
  centers.reserve(k_rows);
  std::vector<bool> used(a.rows(), false);
  for (std::size_t l = 0; l < k_rows; ++l) {
    std::size_t best = a.rows();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (used[i]) continue;
      const double d = dist(x.row(l), a.row(i));
      if (d < best_d) {
        best_d = d;
        best = i;
      }
    }
    used[best] = true;
    centers.push_back(best);
  }
  return centers;
}

// The total center is the remaining node minimizing the sum of distances to
// the snapped cluster centers; smallest index on ties.
inline std::size_t pick_total_center(const std::vector<std::size_t>& centers, const Matrix& a) {
  if (centers.size() >= a.rows()) throw DomainError("pick_total_center: no remaining node");
  std::vector<bool> taken(a.rows(), false);
  for (std::size_t c : centers) taken[c] = true;
  std::size_t best = a.rows();
  double best_sum = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (taken[i]) continue;
    double s = 0.0;
    for (std::size_t c : centers) s += dist(a.row(c), a.row(i));
    if (s < best_sum) {
      best_sum = s;
      best = i;
    }
  }
  return best;
}

// Cost = sum_i min over the k+1 chosen nodes of |node_c - a^i|
//        + sum over cluster centers of |center - total|.
// The min ranges over the total center too: nodes may attach to it directly.
inline double tree_cost(const std::vector<std::size_t>& centers, std::size_t total,
                        const Matrix& a) {
  double cost = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double best = dist(a.row(total), a.row(i));
    for (std::size_t c : centers) best = std::min(best, dist(a.row(c), a.row(i)));
    cost += best;
  }
  for (std::size_t c : centers) cost += dist(a.row(c), a.row(total));
  return cost;
}

// Per-node nearest-center slots: 0..k-1 for cluster centers, k for the total
// center; ties resolve to the smallest slot.
inline std::vector<std::size_t> assign_nodes(const std::vector<std::size_t>& centers,
                                             std::size_t total, const Matrix& a) {
  std::vector<std::size_t> assignment(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::size_t slot = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const double d = dist(a.row(centers[c]), a.row(i));
      if (d < best) {
        best = d;
        slot = c;
      }
    }
    if (dist(a.row(total), a.row(i)) < best) slot = centers.size();
    assignment[i] = slot;
  }
  return assignment;
}

inline double tree_cost(const SnappedSolution& s, const Matrix& a) {
  return tree_cost(s.cluster_centers, s.total_center, a);
}

// Snap the first k rows of X, pick the total center, assign and cost.
inline SnappedSolution snap_solution(const Matrix& x, const Matrix& a, std::size_t k) {
  SnappedSolution s;
  s.cluster_centers = snap_centers(x, a, k);
  s.total_center = pick_total_center(s.cluster_centers, a);
  s.assignment = assign_nodes(s.cluster_centers, s.total_center, a);
  s.cost = tree_cost(s.cluster_centers, s.total_center, a);
  return s;
}

struct DiscreteOptimum {
  double cost = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> cluster_centers;
  std::size_t total_center = 0;
};

// Exhaustive minimum of tree_cost over all k-subsets of nodes as cluster
// centers times all remaining nodes as total center. Desk-scale only; the
// work budget guards against accidental huge enumerations.
inline DiscreteOptimum discrete_optimum(const Matrix& a, std::size_t k,
                                        double max_cost_evals = 2.0e7) {
  const std::size_t m = a.rows();
  if (k < 1 || k >= m) throw DomainError("discrete_optimum: need 1 <= k < m");
  double combos = 1.0;
  for (std::size_t i = 0; i < k; ++i)
    combos *= static_cast<double>(m - i) / static_cast<double>(i + 1);
  if (combos * static_cast<double>(m - k) > max_cost_evals)
    throw DomainError("discrete_optimum: instance too large to enumerate");

  DiscreteOptimum best;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    for (std::size_t t = 0; t < m; ++t) {
      if (std::find(idx.begin(), idx.end(), t) != idx.end()) continue;
      const double c = tree_cost(idx, t, a);
      if (c < best.cost) {
        best.cost = c;
        best.cluster_centers = idx;
        best.total_center = t;
      }
    }
    // next k-combination in lexicographic order
    std::size_t pos = k;
    while (pos > 0 && idx[pos - 1] == m - k + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::size_t j = pos; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return best;
}

}  // namespace bhc
