#pragma once

#include <cmath>
#include <span>

#include "bhc/errors.hpp"
#include "bhc/matrix.hpp"

namespace bhc {

// Smoothing parameter mu > 0 for the smooth approximation of |x - a|.
struct SmoothingParam {
  double mu;
  explicit SmoothingParam(double mu_) : mu(mu_) {
    if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("smoothing parameter mu must be > 0");
  }
};

// Smoothed distance value as a function of r = |x - a|:
//   (1/2mu)r^2 - (mu/2)[max(0, r/mu - 1)]^2,
// which collapses to r^2/(2mu) for r <= mu and r - mu/2 for r >= mu.
// Both branches coincide at r = mu.
inline double smoothed_dist(double r, double mu) {
  return r >= mu ? r - 0.5 * mu : r * r / (2.0 * mu);
}

// smoothed_dist(r) - r. Lies in [-mu/2, 0]; used to assemble objectives
// without forming the large quadratic terms that cancel.
inline double smoothed_dist_gap(double r, double mu) {
  return r >= mu ? -0.5 * mu : r * r / (2.0 * mu) - r;
}

// The subtracted quadratic penalty (mu/2)[d((x-a)/mu; B)]^2 as a function
// of r; equals (r - mu)^2 / (2 mu) outside the ball, 0 inside.
inline double smoothed_dist_excess(double r, double mu) {
  if (r <= mu) return 0.0;
  const double t = r - mu;
  return t * t / (2.0 * mu);
}

// Smooth approximation of |x - a|; underestimates it by at most mu/2.
inline double smooth_norm(std::span<const double> x, std::span<const double> a,
                          const SmoothingParam& p) {
  return smoothed_dist(dist(x, a), p.mu);
}

// Gradient of smooth_norm in x: the projection of (x - a)/mu onto the unit
// ball. Always has norm <= 1.
inline Vector smooth_norm_grad(std::span<const double> x, std::span<const double> a,
                               const SmoothingParam& p) {
  if (x.size() != a.size()) throw DimensionError("smooth_norm_grad: length mismatch");
  const double r = dist(x, a);
  Vector g(x.size());
  const double scale = r >= p.mu ? 1.0 / r : 1.0 / p.mu;
  for (std::size_t i = 0; i < x.size(); ++i) g[i] = scale * (x[i] - a[i]);
  return g;
}

}  // namespace bhc
