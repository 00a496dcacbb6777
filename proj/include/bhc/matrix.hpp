#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "bhc/errors.hpp"

namespace bhc {

using Vector = std::vector<double>;

// Dense row-major matrix. Rows are the working unit everywhere (data points,
// cluster centers), so row access hands out spans.
class Matrix {
 public:
  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_)
      throw DimensionError("matrix entries do not match rows*cols");
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  const std::vector<double>& entries() const { return data_; }

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  bool all_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  Matrix& operator+=(const Matrix& other) {
    require_same_shape(other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
  }

  Matrix& operator-=(const Matrix& other) {
    require_same_shape(other);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
  }

  Matrix& operator*=(double s) {
    for (double& v : data_) v *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, double s) { return a *= s; }
  friend Matrix operator*(double s, Matrix a) { return a *= s; }

  bool operator==(const Matrix& other) const = default;

 private:
  void require_same_shape(const Matrix& other) const {
    if (!same_shape(other)) throw DimensionError("matrix shape mismatch");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// trace(X^T Y) = sum of elementwise products.
inline double frobenius_inner(const Matrix& x, const Matrix& y) {
  if (!x.same_shape(y)) throw DimensionError("frobenius_inner: shape mismatch");
  double acc = 0.0;
  const double* a = x.data();
  const double* b = y.data();
  for (std::size_t i = 0; i < x.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double frobenius_norm(const Matrix& x) { return std::sqrt(frobenius_inner(x, x)); }

inline double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("dot: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double norm(std::span<const double> a) {
  double acc = 0.0;
  for (double v : a) acc += v * v;
  return std::sqrt(acc);
}

inline double dist(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("dist: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

// Euclidean projection onto the closed unit ball. Points with norm exactly 1
// are returned unchanged (the boundary belongs to the ball).
inline Vector project_ball(std::span<const double> v) {
  const double r = norm(v);
  Vector out(v.begin(), v.end());
  if (r > 1.0) {
    const double inv = 1.0 / r;
    for (double& x : out) x *= inv;
  }
  return out;
}

// Euclidean distance to the closed unit ball: max(0, |v| - 1).
inline double dist_ball(std::span<const double> v) {
  const double r = norm(v);
  return r > 1.0 ? r - 1.0 : 0.0;
}

}  // namespace bhc
