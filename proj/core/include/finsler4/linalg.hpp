#pragma once

// Fixed-size 4-dimensional tensor containers and the few dense kernels the
// geometry needs. Templated on the scalar ring so the same code runs on
// doubles and on Jets.

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "finsler4/error.hpp"
#include "finsler4/ring.hpp"

namespace finsler4 {

template <class T>
using Vec4 = std::array<T, kDim>;
template <class T>
using Mat4 = std::array<Vec4<T>, kDim>;
template <class T>
using Ten3 = std::array<Mat4<T>, kDim>;
template <class T>
using Ten4 = std::array<Ten3<T>, kDim>;

using Vec4d = Vec4<double>;
using Mat4d = Mat4<double>;
using Ten3d = Ten3<double>;
using Ten4d = Ten4<double>;

inline Mat4d identity4() {
  Mat4d m{};
  for (int i = 0; i < kDim; ++i) m[i][i] = 1.0;
  return m;
}

template <class T>
Vec4d values(const Vec4<T>& v) {
  Vec4d out{};
  for (int i = 0; i < kDim; ++i) out[i] = ring::value(v[i]);
  return out;
}

template <class T>
Mat4d values(const Mat4<T>& m) {
  Mat4d out{};
  for (int i = 0; i < kDim; ++i) out[i] = values(m[i]);
  return out;
}

template <class T>
Ten3d values(const Ten3<T>& t) {
  Ten3d out{};
  for (int i = 0; i < kDim; ++i) out[i] = values(t[i]);
  return out;
}

/// v^T A w
template <class T>
T bilinear(const Mat4<T>& a, const Vec4<T>& v, const Vec4<T>& w) {
  T acc{};
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) acc += a[i][j] * v[i] * w[j];
  return acc;
}

template <class T>
Vec4<T> mat_vec(const Mat4<T>& a, const Vec4<T>& v) {
  Vec4<T> out{};
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) out[i] += a[i][j] * v[j];
  return out;
}

template <class T>
T dot(const Vec4<T>& a, const Vec4<T>& b) {
  T acc{};
  for (int i = 0; i < kDim; ++i) acc += a[i] * b[i];
  return acc;
}

double max_abs(const Vec4d& v);
double max_abs(const Mat4d& m);
double max_abs(const Ten3d& t);
double max_abs(const Ten4d& t);
double max_abs_diff(const Mat4d& a, const Mat4d& b);
double max_abs_diff(const Ten3d& a, const Ten3d& b);

/// |det A| must exceed 1e-12 times the product of the row norms (the
/// Hadamard bound); otherwise SingularMetric is raised.
inline constexpr double kSingularGuard = 1e-12;

/// Determinant of a real 4x4 matrix by partially pivoted LU.
double determinant(const Mat4d& a);

/// Inverse by partially pivoted Gauss-Jordan elimination. Pivots are chosen
/// on the values so the jet version follows the same elimination order.
template <class T>
Mat4<T> invert(const Mat4<T>& a) {
  const Mat4d av = values(a);
  double hadamard = 1.0;
  for (int i = 0; i < kDim; ++i) {
    double r = 0.0;
    for (int j = 0; j < kDim; ++j) r += av[i][j] * av[i][j];
    hadamard *= std::sqrt(r);
  }
  const double det = determinant(av);
  if (!(std::fabs(det) > kSingularGuard * hadamard)) {
    throw Error(ErrorKind::SingularMetric, "matrix is numerically singular (|det| = " +
                                               std::to_string(std::fabs(det)) + ")");
  }

  Mat4<T> m = a;
  Mat4<T> inv{};
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) inv[i][j] = ring::constant_like(i == j ? 1.0 : 0.0, a[0][0]);

  for (int col = 0; col < kDim; ++col) {
    int piv = col;
    double best = std::fabs(ring::value(m[col][col]));
    for (int r = col + 1; r < kDim; ++r) {
      const double v = std::fabs(ring::value(m[r][col]));
      if (v > best) {
        best = v;
        piv = r;
      }
    }
    std::swap(m[col], m[piv]);
    std::swap(inv[col], inv[piv]);
    const T p = m[col][col];
    for (int j = 0; j < kDim; ++j) {
      m[col][j] = m[col][j] / p;
      inv[col][j] = inv[col][j] / p;
    }
    for (int r = 0; r < kDim; ++r) {
      if (r == col) continue;
      const T f = m[r][col];
      for (int j = 0; j < kDim; ++j) {
        m[r][j] -= f * m[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

/// Cholesky-based test; true when every pivot is strictly positive.
bool is_positive_definite(const Mat4d& a);

}  // namespace finsler4
