#include "finsler4/linalg.hpp"

namespace finsler4 {

double max_abs(const Vec4d& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

double max_abs(const Mat4d& a) {
  double m = 0.0;
  for (const auto& row : a) m = std::max(m, max_abs(row));
  return m;
}

double max_abs(const Ten3d& t) {
  double m = 0.0;
  for (const auto& s : t) m = std::max(m, max_abs(s));
  return m;
}

double max_abs(const Ten4d& t) {
  double m = 0.0;
  for (const auto& s : t) m = std::max(m, max_abs(s));
  return m;
}

double max_abs_diff(const Mat4d& a, const Mat4d& b) {
  double m = 0.0;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) m = std::max(m, std::fabs(a[i][j] - b[i][j]));
  return m;
}

double max_abs_diff(const Ten3d& a, const Ten3d& b) {
  double m = 0.0;
  for (int i = 0; i < kDim; ++i) m = std::max(m, max_abs_diff(a[i], b[i]));
  return m;
}

double determinant(const Mat4d& a) {
  Mat4d m = a;
  double det = 1.0;
  for (int col = 0; col < kDim; ++col) {
    int piv = col;
    for (int r = col + 1; r < kDim; ++r)
      if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
    if (m[piv][col] == 0.0) return 0.0;
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (int r = col + 1; r < kDim; ++r) {
      const double f = m[r][col] / m[col][col];
      for (int j = col; j < kDim; ++j) m[r][j] -= f * m[col][j];
    }
  }
  return det;
}

bool is_positive_definite(const Mat4d& a) {
  Mat4d l{};
  for (int i = 0; i < kDim; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a[i][j];
      for (int k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
      if (i == j) {
        if (!(s > 0.0)) return false;
        l[i][i] = std::sqrt(s);
      } else {
        l[i][j] = s / l[j][j];
      }
    }
  }
  return true;
}

}  // namespace finsler4
