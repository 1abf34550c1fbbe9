#pragma once

// Finite-difference reference values, independent of the jet engine. Used
// to cross-check the jet-based tensors.

#include <functional>
#include <vector>

#include "finsler4/jet.hpp"
#include "finsler4/linalg.hpp"
#include "finsler4/metric.hpp"

namespace finsler4 {

struct FDConfig {
  /// Base step. The actual step is step * c_k * max(f, |z|) for a partial of
  /// total order k, with c = (0.1, 0.2, 2) plain and (2, 5, 20) under
  /// Richardson extrapolation; f = 1 on x slots and |y| / 2 on y slots.
  double step = 1e-4;
  /// One level of Richardson extrapolation (h and h/2).
  bool richardson = true;
};

using PointFunction = std::function<double(const Vec4d& x, const Vec4d& y)>;
/// Extended-precision variant; stencil arithmetic is carried out in long double.
using PointFunctionExt =
    std::function<long double(const Vec4<long double>& x, const Vec4<long double>& y)>;

/// Central-difference partial derivative of total order 1..3 (order 0
/// returns the value). Throws UnsupportedOrder above 3 and
/// StencilLeavesDomain when f raises DomainViolation on a stencil point.
double fd_partial(const PointFunction& f, const SamplePoint& at, const MultiIndex& order,
                  const FDConfig& cfg = {});
double fd_partial(const PointFunctionExt& f, const SamplePoint& at, const MultiIndex& order,
                  const FDConfig& cfg = {});

struct OracleTensors {
  double L = 0.0;
  Mat4d g{};
  Ten3d C{};
  Vec4d G{};
  Mat4d N{};
};

/// g, C, G and N at (x, y) from extended-precision finite differences of L^2.
OracleTensors oracle_tensors(const MetricSpec& spec, const Vec4d& x, const Vec4d& y,
                             const FDConfig& cfg = {});

/// Reference orthonormal frame by modified Gram-Schmidt in plain doubles:
/// e[0] = y/L, e[1] along C^i, the rest from coordinate axes.
std::array<Vec4d, kDim> oracle_frame(const Mat4d& g, const Ten3d& C, const Vec4d& y, double L);

/// Normwise relative error max|a - b| / max(max|b|, floor).
double relative_error(const Mat4d& a, const Mat4d& b, double floor = 1e-12);
double relative_error(const Ten3d& a, const Ten3d& b, double floor = 1e-12);
double relative_error(const Vec4d& a, const Vec4d& b, double floor = 1e-12);

/// Largest jet-vs-oracle relative errors over a set of points. Floors keep
/// vanishing targets meaningful: with s = max|g|, C uses s/|y|, G uses
/// s |y|^2 and N uses s |y|.
struct OracleComparison {
  int points = 0;
  double g = 0.0;
  double C = 0.0;
  double G = 0.0;
  double N = 0.0;
  double max() const;
};

OracleComparison compare_with_oracle(const MetricSpec& spec, const std::vector<SamplePoint>& points,
                                     const FDConfig& cfg = {});

}  // namespace finsler4
