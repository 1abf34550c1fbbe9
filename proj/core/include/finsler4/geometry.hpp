#pragma once

// Coordinate tensors of a Finsler metric at one point (x, y): the
// fundamental and Cartan tensors, geodesic spray, nonlinear and Cartan
// connections, h-/v-covariant derivatives, and the Berwald/Landsberg test
// tensors C_{ijk|h} and C_{ijk|0}.
//
// Index conventions: Mat4d m[i][j] is m_ij (or m^i_j for mixed objects);
// Ten3d t[i][j][k] is t_ijk or t^i_jk; the connection F[i][j][k] is F^i_jk.

#include "finsler4/jet.hpp"
#include "finsler4/linalg.hpp"
#include "finsler4/metric.hpp"

namespace finsler4 {

struct MetricTensorAt {
  Mat4d g{};
  Mat4d g_inv{};
  double L = 0.0;
  bool positive_definite = false;
};

struct CartanTensorAt {
  Ten3d C{};       ///< C_ijk
  Vec4d C_vec{};   ///< C_i = C_ijk g^jk
  double C_norm_sq = 0.0;  ///< g^ij C_i C_j (may be negative when g is indefinite)
  double C_norm = 0.0;     ///< sqrt(|C_norm_sq|)
};

struct SprayAt {
  Vec4d G{};       ///< G^i
  Mat4d N{};       ///< N^i_j = dG^i/dy^j
  Ten4d G_hess3{}; ///< [i][h][j][k] = d^3 G^i / dy^h dy^j dy^k
};

struct ConnectionAt {
  Ten3d F{};     ///< F^i_jk
  Ten3d Cmix{};  ///< C^i_jk = g^ir C_rjk
};

/// Jet depth used for the point evaluation of L. One x-derivative and five
/// y-derivatives of L cover the third y-derivatives of the spray.
inline constexpr DegreeCaps kPointCaps{1, 5};
/// Depth of the frame-level jets (one x- and one y-derivative).
inline constexpr DegreeCaps kFrameCaps{1, 1};

/// All tensors at one point, computed from a single jet evaluation of L.
class PointGeometry {
 public:
  static PointGeometry compute(const MetricSpec& spec, const Vec4d& x, const Vec4d& y);

  const Vec4d& x() const { return x_; }
  const Vec4d& y() const { return y_; }

  const MetricTensorAt& metric() const { return metric_; }
  const CartanTensorAt& cartan() const { return cartan_; }
  const SprayAt& spray() const { return spray_; }
  const ConnectionAt& connection() const { return connection_; }

  /// dL^2/dy^i (Euler: equals 2 g_ij y^j).
  const Vec4d& dL2_dy() const { return dL2_dy_; }
  /// d g_ij / d x^k as [k][i][j].
  const Ten3d& dg_dx() const { return dg_dx_; }

  /// C_{ijk|h} as [i][j][k][h].
  const Ten4d& cartan_h() const { return cartan_h_; }
  /// C_{ijk|0} = C_{ijk|h} y^h.
  const Ten3d& cartan_0() const { return cartan_0_; }

  // Jets of depth kFrameCaps, used to differentiate frame fields.
  const Jet& L_jet() const { return L11_; }
  const Vec4<Jet>& y_jet() const { return y11_; }
  const Mat4<Jet>& g_jet() const { return g11_; }
  const Mat4<Jet>& g_inv_jet() const { return ginv11_; }
  const Ten3<Jet>& C_jet() const { return C11_; }

  /// delta_k f = d_k f - N^r_k dot-d_r f for a jet with one x and one y order.
  double delta(const Jet& f, int k) const;

 private:
  Vec4d x_{}, y_{};
  MetricTensorAt metric_;
  CartanTensorAt cartan_;
  SprayAt spray_;
  ConnectionAt connection_;
  Vec4d dL2_dy_{};
  Ten3d dg_dx_{};
  Ten4d cartan_h_{};
  Ten3d cartan_0_{};
  Jet L11_;
  Vec4<Jet> y11_;
  Mat4<Jet> g11_, ginv11_;
  Ten3<Jet> C11_;
};

struct FundamentalTensors {
  MetricTensorAt metric;
  CartanTensorAt cartan;
};

struct SprayConnections {
  SprayAt spray;
  ConnectionAt connection;
};

struct CartanHDerivatives {
  Ten4d C_h{};  ///< [i][j][k][h]
  Ten3d C_0{};
};

FundamentalTensors fundamental_tensors(const MetricSpec& spec, const Vec4d& x, const Vec4d& y);
SprayConnections spray_and_connections(const MetricSpec& spec, const Vec4d& x, const Vec4d& y);
CartanHDerivatives cartan_hderivatives_of_C(const MetricSpec& spec, const Vec4d& x, const Vec4d& y);

struct ScalarDerivatives {
  Vec4d h{};  ///< X_{,k} = delta_k X
  Vec4d v{};  ///< dot-d_k X
};

struct CovectorDerivatives {
  Mat4d h{};  ///< X_{i|k}
  Mat4d v{};  ///< v-covariant derivative of X_i along k
};

/// Dimensionless tensor-route residuals at a point. With s = max|g| / |y|:
///   riemannian        = max|C| / s
///   locally_minkowski = max|d_x g| / max|g|
///   berwald           = max|C_{ijk|h}| / s
///   landsberg         = max|C_{ijk|0}| / (s * |y|_1)   (never exceeds berwald)
///   spray_cubic       = max|d^3 G / dy^3| * |y|
struct TensorResiduals {
  double riemannian = 0.0;
  double locally_minkowski = 0.0;
  double berwald = 0.0;
  double landsberg = 0.0;
  double spray_cubic = 0.0;
};

TensorResiduals tensor_residuals(const PointGeometry& geo);

ScalarDerivatives covariant_derivatives(const Jet& field, const PointGeometry& geo);
CovectorDerivatives covariant_derivatives(const Vec4<Jet>& field, const PointGeometry& geo);

}  // namespace finsler4
