#pragma once

// Miron frame (l, m, n, p) with a deterministic gauge, frame components of
// tensors, the eight main scalars, h- and v-connection vectors, and the
// frame derivatives of the main scalars.
//
// Frame indices are 0-based in code: alpha = 0, 1, 2, 3 stand for the
// frame vectors l, m, n, p (written e_(1)..e_(4) in the literature).

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "finsler4/geometry.hpp"

namespace finsler4 {

struct FrameSettings {
  double tau_C = 1e-7;           ///< minimum torsion norm C
  double seed_threshold = 1e-6;  ///< seeds with a smaller orthogonal residual are skipped
  double sign_threshold = 1e-9;  ///< first component above this fixes the sign of n and p
};

/// Seed axes (0-based coordinate indices) used for n and p, and whether the
/// sign rule flipped them.
struct GaugeTag {
  std::array<int, 2> seed_axis{-1, -1};
  std::array<bool, 2> flipped{false, false};
  std::string to_string() const;
};

struct FrameBundle {
  std::array<Vec4d, kDim> e{};       ///< e[alpha][i] = e_(alpha)^i
  std::array<Vec4d, kDim> e_flat{};  ///< e_flat[alpha][i] = g_ij e_(alpha)^j
  GaugeTag gauge;
  double L = 0.0;
  double C_norm = 0.0;
  /// max over the 10 pairs alpha <= beta of |g(e_alpha, e_beta) - delta|.
  double orthonormality_residual = 0.0;
};

FrameBundle build_miron_frame(const MetricTensorAt& g, const CartanTensorAt& C, const Vec4d& y,
                              const FrameSettings& settings = {});
FrameBundle build_miron_frame(const PointGeometry& geo, const FrameSettings& settings = {});

/// Frame components of a tensor with 1 to 3 indices. `data` holds 4^rank
/// entries in row-major index order; `variance` has one character per index,
/// 'u' (contravariant) or 'd' (covariant). Throws VarianceMismatch.
std::vector<double> scalar_components(const std::vector<double>& data, std::string_view variance,
                                      const FrameBundle& frame);
/// Inverse of scalar_components: coordinate tensor from frame components.
std::vector<double> tensor_from_components(const std::vector<double>& components,
                                           std::string_view variance, const FrameBundle& frame);

inline constexpr int kNumMainScalars = 8;
inline constexpr std::array<std::string_view, kNumMainScalars> kMainScalarNames{
    "H", "I", "J", "K", "H'", "I'", "J'", "K'"};

/// Frame slots (0-based alpha, beta, gamma) of M = L C_(alpha beta gamma)
/// holding each main scalar, in kMainScalarNames order. This is the single
/// place where the naming convention lives:
///   H = M_222, I = M_233, J = M_223, K = M_244,
///   H' = M_333, I' = M_334, J' = M_234, K' = M_224   (1-based frame labels).
const std::array<std::array<int, 3>, kNumMainScalars>& main_scalar_slots();

struct MainScalars {
  std::array<double, kNumMainScalars> values{};
  double H() const { return values[0]; }
  double I() const { return values[1]; }
  double J() const { return values[2]; }
  double K() const { return values[3]; }
  double Hp() const { return values[4]; }
  double Ip() const { return values[5]; }
  double Jp() const { return values[6]; }
  double Kp() const { return values[7]; }
};

/// M[alpha][beta][gamma] = L C_ijk e_(alpha)^i e_(beta)^j e_(gamma)^k.
Ten3d main_scalar_tensor(const CartanTensorAt& C, const FrameBundle& frame, double L);
MainScalars main_scalars(const CartanTensorAt& C, const FrameBundle& frame, double L);

/// Frame components (index gamma) of the connection vectors.
struct ConnectionVectors {
  Vec4d h{}, j{}, k{};  ///< h-connection vectors
  Vec4d u{}, v{}, w{};  ///< v-connection vectors
};

struct ConnectionResiduals {
  double l_h = 0.0;      ///< max |l_{i|j}|
  double l_v = 0.0;      ///< max |L (v-deriv of l)_ij - (g_ij - l_i l_j)|
  double recon_h = 0.0;  ///< h-decompositions of m, n, p
  double recon_v = 0.0;  ///< v-decompositions of m, n, p
  double l_component = 0.0;  ///< max |l^i m_{i|j}|
};

struct ScalarProfile {
  MainScalars scalars;
  std::array<Vec4d, kNumMainScalars> v_derivs{};  ///< S;_alpha
  std::array<Vec4d, kNumMainScalars> h_derivs{};  ///< S_{,alpha}
  ConnectionVectors vectors;
};

/// Everything the frame module computes at one point.
struct FrameAnalysis {
  FrameBundle frame;
  Ten3d M{};
  ScalarProfile profile;
  ConnectionResiduals residuals;
  double unified_residual = 0.0;  ///< H + I + K - L C
  std::array<double, 2> torsion_constraints{};  ///< M_(3 beta beta), M_(4 beta beta)
};

FrameAnalysis analyze_frame(const PointGeometry& geo, const FrameSettings& settings = {});

struct ConnectionVectorResult {
  ConnectionVectors vectors;
  ConnectionResiduals residuals;
};
ConnectionVectorResult connection_vectors(const PointGeometry& geo, const FrameSettings& settings = {});
ScalarProfile scalar_derivative_components(const PointGeometry& geo, const FrameSettings& settings = {});

}  // namespace finsler4
