#pragma once

// Conformal change L_bar = exp(sigma(x)) L: frame components of d sigma,
// the frame-projected spray difference and the quantities read from it,
// the Landsberg/Berwald condition systems with their case dispatch, and
// direct barred-space checks.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "finsler4/frame.hpp"

namespace finsler4 {

/// L_bar = exp(sigma) L with sigma a function of x only (SigmaUsesY otherwise).
MetricSpec conformal_lift(const MetricSpec& base, const Expr& sigma);
MetricSpec conformal_lift(const MetricSpec& base, std::string_view sigma);

struct NamedResidual {
  std::string label;
  double value = 0.0;
  double scale = 0.0;      ///< magnitude the residual is judged against
  bool satisfied = true;
};

struct SigmaComponents {
  double sigma = 0.0;
  Vec4d dsigma{};                  ///< coordinate gradient d_i sigma
  std::array<double, 4> first{};   ///< sigma_1..sigma_4
  std::array<double, 6> second{};  ///< sigma_5..sigma_10
  /// D[a][b] = e_(a)i (N_bar^i_j - N^i_j) e_(b)^j / L
  Mat4d D{};
  std::vector<NamedResidual> extraction_residuals;
  double max_extraction_residual = 0.0;

  /// sigma_k for k = 1..10.
  double operator()(int k) const { return k <= 4 ? first[k - 1] : second[k - 5]; }
};

SigmaComponents sigma_components(const PointGeometry& base, const FrameBundle& base_frame,
                                 const PointGeometry& barred, const Jet& sigma);
/// Convenience form taking the lifted spec; the base is its conformal_base().
SigmaComponents sigma_components(const MetricSpec& lifted, const Vec4d& x, const Vec4d& y,
                                 const FrameSettings& settings = {});

enum class CaseId { Homothetic, I, II, III, IV, V, VI, VII, Degenerate };

/// "homothetic", "i".."vii", "degenerate" (sigma_2..4 vanish, sigma_1 does not).
std::string_view case_name(CaseId c) noexcept;

struct ConditionSettings {
  double tau_sigma = 1e-8;         ///< |sigma_a| below this counts as vanishing
  double tol = 1e-6;               ///< relative tolerance of the condition residuals
  double abs_floor = 1e-12;        ///< absolute slack added to every residual test
  double extraction_limit = 1e-6;  ///< Berwald block needs cleaner extraction than this
  double frame_tol = 1e-6;         ///< direct barred frame quantities count as zero below this
};

struct CaseAssignment {
  CaseId id = CaseId::Homothetic;
  bool near_degenerate = false;  ///< some |sigma_a| lies within a factor 2 of tau_sigma
};

CaseAssignment dispatch_case(const SigmaComponents& sc, double tau_sigma = 1e-8);

struct ConditionBlock {
  CaseAssignment assignment;
  std::vector<NamedResidual> residuals;
  bool satisfied = true;
};

ConditionBlock landsberg_case_conditions(const ScalarProfile& profile, const SigmaComponents& sc,
                                         const ConditionSettings& settings = {});
/// Throws ExtractionUnreliable when the extraction residuals exceed the limit.
ConditionBlock berwald_case_conditions(const ScalarProfile& profile, const SigmaComponents& sc,
                                       const ConditionSettings& settings = {});

/// Frame and tensor quantities computed from scratch in the barred space.
struct DirectBarred {
  bool frame_available = false;
  std::string frame_error;
  Vec4d h{}, j{}, k{};
  std::array<double, kNumMainScalars> S_1{};  ///< S_bar_{,1}
  double max_S_h = 0.0;                        ///< max over S, alpha of |S_bar_{,alpha}|
  double max_C0 = 0.0;
  double max_Ch = 0.0;
  TensorResiduals tensor;
};

DirectBarred direct_barred(const PointGeometry& barred, const FrameSettings& settings = {});

/// Residuals of the conformal transformation laws at one point. The laws
/// for S_{,1} are included only when the base is x-independent.
std::vector<NamedResidual> invariance_check(const MetricSpec& lifted, const Vec4d& x,
                                            const Vec4d& y, const FrameSettings& settings = {});

/// Verdict of a barred-space tensor residual: yes <= 1e-6, no > 1e-4.
enum class Tristate { Yes, No, Undetermined };
std::string_view tristate_name(Tristate t) noexcept;
Tristate classify_residual(double r, double yes_below = 1e-6, double no_above = 1e-4) noexcept;

/// Everything evaluated at one point of a conformal pair.
struct ConformalPointReport {
  SamplePoint point;
  std::string error;  ///< nonempty when the point could not be evaluated
  SigmaComponents sigma;
  ConditionBlock landsberg;
  std::optional<ConditionBlock> berwald;
  std::string berwald_error;
  DirectBarred barred;
  std::vector<NamedResidual> invariance;
  Tristate barred_landsberg = Tristate::Undetermined;
  Tristate barred_berwald = Tristate::Undetermined;
  /// Co-occurrence: condition block satisfied <=> barred property.
  std::optional<bool> landsberg_agrees;
  std::optional<bool> berwald_agrees;
};

ConformalPointReport evaluate_conformal_point(const MetricSpec& lifted, const SamplePoint& p,
                                              const ConditionSettings& settings = {},
                                              const FrameSettings& frame_settings = {});

}  // namespace finsler4
