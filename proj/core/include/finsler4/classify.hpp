#pragma once

// Point-sampled detection of Riemannian, locally Minkowski (in the given
// chart), Berwald and Landsberg character, and the frame-route cross-check
// of the Berwald/Landsberg characterizations.

#include <string>
#include <vector>

#include "finsler4/conformal.hpp"

namespace finsler4 {

/// Frame-route quantities at one point.
struct FrameRoute {
  ConnectionVectors vectors;
  std::array<Vec4d, kNumMainScalars> S_h{};  ///< S_{,alpha}
  /// max(|h_1|, |j_1|, |k_1|, |S_{,1}|) over the main scalars
  double landsberg = 0.0;
  /// max over alpha of |h_alpha|, |j_alpha|, |k_alpha|, |S_{,alpha}|
  double berwald = 0.0;
};

struct ClassifyPoint {
  SamplePoint point;
  std::string error;  ///< nonempty when the tensors could not be evaluated
  double C_norm = 0.0;
  double max_dx_g = 0.0;
  double max_spray_hess3 = 0.0;
  double max_C_h = 0.0;
  double max_C_0 = 0.0;
  TensorResiduals residuals;
  bool frame_valid = false;
  std::string frame_error;  ///< error name when the frame does not exist
  FrameRoute frame;
};

struct Verdict {
  Tristate value = Tristate::Undetermined;
  double max_residual = 0.0;  ///< largest residual over the evaluated points
  int worst_point = -1;       ///< sample index attaining it
};

struct Verdicts {
  Verdict riemannian;
  Verdict locally_minkowski_in_chart;
  Verdict berwald;
  Verdict landsberg;
};

struct ClassificationReport {
  std::string metric;
  SamplePlan plan;
  double tol = 1e-6;
  std::vector<ClassifyPoint> points;
  int evaluated_points = 0;
  int frame_valid_points = 0;
  Verdicts verdicts;
};

/// yes when every residual is <= tol, no when one exceeds 10 tol.
Tristate verdict_from_max(double max_residual, double tol) noexcept;

ClassifyPoint classify_point(const MetricSpec& spec, const SamplePoint& p,
                             const FrameSettings& frame_settings = {});

ClassificationReport classify_metric(const MetricSpec& spec, const SamplePlan& plan,
                                     double tol = 1e-6, const FrameSettings& frame_settings = {});

enum class Agreement { Agree, Disagree, Inconclusive };
std::string_view agreement_name(Agreement a) noexcept;

struct RouteComparison {
  bool tensor_vanishes = false;
  bool frame_vanishes = false;
  /// Inconclusive when either side lies inside its 10x hysteresis band.
  Agreement agreement = Agreement::Agree;
};

struct CrosscheckPoint {
  int index = 0;  ///< sample index in the report
  RouteComparison berwald;    ///< C_{ijk|h} vs all h, j, k and S_{,alpha}
  RouteComparison landsberg;  ///< C_{ijk|0} vs h_1, j_1, k_1 and S_{,1}
};

struct CrosscheckSettings {
  double tensor_tol = 1e-6;  ///< on the dimensionless tensor residuals
  double frame_tol = 1e-6;   ///< absolute, on the frame quantities
};

struct CrosscheckSummary {
  std::vector<CrosscheckPoint> points;
  int berwald_disagreements = 0;
  int landsberg_disagreements = 0;
  int inconclusive = 0;
  bool all_agree() const { return berwald_disagreements == 0 && landsberg_disagreements == 0; }
};

/// Throws NoFrameValidPoints when no point of the report has a frame.
CrosscheckSummary characterization_crosscheck(const ClassificationReport& report,
                                     const CrosscheckSettings& settings = {});

}  // namespace finsler4
