#include "finsler4/classify.hpp"

#include <algorithm>
#include <cmath>

#include "finsler4/error.hpp"

namespace finsler4 {

namespace {

FrameRoute frame_route(const FrameAnalysis& fa) {
  FrameRoute r;
  r.vectors = fa.profile.vectors;
  r.S_h = fa.profile.h_derivs;
  const auto& v = r.vectors;
  for (int a = 0; a < kDim; ++a) {
    double m = std::max({std::fabs(v.h[a]), std::fabs(v.j[a]), std::fabs(v.k[a])});
    for (const auto& s : r.S_h) m = std::max(m, std::fabs(s[a]));
    if (a == 0) r.landsberg = m;
    r.berwald = std::max(r.berwald, m);
  }
  return r;
}

void fold(Verdict& v, double r, int index) {
  if (v.worst_point < 0 || r > v.max_residual) {
    v.max_residual = r;
    v.worst_point = index;
  }
}

RouteComparison compare(double tensor, double frame, const CrosscheckSettings& s) {
  RouteComparison c;
  c.tensor_vanishes = tensor <= s.tensor_tol;
  c.frame_vanishes = frame <= s.frame_tol;
  const bool t_band = tensor > s.tensor_tol && tensor <= 10.0 * s.tensor_tol;
  const bool f_band = frame > s.frame_tol && frame <= 10.0 * s.frame_tol;
  if (c.tensor_vanishes == c.frame_vanishes)
    c.agreement = Agreement::Agree;
  else if (t_band || f_band)
    c.agreement = Agreement::Inconclusive;
  else
    c.agreement = Agreement::Disagree;
  return c;
}

}  // namespace

Tristate verdict_from_max(double max_residual, double tol) noexcept {
  if (!(max_residual == max_residual)) return Tristate::Undetermined;
  if (max_residual <= tol) return Tristate::Yes;
  if (max_residual > 10.0 * tol) return Tristate::No;
  return Tristate::Undetermined;
}

ClassifyPoint classify_point(const MetricSpec& spec, const SamplePoint& p,
                             const FrameSettings& frame_settings) {
  ClassifyPoint out;
  out.point = p;
  PointGeometry geo;
  try {
    geo = PointGeometry::compute(spec, p.x, p.y);
  } catch (const Error& e) {
    out.error = std::string(e.name());
    return out;
  }
  out.C_norm = geo.cartan().C_norm;
  out.max_dx_g = max_abs(geo.dg_dx());
  out.max_spray_hess3 = max_abs(geo.spray().G_hess3);
  out.max_C_h = max_abs(geo.cartan_h());
  out.max_C_0 = max_abs(geo.cartan_0());
  out.residuals = tensor_residuals(geo);
  try {
    out.frame = frame_route(analyze_frame(geo, frame_settings));
    out.frame_valid = true;
  } catch (const Error& e) {
    out.frame_error = std::string(e.name());
  }
  return out;
}

ClassificationReport classify_metric(const MetricSpec& spec, const SamplePlan& plan, double tol,
                                     const FrameSettings& frame_settings) {
  ClassificationReport rep;
  rep.metric = spec.describe();
  rep.plan = plan;
  rep.tol = tol;
  for (const SamplePoint& p : sample_points(spec, plan))
    rep.points.push_back(classify_point(spec, p, frame_settings));

  Verdicts& v = rep.verdicts;
  for (int i = 0; i < static_cast<int>(rep.points.size()); ++i) {
    const ClassifyPoint& pt = rep.points[i];
    if (!pt.error.empty()) continue;
    ++rep.evaluated_points;
    if (pt.frame_valid) ++rep.frame_valid_points;
    fold(v.riemannian, pt.residuals.riemannian, i);
    fold(v.locally_minkowski_in_chart, pt.residuals.locally_minkowski, i);
    fold(v.berwald, pt.residuals.berwald, i);
    fold(v.landsberg, pt.residuals.landsberg, i);
  }
  if (rep.evaluated_points > 0) {
    for (Verdict* x : {&v.riemannian, &v.locally_minkowski_in_chart, &v.berwald, &v.landsberg})
      x->value = verdict_from_max(x->max_residual, tol);
  }
  return rep;
}

std::string_view agreement_name(Agreement a) noexcept {
  switch (a) {
    case Agreement::Agree: return "agree";
    case Agreement::Disagree: return "disagree";
    case Agreement::Inconclusive: return "inconclusive";
  }
  return "?";
}

CrosscheckSummary characterization_crosscheck(const ClassificationReport& report,
                                     const CrosscheckSettings& settings) {
  CrosscheckSummary sum;
  for (int i = 0; i < static_cast<int>(report.points.size()); ++i) {
    const ClassifyPoint& pt = report.points[i];
    if (!pt.error.empty() || !pt.frame_valid) continue;
    CrosscheckPoint c;
    c.index = i;
    c.berwald = compare(pt.residuals.berwald, pt.frame.berwald, settings);
    c.landsberg = compare(pt.residuals.landsberg, pt.frame.landsberg, settings);
    if (c.berwald.agreement == Agreement::Disagree) ++sum.berwald_disagreements;
    if (c.landsberg.agreement == Agreement::Disagree) ++sum.landsberg_disagreements;
    if (c.berwald.agreement == Agreement::Inconclusive ||
        c.landsberg.agreement == Agreement::Inconclusive)
      ++sum.inconclusive;
    sum.points.push_back(c);
  }
  if (sum.points.empty())
    throw Error(ErrorKind::NoFrameValidPoints, "no sampled point admits a frame");
  return sum;
}

}  // namespace finsler4
