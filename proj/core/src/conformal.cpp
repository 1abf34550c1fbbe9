#include "finsler4/conformal.hpp"

#include <cmath>

namespace finsler4 {

namespace {

constexpr const char* kFrameLetters[kDim] = {"l", "m", "n", "p"};

NamedResidual judged(std::string label, double value, double scale, const ConditionSettings& s) {
  NamedResidual r{std::move(label), value, scale, true};
  r.satisfied = std::fabs(value) <= s.tol * scale + s.abs_floor;
  return r;
}

NamedResidual plain(std::string label, double value) {
  return NamedResidual{std::move(label), value, 0.0, true};
}

double max_abs_diff_vec(const Vec4d& a, const Vec4d& b, double scale_b) {
  double m = 0.0;
  for (int i = 0; i < kDim; ++i) m = std::max(m, std::fabs(a[i] - scale_b * b[i]));
  return m;
}

std::array<bool, 3> vanishing(const SigmaComponents& sc, double tau) {
  return {std::fabs(sc(2)) < tau, std::fabs(sc(3)) < tau, std::fabs(sc(4)) < tau};
}

// sigma_a x_a summed over the given frame indices (1-based 2..4)
struct Sum {
  double value = 0.0;
  double scale = 0.0;
  void add(double t) {
    value += t;
    scale += std::fabs(t);
  }
};

std::vector<int> active_indices(CaseId c) {
  switch (c) {
    case CaseId::I: return {2, 3, 4};
    case CaseId::II: return {2, 3};
    case CaseId::III: return {2, 4};
    case CaseId::IV: return {3, 4};
    case CaseId::V: return {2};
    case CaseId::VI: return {3};
    case CaseId::VII: return {4};
    default: return {2, 3, 4};
  }
}

std::vector<NamedResidual> invariance_residuals(const PointGeometry& base, const FrameAnalysis& bf,
                                                const PointGeometry& barred,
                                                const FrameAnalysis& rf, const SigmaComponents& sc,
                                                bool base_x_independent) {
  std::vector<NamedResidual> out;
  const double es = std::exp(sc.sigma);
  for (int a = 0; a < kDim; ++a)
    out.push_back(plain(std::string("covector_scaling.") + kFrameLetters[a],
                        max_abs_diff_vec(rf.frame.e_flat[a], bf.frame.e_flat[a], es)));
  for (int a = 0; a < kDim; ++a)
    out.push_back(plain(std::string("vector_scaling.") + kFrameLetters[a],
                        max_abs_diff_vec(rf.frame.e[a], bf.frame.e[a], 1.0 / es)));

  double gm = 0.0;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      gm = std::max(gm, std::fabs(barred.metric().g[i][j] - es * es * base.metric().g[i][j]));
  out.push_back(plain("metric_scaling", gm));
  out.push_back(plain("cartan_mixed_invariance",
                      max_abs_diff(barred.connection().Cmix, base.connection().Cmix)));

  for (int n = 0; n < kNumMainScalars; ++n)
    out.push_back(plain("main_scalar_invariance." + std::string(kMainScalarNames[n]),
                        std::fabs(rf.profile.scalars.values[n] - bf.profile.scalars.values[n])));
  out.push_back(plain("main_scalar_invariance.all_components", max_abs_diff(rf.M, bf.M)));

  const auto& v = bf.profile.vectors;
  const auto& vb = rf.profile.vectors;
  const std::array<std::pair<const char*, std::pair<const Vec4d*, const Vec4d*>>, 3> laws{{
      {"h1", {&v.h, &v.u}},
      {"j1", {&v.j, &v.v}},
      {"k1", {&v.k, &v.w}},
  }};
  const std::array<const Vec4d*, 3> barred_vecs{&vb.h, &vb.j, &vb.k};
  for (int q = 0; q < 3; ++q) {
    const Vec4d& x = *laws[q].second.first;
    const Vec4d& t = *laws[q].second.second;
    double rhs = x[0];
    for (int a = 1; a < kDim; ++a) rhs += sc.first[a] * t[a];
    out.push_back(plain(std::string("hvec_first_component.") + laws[q].first,
                        std::fabs((*barred_vecs[q])[0] - rhs / es)));
  }

  if (base_x_independent) {
    for (int n = 0; n < kNumMainScalars; ++n) {
      double rhs = 0.0;
      for (int a = 1; a < kDim; ++a) rhs += sc.first[a] * bf.profile.v_derivs[n][a];
      out.push_back(plain("scalar_hderiv_first_component." + std::string(kMainScalarNames[n]),
                          std::fabs(rf.profile.h_derivs[n][0] - rhs / es)));
    }
  }

  // G_bar - G = sigma_0 y - 1/2 L^2 sigma^i
  const Vec4d& y = base.y();
  const double L = base.metric().L;
  const Vec4d sup = mat_vec(base.metric().g_inv, sc.dsigma);
  const double s0 = dot(sc.dsigma, y);
  double tv = 0.0;
  for (int i = 0; i < kDim; ++i) {
    const double expect = s0 * y[i] - 0.5 * L * L * sup[i];
    tv = std::max(tv, std::fabs(barred.spray().G[i] - base.spray().G[i] - expect));
  }
  out.push_back(plain("spray_transvection", tv));
  return out;
}

}  // namespace

MetricSpec conformal_lift(const MetricSpec& base, const Expr& sigma) {
  return MetricSpec::conformal(base, sigma);
}

MetricSpec conformal_lift(const MetricSpec& base, std::string_view sigma) {
  return MetricSpec::conformal(base, parse_expr(sigma));
}

SigmaComponents sigma_components(const PointGeometry& base, const FrameBundle& frame,
                                 const PointGeometry& barred, const Jet& sigma) {
  SigmaComponents sc;
  sc.sigma = sigma.value();
  for (int i = 0; i < kDim; ++i) sc.dsigma[i] = sigma.caps().x_max > 0 ? sigma.d(x_slot(i)) : 0.0;
  for (int a = 0; a < kDim; ++a) sc.first[a] = dot(sc.dsigma, frame.e[a]);

  const double L = base.metric().L;
  Mat4d dN{};
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) dN[i][j] = barred.spray().N[i][j] - base.spray().N[i][j];
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b) {
      double s = 0.0;
      for (int i = 0; i < kDim; ++i)
        for (int j = 0; j < kDim; ++j) s += frame.e_flat[a][i] * dN[i][j] * frame.e[b][j];
      sc.D[a][b] = s / L;
    }
  const Mat4d& D = sc.D;
  sc.second = {D[1][1], -D[1][2], -D[1][3], D[2][2], D[2][3], D[3][3]};

  auto add = [&sc](std::string label, double v) {
    sc.extraction_residuals.push_back(plain(std::move(label), std::fabs(v)));
    sc.max_extraction_residual = std::max(sc.max_extraction_residual, std::fabs(v));
  };
  add("symmetry.mn", D[1][2] - D[2][1]);
  add("symmetry.mp", D[1][3] - D[3][1]);
  add("symmetry.np", D[2][3] - D[3][2]);
  add("antisymmetry.lm", D[0][1] + D[1][0]);
  add("antisymmetry.ln", D[0][2] + D[2][0]);
  add("antisymmetry.lp", D[0][3] + D[3][0]);
  return sc;
}

SigmaComponents sigma_components(const MetricSpec& lifted, const Vec4d& x, const Vec4d& y,
                                 const FrameSettings& settings) {
  if (lifted.family() != Family::Conformal) {
    throw Error(ErrorKind::MissingSigma, "metric has no conformal factor");
  }
  const PointGeometry base = PointGeometry::compute(lifted.conformal_base(), x, y);
  const PointGeometry barred = PointGeometry::compute(lifted, x, y);
  const FrameBundle frame = build_miron_frame(base, settings);
  return sigma_components(base, frame, barred, eval_sigma(lifted, x));
}

std::string_view case_name(CaseId c) noexcept {
  switch (c) {
    case CaseId::Homothetic: return "homothetic";
    case CaseId::I: return "i";
    case CaseId::II: return "ii";
    case CaseId::III: return "iii";
    case CaseId::IV: return "iv";
    case CaseId::V: return "v";
    case CaseId::VI: return "vi";
    case CaseId::VII: return "vii";
    case CaseId::Degenerate: return "degenerate";
  }
  return "unknown";
}

CaseAssignment dispatch_case(const SigmaComponents& sc, double tau) {
  CaseAssignment out;
  for (int k = 1; k <= 4; ++k) {
    const double a = std::fabs(sc(k));
    if (a >= 0.5 * tau && a <= 2.0 * tau) out.near_degenerate = true;
  }
  const auto z = vanishing(sc, tau);
  if (z[0] && z[1] && z[2]) {
    out.id = std::fabs(sc(1)) < tau ? CaseId::Homothetic : CaseId::Degenerate;
  } else if (!z[0] && !z[1] && !z[2]) {
    out.id = CaseId::I;
  } else if (!z[0] && !z[1]) {
    out.id = CaseId::II;
  } else if (!z[0] && !z[2]) {
    out.id = CaseId::III;
  } else if (!z[1] && !z[2]) {
    out.id = CaseId::IV;
  } else if (!z[0]) {
    out.id = CaseId::V;
  } else if (!z[1]) {
    out.id = CaseId::VI;
  } else {
    out.id = CaseId::VII;
  }
  return out;
}

ConditionBlock landsberg_case_conditions(const ScalarProfile& profile, const SigmaComponents& sc,
                                         const ConditionSettings& settings) {
  ConditionBlock block;
  block.assignment = dispatch_case(sc, settings.tau_sigma);
  const CaseId c = block.assignment.id;
  const auto active = active_indices(c);
  const bool vanish_form = c == CaseId::V || c == CaseId::VI || c == CaseId::VII;
  const bool ratio_form = c == CaseId::II || c == CaseId::III || c == CaseId::IV;

  for (int n = 0; n < kNumMainScalars; ++n) {
    const std::string name(kMainScalarNames[n]);
    const Vec4d& d = profile.v_derivs[n];
    if (vanish_form) {
      const double r = d[active[0] - 1];
      block.residuals.push_back(judged("landsberg.vanish." + name, r, 1.0, settings));
    } else {
      Sum s;
      for (int a : active) s.add(sc(a) * d[a - 1]);
      block.residuals.push_back(
          judged((ratio_form ? "landsberg.ratio." : "landsberg.scalar.") + name, s.value, s.scale, settings));
    }
  }
  const auto& v = profile.vectors;
  const std::array<std::pair<const char*, std::pair<double, const Vec4d*>>, 3> vecs{{
      {"h1", {v.h[0], &v.u}},
      {"j1", {v.j[0], &v.v}},
      {"k1", {v.k[0], &v.w}},
  }};
  for (const auto& [label, pr] : vecs) {
    Sum s;
    s.add(pr.first);
    for (int a : active) s.add(sc(a) * (*pr.second)[a - 1]);
    block.residuals.push_back(judged(std::string("landsberg.hvec.") + label, s.value, s.scale, settings));
  }
  for (const auto& r : block.residuals) block.satisfied = block.satisfied && r.satisfied;
  return block;
}

ConditionBlock berwald_case_conditions(const ScalarProfile& profile, const SigmaComponents& sc,
                                       const ConditionSettings& settings) {
  if (sc.max_extraction_residual > settings.extraction_limit) {
    throw Error(ErrorKind::ExtractionUnreliable,
                "spray-difference extraction residual " + std::to_string(sc.max_extraction_residual) +
                    " exceeds the limit");
  }
  ConditionBlock block;
  block.assignment = dispatch_case(sc, settings.tau_sigma);
  const CaseId c = block.assignment.id;
  const double s5 = sc(5), s6 = sc(6), s7 = sc(7), s8 = sc(8), s9 = sc(9), s10 = sc(10);

  for (int n = 0; n < kNumMainScalars; ++n) {
    const std::string name(kMainScalarNames[n]);
    const double d2 = profile.v_derivs[n][1], d3 = profile.v_derivs[n][2], d4 = profile.v_derivs[n][3];
    Sum m, nn, p;
    m.add(-s5 * d2);
    m.add(s6 * d3);
    m.add(s7 * d4);
    nn.add(s6 * d2);
    nn.add(-s8 * d3);
    nn.add(-s9 * d4);
    p.add(s7 * d2);
    p.add(-s9 * d3);
    p.add(-s10 * d4);
    block.residuals.push_back(judged("berwald.scalar." + name + ".m", m.value, m.scale, settings));
    block.residuals.push_back(judged("berwald.scalar." + name + ".n", nn.value, nn.scale, settings));
    block.residuals.push_back(judged("berwald.scalar." + name + ".p", p.value, p.scale, settings));
  }

  auto cross = [&](std::string label, double a, double b) {
    block.residuals.push_back(judged(std::move(label), a - b, std::fabs(a) + std::fabs(b), settings));
  };
  if (c == CaseId::V || c == CaseId::VI || c == CaseId::VII) {
    for (int n = 0; n < kNumMainScalars; ++n) {
      const std::string label = "berwald.ratio." + std::string(kMainScalarNames[n]);
      const double d2 = profile.v_derivs[n][1], d3 = profile.v_derivs[n][2], d4 = profile.v_derivs[n][3];
      if (c == CaseId::V) cross(label, d3 * s6, -d4 * s7);
      if (c == CaseId::VI) cross(label, d2 * s5, d4 * s7);
      if (c == CaseId::VII) cross(label, d2 * s5, d3 * s6);
    }
    if (c == CaseId::V) {
      cross("berwald.sigma_chain.1", s7 * s8, s9 * s6);
      cross("berwald.sigma_chain.2", s9 * s9, s10 * s8);
    } else if (c == CaseId::VI) {
      cross("berwald.sigma_chain.1", s7 * s6, s9 * s5);
      cross("berwald.sigma_chain.2", s9 * s7, s10 * s6);
    } else {
      cross("berwald.sigma_chain.1", s6 * s6, s8 * s5);
      cross("berwald.sigma_chain.2", s8 * s7, s9 * s6);
    }
  }
  for (const auto& r : block.residuals) block.satisfied = block.satisfied && r.satisfied;
  return block;
}

DirectBarred direct_barred(const PointGeometry& barred, const FrameSettings& settings) {
  DirectBarred d;
  d.max_C0 = max_abs(barred.cartan_0());
  d.max_Ch = max_abs(barred.cartan_h());
  d.tensor = tensor_residuals(barred);
  try {
    const FrameAnalysis a = analyze_frame(barred, settings);
    d.frame_available = true;
    d.h = a.profile.vectors.h;
    d.j = a.profile.vectors.j;
    d.k = a.profile.vectors.k;
    for (int n = 0; n < kNumMainScalars; ++n) {
      d.S_1[n] = a.profile.h_derivs[n][0];
      d.max_S_h = std::max(d.max_S_h, max_abs(a.profile.h_derivs[n]));
    }
  } catch (const Error& e) {
    d.frame_error = std::string(e.name());
  }
  return d;
}

std::vector<NamedResidual> invariance_check(const MetricSpec& lifted, const Vec4d& x,
                                            const Vec4d& y, const FrameSettings& settings) {
  if (lifted.family() != Family::Conformal) {
    throw Error(ErrorKind::MissingSigma, "metric has no conformal factor");
  }
  const PointGeometry base = PointGeometry::compute(lifted.conformal_base(), x, y);
  const PointGeometry barred = PointGeometry::compute(lifted, x, y);
  const FrameAnalysis bf = analyze_frame(base, settings);
  const FrameAnalysis rf = analyze_frame(barred, settings);
  const SigmaComponents sc = sigma_components(base, bf.frame, barred, eval_sigma(lifted, x));
  return invariance_residuals(base, bf, barred, rf, sc, lifted.conformal_base().x_independent());
}

std::string_view tristate_name(Tristate t) noexcept {
  switch (t) {
    case Tristate::Yes: return "yes";
    case Tristate::No: return "no";
    case Tristate::Undetermined: return "undetermined";
  }
  return "undetermined";
}

Tristate classify_residual(double r, double yes_below, double no_above) noexcept {
  if (r <= yes_below) return Tristate::Yes;
  if (r > no_above) return Tristate::No;
  return Tristate::Undetermined;
}

ConformalPointReport evaluate_conformal_point(const MetricSpec& lifted, const SamplePoint& p,
                                              const ConditionSettings& settings,
                                              const FrameSettings& frame_settings) {
  if (lifted.family() != Family::Conformal) {
    throw Error(ErrorKind::MissingSigma, "metric has no conformal factor");
  }
  ConformalPointReport r;
  r.point = p;
  try {
    const PointGeometry base = PointGeometry::compute(lifted.conformal_base(), p.x, p.y);
    const PointGeometry barred = PointGeometry::compute(lifted, p.x, p.y);
    r.barred = direct_barred(barred, frame_settings);
    r.barred_landsberg = classify_residual(r.barred.tensor.landsberg);
    r.barred_berwald = classify_residual(r.barred.tensor.berwald);

    const FrameAnalysis bf = analyze_frame(base, frame_settings);
    r.sigma = sigma_components(base, bf.frame, barred, eval_sigma(lifted, p.x));
    r.landsberg = landsberg_case_conditions(bf.profile, r.sigma, settings);
    try {
      ConditionBlock b = berwald_case_conditions(bf.profile, r.sigma, settings);
      if (r.barred.frame_available) {
        const std::array<std::pair<const char*, const Vec4d*>, 3> direct{
            {{"h_bar", &r.barred.h}, {"j_bar", &r.barred.j}, {"k_bar", &r.barred.k}}};
        for (const auto& [label, vec] : direct) {
          NamedResidual nr{std::string("berwald.direct.") + label, max_abs(*vec), 1.0, true};
          nr.satisfied = nr.value <= settings.frame_tol;
          b.satisfied = b.satisfied && nr.satisfied;
          b.residuals.push_back(std::move(nr));
        }
      }
      r.berwald = std::move(b);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ExtractionUnreliable) throw;
      r.berwald_error = std::string(e.name());
    }
    if (r.barred.frame_available) {
      const FrameAnalysis rf = analyze_frame(barred, frame_settings);
      r.invariance = invariance_residuals(base, bf, barred, rf, r.sigma,
                                          lifted.conformal_base().x_independent());
    }
    if (r.barred_landsberg != Tristate::Undetermined)
      r.landsberg_agrees = r.landsberg.satisfied == (r.barred_landsberg == Tristate::Yes);
    if (r.berwald && r.barred_berwald != Tristate::Undetermined)
      r.berwald_agrees = r.berwald->satisfied == (r.barred_berwald == Tristate::Yes);
  } catch (const Error& e) {
    r.error = std::string(e.name()) + ": " + e.what();
  }
  return r;
}

}  // namespace finsler4
