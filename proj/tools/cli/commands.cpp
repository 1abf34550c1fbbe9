#include "commands.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <ostream>

#include "finsler4/classify.hpp"
#include "finsler4/error.hpp"
#include "finsler4/oracle.hpp"
#include "json_emit.hpp"
#include "spec_io.hpp"

namespace finsler4::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr std::array<const char*, kDim> kFrameLabels{"l", "m", "n", "p"};

json vec(const Vec4d& v) { return json::array({v[0], v[1], v[2], v[3]}); }

json point_json(const SamplePoint& p) { return json{{"x", vec(p.x)}, {"y", vec(p.y)}}; }

json per_scalar(const std::array<double, kNumMainScalars>& v) {
  json o = json::object();
  for (int s = 0; s < kNumMainScalars; ++s) o[std::string(kMainScalarNames[s])] = v[s];
  return o;
}

json per_scalar(const std::array<Vec4d, kNumMainScalars>& v) {
  json o = json::object();
  for (int s = 0; s < kNumMainScalars; ++s) o[std::string(kMainScalarNames[s])] = vec(v[s]);
  return o;
}

json residual_list(const std::vector<NamedResidual>& rs) {
  json a = json::array();
  for (const auto& r : rs)
    a.push_back(json{{"label", r.label}, {"value", r.value}, {"scale", r.scale}, {"satisfied", r.satisfied}});
  return a;
}

json tensor_json(const TensorResiduals& t) {
  return json{{"riemannian", t.riemannian},
              {"locally_minkowski", t.locally_minkowski},
              {"berwald", t.berwald},
              {"landsberg", t.landsberg},
              {"spray_cubic", t.spray_cubic}};
}

json frame_settings_json(const FrameSettings& f) {
  return json{{"tau_C", f.tau_C}, {"seed_threshold", f.seed_threshold}, {"sign_threshold", f.sign_threshold}};
}

json optional_bool(const std::optional<bool>& b) { return b ? json(*b) : json(nullptr); }

std::string scope_text(int n) { return "at " + std::to_string(n) + " sampled points"; }

int write_report(const RunConfig& cfg, const json& doc, std::ostream& out, std::ostream& err) {
  const std::string text = emit_json(doc);
  if (cfg.output.empty()) {
    out << text;
    return kExitOk;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) {
    err << "error: cannot write " << cfg.output << "\n";
    return kExitSpecError;
  }
  f << text;
  return kExitOk;
}

SamplePlan effective_plan(const RunConfig& cfg, SamplePlan plan) {
  if (cfg.samples) plan.count = *cfg.samples;
  if (cfg.seed) plan.seed = *cfg.seed;
  return plan;
}

json base_config(const RunConfig& cfg, const LoadedSpec& ls, const SamplePlan& plan) {
  return json{{"command", cfg.command},
              {"metric", ls.spec.describe()},
              {"spec", ls.source},
              {"samples", plan.count},
              {"seed", plan.seed}};
}

// classify --------------------------------------------------------------

json classify_point_json(int index, const ClassifyPoint& p) {
  json o{{"index", index}, {"point", point_json(p.point)}};
  if (!p.error.empty()) {
    o["error"] = p.error;
    return o;
  }
  o["C_norm"] = p.C_norm;
  o["max_dx_g"] = p.max_dx_g;
  o["max_spray_hess3"] = p.max_spray_hess3;
  o["max_C_h"] = p.max_C_h;
  o["max_C_0"] = p.max_C_0;
  o["residuals"] = tensor_json(p.residuals);
  if (p.frame_valid) {
    const auto& v = p.frame.vectors;
    o["frame"] = json{{"valid", true},
                      {"h", vec(v.h)},
                      {"j", vec(v.j)},
                      {"k", vec(v.k)},
                      {"S_h", per_scalar(p.frame.S_h)},
                      {"landsberg", p.frame.landsberg},
                      {"berwald", p.frame.berwald}};
  } else {
    o["frame"] = json{{"valid", false}, {"error", p.frame_error}};
  }
  return o;
}

json comparison_json(const RouteComparison& c) {
  return json{{"tensor_vanishes", c.tensor_vanishes},
              {"frame_vanishes", c.frame_vanishes},
              {"agreement", std::string(agreement_name(c.agreement))}};
}

int cmd_classify(const RunConfig& cfg, const LoadedSpec& ls, std::ostream& out, std::ostream& err) {
  const SamplePlan plan = effective_plan(cfg, ls.plan);
  const double tol = cfg.tol.value_or(1e-6);
  const FrameSettings fs;
  const ClassificationReport rep = classify_metric(ls.spec, plan, tol, fs);
  if (rep.evaluated_points == 0) {
    err << "error: no sampled point could be evaluated\n";
    return kExitEvaluationError;
  }
  const CrosscheckSettings cs{tol, 1e-6};

  json doc = json::object();
  const auto& v = rep.verdicts;
  const std::array<std::pair<const char*, const Verdict*>, 4> verdicts{{
      {"riemannian", &v.riemannian},
      {"locally_minkowski_in_chart", &v.locally_minkowski_in_chart},
      {"berwald", &v.berwald},
      {"landsberg", &v.landsberg},
  }};
  json vj = json::object(), dj = json::object();
  for (const auto& [name, verdict] : verdicts) {
    vj[name] = std::string(tristate_name(verdict->value));
    dj[name] = json{{"max_residual", verdict->max_residual}, {"worst_point", verdict->worst_point}};
  }
  doc["verdicts"] = vj;
  doc["deciding_residuals"] = dj;
  doc["scope"] = scope_text(rep.evaluated_points);
  doc["evaluated_points"] = rep.evaluated_points;
  doc["frame_valid_points"] = rep.frame_valid_points;

  json pts = json::array();
  for (int i = 0; i < static_cast<int>(rep.points.size()); ++i)
    pts.push_back(classify_point_json(i, rep.points[i]));
  doc["points"] = pts;

  json ra = json::object();
  try {
    const CrosscheckSummary sum = characterization_crosscheck(rep, cs);
    ra["available"] = true;
    ra["scope"] = scope_text(static_cast<int>(sum.points.size())) + " with a frame";
    ra["berwald_characterization"] =
        json{{"agree", sum.berwald_disagreements == 0}, {"disagreements", sum.berwald_disagreements}};
    ra["landsberg_characterization"] =
        json{{"agree", sum.landsberg_disagreements == 0}, {"disagreements", sum.landsberg_disagreements}};
    ra["inconclusive_points"] = sum.inconclusive;
    json per = json::array();
    for (const auto& c : sum.points)
      per.push_back(json{{"index", c.index},
                         {"berwald_characterization", comparison_json(c.berwald)},
                         {"landsberg_characterization", comparison_json(c.landsberg)}});
    ra["points"] = per;
  } catch (const Error& e) {
    ra["available"] = false;
    ra["reason"] = std::string(e.name());
  }
  doc["route_agreement"] = ra;

  json ec = base_config(cfg, ls, plan);
  ec["tol"] = tol;
  ec["tolerances"] = json{{"verdict_yes_at_most", tol},
                          {"verdict_no_above", 10.0 * tol},
                          {"crosscheck_tensor_tol", cs.tensor_tol},
                          {"crosscheck_frame_tol", cs.frame_tol},
                          {"frame", frame_settings_json(fs)}};
  doc["effective_config"] = ec;
  return write_report(cfg, doc, out, err);
}

// conformal -------------------------------------------------------------

json sigma_json(const SigmaComponents& s) {
  json second = json::array();
  for (double v : s.second) second.push_back(v);
  return json{{"value", s.sigma},
              {"gradient", vec(s.dsigma)},
              {"first", json::array({s.first[0], s.first[1], s.first[2], s.first[3]})},
              {"second", second},
              {"max_extraction_residual", s.max_extraction_residual},
              {"extraction_residuals", residual_list(s.extraction_residuals)}};
}

json direct_json(const DirectBarred& d) {
  json o{{"frame_available", d.frame_available}};
  if (d.frame_available) {
    o["h"] = vec(d.h);
    o["j"] = vec(d.j);
    o["k"] = vec(d.k);
    o["S_1"] = per_scalar(d.S_1);
    o["max_S_h"] = d.max_S_h;
  } else {
    o["frame_error"] = d.frame_error;
  }
  o["max_C0"] = d.max_C0;
  o["max_Ch"] = d.max_Ch;
  o["tensor_residuals"] = tensor_json(d.tensor);
  return o;
}

struct CoOccurrence {
  int evaluated = 0, agree = 0, disagree = 0, undetermined = 0;
  int conditions_satisfied = 0, barred_yes = 0;

  void add(bool satisfied, Tristate barred, const std::optional<bool>& agrees) {
    ++evaluated;
    if (satisfied) ++conditions_satisfied;
    if (barred == Tristate::Yes) ++barred_yes;
    if (!agrees) ++undetermined;
    else if (*agrees) ++agree;
    else ++disagree;
  }

  json to_json() const {
    return json{{"scope", scope_text(evaluated)},
                {"evaluated", evaluated},
                {"conditions_satisfied", conditions_satisfied},
                {"barred_property_holds", barred_yes},
                {"agree", agree},
                {"disagree", disagree},
                {"undetermined", undetermined},
                {"consistent", disagree == 0}};
  }
};

int cmd_conformal(const RunConfig& cfg, const LoadedSpec& ls, std::ostream& out, std::ostream& err) {
  if (ls.spec.family() != Family::Conformal) {
    err << "error: MissingSigma: spec has no sigma\n";
    return kExitSpecError;
  }
  const SamplePlan plan = effective_plan(cfg, ls.plan);
  ConditionSettings cs;
  if (cfg.tol) cs.tol = *cfg.tol;
  const FrameSettings fs;

  const std::vector<SamplePoint> samples = sample_points(ls.spec, plan);
  json pts = json::array();
  CoOccurrence lands, berw;
  std::map<std::string, double> inv_max;
  std::vector<std::string> inv_order;
  std::array<int, 9> case_count{};
  int evaluated = 0;
  for (int i = 0; i < static_cast<int>(samples.size()); ++i) {
    const ConformalPointReport r = evaluate_conformal_point(ls.spec, samples[i], cs, fs);
    json o{{"index", i}, {"point", point_json(r.point)}};
    if (!r.error.empty()) {
      o["error"] = r.error;
      pts.push_back(o);
      continue;
    }
    ++evaluated;
    const CaseAssignment a = r.landsberg.assignment;
    ++case_count[static_cast<int>(a.id)];
    o["case"] = std::string(case_name(a.id));
    o["near_degenerate"] = a.near_degenerate;
    o["sigma"] = sigma_json(r.sigma);
    o["landsberg_residuals"] = residual_list(r.landsberg.residuals);
    o["landsberg_satisfied"] = r.landsberg.satisfied;
    if (r.berwald) {
      o["berwald_residuals"] = residual_list(r.berwald->residuals);
      o["berwald_satisfied"] = r.berwald->satisfied;
    } else {
      o["berwald_residuals"] = nullptr;
      o["berwald_satisfied"] = nullptr;
      o["berwald_error"] = r.berwald_error;
    }
    o["direct_barred"] = direct_json(r.barred);
    o["barred_landsberg"] = std::string(tristate_name(r.barred_landsberg));
    o["barred_berwald"] = std::string(tristate_name(r.barred_berwald));
    o["landsberg_agrees"] = optional_bool(r.landsberg_agrees);
    o["berwald_agrees"] = optional_bool(r.berwald_agrees);
    o["invariance_residuals"] = residual_list(r.invariance);
    for (const auto& nr : r.invariance) {
      auto [it, inserted] = inv_max.try_emplace(nr.label, nr.value);
      if (inserted) inv_order.push_back(nr.label);
      else it->second = std::max(it->second, nr.value);
    }
    lands.add(r.landsberg.satisfied, r.barred_landsberg, r.landsberg_agrees);
    if (r.berwald) berw.add(r.berwald->satisfied, r.barred_berwald, r.berwald_agrees);
    pts.push_back(o);
  }
  if (evaluated == 0) {
    err << "error: no sampled point could be evaluated\n";
    return kExitEvaluationError;
  }

  json doc = json::object();
  json summary = json::object();
  summary["scope"] = scope_text(evaluated);
  json cases = json::object();
  for (int c = 0; c < 9; ++c) cases[std::string(case_name(static_cast<CaseId>(c)))] = case_count[c];
  summary["cases"] = cases;
  summary["landsberg_conditions_vs_barred_landsberg"] = lands.to_json();
  summary["berwald_conditions_vs_barred_berwald"] = berw.to_json();
  json inv = json::object();
  for (const auto& label : inv_order) inv[label] = inv_max[label];
  summary["max_invariance_residuals"] = inv;
  doc["summary"] = summary;
  doc["points"] = pts;

  json ec = base_config(cfg, ls, plan);
  ec["tol"] = cs.tol;
  ec["tolerances"] = json{{"tau_sigma", cs.tau_sigma},
                          {"condition_tol", cs.tol},
                          {"abs_floor", cs.abs_floor},
                          {"extraction_limit", cs.extraction_limit},
                          {"frame_tol", cs.frame_tol},
                          {"barred_yes_at_most", 1e-6},
                          {"barred_no_above", 1e-4},
                          {"frame", frame_settings_json(fs)}};
  doc["effective_config"] = ec;
  return write_report(cfg, doc, out, err);
}

// frame -----------------------------------------------------------------

int cmd_frame(const RunConfig& cfg, const LoadedSpec& ls, std::ostream& out, std::ostream& err) {
  if (!cfg.x || !cfg.y) {
    err << "error: frame requires --x and --y\n";
    return kExitSpecError;
  }
  const SamplePoint p{*cfg.x, *cfg.y};
  const FrameSettings fs;
  json ec{{"command", cfg.command}, {"metric", ls.spec.describe()}, {"spec", ls.source},
          {"frame", frame_settings_json(fs)}};

  PointGeometry geo;
  try {
    geo = PointGeometry::compute(ls.spec, p.x, p.y);
  } catch (const Error& e) {
    err << "error: " << e.name() << ": " << e.what() << "\n";
    return kExitEvaluationError;
  }

  json doc = json::object();
  doc["point"] = point_json(p);
  FrameAnalysis fa;
  try {
    fa = analyze_frame(geo, fs);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::VanishingTorsion && e.kind() != ErrorKind::NotPositiveDefinite &&
        e.kind() != ErrorKind::DegenerateSeed)
      throw;
    doc["error"] = json{{"kind", std::string(e.name())}, {"message", e.what()}};
    doc["effective_config"] = ec;
    const int rc = write_report(cfg, doc, out, err);
    return rc == kExitOk ? kExitFrameError : rc;
  }

  const FrameBundle& f = fa.frame;
  json e = json::object(), ef = json::object();
  for (int a = 0; a < kDim; ++a) {
    e[kFrameLabels[a]] = vec(f.e[a]);
    ef[kFrameLabels[a]] = vec(f.e_flat[a]);
  }
  doc["L"] = f.L;
  doc["frame"] = json{{"gauge_tag", f.gauge.to_string()},
                      {"vectors", e},
                      {"covectors", ef},
                      {"orthonormality_residual", f.orthonormality_residual},
                      {"C_norm", f.C_norm}};
  doc["main_scalars"] = per_scalar(fa.profile.scalars.values);
  doc["unified_residual"] = fa.unified_residual;
  doc["torsion_constraints"] = json::array({fa.torsion_constraints[0], fa.torsion_constraints[1]});
  const auto& v = fa.profile.vectors;
  doc["connection_vectors"] = json{{"h", vec(v.h)}, {"j", vec(v.j)}, {"k", vec(v.k)},
                                   {"u", vec(v.u)}, {"v", vec(v.v)}, {"w", vec(v.w)}};
  const auto& r = fa.residuals;
  doc["connection_residuals"] = json{{"l_h", r.l_h},
                                     {"l_v", r.l_v},
                                     {"recon_h", r.recon_h},
                                     {"recon_v", r.recon_v},
                                     {"l_component", r.l_component}};
  doc["scalar_profile"] = json{{"v_derivs", per_scalar(fa.profile.v_derivs)},
                               {"h_derivs", per_scalar(fa.profile.h_derivs)}};
  doc["effective_config"] = ec;
  return write_report(cfg, doc, out, err);
}

// selftest --------------------------------------------------------------

std::vector<MetricSpec> selftest_corpus() {
  std::vector<MetricSpec> c;
  c.push_back(MetricSpec::quartic_minkowski());
  MetricParams rp;
  rp.b = std::array<std::string, kDim>{"0.1*x2", "0", "0", "0"};
  c.push_back(make_builtin_metric(Family::Randers, rp));
  MetricParams gp;
  gp.g = std::array<std::array<std::string, kDim>, kDim>{{{"1+0.1*x1^2", "0.05*x2", "0", "0"},
                                                          {"0.05*x2", "1", "0", "0"},
                                                          {"0", "0", "2", "0.1*sin(x3)"},
                                                          {"0", "0", "0.1*sin(x3)", "1"}}};
  c.push_back(make_builtin_metric(Family::Riemannian, gp));
  c.push_back(conformal_lift(MetricSpec::quartic_minkowski(), "0.1*x1+0.05*x2^2"));
  return c;
}

int cmd_selftest(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const SamplePlan plan = effective_plan(cfg, SamplePlan{});
  const double tol = cfg.tol.value_or(1e-7);
  const FDConfig fd;
  bool pass = true;
  json rows = json::array();
  for (const MetricSpec& spec : selftest_corpus()) {
    const auto pts = sample_points(spec, plan);
    const OracleComparison c = compare_with_oracle(spec, pts, fd);
    double euler = 0.0;
    for (const auto& p : pts) {
      const PointGeometry geo = PointGeometry::compute(spec, p.x, p.y);
      const double L = geo.metric().L;
      euler = std::max(euler, std::fabs(bilinear(geo.metric().g, p.y, p.y) - L * L));
      for (int i = 0; i < kDim; ++i)
        for (int j = 0; j < kDim; ++j) {
          double s = 0.0;
          for (int k = 0; k < kDim; ++k) s += geo.cartan().C[i][j][k] * p.y[k];
          euler = std::max(euler, std::fabs(s));
        }
    }
    const bool ok = c.max() <= tol && euler <= 1e-9;
    pass = pass && ok;
    rows.push_back(json{{"metric", spec.describe()},
                        {"points", c.points},
                        {"g", c.g},
                        {"C", c.C},
                        {"G", c.G},
                        {"N", c.N},
                        {"homogeneity", euler},
                        {"pass", ok}});
  }
  json doc{{"pass", pass},
           {"scope", scope_text(plan.count) + " per metric"},
           {"oracle", rows},
           {"effective_config", json{{"command", cfg.command},
                                     {"samples", plan.count},
                                     {"seed", plan.seed},
                                     {"tol", tol},
                                     {"homogeneity_tol", 1e-9},
                                     {"fd_step", fd.step},
                                     {"richardson", fd.richardson}}}};
  const int rc = write_report(cfg, doc, out, err);
  if (rc != kExitOk) return rc;
  if (!pass) err << "selftest: jet and oracle disagree beyond tolerance\n";
  return pass ? kExitOk : kExitFailure;
}

}  // namespace

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.samples && *cfg.samples < 1) {
    err << "error: --samples must be positive\n";
    return kExitSpecError;
  }
  if (cfg.tol && !(*cfg.tol > 0.0)) {
    err << "error: --tol must be positive\n";
    return kExitSpecError;
  }
  try {
    if (cfg.command == "selftest") return cmd_selftest(cfg, out, err);

    LoadedSpec ls;
    try {
      ls = load_spec_file(cfg.spec_path);
    } catch (const Error& e) {
      err << "error: " << e.name() << ": " << e.what();
      if (e.has_offset()) err << " (byte offset " << e.offset() << ")";
      err << "\n";
      return kExitSpecError;
    }
    if (cfg.command == "classify") return cmd_classify(cfg, ls, out, err);
    if (cfg.command == "conformal") return cmd_conformal(cfg, ls, out, err);
    if (cfg.command == "frame") return cmd_frame(cfg, ls, out, err);
    err << "error: unknown command " << cfg.command << "\n";
    return kExitSpecError;
  } catch (const Error& e) {
    err << "error: " << e.name() << ": " << e.what() << "\n";
    return kExitEvaluationError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitEvaluationError;
  }
}

}  // namespace finsler4::cli
