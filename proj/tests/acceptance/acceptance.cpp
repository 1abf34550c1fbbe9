// Acceptance report: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "finsler4/classify.hpp"
#include "finsler4/oracle.hpp"

using namespace finsler4;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

MetricSpec randers(std::array<std::string, kDim> b) {
  MetricParams p;
  p.b = std::move(b);
  return make_builtin_metric(Family::Randers, p);
}

MetricSpec quartic() { return MetricSpec::quartic_minkowski(); }
MetricSpec randers_const() { return randers({"0.1", "0.05", "0", "0.02"}); }
MetricSpec randers_nonconst() { return randers({"0.1*x2", "0", "0", "0"}); }
MetricSpec riemannian() {
  MetricParams p;
  p.g = std::array<std::array<std::string, kDim>, kDim>{{{"1+0.1*x1^2", "0.05*x2", "0", "0"},
                                                         {"0.05*x2", "1", "0", "0"},
                                                         {"0", "0", "2", "0.1*sin(x3)"},
                                                         {"0", "0", "0.1*sin(x3)", "1"}}};
  return make_builtin_metric(Family::Riemannian, p);
}
MetricSpec conformal_quartic() { return conformal_lift(quartic(), "0.1*x1+0.05*x2^2"); }

std::vector<MetricSpec> lifts() {
  return {conformal_quartic(), conformal_lift(quartic(), "0.1*x1"),
          conformal_lift(randers_const(), "0.05*x3")};
}

const SamplePlan kPlan{16, 1};

std::vector<std::pair<SamplePoint, FrameAnalysis>> frame_points(const MetricSpec& spec) {
  std::vector<std::pair<SamplePoint, FrameAnalysis>> out;
  for (const auto& p : sample_points(spec, kPlan)) {
    try {
      out.emplace_back(p, analyze_frame(PointGeometry::compute(spec, p.x, p.y)));
    } catch (const Error&) {
    }
  }
  return out;
}

double prefixed(const std::vector<NamedResidual>& rs, std::initializer_list<const char*> prefixes) {
  double m = 0.0;
  for (const auto& r : rs)
    for (const char* p : prefixes)
      if (r.label.rfind(p, 0) == 0) m = std::max(m, r.value);
  return m;
}

Outcome ad_correctness() {
  double worst = 0.0;
  for (const auto& spec : {quartic(), randers_const(), randers_nonconst(), riemannian()})
    worst = std::max(worst, compare_with_oracle(spec, sample_points(spec, kPlan)).max());
  return {worst <= 1e-7, fmt("max jet-vs-oracle relative error %.2e over 4 families x 16 points (limit 1e-7)", worst)};
}

Outcome euler_identities() {
  double e1 = 0.0, e2 = 0.0;
  for (const auto& spec : {quartic(), MetricSpec::berwald_moor(), randers_const(), randers_nonconst(),
                           riemannian(), conformal_quartic()})
    for (const auto& p : sample_points(spec, kPlan)) {
      const auto geo = PointGeometry::compute(spec, p.x, p.y);
      const double L = geo.metric().L;
      e1 = std::max(e1, std::fabs(bilinear(geo.metric().g, p.y, p.y) - L * L));
      for (int i = 0; i < kDim; ++i)
        for (int j = 0; j < kDim; ++j) {
          double s = 0.0;
          for (int k = 0; k < kDim; ++k) s += geo.cartan().C[i][j][k] * p.y[k];
          e2 = std::max(e2, std::fabs(s));
        }
    }
  return {e1 <= 1e-9 && e2 <= 1e-9, fmt("max|g(y,y) - L^2| %.2e, max|C_ijk y^k| %.2e (limit 1e-9)", e1, e2)};
}

Outcome miron_frame() {
  double ortho = 0.0, unified = 0.0;
  int n = 0;
  for (const auto& spec : {quartic(), randers_const(), randers_nonconst(), conformal_quartic()})
    for (const auto& [p, fa] : frame_points(spec)) {
      ortho = std::max(ortho, fa.frame.orthonormality_residual);
      unified = std::max(unified, fa.unified_residual);
      ++n;
    }
  bool torsion = false;
  try {
    build_miron_frame(PointGeometry::compute(quartic(), {0, 0, 0, 0}, {1, 1, 1, 1}));
  } catch (const Error& e) {
    torsion = e.kind() == ErrorKind::VanishingTorsion;
  }
  return {n > 0 && ortho <= 1e-9 && unified <= 1e-8 && torsion,
          fmt("orthonormality %.2e (1e-9), |H+I+K-LC| %.2e (1e-8) at %g frame points; ", ortho, unified, n) +
              (torsion ? "VanishingTorsion at quartic y=(1,1,1,1)" : "no VanishingTorsion at quartic y=(1,1,1,1)")};
}

Outcome frame_derivative_identities() {
  double lh = 0.0, lv = 0.0, rec = 0.0;
  for (const auto& spec : {quartic(), randers_nonconst(), conformal_quartic()})
    for (const auto& [p, fa] : frame_points(spec)) {
      lh = std::max(lh, fa.residuals.l_h);
      lv = std::max(lv, fa.residuals.l_v);
      rec = std::max({rec, fa.residuals.recon_h, fa.residuals.recon_v});
    }
  return {lh <= 1e-8 && lv <= 1e-8 && rec <= 1e-7,
          fmt("l_{i|j} %.2e (1e-8), vertical l law %.2e (1e-8), reconstruction %.2e (1e-7)", lh, lv, rec)};
}

Outcome conformal_invariance() {
  double m = 0.0;
  int n = 0;
  const auto spec = conformal_quartic();
  for (const auto& p : sample_points(spec, kPlan)) {
    try {
      m = std::max(m, prefixed(invariance_check(spec, p.x, p.y),
                               {"covector_scaling", "vector_scaling", "metric_scaling", "cartan_mixed_invariance",
                                "main_scalar_invariance"}));
      ++n;
    } catch (const Error&) {
    }
  }
  return {n == kPlan.count && m <= 1e-7, fmt("max scaling/invariance residual %.2e at %g of 16 points (limit 1e-7)", m, n)};
}

Outcome spray_difference_structure() {
  double pattern = 0.0, transvection = 0.0, homothetic = 0.0;
  for (const auto& spec : lifts())
    for (const auto& p : sample_points(spec, kPlan)) {
      try {
        const auto sc = sigma_components(spec, p.x, p.y);
        for (int b = 1; b < kDim; ++b) {
          pattern = std::max(pattern, std::fabs(sc.D[0][b] + sc.D[b][0]));
          for (int c = 1; c < kDim; ++c) pattern = std::max(pattern, std::fabs(sc.D[b][c] - sc.D[c][b]));
        }
        transvection = std::max(transvection, prefixed(invariance_check(spec, p.x, p.y), {"spray_transvection"}));
      } catch (const Error&) {
      }
    }
  const auto h = conformal_lift(quartic(), "0.3");
  for (const auto& p : sample_points(h, kPlan)) {
    try {
      homothetic = std::max(homothetic, max_abs(sigma_components(h, p.x, p.y).D));
    } catch (const Error&) {
    }
  }
  return {pattern <= 1e-7 && transvection <= 1e-7 && homothetic <= 1e-10,
          fmt("sign pattern %.2e (1e-7), transvection %.2e (1e-7), homothetic |D| %.2e (1e-10)", pattern,
              transvection, homothetic)};
}

Outcome first_component_laws() {
  double hv = 0.0, sh = 0.0;
  int n = 0;
  for (const auto& spec : lifts())
    for (const auto& p : sample_points(spec, kPlan)) {
      try {
        const auto r = invariance_check(spec, p.x, p.y);
        hv = std::max(hv, prefixed(r, {"hvec_first_component"}));
        sh = std::max(sh, prefixed(r, {"scalar_hderiv_first_component"}));
        ++n;
      } catch (const Error&) {
      }
    }
  return {n > 0 && hv <= 1e-6 && sh <= 1e-6,
          fmt("h1/j1/k1 laws %.2e, barred S_{,1} law %.2e at %g points (limit 1e-6)", hv, sh, n)};
}

Outcome characterization_routes() {
  int disagree = 0, inconclusive = 0, points = 0;
  bool monotone = true;
  std::vector<MetricSpec> corpus{quartic(), randers_const(), randers_nonconst()};
  for (const auto& l : lifts()) corpus.push_back(l);
  for (const auto& spec : corpus) {
    const auto rep = classify_metric(spec, kPlan);
    if (rep.verdicts.berwald.value == Tristate::Yes && rep.verdicts.landsberg.value != Tristate::Yes) monotone = false;
    for (const auto& pt : rep.points)
      if (pt.error.empty() && pt.residuals.landsberg > pt.residuals.berwald * (1 + 1e-12)) monotone = false;
    const auto sum = characterization_crosscheck(rep);
    disagree += sum.berwald_disagreements + sum.landsberg_disagreements;
    inconclusive += sum.inconclusive;
    points += static_cast<int>(sum.points.size());
  }
  return {disagree == 0 && monotone,
          fmt("%g disagreements, %g inconclusive at %g frame-valid points; ", disagree, inconclusive, points) +
              (monotone ? "Berwald => Landsberg holds" : "Berwald => Landsberg violated")};
}

Outcome co_occurrence() {
  int lands = 0, berw = 0, bad = 0, fail_seen = 0;
  std::vector<MetricSpec> corpus = lifts();
  corpus.push_back(conformal_lift(quartic(), "0.2"));
  for (const auto& spec : corpus)
    for (const auto& p : sample_points(spec, kPlan)) {
      const auto r = evaluate_conformal_point(spec, p);
      if (r.landsberg_agrees) {
        ++lands;
        bad += !*r.landsberg_agrees;
        if (!r.landsberg.satisfied) ++fail_seen;
      }
      if (r.berwald_agrees) {
        ++berw;
        bad += !*r.berwald_agrees;
      }
    }
  return {bad == 0 && lands > 0 && berw > 0 && fail_seen > 0,
          fmt("%g Landsberg and %g Berwald co-occurrence checks, %g inconsistent", lands, berw, bad) +
              fmt(" (%g failing-condition non-examples)", fail_seen)};
}

std::string run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + FINSLER4_CLI + "\" " + args;
  std::string out;
  if (FILE* f = popen(cmd.c_str(), "r")) {
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
    pclose(f);
  }
  return out;
}

Outcome cli_truth_table() {
  struct Row {
    const char* spec;
    const char* expect;
    bool frame_available;
  };
  const Row rows[] = {{"quartic.json", "yes", true},
                      {"berwald_moor.json", "yes", false},
                      {"randers_nonconst_b.json", "no", true}};
  std::string detail;
  bool ok = true;
  for (const auto& row : rows) {
    const std::string args = std::string("classify \"") + FINSLER4_SPEC_DIR + "/" + row.spec + "\"";
    const std::string a = run_cli(args), b = run_cli(args);
    bool good = !a.empty() && a == b;
    if (good) {
      const auto doc = nlohmann::json::parse(a, nullptr, false);
      good = !doc.is_discarded() && doc["verdicts"]["berwald"] == row.expect &&
             doc["verdicts"]["landsberg"] == row.expect &&
             doc["route_agreement"]["available"] == row.frame_available;
    }
    ok = ok && good;
    detail += std::string(detail.empty() ? "" : ", ") + row.spec + (good ? " ok" : " mismatch");
  }
  return {ok, detail + " (byte-identical reruns)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"jet_oracle_agreement", ad_correctness},
      {"homogeneity_identities", euler_identities},
      {"miron_frame", miron_frame},
      {"frame_derivative_identities", frame_derivative_identities},
      {"conformal_invariance", conformal_invariance},
      {"spray_difference_structure", spray_difference_structure},
      {"first_component_laws", first_component_laws},
      {"berwald_landsberg_characterization", characterization_routes},
      {"conformal_condition_cooccurrence", co_occurrence},
      {"cli_classification_truth_table", cli_truth_table},
  };
  int failed = 0;
  int index = 1;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index++, name, o.detail.c_str());
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
