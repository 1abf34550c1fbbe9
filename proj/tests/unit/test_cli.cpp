#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "corpus.hpp"
#include "json_emit.hpp"
#include "spec_io.hpp"

using namespace finsler4;
using namespace finsler4::cli;
using json = nlohmann::ordered_json;

namespace {

std::string spec_file(const std::string& name) { return std::string(FINSLER4_SPEC_DIR) + "/" + name; }

struct Run {
  int code = 0;
  std::string out, err;
};

Run run(RunConfig cfg) {
  std::ostringstream out, err;
  Run r;
  r.code = run_command(cfg, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

RunConfig config(const std::string& command, const std::string& spec, std::optional<int> samples = {}) {
  RunConfig c;
  c.command = command;
  c.spec_path = spec_file(spec);
  c.samples = samples;
  return c;
}

std::size_t offset_of(const std::string& text) {
  try {
    parse_spec(text);
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SpecParseError);
    return e.offset();
  }
  ADD_FAILURE() << "accepted: " << text;
  return 0;
}

// Same keys in the same order, same strings and booleans, numbers to 1e-9 relative.
void expect_same(const json& a, const json& b, const std::string& path) {
  if (a.is_number() && b.is_number()) {
    const double x = a.get<double>(), y = b.get<double>();
    EXPECT_LE(std::fabs(x - y), 1e-9 * std::max(std::fabs(x), std::fabs(y)) + 1e-12) << path;
    return;
  }
  ASSERT_EQ(a.type(), b.type()) << path;
  if (a.is_object()) {
    ASSERT_EQ(a.size(), b.size()) << path;
    auto ib = b.begin();
    for (auto ia = a.begin(); ia != a.end(); ++ia, ++ib) {
      ASSERT_EQ(ia.key(), ib.key()) << path;
      expect_same(ia.value(), ib.value(), path + "." + ia.key());
    }
  } else if (a.is_array()) {
    ASSERT_EQ(a.size(), b.size()) << path;
    for (std::size_t i = 0; i < a.size(); ++i) expect_same(a[i], b[i], path + "[" + std::to_string(i) + "]");
  } else {
    EXPECT_EQ(a, b) << path;
  }
}

void check_golden(const std::string& name, const Run& r) {
  const std::string path = std::string(FINSLER4_GOLDEN_DIR) + "/" + name;
  if (std::getenv("FINSLER4_UPDATE_GOLDEN")) {
    std::ofstream(path, std::ios::binary) << r.out;
    return;
  }
  std::ifstream in(path, std::ios::binary);
  ASSERT_TRUE(in) << "missing golden file " << path;
  std::ostringstream buf;
  buf << in.rdbuf();
  expect_same(json::parse(r.out), json::parse(buf.str()), name);
}

}  // namespace

TEST(SpecIo, Defaults) {
  const auto ls = parse_spec(R"({"family": "quartic_minkowski"})");
  EXPECT_EQ(ls.plan.count, 16);
  EXPECT_EQ(ls.plan.seed, 1u);
  EXPECT_FALSE(ls.has_sigma);
  EXPECT_EQ(ls.spec.describe(), "quartic_minkowski");
}

TEST(SpecIo, OverridesAndLift) {
  const auto ls = parse_spec(
      R"({"family": "randers", "params": {"b": [0.1, "0.05*x1", 0, 0]}, "sigma": "0.1*x1",
          "domain": {"y_cone": "all_positive"}, "samples": 3, "seed": 9})");
  EXPECT_TRUE(ls.has_sigma);
  EXPECT_EQ(ls.plan.count, 3);
  EXPECT_EQ(ls.plan.seed, 9u);
  EXPECT_EQ(ls.spec.domain().y_cone, YCone::AllPositive);
  EXPECT_NEAR(eval_L_real(ls.spec, {1, 0, 0, 0}, {1, 1, 1, 1}),
              std::exp(0.1) * eval_L_real(test::randers({"0.1", "0.05*x1", "0", "0"}), {1, 0, 0, 0}, {1, 1, 1, 1}),
              1e-14);
}

TEST(SpecIo, ErrorOffsets) {
  EXPECT_EQ(offset_of(R"({"family": "quartic_minkowski", "samples": 4,,})"), 45u);
  EXPECT_EQ(offset_of(R"({"family": "quartic_minkowski", "colour": "blue"})"), 32u);
  EXPECT_EQ(offset_of(R"({"family": "quartic_minkowski", "samples": 0})"), 32u);
  EXPECT_EQ(offset_of(R"({"family": "nonsense"})"), 11u);
  EXPECT_EQ(offset_of(R"({"family": "randers", "params": {"b": [1, 2]}})"), 33u);
  EXPECT_EQ(test::error_of([] { parse_spec(R"({"family": "conformal", "params": {"base": {"family": "quartic_minkowski"}}})"); }),
            ErrorKind::MissingSigma);
  EXPECT_EQ(test::error_of([] { parse_spec(R"({"family": "quartic_minkowski", "sigma": "0.1*q"})"); }),
            ErrorKind::UnknownIdentifier);
}

TEST(JsonEmit, Format) {
  json doc;
  doc["a"] = 1.0;
  doc["b"] = json::array({0.1, 2});
  doc["c"] = std::nan("");
  doc["d"] = json::object();
  doc["d"]["e"] = "x";
  EXPECT_EQ(emit_json(doc),
            "{\n  \"a\": 1.0,\n  \"b\": [0.10000000000000001, 2],\n  \"c\": null,\n  \"d\": {\n    \"e\": \"x\"\n  }\n}\n");
}

TEST(Commands, ExitCodes) {
  EXPECT_EQ(run(config("classify", "malformed.json")).code, kExitSpecError);
  EXPECT_NE(run(config("classify", "malformed.json")).err.find("byte offset 45"), std::string::npos);
  EXPECT_EQ(run(config("classify", "unknown_field.json")).code, kExitSpecError);
  EXPECT_EQ(run(config("classify", "does_not_exist.json")).code, kExitSpecError);
  EXPECT_EQ(run(config("conformal", "quartic.json")).code, kExitSpecError);
  EXPECT_EQ(run(config("classify", "quartic.json", 0)).code, kExitSpecError);
  EXPECT_EQ(run(config("bogus", "quartic.json")).code, kExitSpecError);

  auto frame = config("frame", "quartic.json");
  frame.x = Vec4d{0, 0, 0, 0};
  frame.y = Vec4d{1, 0, 1, 1};
  EXPECT_EQ(run(frame).code, kExitEvaluationError);
}

TEST(Commands, ClassifyVerdicts) {
  const auto q = run(config("classify", "quartic.json", 4));
  ASSERT_EQ(q.code, kExitOk) << q.err;
  const auto v = json::parse(q.out)["verdicts"];
  EXPECT_EQ(v["berwald"], "yes");
  EXPECT_EQ(v["landsberg"], "yes");
  EXPECT_EQ(v["riemannian"], "no");
  EXPECT_EQ(v["locally_minkowski_in_chart"], "yes");

  const auto r = run(config("classify", "randers_nonconst_b.json", 4));
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_EQ(json::parse(r.out)["verdicts"]["berwald"], "no");
  EXPECT_EQ(json::parse(r.out)["verdicts"]["landsberg"], "no");

  const auto bm = json::parse(run(config("classify", "berwald_moor.json", 4)).out);
  EXPECT_EQ(bm["verdicts"]["berwald"], "yes");
  EXPECT_EQ(bm["route_agreement"]["available"], false);
  EXPECT_EQ(bm["frame_valid_points"], 0);
}

TEST(Commands, ConformalSummaries) {
  const auto h = run(config("conformal", "conformal_quartic_homothetic.json", 4));
  ASSERT_EQ(h.code, kExitOk) << h.err;
  const auto doc = json::parse(h.out);
  for (const auto& p : doc["points"]) {
    EXPECT_EQ(p["case"], "homothetic");
    for (const auto& r : p["invariance_residuals"]) EXPECT_LE(r["value"].get<double>(), 1e-9);
    for (const auto& r : p["landsberg_residuals"]) EXPECT_LE(std::fabs(r["value"].get<double>()), 1e-9);
  }
  const auto lin = json::parse(run(config("conformal", "conformal_quartic_linear.json", 4)).out);
  EXPECT_EQ(lin["summary"]["landsberg_conditions_vs_barred_landsberg"]["consistent"], true);
  EXPECT_EQ(lin["summary"]["berwald_conditions_vs_barred_berwald"]["consistent"], true);
  for (const auto& p : lin["points"])
    for (const auto& r : p["invariance_residuals"]) {
      const std::string label = r["label"];
      if (label.rfind("main_scalar_invariance", 0) == 0) EXPECT_LE(r["value"].get<double>(), 1e-7);
      if (label.rfind("hvec_first_component", 0) == 0) EXPECT_LE(r["value"].get<double>(), 1e-6);
    }
}

TEST(Commands, FrameDump) {
  auto cfg = config("frame", "quartic.json");
  cfg.x = Vec4d{0, 0, 0, 0};
  cfg.y = Vec4d{1, 2, 1, 1};
  const auto ok = run(cfg);
  ASSERT_EQ(ok.code, kExitOk) << ok.err;
  EXPECT_LE(json::parse(ok.out)["frame"]["orthonormality_residual"].get<double>(), 1e-9);
  check_golden("frame_quartic.json", ok);

  cfg.y = Vec4d{1, 1, 1, 1};
  const auto vt = run(cfg);
  EXPECT_EQ(vt.code, kExitFrameError);
  EXPECT_EQ(json::parse(vt.out)["error"]["kind"], "VanishingTorsion");
  check_golden("frame_quartic_symmetric.json", vt);

  auto bm = config("frame", "berwald_moor.json");
  bm.x = Vec4d{0, 0, 0, 0};
  bm.y = Vec4d{1, 2, 1, 2};
  const auto np = run(bm);
  EXPECT_EQ(np.code, kExitFrameError);
  EXPECT_EQ(json::parse(np.out)["error"]["kind"], "NotPositiveDefinite");
}

TEST(Commands, Golden) {
  check_golden("classify_quartic.json", run(config("classify", "quartic.json", 4)));
  check_golden("classify_randers_nonconst_b.json", run(config("classify", "randers_nonconst_b.json", 4)));
  check_golden("conformal_quartic.json", run(config("conformal", "conformal_quartic.json", 4)));
}

TEST(Commands, OverridesEchoed) {
  auto cfg = config("classify", "randers_const_b.json");
  cfg.samples = 3;
  cfg.seed = 42;
  cfg.tol = 1e-5;
  const auto ec = json::parse(run(cfg).out)["effective_config"];
  EXPECT_EQ(ec["samples"], 3);
  EXPECT_EQ(ec["seed"], 42);
  EXPECT_EQ(ec["tol"], 1e-5);
}

TEST(Commands, Deterministic) {
  for (const char* command : {"classify", "conformal"}) {
    const auto a = run(config(command, "conformal_quartic.json", 6));
    const auto b = run(config(command, "conformal_quartic.json", 6));
    EXPECT_EQ(a.out, b.out);
  }
}

TEST(Commands, OutputFile) {
  auto cfg = config("classify", "quartic.json", 2);
  cfg.output = testing::TempDir() + "finsler4_cli_out.json";
  const auto r = run(cfg);
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(cfg.output);
  std::ostringstream buf;
  buf << in.rdbuf();
  EXPECT_EQ(buf.str(), run(config("classify", "quartic.json", 2)).out);
}
