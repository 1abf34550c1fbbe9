#include <gtest/gtest.h>

#include <cmath>

#include "corpus.hpp"
#include "finsler4/error.hpp"

using namespace finsler4;
using namespace finsler4::test;

namespace {

std::vector<MetricSpec> families() {
  return {quartic(), berwald_moor(), randers_const(), randers_nonconst(), riemannian_xdep(),
          conformal_quartic(), MetricSpec::expression(parse_expr("(y1^4+y2^4+y3^4+y4^4)^0.25 + 0.1*y1"))};
}

}  // namespace

TEST(BuiltinMetric, FamilyValues) {
  EXPECT_NEAR(eval_L_real(quartic(), {0, 0, 0, 0}, {1, 1, 1, 1}), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(eval_L_real(berwald_moor(), {0, 0, 0, 0}, {1, 2, 1, 2}), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(eval_L_real(conformal_quartic("0.1*x1"), {1, 0, 0, 0}, {1, 1, 1, 1}),
              std::exp(0.1) * std::sqrt(2.0), 1e-14);
}

TEST(BuiltinMetric, DefaultDomains) {
  EXPECT_EQ(quartic().domain().y_cone, YCone::AllNonzero);
  EXPECT_EQ(berwald_moor().domain().y_cone, YCone::AllPositive);
}

TEST(BuiltinMetric, Errors) {
  EXPECT_EQ(error_of([] { randers({"1.2", "0", "0", "0"}); }), ErrorKind::InvalidParameters);
  EXPECT_EQ(error_of([] { randers({"0.1*y1", "0", "0", "0"}); }), ErrorKind::InvalidParameters);
  EXPECT_EQ(error_of([] { conformal_lift(quartic(), "0.1*y1"); }), ErrorKind::SigmaUsesY);
  EXPECT_EQ(error_of([] { eval_L_real(berwald_moor(), {0, 0, 0, 0}, {1, -1, 1, 1}); }),
            ErrorKind::DomainViolation);
  EXPECT_EQ(error_of([] { eval_L_real(quartic(), {0, 0, 0, 0}, {1, 0, 1, 1}); }), ErrorKind::DomainViolation);
}

TEST(Sampling, EmptyPlan) { EXPECT_TRUE(sample_domain(quartic().domain(), {0, 1}).empty()); }

TEST(Sampling, Deterministic) {
  for (const auto& spec : families()) {
    const auto a = sample_points(spec, {16, 7});
    const auto b = sample_points(spec, {16, 7});
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i].x, b[i].x);
      EXPECT_EQ(a[i].y, b[i].y);
    }
  }
}

TEST(Sampling, PositiveCone) {
  for (const auto& p : sample_points(berwald_moor(), {100, 3}))
    for (double c : p.y) EXPECT_GT(c, 0.0);
}

TEST(Sampling, PointsInsideDomain) {
  for (const auto& spec : families())
    for (const auto& p : sample_points(spec, {32, 11})) {
      EXPECT_TRUE(spec.admits(p.x, p.y)) << spec.describe();
      EXPECT_GE(norm(p.y), 0.5 - 1e-12);
      EXPECT_LE(norm(p.y), 2.0 + 1e-12);
    }
}

TEST(Homogeneity, PositiveDegreeOne) {
  for (const auto& spec : families())
    for (const auto& p : sample_points(spec, {16, 1})) {
      const double L = eval_L_real(spec, p.x, p.y);
      for (double lam : {0.5, 2.0}) {
        Vec4d ly = p.y;
        for (double& c : ly) c *= lam;
        EXPECT_NEAR(eval_L_real(spec, p.x, ly), lam * L, 1e-10 * L) << spec.describe();
      }
    }
}

TEST(ConformalSpec, CoefficientCoherence) {
  const MetricSpec lifted = conformal_quartic();
  for (const auto& p : sample_points(lifted, {8, 2})) {
    const Jet a = eval_L(lifted, p.x, p.y, {1, 4});
    const Jet b = exp(eval_sigma(lifted, p.x, {1, 4})) * eval_L(quartic(), p.x, p.y, {1, 4});
    const auto ca = a.coefficients();
    const auto cb = b.coefficients();
    ASSERT_EQ(ca.size(), cb.size());
    double scale = 0.0;
    for (double c : cb) scale = std::max(scale, std::fabs(c));
    for (std::size_t k = 0; k < ca.size(); ++k) EXPECT_NEAR(ca[k], cb[k], 1e-12 * scale);
  }
}
