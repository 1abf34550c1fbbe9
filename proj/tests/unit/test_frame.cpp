#include <gtest/gtest.h>

#include "corpus.hpp"
#include "finsler4/frame.hpp"
#include "finsler4/oracle.hpp"

using namespace finsler4;
using namespace finsler4::test;

namespace {

const Vec4d kOrigin{0, 0, 0, 0};
const Vec4d kGeneric{1, 2, 1, 1};

PointGeometry at(const MetricSpec& spec, const Vec4d& x, const Vec4d& y) {
  return PointGeometry::compute(spec, x, y);
}

std::vector<double> flatten(const Mat4d& m) {
  std::vector<double> out;
  for (const auto& row : m) out.insert(out.end(), row.begin(), row.end());
  return out;
}

std::vector<double> flatten(const Ten3d& t) {
  std::vector<double> out;
  for (const auto& m : t)
    for (const auto& row : m) out.insert(out.end(), row.begin(), row.end());
  return out;
}

std::vector<SamplePoint> frame_points(const MetricSpec& spec, int n, std::uint64_t seed) {
  std::vector<SamplePoint> out;
  for (const auto& p : sample_points(spec, {n, seed})) {
    try {
      build_miron_frame(at(spec, p.x, p.y));
      out.push_back(p);
    } catch (const Error&) {
    }
  }
  return out;
}

}  // namespace

TEST(MironFrame, Existence) {
  EXPECT_EQ(error_of([] { build_miron_frame(at(quartic(), kOrigin, {1, 1, 1, 1})); }),
            ErrorKind::VanishingTorsion);
  EXPECT_EQ(error_of([] { build_miron_frame(at(berwald_moor(), kOrigin, {1, 2, 1, 2})); }),
            ErrorKind::NotPositiveDefinite);
  for (const auto& p : sample_points(riemannian_xdep(), {8, 1}))
    EXPECT_EQ(error_of([&] { build_miron_frame(at(riemannian_xdep(), p.x, p.y)); }),
              ErrorKind::VanishingTorsion);
}

TEST(MironFrame, Orthonormal) {
  const auto geo = at(quartic(), kOrigin, kGeneric);
  const auto f = build_miron_frame(geo);
  EXPECT_LE(f.orthonormality_residual, 1e-9);
  for (int a = 0; a < kDim; ++a)
    for (int b = a; b < kDim; ++b)
      EXPECT_NEAR(bilinear(geo.metric().g, f.e[a], f.e[b]), a == b ? 1.0 : 0.0, 1e-9);
  for (int i = 0; i < kDim; ++i) EXPECT_NEAR(f.e[0][i], kGeneric[i] / geo.metric().L, 1e-15);
}

TEST(MironFrame, MatchesIndependentGramSchmidt) {
  for (const auto& spec : {quartic(), randers_nonconst(), conformal_quartic()})
    for (const auto& p : frame_points(spec, 8, 2)) {
      const auto geo = at(spec, p.x, p.y);
      const auto f = build_miron_frame(geo);
      const auto o = oracle_tensors(spec, p.x, p.y);
      const auto ref = oracle_frame(o.g, o.C, p.y, o.L);
      // n and p up to sign: the oracle's sign test sees FD noise on components that vanish exactly
      for (int a = 0; a < kDim; ++a) {
        double same = 0.0, flipped = 0.0;
        for (int i = 0; i < kDim; ++i) {
          same = std::max(same, std::fabs(f.e[a][i] - ref[a][i]));
          flipped = std::max(flipped, std::fabs(f.e[a][i] + ref[a][i]));
        }
        EXPECT_LE(a < 2 ? same : std::min(same, flipped), 1e-6) << spec.describe() << " vector " << a;
      }
    }
}

TEST(MironFrame, Deterministic) {
  const auto a = build_miron_frame(at(randers_nonconst(), {0.3, -0.2, 0.1, 0.5}, kGeneric));
  const auto b = build_miron_frame(at(randers_nonconst(), {0.3, -0.2, 0.1, 0.5}, kGeneric));
  EXPECT_EQ(a.e, b.e);
  EXPECT_EQ(a.e_flat, b.e_flat);
  EXPECT_EQ(a.gauge.to_string(), b.gauge.to_string());
}

TEST(MironFrame, ConformalGaugeCommutes) {
  const auto lifted = conformal_quartic();
  for (const auto& p : frame_points(lifted, 8, 3)) {
    const double sigma = 0.1 * p.x[0] + 0.05 * p.x[1] * p.x[1];
    const auto base = build_miron_frame(at(quartic(), p.x, p.y));
    const auto bar = build_miron_frame(at(lifted, p.x, p.y));
    for (int a = 0; a < kDim; ++a)
      for (int i = 0; i < kDim; ++i) EXPECT_NEAR(bar.e[a][i], std::exp(-sigma) * base.e[a][i], 1e-9);
  }
}

TEST(ScalarComponents, Examples) {
  const auto geo = at(quartic(), kOrigin, kGeneric);
  const auto f = build_miron_frame(geo);
  const auto id = scalar_components(flatten(identity4()), "ud", f);
  const auto gd = scalar_components(flatten(geo.metric().g), "dd", f);
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b) {
      EXPECT_NEAR(id[a * kDim + b], a == b ? 1.0 : 0.0, 1e-12);
      EXPECT_NEAR(gd[a * kDim + b], a == b ? 1.0 : 0.0, 1e-9);
    }
  const auto C = scalar_components(flatten(geo.cartan().C), "ddd", f);
  for (int b = 0; b < kDim * kDim; ++b) EXPECT_NEAR(C[b], 0.0, 1e-8);

  const auto g = flatten(geo.metric().g);
  const auto back = tensor_from_components(gd, "dd", f);
  for (std::size_t k = 0; k < g.size(); ++k) EXPECT_NEAR(back[k], g[k], 1e-12);

  EXPECT_EQ(error_of([&] { scalar_components(g, "d", f); }), ErrorKind::VarianceMismatch);
  EXPECT_EQ(error_of([&] { scalar_components(g, "dx", f); }), ErrorKind::VarianceMismatch);
}

TEST(MainScalars, UnifiedScalarAndTorsionConstraints) {
  for (const auto& spec : {quartic(), randers_nonconst(), conformal_quartic()}) {
    const auto pts = spec.describe() == quartic().describe()
                         ? std::vector<SamplePoint>{{kOrigin, kGeneric}}
                         : frame_points(spec, 8, 4);
    for (const auto& p : pts) {
      const auto geo = at(spec, p.x, p.y);
      const auto fa = analyze_frame(geo);
      const auto& s = fa.profile.scalars;
      EXPECT_NEAR(s.H() + s.I() + s.K(), geo.metric().L * geo.cartan().C_norm, 1e-8);
      EXPECT_LE(fa.unified_residual, 1e-8);
      EXPECT_LE(std::fabs(fa.torsion_constraints[0]), 1e-8);
      EXPECT_LE(std::fabs(fa.torsion_constraints[1]), 1e-8);
      for (const auto& v : fa.profile.v_derivs) EXPECT_NEAR(v[0], 0.0, 1e-8) << spec.describe();
    }
  }
}

TEST(MainScalars, ConformallyInvariant) {
  const auto lifted = conformal_lift(quartic(), "0.1*x1");
  for (const auto& p : frame_points(lifted, 8, 5)) {
    const auto a = analyze_frame(at(quartic(), p.x, p.y));
    const auto b = analyze_frame(at(lifted, p.x, p.y));
    for (int k = 0; k < kNumMainScalars; ++k)
      EXPECT_NEAR(b.profile.scalars.values[k], a.profile.scalars.values[k], 1e-7);
    EXPECT_LT(max_abs_diff(a.M, b.M), 1e-7);
  }
}

TEST(ConnectionVectors, VanishForLocallyMinkowski) {
  for (const auto& spec : {quartic(), randers_const()})
    for (const auto& p : frame_points(spec, 8, 6)) {
      const auto fa = analyze_frame(at(spec, p.x, p.y));
      EXPECT_LE(max_abs(fa.profile.vectors.h), 1e-7);
      EXPECT_LE(max_abs(fa.profile.vectors.j), 1e-7);
      EXPECT_LE(max_abs(fa.profile.vectors.k), 1e-7);
      for (const auto& s : fa.profile.h_derivs) EXPECT_LE(max_abs(s), 1e-7);
    }
}

TEST(ConnectionVectors, ReconstructionOnRanders) {
  const auto spec = randers_nonconst();
  const auto pts = frame_points(spec, 8, 7);
  ASSERT_FALSE(pts.empty());
  double nonzero = 0.0;
  for (const auto& p : pts) {
    const auto r = connection_vectors(at(spec, p.x, p.y));
    EXPECT_LE(r.residuals.recon_h, 1e-7);
    EXPECT_LE(r.residuals.recon_v, 1e-7);
    EXPECT_LE(r.residuals.l_h, 1e-8);
    EXPECT_LE(r.residuals.l_v, 1e-8);
    EXPECT_LE(r.residuals.l_component, 1e-8);
    nonzero = std::max({nonzero, max_abs(r.vectors.h), max_abs(r.vectors.j), max_abs(r.vectors.k)});
  }
  EXPECT_GT(nonzero, 1e-4);
}

TEST(ScalarProfile, VerticalDerivativesAgainstFiniteDifferences) {
  const auto spec = randers_nonconst();
  const auto p = frame_points(spec, 4, 8).front();
  const auto geo = at(spec, p.x, p.y);
  const auto profile = scalar_derivative_components(geo);
  const auto frame = build_miron_frame(geo);
  const double h = 1e-5;
  for (int a = 0; a < kDim; ++a) {
    auto scalars_at = [&](double t) {
      Vec4d y = p.y;
      for (int i = 0; i < kDim; ++i) y[i] += t * frame.e[a][i];
      const auto g = at(spec, p.x, y);
      return main_scalars(g.cartan(), build_miron_frame(g), g.metric().L).values;
    };
    const auto plus = scalars_at(h), minus = scalars_at(-h);
    for (int s = 0; s < kNumMainScalars; ++s) {
      const double fd = geo.metric().L * (plus[s] - minus[s]) / (2 * h);
      EXPECT_NEAR(profile.v_derivs[s][a], fd, 1e-5 * std::max(1.0, std::fabs(fd))) << s << " " << a;
    }
  }
}

TEST(MainScalars, SlotConvention) {
  const auto& slots = main_scalar_slots();
  EXPECT_EQ(slots[0], (std::array<int, 3>{1, 1, 1}));
  EXPECT_EQ(kMainScalarNames[0], "H");
  EXPECT_EQ(kMainScalarNames[7], "K'");
}
