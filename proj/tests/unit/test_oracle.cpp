#include <gtest/gtest.h>

#include "corpus.hpp"
#include "finsler4/geometry.hpp"
#include "finsler4/oracle.hpp"

using namespace finsler4;
using namespace finsler4::test;

namespace {

MultiIndex dy(int i, int n = 1) {
  MultiIndex a{};
  a[kDim + i] = n;
  return a;
}

}  // namespace

TEST(FiniteDifference, PolynomialDerivatives) {
  const PointFunction cube = [](const Vec4d&, const Vec4d& y) { return y[0] * y[0] * y[0]; };
  const SamplePoint at{{0, 0, 0, 0}, {2, 1, 1, 1}};
  EXPECT_NEAR(fd_partial(cube, at, dy(0, 2)), 12.0, 1e-6);
  EXPECT_NEAR(fd_partial(cube, at, dy(0, 3)), 6.0, 1e-5);
  EXPECT_NEAR(fd_partial(cube, at, dy(1)), 0.0, 1e-9);
  EXPECT_EQ(fd_partial(cube, at, MultiIndex{}), 8.0);
}

TEST(FiniteDifference, QuarticSquaredNorm) {
  const PointFunction L2 = [](const Vec4d&, const Vec4d& y) {
    double q = 0.0;
    for (double c : y) q += c * c * c * c;
    return std::sqrt(q);
  };
  EXPECT_NEAR(fd_partial(L2, {{0, 0, 0, 0}, {1, 1, 1, 1}}, dy(0)), 1.0, 1e-9);
}

TEST(FiniteDifference, Errors) {
  const PointFunction f = [](const Vec4d& x, const Vec4d& y) { return x[0] + y[0]; };
  EXPECT_EQ(error_of([&] { fd_partial(f, {}, dy(0, 4)); }), ErrorKind::UnsupportedOrder);
  MultiIndex mixed{};
  mixed[0] = 2;
  mixed[kDim] = 2;
  EXPECT_EQ(error_of([&] { fd_partial(f, {}, mixed); }), ErrorKind::UnsupportedOrder);

  const MetricSpec bm = berwald_moor();
  const PointFunction L = [&](const Vec4d& x, const Vec4d& y) { return eval_L_real(bm, x, y); };
  EXPECT_EQ(error_of([&] { fd_partial(L, {{0, 0, 0, 0}, {1e-6, 1, 1, 1}}, dy(0)); }),
            ErrorKind::StencilLeavesDomain);
}

TEST(OracleTensors, QuarticClosedForm) {
  const Vec4d y{1.0, -0.7, 0.4, 1.3};
  double q = 0.0;
  for (double c : y) q += std::pow(c, 4);
  const auto o = oracle_tensors(quartic(), {0, 0, 0, 0}, y);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) {
      const double expect = (i == j ? 3.0 * y[i] * y[i] / std::sqrt(q) : 0.0) -
                            2.0 * std::pow(y[i], 3) * std::pow(y[j], 3) / std::pow(q, 1.5);
      EXPECT_NEAR(o.g[i][j], expect, 1e-8);
    }
  EXPECT_NEAR(o.L, std::pow(q, 0.25), 1e-15);
  EXPECT_LT(max_abs(o.G), 1e-8);
}

TEST(OracleTensors, AgreesWithJets) {
  for (const auto& spec : {quartic(), randers_const(), randers_nonconst(), riemannian_xdep(),
                           conformal_quartic(), berwald_moor()}) {
    const auto cmp = compare_with_oracle(spec, sample_points(spec, {16, 21}));
    EXPECT_EQ(cmp.points, 16);
    EXPECT_LT(cmp.max(), 1e-7) << spec.describe() << " g " << cmp.g << " C " << cmp.C << " G "
                               << cmp.G << " N " << cmp.N;
  }
}

TEST(OracleTensors, RandersNonlinearConnection) {
  const auto spec = randers_nonconst();
  for (const auto& p : sample_points(spec, {4, 22})) {
    const auto o = oracle_tensors(spec, p.x, p.y);
    const auto geo = PointGeometry::compute(spec, p.x, p.y);
    EXPECT_GT(max_abs(o.N), 1e-4);
    EXPECT_LT(relative_error(geo.spray().N, o.N, max_abs(geo.metric().g) * norm(p.y)), 1e-7);
  }
}

TEST(OracleTensors, RelativeErrorFloor) {
  Vec4d a{1e-14, 0, 0, 0}, b{};
  EXPECT_NEAR(relative_error(a, b, 1.0), 1e-14, 1e-30);
  EXPECT_NEAR(relative_error(Vec4d{2, 0, 0, 0}, Vec4d{1, 0, 0, 0}), 1.0, 1e-15);
}
