#include "finsler4/geometry.hpp"

#include <cmath>

namespace finsler4 {

namespace {

void require_depth(const Jet& f) {
  const DegreeCaps c = f.caps();
  if (!f.typed() || c.x_max < 1 || c.y_max < 1) {
    throw Error(ErrorKind::InsufficientJetDepth,
                "covariant derivatives need one x-order and one y-order of jet depth");
  }
}

}  // namespace

PointGeometry PointGeometry::compute(const MetricSpec& spec, const Vec4d& x, const Vec4d& y) {
  PointGeometry p;
  p.x_ = x;
  p.y_ = y;

  const Jet L = eval_L(spec, x, y, kPointCaps);
  if (!(L.value() > 0.0)) {
    throw Error(ErrorKind::DomainViolation, "fundamental function is not positive at the point");
  }
  const Jet L2 = L * L;

  Vec4<Jet> dL2;
  for (int i = 0; i < kDim; ++i) {
    dL2[i] = L2.dy(i);
    p.dL2_dy_[i] = dL2[i].value();
  }

  // g_ij = 1/2 d^2 L^2 / dy^i dy^j, caps (1, 3)
  Mat4<Jet> g;
  for (int i = 0; i < kDim; ++i)
    for (int j = i; j < kDim; ++j) {
      g[i][j] = 0.5 * dL2[i].dy(j);
      g[j][i] = g[i][j];
    }
  // C_ijk = 1/2 d g_ij / dy^k, caps (1, 2)
  Ten3<Jet> C;
  for (int i = 0; i < kDim; ++i)
    for (int j = i; j < kDim; ++j)
      for (int k = j; k < kDim; ++k) {
        const Jet c = 0.5 * g[i][j].dy(k);
        C[i][j][k] = C[i][k][j] = C[j][i][k] = C[j][k][i] = C[k][i][j] = C[k][j][i] = c;
      }

  MetricTensorAt& mt = p.metric_;
  mt.L = L.value();
  mt.g = values(g);
  mt.positive_definite = is_positive_definite(mt.g);
  const Mat4<Jet> ginv = invert(g);
  mt.g_inv = values(ginv);

  CartanTensorAt& ct = p.cartan_;
  ct.C = values(C);
  for (int i = 0; i < kDim; ++i) {
    double s = 0.0;
    for (int j = 0; j < kDim; ++j)
      for (int k = 0; k < kDim; ++k) s += ct.C[i][j][k] * mt.g_inv[j][k];
    ct.C_vec[i] = s;
  }
  ct.C_norm_sq = bilinear(mt.g_inv, ct.C_vec, ct.C_vec);
  ct.C_norm = std::sqrt(std::fabs(ct.C_norm_sq));

  for (int k = 0; k < kDim; ++k)
    for (int i = 0; i < kDim; ++i)
      for (int j = 0; j < kDim; ++j) p.dg_dx_[k][i][j] = g[i][j].d(x_slot(k));

  // Spray G^i = 1/4 g^ir (y^k d_k dot-d_r L^2 - d_r L^2), kept as a jet in y
  // only (caps (0, 3)) so that its third y-derivatives are available.
  constexpr DegreeCaps ycaps{0, 3};
  Vec4<Jet> yv;
  for (int k = 0; k < kDim; ++k) yv[k] = Jet::variable(y_slot(k), y[k], ycaps);
  Vec4<Jet> rhs;
  for (int r = 0; r < kDim; ++r) {
    Jet a(ycaps, 0.0);
    for (int k = 0; k < kDim; ++k) a += yv[k] * dL2[r].dx(k).truncated(ycaps);
    rhs[r] = a - L2.dx(r).truncated(ycaps);
  }
  Vec4<Jet> G;
  for (int i = 0; i < kDim; ++i) {
    Jet s(ycaps, 0.0);
    for (int r = 0; r < kDim; ++r) s += ginv[i][r].truncated(ycaps) * rhs[r];
    G[i] = 0.25 * s;
  }
  SprayAt& sp = p.spray_;
  for (int i = 0; i < kDim; ++i) {
    sp.G[i] = G[i].value();
    for (int j = 0; j < kDim; ++j) sp.N[i][j] = G[i].d(y_slot(j));
    for (int h = 0; h < kDim; ++h)
      for (int j = 0; j < kDim; ++j)
        for (int k = 0; k < kDim; ++k) {
          MultiIndex a{};
          a[y_slot(h)] += 1;
          a[y_slot(j)] += 1;
          a[y_slot(k)] += 1;
          sp.G_hess3[i][h][j][k] = G[i].partial(a);
        }
  }

  // Cartan connection from delta-derivatives of g.
  // dg[j][r][k] = delta_j g_rk = d_j g_rk - N^s_j dot-d_s g_rk, dot-d_s g_rk = 2 C_rks.
  Ten3d dg{};
  for (int j = 0; j < kDim; ++j)
    for (int r = 0; r < kDim; ++r)
      for (int k = 0; k < kDim; ++k) {
        double v = p.dg_dx_[j][r][k];
        for (int s = 0; s < kDim; ++s) v -= sp.N[s][j] * 2.0 * ct.C[r][k][s];
        dg[j][r][k] = v;
      }
  ConnectionAt& cn = p.connection_;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      for (int k = 0; k < kDim; ++k) {
        double f = 0.0, c = 0.0;
        for (int r = 0; r < kDim; ++r) {
          f += mt.g_inv[i][r] * (dg[j][r][k] + dg[k][j][r] - dg[r][j][k]);
          c += mt.g_inv[i][r] * ct.C[r][j][k];
        }
        cn.F[i][j][k] = 0.5 * f;
        cn.Cmix[i][j][k] = c;
      }

  // C_{ijk|h} = delta_h C_ijk - C_rjk F^r_ih - C_irk F^r_jh - C_ijr F^r_kh
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      for (int k = 0; k < kDim; ++k)
        for (int h = 0; h < kDim; ++h) {
          double v = C[i][j][k].d(x_slot(h));
          for (int s = 0; s < kDim; ++s) v -= sp.N[s][h] * C[i][j][k].d(y_slot(s));
          for (int r = 0; r < kDim; ++r) {
            v -= ct.C[r][j][k] * cn.F[r][i][h];
            v -= ct.C[i][r][k] * cn.F[r][j][h];
            v -= ct.C[i][j][r] * cn.F[r][k][h];
          }
          p.cartan_h_[i][j][k][h] = v;
        }
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      for (int k = 0; k < kDim; ++k) {
        double v = 0.0;
        for (int h = 0; h < kDim; ++h) v += p.cartan_h_[i][j][k][h] * y[h];
        p.cartan_0_[i][j][k] = v;
      }

  p.L11_ = L.truncated(kFrameCaps);
  for (int i = 0; i < kDim; ++i) {
    p.y11_[i] = Jet::variable(y_slot(i), y[i], kFrameCaps);
    for (int j = 0; j < kDim; ++j) {
      p.g11_[i][j] = g[i][j].truncated(kFrameCaps);
      p.ginv11_[i][j] = ginv[i][j].truncated(kFrameCaps);
      for (int k = 0; k < kDim; ++k) p.C11_[i][j][k] = C[i][j][k].truncated(kFrameCaps);
    }
  }
  return p;
}

double PointGeometry::delta(const Jet& f, int k) const {
  require_depth(f);
  double v = f.d(x_slot(k));
  for (int r = 0; r < kDim; ++r) v -= spray_.N[r][k] * f.d(y_slot(r));
  return v;
}

FundamentalTensors fundamental_tensors(const MetricSpec& spec, const Vec4d& x, const Vec4d& y) {
  const PointGeometry p = PointGeometry::compute(spec, x, y);
  return {p.metric(), p.cartan()};
}

SprayConnections spray_and_connections(const MetricSpec& spec, const Vec4d& x, const Vec4d& y) {
  const PointGeometry p = PointGeometry::compute(spec, x, y);
  return {p.spray(), p.connection()};
}

CartanHDerivatives cartan_hderivatives_of_C(const MetricSpec& spec, const Vec4d& x, const Vec4d& y) {
  const PointGeometry p = PointGeometry::compute(spec, x, y);
  return {p.cartan_h(), p.cartan_0()};
}

TensorResiduals tensor_residuals(const PointGeometry& geo) {
  const Vec4d& y = geo.y();
  double ny = 0.0, ny1 = 0.0;
  for (double v : y) {
    ny += v * v;
    ny1 += std::fabs(v);
  }
  ny = std::sqrt(ny);
  const double gmax = max_abs(geo.metric().g);
  const double s = gmax / ny;
  TensorResiduals r;
  r.riemannian = max_abs(geo.cartan().C) / s;
  r.locally_minkowski = max_abs(geo.dg_dx()) / gmax;
  r.berwald = max_abs(geo.cartan_h()) / s;
  r.landsberg = max_abs(geo.cartan_0()) / (s * ny1);
  double h3 = 0.0;
  for (const auto& t : geo.spray().G_hess3) h3 = std::max(h3, max_abs(t));
  r.spray_cubic = h3 * ny;
  return r;
}

ScalarDerivatives covariant_derivatives(const Jet& field, const PointGeometry& geo) {
  require_depth(field);
  ScalarDerivatives out;
  for (int k = 0; k < kDim; ++k) {
    out.h[k] = geo.delta(field, k);
    out.v[k] = field.d(y_slot(k));
  }
  return out;
}

CovectorDerivatives covariant_derivatives(const Vec4<Jet>& field, const PointGeometry& geo) {
  for (const Jet& f : field) require_depth(f);
  const auto& F = geo.connection().F;
  const auto& Cm = geo.connection().Cmix;
  Vec4d xv{};
  for (int r = 0; r < kDim; ++r) xv[r] = field[r].value();
  CovectorDerivatives out;
  for (int i = 0; i < kDim; ++i)
    for (int k = 0; k < kDim; ++k) {
      double h = geo.delta(field[i], k);
      double v = field[i].d(y_slot(k));
      for (int r = 0; r < kDim; ++r) {
        h -= xv[r] * F[r][i][k];
        v -= xv[r] * Cm[r][i][k];
      }
      out.h[i][k] = h;
      out.v[i][k] = v;
    }
  return out;
}

}  // namespace finsler4
