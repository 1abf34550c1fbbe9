#include "finsler4/frame.hpp"

#include <cmath>
#include <sstream>

namespace finsler4 {

namespace {

template <class T>
struct FrameFields {
  std::array<Vec4<T>, kDim> e{};
  std::array<Vec4<T>, kDim> e_flat{};
  GaugeTag gauge;
  T C_norm{};
};

template <class T>
Vec4<T> lower(const Mat4<T>& g, const Vec4<T>& v) {
  return mat_vec(g, v);
}

// Shared by the real and the jet construction; every branch decision is
// taken on values so both rings produce the same gauge.
template <class T>
FrameFields<T> construct_frame(const Mat4<T>& g, const Mat4<T>& ginv, const Ten3<T>& C,
                               const Vec4<T>& y, const T& L, const FrameSettings& s) {
  if (!is_positive_definite(values(g))) {
    throw Error(ErrorKind::NotPositiveDefinite, "fundamental tensor is not positive definite");
  }
  FrameFields<T> f;
  Vec4<T> Ci{};
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      for (int k = 0; k < kDim; ++k) Ci[i] += C[i][j][k] * ginv[j][k];
  const Vec4<T> Cup = mat_vec(ginv, Ci);
  const T c2 = dot(Cup, Ci);
  if (!(ring::value(c2) >= s.tau_C * s.tau_C)) {
    std::ostringstream msg;
    msg.precision(3);
    msg << "torsion vector norm " << std::sqrt(std::fabs(ring::value(c2))) << " is below tau_C = " << s.tau_C;
    throw Error(ErrorKind::VanishingTorsion, msg.str());
  }
  f.C_norm = ring::sqrt(c2);

  for (int i = 0; i < kDim; ++i) {
    f.e[0][i] = y[i] / L;
    f.e[1][i] = Cup[i] / f.C_norm;
  }
  f.e_flat[0] = lower(g, f.e[0]);
  f.e_flat[1] = lower(g, f.e[1]);

  int filled = 2;
  for (int axis = 0; axis < kDim && filled < kDim; ++axis) {
    // r = s_axis - sum_beta g(s_axis, e_beta) e_beta with g(s_axis, e_beta) = e_flat[beta][axis]
    Vec4<T> r{};
    for (int i = 0; i < kDim; ++i) r[i] = ring::constant_like(i == axis ? 1.0 : 0.0, L);
    for (int b = 0; b < filled; ++b) {
      const T c = f.e_flat[b][axis];
      for (int i = 0; i < kDim; ++i) r[i] -= c * f.e[b][i];
    }
    const T n2 = bilinear(g, r, r);
    if (!(ring::value(n2) > s.seed_threshold * s.seed_threshold)) continue;
    const T n = ring::sqrt(n2);
    for (int i = 0; i < kDim; ++i) r[i] = r[i] / n;
    bool flip = false;
    for (int i = 0; i < kDim; ++i) {
      const double v = ring::value(r[i]);
      if (std::fabs(v) > s.sign_threshold) {
        flip = v < 0.0;
        break;
      }
    }
    if (flip)
      for (auto& c : r) c = -1.0 * c;
    f.gauge.seed_axis[filled - 2] = axis;
    f.gauge.flipped[filled - 2] = flip;
    f.e[filled] = r;
    f.e_flat[filled] = lower(g, r);
    ++filled;
  }
  if (filled < kDim) {
    throw Error(ErrorKind::DegenerateSeed, "no admissible Gram-Schmidt seed for the frame");
  }
  return f;
}

FrameBundle to_bundle(const FrameFields<double>& f, const Mat4d& g, double L) {
  FrameBundle b;
  b.e = f.e;
  b.e_flat = f.e_flat;
  b.gauge = f.gauge;
  b.L = L;
  b.C_norm = f.C_norm;
  double r = 0.0;
  for (int a = 0; a < kDim; ++a)
    for (int c = a; c < kDim; ++c)
      r = std::max(r, std::fabs(bilinear(g, f.e[a], f.e[c]) - (a == c ? 1.0 : 0.0)));
  b.orthonormality_residual = r;
  return b;
}

int rank_of(std::size_t size) {
  switch (size) {
    case 4: return 1;
    case 16: return 2;
    case 64: return 3;
    default: return -1;
  }
}

void check_variance(const std::vector<double>& data, std::string_view variance) {
  const int rank = rank_of(data.size());
  if (rank < 0 || static_cast<int>(variance.size()) != rank) {
    throw Error(ErrorKind::VarianceMismatch,
                "variance '" + std::string(variance) + "' does not match a tensor with " +
                    std::to_string(data.size()) + " entries");
  }
  for (char c : variance) {
    if (c != 'u' && c != 'd') {
      throw Error(ErrorKind::VarianceMismatch, "variance characters must be 'u' or 'd'");
    }
  }
}

// Contract every index of `data` with the per-index 4x4 matrices maps[n]:
// out[a...] = sum_i maps[0][a][i] ... data[i...]
std::vector<double> contract(const std::vector<double>& data, const std::vector<Mat4d>& maps) {
  std::vector<double> cur = data;
  const int rank = static_cast<int>(maps.size());
  for (int n = 0; n < rank; ++n) {
    std::vector<double> next(cur.size(), 0.0);
    int stride = 1;
    for (int m = n + 1; m < rank; ++m) stride *= kDim;
    const int outer = static_cast<int>(cur.size()) / (stride * kDim);
    for (int o = 0; o < outer; ++o)
      for (int a = 0; a < kDim; ++a)
        for (int i = 0; i < kDim; ++i)
          for (int t = 0; t < stride; ++t)
            next[(o * kDim + a) * stride + t] += maps[n][a][i] * cur[(o * kDim + i) * stride + t];
    cur = std::move(next);
  }
  return cur;
}

Mat4d rows(const std::array<Vec4d, kDim>& v) {
  Mat4d m{};
  for (int a = 0; a < kDim; ++a) m[a] = v[a];
  return m;
}

Mat4d transpose(const Mat4d& a) {
  Mat4d t{};
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) t[i][j] = a[j][i];
  return t;
}

Vec4d frame_components(const Vec4d& covector, const FrameBundle& f) {
  Vec4d out{};
  for (int a = 0; a < kDim; ++a) out[a] = dot(covector, f.e[a]);
  return out;
}

}  // namespace

std::string GaugeTag::to_string() const {
  std::ostringstream os;
  const char* names[2] = {"n", "p"};
  for (int k = 0; k < 2; ++k) {
    if (k) os << ',';
    os << names[k] << ":x" << (seed_axis[k] + 1) << (flipped[k] ? '-' : '+');
  }
  return os.str();
}

FrameBundle build_miron_frame(const MetricTensorAt& g, const CartanTensorAt& C, const Vec4d& y,
                              const FrameSettings& settings) {
  const auto f = construct_frame<double>(g.g, g.g_inv, C.C, y, g.L, settings);
  return to_bundle(f, g.g, g.L);
}

FrameBundle build_miron_frame(const PointGeometry& geo, const FrameSettings& settings) {
  return build_miron_frame(geo.metric(), geo.cartan(), geo.y(), settings);
}

std::vector<double> scalar_components(const std::vector<double>& data, std::string_view variance,
                                      const FrameBundle& frame) {
  check_variance(data, variance);
  std::vector<Mat4d> maps;
  for (char c : variance) maps.push_back(c == 'u' ? rows(frame.e_flat) : rows(frame.e));
  return contract(data, maps);
}

std::vector<double> tensor_from_components(const std::vector<double>& components,
                                           std::string_view variance, const FrameBundle& frame) {
  check_variance(components, variance);
  std::vector<Mat4d> maps;
  for (char c : variance) maps.push_back(c == 'u' ? transpose(rows(frame.e)) : transpose(rows(frame.e_flat)));
  return contract(components, maps);
}

const std::array<std::array<int, 3>, kNumMainScalars>& main_scalar_slots() {
  static const std::array<std::array<int, 3>, kNumMainScalars> slots{{
      {1, 1, 1},  // H
      {1, 2, 2},  // I
      {1, 1, 2},  // J
      {1, 3, 3},  // K
      {2, 2, 2},  // H'
      {2, 2, 3},  // I'
      {1, 2, 3},  // J'
      {1, 1, 3},  // K'
  }};
  return slots;
}

Ten3d main_scalar_tensor(const CartanTensorAt& C, const FrameBundle& frame, double L) {
  std::vector<double> flat(64);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      for (int k = 0; k < kDim; ++k) flat[(i * kDim + j) * kDim + k] = L * C.C[i][j][k];
  const auto comp = scalar_components(flat, "ddd", frame);
  Ten3d M{};
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b)
      for (int c = 0; c < kDim; ++c) M[a][b][c] = comp[(a * kDim + b) * kDim + c];
  return M;
}

MainScalars main_scalars(const CartanTensorAt& C, const FrameBundle& frame, double L) {
  const Ten3d M = main_scalar_tensor(C, frame, L);
  MainScalars s;
  for (int n = 0; n < kNumMainScalars; ++n) {
    const auto& t = main_scalar_slots()[n];
    s.values[n] = M[t[0]][t[1]][t[2]];
  }
  return s;
}

FrameAnalysis analyze_frame(const PointGeometry& geo, const FrameSettings& settings) {
  FrameAnalysis out;
  const auto& mt = geo.metric();
  out.frame = build_miron_frame(geo, settings);

  const auto fj = construct_frame<Jet>(geo.g_jet(), geo.g_inv_jet(), geo.C_jet(), geo.y_jet(),
                                       geo.L_jet(), settings);
  const Jet& L = geo.L_jet();

  // M as jets: contract C one index at a time.
  Ten3<Jet> t1{}, t2{}, M{};
  const Ten3<Jet>& C = geo.C_jet();
  for (int a = 0; a < kDim; ++a)
    for (int j = 0; j < kDim; ++j)
      for (int k = j; k < kDim; ++k) {
        Jet s(kFrameCaps, 0.0);
        for (int i = 0; i < kDim; ++i) s += C[i][j][k] * fj.e[a][i];
        t1[a][j][k] = s;
        t1[a][k][j] = s;
      }
  for (int a = 0; a < kDim; ++a)
    for (int b = 0; b < kDim; ++b)
      for (int k = 0; k < kDim; ++k) {
        Jet s(kFrameCaps, 0.0);
        for (int j = 0; j < kDim; ++j) s += t1[a][j][k] * fj.e[b][j];
        t2[a][b][k] = s;
      }
  for (int a = 0; a < kDim; ++a)
    for (int b = a; b < kDim; ++b)
      for (int c = b; c < kDim; ++c) {
        Jet s(kFrameCaps, 0.0);
        for (int k = 0; k < kDim; ++k) s += t2[a][b][k] * fj.e[c][k];
        s = L * s;
        M[a][b][c] = M[a][c][b] = M[b][a][c] = M[b][c][a] = M[c][a][b] = M[c][b][a] = s;
      }
  out.M = values(M);

  ScalarProfile& prof = out.profile;
  for (int n = 0; n < kNumMainScalars; ++n) {
    const auto& t = main_scalar_slots()[n];
    const Jet& S = M[t[0]][t[1]][t[2]];
    prof.scalars.values[n] = S.value();
    const ScalarDerivatives d = covariant_derivatives(S, geo);
    for (int a = 0; a < kDim; ++a) {
      prof.v_derivs[n][a] = mt.L * dot(d.v, out.frame.e[a]);
      prof.h_derivs[n][a] = dot(d.h, out.frame.e[a]);
    }
  }
  const auto& sc = prof.scalars;
  out.unified_residual = sc.H() + sc.I() + sc.K() - mt.L * out.frame.C_norm;
  for (int c = 0; c < 2; ++c) {
    double s = 0.0;
    for (int b = 0; b < kDim; ++b) s += out.M[c + 2][b][b];
    out.torsion_constraints[c] = s;
  }

  // Covariant derivatives of the frame covectors l, m, n, p.
  std::array<CovectorDerivatives, kDim> D;
  for (int a = 0; a < kDim; ++a) D[a] = covariant_derivatives(fj.e_flat[a], geo);
  const auto& e = out.frame.e;
  const auto& ef = out.frame.e_flat;
  auto contract_up = [&](const Vec4d& up, const Mat4d& T) {
    Vec4d r{};
    for (int j = 0; j < kDim; ++j)
      for (int i = 0; i < kDim; ++i) r[j] += up[i] * T[i][j];
    return r;
  };
  // coordinate connection vectors
  const Vec4d hc = contract_up(e[2], D[1].h);
  const Vec4d jc = contract_up(e[3], D[1].h);
  const Vec4d kc = contract_up(e[3], D[2].h);
  Vec4d uc = contract_up(e[2], D[1].v);
  Vec4d vc = contract_up(e[3], D[1].v);
  Vec4d wc = contract_up(e[3], D[2].v);
  for (int j = 0; j < kDim; ++j) {
    uc[j] *= mt.L;
    vc[j] *= mt.L;
    wc[j] *= mt.L;
  }
  ConnectionVectors& cv = prof.vectors;
  cv.h = frame_components(hc, out.frame);
  cv.j = frame_components(jc, out.frame);
  cv.k = frame_components(kc, out.frame);
  cv.u = frame_components(uc, out.frame);
  cv.v = frame_components(vc, out.frame);
  cv.w = frame_components(wc, out.frame);

  ConnectionResiduals& res = out.residuals;
  const Mat4d& g = mt.g;
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) {
      const double Lv = mt.L * D[0].v[i][j];
      res.l_h = std::max(res.l_h, std::fabs(D[0].h[i][j]));
      res.l_v = std::max(res.l_v, std::fabs(Lv - (g[i][j] - ef[0][i] * ef[0][j])));
      const double rm = D[1].h[i][j] - (ef[2][i] * hc[j] + ef[3][i] * jc[j]);
      const double rn = D[2].h[i][j] - (-ef[1][i] * hc[j] + ef[3][i] * kc[j]);
      const double rp = D[3].h[i][j] - (-ef[1][i] * jc[j] - ef[2][i] * kc[j]);
      res.recon_h = std::max({res.recon_h, std::fabs(rm), std::fabs(rn), std::fabs(rp)});
      const double vm = mt.L * D[1].v[i][j] - (-ef[0][i] * ef[1][j] + ef[2][i] * uc[j] + ef[3][i] * vc[j]);
      const double vn = mt.L * D[2].v[i][j] - (-ef[0][i] * ef[2][j] - ef[1][i] * uc[j] + ef[3][i] * wc[j]);
      const double vp = mt.L * D[3].v[i][j] - (-ef[0][i] * ef[3][j] - ef[1][i] * vc[j] - ef[2][i] * wc[j]);
      res.recon_v = std::max({res.recon_v, std::fabs(vm), std::fabs(vn), std::fabs(vp)});
    }
  const Vec4d lm = contract_up(e[0], D[1].h);
  res.l_component = max_abs(lm);
  return out;
}

ConnectionVectorResult connection_vectors(const PointGeometry& geo, const FrameSettings& settings) {
  const FrameAnalysis a = analyze_frame(geo, settings);
  return {a.profile.vectors, a.residuals};
}

ScalarProfile scalar_derivative_components(const PointGeometry& geo, const FrameSettings& settings) {
  return analyze_frame(geo, settings).profile;
}

}  // namespace finsler4
