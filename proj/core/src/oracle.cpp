#include "finsler4/oracle.hpp"

#include "finsler4/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace finsler4 {

namespace {

struct Tap {
  int offset;
  double weight;
};

const std::vector<Tap>& stencil(int order) {
  static const std::vector<Tap> s1{{-1, -0.5}, {1, 0.5}};
  static const std::vector<Tap> s2{{-1, 1.0}, {0, -2.0}, {1, 1.0}};
  static const std::vector<Tap> s3{{-2, -0.5}, {-1, 1.0}, {1, -1.0}, {2, 0.5}};
  static const std::vector<Tap> s0{{0, 1.0}};
  switch (order) {
    case 1: return s1;
    case 2: return s2;
    case 3: return s3;
    default: return s0;
  }
}

using ExtVec = Vec4<long double>;

struct ExtPoint {
  ExtVec x{}, y{};
  long double& operator[](int slot) { return slot < kDim ? x[slot] : y[slot - kDim]; }
};

long double central_difference(const PointFunctionExt& f, const ExtPoint& at,
                               const MultiIndex& order, long double h) {
  std::vector<int> slots;
  for (int s = 0; s < kNumVars; ++s)
    if (order[s] > 0) slots.push_back(s);

  long double ynorm = 0.0L;
  for (long double c : at.y) ynorm += c * c;
  ynorm = std::sqrt(ynorm);
  std::array<long double, kNumVars> hs{};
  for (int s : slots) {
    ExtPoint c = at;
    const long double floor = s < kDim ? 1.0L : 0.5L * ynorm;
    hs[s] = h * std::max(floor, std::fabs(c[s]));
  }

  long double acc = 0.0L;
  // odometer over the tensor-product stencil
  std::vector<std::size_t> idx(slots.size(), 0);
  while (true) {
    ExtPoint p = at;
    long double w = 1.0L;
    for (std::size_t n = 0; n < slots.size(); ++n) {
      const int s = slots[n];
      const Tap& t = stencil(order[s])[idx[n]];
      p[s] += t.offset * hs[s];
      w *= t.weight / std::pow(hs[s], order[s]);
    }
    long double v = 0.0L;
    try {
      v = f(p.x, p.y);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::DomainViolation) {
        throw Error(ErrorKind::StencilLeavesDomain,
                    std::string("finite-difference stencil leaves the domain: ") + e.what());
      }
      throw;
    }
    acc += w * v;
    std::size_t n = 0;
    for (; n < slots.size(); ++n) {
      if (++idx[n] < stencil(order[slots[n]]).size()) break;
      idx[n] = 0;
    }
    if (n == slots.size()) break;
  }
  return acc;
}

ExtVec extend(const Vec4d& v) {
  ExtVec out{};
  for (int i = 0; i < kDim; ++i) out[i] = v[i];
  return out;
}

Vec4d narrow(const ExtVec& v) {
  Vec4d out{};
  for (int i = 0; i < kDim; ++i) out[i] = static_cast<double>(v[i]);
  return out;
}

MultiIndex mi(std::initializer_list<int> slots) {
  MultiIndex a{};
  for (int s : slots) a[s] += 1;
  return a;
}

}  // namespace

double fd_partial(const PointFunctionExt& f, const SamplePoint& at, const MultiIndex& order,
                  const FDConfig& cfg) {
  int total = 0;
  for (int o : order) {
    if (o < 0) throw Error(ErrorKind::UnsupportedOrder, "negative derivative order");
    total += o;
  }
  if (total > 3) {
    throw Error(ErrorKind::UnsupportedOrder,
                "finite differences support total order <= 3, got " + std::to_string(total));
  }
  const ExtPoint p{extend(at.x), extend(at.y)};
  if (total == 0) return static_cast<double>(central_difference(f, p, order, 0.0L));
  static constexpr double kPlain[] = {0.1, 0.2, 2.0};
  static constexpr double kExtrapolated[] = {2.0, 5.0, 20.0};
  const long double h = cfg.step * (cfg.richardson ? kExtrapolated : kPlain)[total - 1];
  const long double d1 = central_difference(f, p, order, h);
  if (!cfg.richardson) return static_cast<double>(d1);
  const long double d2 = central_difference(f, p, order, 0.5L * h);
  return static_cast<double>((4.0L * d2 - d1) / 3.0L);
}

double fd_partial(const PointFunction& f, const SamplePoint& at, const MultiIndex& order,
                  const FDConfig& cfg) {
  const PointFunctionExt ext = [&f](const ExtVec& x, const ExtVec& y) -> long double {
    return f(narrow(x), narrow(y));
  };
  return fd_partial(ext, at, order, cfg);
}

OracleTensors oracle_tensors(const MetricSpec& spec, const Vec4d& x, const Vec4d& y,
                             const FDConfig& cfg) {
  const PointFunctionExt L2 = [&spec](const ExtVec& xx, const ExtVec& yy) {
    spec.check_point(narrow(xx), narrow(yy));
    const long double l = eval_L_generic(spec, xx, yy);
    return l * l;
  };
  const SamplePoint at{x, y};
  auto D = [&](std::initializer_list<int> slots) { return fd_partial(L2, at, mi(slots), cfg); };

  OracleTensors o;
  o.L = eval_L_real(spec, x, y);
  for (int i = 0; i < kDim; ++i)
    for (int j = i; j < kDim; ++j) o.g[i][j] = o.g[j][i] = 0.5 * D({y_slot(i), y_slot(j)});
  for (int i = 0; i < kDim; ++i)
    for (int j = i; j < kDim; ++j)
      for (int k = j; k < kDim; ++k) {
        const double c = 0.25 * D({y_slot(i), y_slot(j), y_slot(k)});
        o.C[i][j][k] = o.C[i][k][j] = o.C[j][i][k] = o.C[j][k][i] = o.C[k][i][j] = o.C[k][j][i] = c;
      }
  const Mat4d gi = invert(o.g);

  // E_r = y^k d_k dot-d_r L^2 - d_r L^2, G^i = 1/4 g^ir E_r
  Mat4d xy{};  // xy[k][r] = d_k dot-d_r L^2
  Vec4d dx{};
  for (int k = 0; k < kDim; ++k) {
    dx[k] = D({x_slot(k)});
    for (int r = 0; r < kDim; ++r) xy[k][r] = D({x_slot(k), y_slot(r)});
  }
  Vec4d E{};
  for (int r = 0; r < kDim; ++r) {
    double a = -dx[r];
    for (int k = 0; k < kDim; ++k) a += y[k] * xy[k][r];
    E[r] = a;
  }
  for (int i = 0; i < kDim; ++i) {
    double s = 0.0;
    for (int r = 0; r < kDim; ++r) s += gi[i][r] * E[r];
    o.G[i] = 0.25 * s;
  }

  // N^i_j = 1/4 (dot-d_j g^ir E_r + g^ir dot-d_j E_r) with
  // dot-d_j g^ir = -2 g^ia C_abj g^br and
  // dot-d_j E_r = y^k d_k dot-d_j dot-d_r L^2 + d_j dot-d_r L^2 - d_r dot-d_j L^2.
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) {
      double s = 0.0;
      for (int r = 0; r < kDim; ++r) {
        double dgi = 0.0;
        for (int a = 0; a < kDim; ++a)
          for (int b = 0; b < kDim; ++b) dgi += gi[i][a] * o.C[a][b][j] * gi[b][r];
        s += -2.0 * dgi * E[r];
        double dE = xy[j][r] - xy[r][j];
        for (int k = 0; k < kDim; ++k) dE += y[k] * D({x_slot(k), y_slot(j), y_slot(r)});
        s += gi[i][r] * dE;
      }
      o.N[i][j] = 0.25 * s;
    }
  return o;
}

std::array<Vec4d, kDim> oracle_frame(const Mat4d& g, const Ten3d& C, const Vec4d& y, double L) {
  auto ip = [&g](const Vec4d& a, const Vec4d& b) {
    double s = 0.0;
    for (int i = 0; i < kDim; ++i)
      for (int j = 0; j < kDim; ++j) s += g[i][j] * a[i] * b[j];
    return s;
  };
  const Mat4d gi = invert(g);
  Vec4d Ci{};
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      for (int k = 0; k < kDim; ++k) Ci[i] += C[i][j][k] * gi[j][k];
  Vec4d Cup{};
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j) Cup[i] += gi[i][j] * Ci[j];

  std::array<Vec4d, kDim> e{};
  for (int i = 0; i < kDim; ++i) e[0][i] = y[i] / L;
  const double cn = std::sqrt(std::fabs(ip(Cup, Cup)));
  for (int i = 0; i < kDim; ++i) e[1][i] = Cup[i] / cn;

  int filled = 2;
  for (int axis = 0; axis < kDim && filled < kDim; ++axis) {
    Vec4d v{};
    v[axis] = 1.0;
    for (int b = 0; b < filled; ++b) {
      const double c = ip(v, e[b]);
      for (int i = 0; i < kDim; ++i) v[i] -= c * e[b][i];
    }
    const double n = std::sqrt(std::max(0.0, ip(v, v)));
    if (n < 1e-6) continue;
    for (int i = 0; i < kDim; ++i) v[i] /= n;
    e[filled++] = v;
  }
  for (int a = 2; a < kDim; ++a) {
    Vec4d& v = e[a];
    for (double c : v) {
      if (std::fabs(c) > 1e-9) {
        if (c < 0)
          for (double& w : v) w = -w;
        break;
      }
    }
  }
  return e;
}

double relative_error(const Mat4d& a, const Mat4d& b, double floor) {
  return max_abs_diff(a, b) / std::max(max_abs(b), floor);
}

double relative_error(const Ten3d& a, const Ten3d& b, double floor) {
  return max_abs_diff(a, b) / std::max(max_abs(b), floor);
}

double relative_error(const Vec4d& a, const Vec4d& b, double floor) {
  double m = 0.0;
  for (int i = 0; i < kDim; ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m / std::max(max_abs(b), floor);
}

double OracleComparison::max() const { return std::max({g, C, G, N}); }

OracleComparison compare_with_oracle(const MetricSpec& spec, const std::vector<SamplePoint>& points,
                                     const FDConfig& cfg) {
  OracleComparison out;
  for (const SamplePoint& p : points) {
    const PointGeometry geo = PointGeometry::compute(spec, p.x, p.y);
    const OracleTensors o = oracle_tensors(spec, p.x, p.y, cfg);
    const double ny = std::sqrt(dot(p.y, p.y));
    const double s = max_abs(o.g);
    out.g = std::max(out.g, relative_error(geo.metric().g, o.g));
    out.C = std::max(out.C, relative_error(geo.cartan().C, o.C, s / ny));
    out.G = std::max(out.G, relative_error(geo.spray().G, o.G, s * ny * ny));
    out.N = std::max(out.N, relative_error(geo.spray().N, o.N, s * ny));
    ++out.points;
  }
  return out;
}

}  // namespace finsler4
