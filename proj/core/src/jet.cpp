#include "finsler4/jet.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>

#include "finsler4/error.hpp"

namespace finsler4 {
namespace detail {

namespace {

using Mono = std::array<int, kDim>;

constexpr int kMaxCap = 7;  // exponent encoding uses base 8

int encode(const Mono& m) { return m[0] + 8 * m[1] + 64 * m[2] + 512 * m[3]; }

// Graded enumeration of the monomials of total degree <= cap in 4 variables.
std::vector<Mono> monomials(int cap) {
  std::vector<Mono> out;
  for (int deg = 0; deg <= cap; ++deg) {
    for (int a = deg; a >= 0; --a)
      for (int b = deg - a; b >= 0; --b)
        for (int c = deg - a - b; c >= 0; --c) out.push_back({a, b, c, deg - a - b - c});
  }
  return out;
}

struct Group {
  std::vector<Mono> mons;
  std::vector<int> lookup;  // encode(m) -> index, -1 if absent
  // For each product index c: all (a, b) with mons[a] + mons[b] == mons[c].
  std::vector<std::vector<std::pair<int, int>>> prod;

  explicit Group(int cap) : mons(monomials(cap)), lookup(4096, -1) {
    for (std::size_t i = 0; i < mons.size(); ++i) lookup[encode(mons[i])] = static_cast<int>(i);
    prod.resize(mons.size());
    for (std::size_t a = 0; a < mons.size(); ++a) {
      for (std::size_t b = 0; b < mons.size(); ++b) {
        Mono s{};
        int deg = 0;
        for (int k = 0; k < kDim; ++k) {
          s[k] = mons[a][k] + mons[b][k];
          deg += s[k];
        }
        if (deg > cap) continue;
        prod[lookup[encode(s)]].emplace_back(static_cast<int>(a), static_cast<int>(b));
      }
    }
  }

  int index_of(const Mono& m) const {
    int deg = 0;
    for (int v : m) {
      if (v < 0) return -1;
      deg += v;
    }
    if (deg > max_degree()) return -1;
    return lookup[encode(m)];
  }
  int max_degree() const {
    int d = 0;
    for (int v : mons.back()) d += v;
    return d;
  }
};

}  // namespace

struct JetLayout {
  DegreeCaps caps;
  Group xg;
  Group yg;
  std::size_t nx;
  std::size_t ny;

  explicit JetLayout(DegreeCaps c)
      : caps(c), xg(c.x_max), yg(c.y_max), nx(xg.mons.size()), ny(yg.mons.size()) {}

  std::size_t size() const { return nx * ny; }

  int index_of(const MultiIndex& a) const {
    Mono xm{a[0], a[1], a[2], a[3]};
    Mono ym{a[4], a[5], a[6], a[7]};
    int xi = xg.index_of(xm);
    int yi = yg.index_of(ym);
    if (xi < 0 || yi < 0) return -1;
    return xi * static_cast<int>(ny) + yi;
  }

  MultiIndex multi_index(std::size_t k) const {
    const Mono& xm = xg.mons[k / ny];
    const Mono& ym = yg.mons[k % ny];
    return {xm[0], xm[1], xm[2], xm[3], ym[0], ym[1], ym[2], ym[3]};
  }
};

const JetLayout& layout_for(DegreeCaps caps) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::unique_ptr<JetLayout>> cache;
  if (caps.x_max < 0 || caps.y_max < 0 || caps.x_max > kMaxCap || caps.y_max > kMaxCap) {
    throw Error(ErrorKind::CapMismatch, "degree caps must lie in [0, 7]");
  }
  std::lock_guard lock(mu);
  auto& slot = cache[{caps.x_max, caps.y_max}];
  if (!slot) slot = std::make_unique<JetLayout>(caps);
  return *slot;
}

}  // namespace detail

using detail::JetLayout;

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double multi_factorial(const MultiIndex& a) {
  double f = 1.0;
  for (int v : a) f *= factorial(v);
  return f;
}

std::string caps_str(DegreeCaps c) {
  return "(" + std::to_string(c.x_max) + "," + std::to_string(c.y_max) + ")";
}

}  // namespace

Jet::Jet(DegreeCaps caps, double constant) : layout_(&detail::layout_for(caps)) {
  coeffs_.assign(layout_->size(), 0.0);
  coeffs_[0] = constant;
}

Jet Jet::variable(int slot, double value, DegreeCaps caps) {
  if (slot < 0 || slot >= kNumVars) {
    throw Error(ErrorKind::IndexOutOfRange, "jet variable slot " + std::to_string(slot) + " out of range");
  }
  const int group_cap = slot < kDim ? caps.x_max : caps.y_max;
  if (group_cap < 1) {
    throw Error(ErrorKind::CapTooSmall,
                "caps " + caps_str(caps) + " leave no first-order term for slot " + std::to_string(slot));
  }
  Jet j(caps, value);
  MultiIndex e{};
  e[slot] = 1;
  j.coeffs_[j.layout_->index_of(e)] = 1.0;
  return j;
}

DegreeCaps Jet::caps() const { return layout_ ? layout_->caps : DegreeCaps{0, 0}; }

double Jet::coefficient(const MultiIndex& a) const {
  if (!layout_) {
    for (int v : a)
      if (v != 0) return 0.0;
    return constant_;
  }
  int k = layout_->index_of(a);
  return k < 0 ? 0.0 : coeffs_[k];
}

double Jet::partial(const MultiIndex& order) const {
  int xd = 0, yd = 0;
  for (int s = 0; s < kNumVars; ++s) {
    if (order[s] < 0) throw Error(ErrorKind::IndexOutOfRange, "negative derivative order");
    (s < kDim ? xd : yd) += order[s];
  }
  const DegreeCaps c = caps();
  if (xd > c.x_max || yd > c.y_max) {
    throw Error(ErrorKind::OrderExceedsCaps, "derivative order (" + std::to_string(xd) + "," +
                                                 std::to_string(yd) + ") exceeds caps " + caps_str(c));
  }
  return coefficient(order) * multi_factorial(order);
}

double Jet::d(int slot) const {
  MultiIndex e{};
  e.at(static_cast<std::size_t>(slot)) = 1;
  return partial(e);
}

MultiIndex Jet::multi_index(std::size_t k) const {
  if (!layout_) return MultiIndex{};
  return layout_->multi_index(k);
}

Jet Jet::derivative(int slot) const {
  if (slot < 0 || slot >= kNumVars) {
    throw Error(ErrorKind::IndexOutOfRange, "derivative slot " + std::to_string(slot) + " out of range");
  }
  if (!layout_) return Jet{};
  DegreeCaps c = layout_->caps;
  int& cap = slot < kDim ? c.x_max : c.y_max;
  if (cap < 1) {
    throw Error(ErrorKind::InsufficientJetDepth,
                "cannot differentiate slot " + std::to_string(slot) + " of a jet with caps " +
                    caps_str(layout_->caps));
  }
  --cap;
  Jet out(c, 0.0);
  for (std::size_t k = 0; k < out.coeffs_.size(); ++k) {
    MultiIndex a = out.layout_->multi_index(k);
    const int factor = a[slot] + 1;
    a[slot] += 1;
    out.coeffs_[k] = factor * coeffs_[layout_->index_of(a)];
  }
  return out;
}

Jet Jet::truncated(DegreeCaps caps) const {
  if (!layout_) {
    Jet out(caps, constant_);
    return out;
  }
  if (!layout_->caps.contains(caps)) {
    throw Error(ErrorKind::CapMismatch,
                "cannot truncate caps " + caps_str(layout_->caps) + " to " + caps_str(caps));
  }
  if (caps == layout_->caps) return *this;
  Jet out(caps, 0.0);
  for (std::size_t k = 0; k < out.coeffs_.size(); ++k) {
    out.coeffs_[k] = coeffs_[layout_->index_of(out.layout_->multi_index(k))];
  }
  return out;
}

void Jet::promote_to(const JetLayout* layout) {
  if (layout_ || !layout) return;
  layout_ = layout;
  coeffs_.assign(layout->size(), 0.0);
  coeffs_[0] = constant_;
  constant_ = 0.0;
}

const JetLayout* Jet::unify(const Jet& a, const Jet& b) {
  if (a.layout_ && b.layout_ && a.layout_ != b.layout_) {
    throw Error(ErrorKind::CapMismatch, "jet operands have caps " + caps_str(a.layout_->caps) +
                                            " and " + caps_str(b.layout_->caps));
  }
  return a.layout_ ? a.layout_ : b.layout_;
}

Jet Jet::operator-() const {
  Jet out = *this;
  out.constant_ = -constant_;
  for (double& c : out.coeffs_) c = -c;
  return out;
}

Jet& Jet::operator+=(const Jet& o) {
  const JetLayout* l = unify(*this, o);
  if (!l) {
    constant_ += o.constant_;
    return *this;
  }
  promote_to(l);
  if (o.layout_) {
    for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += o.coeffs_[k];
  } else {
    coeffs_[0] += o.constant_;
  }
  return *this;
}

Jet& Jet::operator-=(const Jet& o) { return *this += -o; }

Jet operator*(const Jet& a, const Jet& b) {
  const JetLayout* l = Jet::unify(a, b);
  if (!l) {
    Jet out;
    out.constant_ = a.constant_ * b.constant_;
    return out;
  }
  if (!a.layout_) return b * a.constant_;
  if (!b.layout_) return a * b.constant_;
  Jet out;
  out.layout_ = l;
  out.coeffs_.assign(l->size(), 0.0);
  const std::size_t ny = l->ny;
  for (std::size_t xc = 0; xc < l->nx; ++xc) {
    for (const auto& [xa, xb] : l->xg.prod[xc]) {
      const double* pa = &a.coeffs_[xa * ny];
      const double* pb = &b.coeffs_[xb * ny];
      double* pc = &out.coeffs_[xc * ny];
      for (std::size_t yc = 0; yc < ny; ++yc) {
        double acc = 0.0;
        for (const auto& [ya, yb] : l->yg.prod[yc]) acc += pa[ya] * pb[yb];
        pc[yc] += acc;
      }
    }
  }
  return out;
}

Jet& Jet::operator*=(const Jet& o) { return *this = *this * o; }

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }

Jet& Jet::operator/=(const Jet& o) { return *this = *this / o; }

Jet& Jet::operator+=(double c) {
  if (layout_)
    coeffs_[0] += c;
  else
    constant_ += c;
  return *this;
}

Jet& Jet::operator-=(double c) { return *this += -c; }

Jet& Jet::operator*=(double c) {
  constant_ *= c;
  for (double& v : coeffs_) v *= c;
  return *this;
}

Jet& Jet::operator/=(double c) {
  if (c == 0.0) throw Error(ErrorKind::DomainViolation, "division of a jet by zero");
  return *this *= 1.0 / c;
}

Jet operator/(double c, const Jet& a) { return reciprocal(a) * c; }

Jet Jet::compose(std::span<const double> series) const {
  if (!layout_) {
    Jet out;
    out.constant_ = series.empty() ? 0.0 : series[0];
    return out;
  }
  const int order = layout_->caps.total();
  // h = a - a0 is nilpotent: h^(order+1) = 0 within the caps.
  Jet h = *this;
  h.coeffs_[0] = 0.0;
  const int top = std::min<int>(order, static_cast<int>(series.size()) - 1);
  Jet acc(layout_->caps, top >= 0 ? series[top] : 0.0);
  for (int k = top - 1; k >= 0; --k) {
    acc = acc * h;
    acc.coeffs_[0] += series[k];
  }
  return acc;
}

namespace {

int series_order(const Jet& a) { return a.typed() ? a.caps().total() : 0; }

[[noreturn]] void domain_error(const char* fn, double v) {
  throw Error(ErrorKind::DomainViolation,
              std::string(fn) + " evaluated outside its domain at " + std::to_string(v));
}

}  // namespace

Jet exp(const Jet& a) {
  const int n = series_order(a);
  std::vector<double> s(n + 1);
  const double e = std::exp(a.value());
  for (int k = 0; k <= n; ++k) s[k] = e / factorial(k);
  return a.compose(s);
}

Jet log(const Jet& a) {
  const double v = a.value();
  if (!(v > 0.0)) domain_error("log", v);
  const int n = series_order(a);
  std::vector<double> s(n + 1);
  s[0] = std::log(v);
  double p = 1.0;
  for (int k = 1; k <= n; ++k) {
    p /= v;
    s[k] = (k % 2 == 1 ? 1.0 : -1.0) * p / k;
  }
  return a.compose(s);
}

Jet sqrt(const Jet& a) {
  const double v = a.value();
  if (!(v > 0.0)) domain_error("sqrt", v);
  const int n = series_order(a);
  std::vector<double> s(n + 1);
  // binom(1/2, k) v^(1/2 - k)
  double binom = 1.0;
  double p = std::sqrt(v);
  for (int k = 0; k <= n; ++k) {
    s[k] = binom * p;
    binom *= (0.5 - k) / (k + 1);
    p /= v;
  }
  return a.compose(s);
}

Jet sin(const Jet& a) {
  const int n = series_order(a);
  std::vector<double> s(n + 1);
  const double sv = std::sin(a.value());
  const double cv = std::cos(a.value());
  const double cycle[4] = {sv, cv, -sv, -cv};
  for (int k = 0; k <= n; ++k) s[k] = cycle[k % 4] / factorial(k);
  return a.compose(s);
}

Jet cos(const Jet& a) {
  const int n = series_order(a);
  std::vector<double> s(n + 1);
  const double sv = std::sin(a.value());
  const double cv = std::cos(a.value());
  const double cycle[4] = {cv, -sv, -cv, sv};
  for (int k = 0; k <= n; ++k) s[k] = cycle[k % 4] / factorial(k);
  return a.compose(s);
}

Jet reciprocal(const Jet& a) {
  const double v = a.value();
  if (v == 0.0 || !std::isfinite(v)) domain_error("reciprocal", v);
  const int n = series_order(a);
  std::vector<double> s(n + 1);
  double p = 1.0 / v;
  for (int k = 0; k <= n; ++k) {
    s[k] = (k % 2 == 0 ? 1.0 : -1.0) * p;
    p /= v;
  }
  return a.compose(s);
}

Jet pow_const(const Jet& a, double r) {
  if (r == std::floor(r) && std::fabs(r) <= 64.0) {
    int n = static_cast<int>(std::fabs(r));
    Jet result = a.typed() ? Jet(a.caps(), 1.0) : Jet{} + 1.0;
    Jet base = a;
    while (n > 0) {
      if (n & 1) result *= base;
      n >>= 1;
      if (n > 0) base *= base;
    }
    return r < 0 ? reciprocal(result) : result;
  }
  return exp(log(a) * r);
}

std::array<Jet, kNumVars> coordinate_jets(const std::array<double, kDim>& x,
                                          const std::array<double, kDim>& y, DegreeCaps caps) {
  std::array<Jet, kNumVars> out;
  for (int i = 0; i < kDim; ++i) {
    out[x_slot(i)] = caps.x_max > 0 ? Jet::variable(x_slot(i), x[i], caps) : Jet(caps, x[i]);
    out[y_slot(i)] = caps.y_max > 0 ? Jet::variable(y_slot(i), y[i], caps) : Jet(caps, y[i]);
  }
  return out;
}

}  // namespace finsler4
