#pragma once

// Fundamental-function families, their validity domains, and deterministic
// sampling of evaluation points (x, y).

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "finsler4/expr.hpp"
#include "finsler4/jet.hpp"
#include "finsler4/linalg.hpp"

namespace finsler4 {

enum class Family { QuarticMinkowski, BerwaldMoor, Riemannian, Randers, Expression, Conformal };

std::string_view family_name(Family f) noexcept;
std::optional<Family> family_from_name(std::string_view name) noexcept;

enum class YCone { AllNonzero, AllPositive, UnitBallInteriorShifted };

std::string_view cone_name(YCone c) noexcept;
std::optional<YCone> cone_from_name(std::string_view name) noexcept;

struct Interval {
  double lo = -1.0;
  double hi = 1.0;
};

struct DomainSpec {
  std::array<Interval, kDim> x_box{};
  YCone y_cone = YCone::AllNonzero;
  double y_min = 1e-3;        ///< minimum |y| admitted
  /// Sampled directions of the coordinate cones keep |y_i| >= cone_margin * |y|.
  double cone_margin = 0.1;
};

struct SamplePlan {
  int count = 16;
  std::uint64_t seed = 1;
};

struct SamplePoint {
  Vec4d x{};
  Vec4d y{};
};

/// Parameters of the built-in families; expressions are given as text.
struct MetricParams {
  std::optional<std::array<std::array<std::string, kDim>, kDim>> g;  ///< riemannian
  std::optional<std::array<std::string, kDim>> b;                    ///< randers
  std::optional<std::string> L;                                      ///< expression
};

class MetricSpec {
 public:
  static MetricSpec quartic_minkowski();
  static MetricSpec berwald_moor();
  /// L = sqrt(g0_ij(x) y^i y^j).
  static MetricSpec riemannian(std::array<std::array<Expr, kDim>, kDim> g0);
  /// L = |y| + b_i(x) y^i with the Euclidean |y|.
  static MetricSpec randers(std::array<Expr, kDim> b);
  static MetricSpec expression(Expr L, DomainSpec domain = {});
  /// L_bar = exp(sigma(x)) L_base.
  static MetricSpec conformal(const MetricSpec& base, Expr sigma);

  Family family() const { return family_; }
  const DomainSpec& domain() const { return domain_; }
  MetricSpec with_domain(DomainSpec d) const;

  const std::array<std::array<Expr, kDim>, kDim>& riemannian_coefficients() const { return g0_; }
  const std::array<Expr, kDim>& randers_b() const { return b_; }
  const Expr& expression_L() const { return L_; }
  const MetricSpec& conformal_base() const { return *base_; }
  const Expr& sigma() const { return sigma_; }

  /// True when the fundamental function cannot depend on x.
  bool x_independent() const;

  /// Throws DomainViolation when (x, y) is outside the validity domain.
  void check_point(const Vec4d& x, const Vec4d& y) const;
  bool admits(const Vec4d& x, const Vec4d& y) const;

  /// Human-readable one-line description.
  std::string describe() const;

 private:
  Family family_ = Family::QuarticMinkowski;
  DomainSpec domain_{};
  std::array<std::array<Expr, kDim>, kDim> g0_{};
  std::array<Expr, kDim> b_{};
  Expr L_{};
  std::shared_ptr<const MetricSpec> base_;
  Expr sigma_{};
};

MetricSpec make_builtin_metric(Family family, const MetricParams& params = {});

namespace detail {

template <class T>
Bindings<T> x_bindings(const Vec4<T>& x) {
  Bindings<T> b;
  for (int i = 0; i < kDim; ++i) b[x_slot(i)] = x[i];
  return b;
}

}  // namespace detail

/// Ring-generic fundamental function (no domain check).
template <class T>
T eval_L_generic(const MetricSpec& spec, const Vec4<T>& x, const Vec4<T>& y) {
  switch (spec.family()) {
    case Family::QuarticMinkowski: {
      T q{};
      for (const T& v : y) q += ring::pow_const(v, 4.0);
      return ring::pow_const(q, 0.25);
    }
    case Family::BerwaldMoor:
      return ring::pow_const(y[0] * y[1] * y[2] * y[3], 0.25);
    case Family::Riemannian: {
      const auto xb = detail::x_bindings(x);
      T q{};
      for (int i = 0; i < kDim; ++i)
        for (int j = 0; j < kDim; ++j)
          q += eval_expr(spec.riemannian_coefficients()[i][j], xb) * y[i] * y[j];
      return ring::sqrt(q);
    }
    case Family::Randers: {
      const auto xb = detail::x_bindings(x);
      T norm2{};
      T beta{};
      for (int i = 0; i < kDim; ++i) {
        norm2 += y[i] * y[i];
        beta += eval_expr(spec.randers_b()[i], xb) * y[i];
      }
      return ring::sqrt(norm2) + beta;
    }
    case Family::Expression: {
      Bindings<T> b;
      for (int i = 0; i < kDim; ++i) {
        b[x_slot(i)] = x[i];
        b[y_slot(i)] = y[i];
      }
      return eval_expr(spec.expression_L(), b);
    }
    case Family::Conformal: {
      const T s = eval_expr(spec.sigma(), detail::x_bindings(x));
      return ring::exp(s) * eval_L_generic(spec.conformal_base(), x, y);
    }
  }
  throw Error(ErrorKind::InvalidParameters, "unknown metric family");
}

/// Jet of L at (x, y) with the given caps.
Jet eval_L(const MetricSpec& spec, const Vec4d& x, const Vec4d& y, DegreeCaps caps = {});
/// Real value of L at (x, y).
double eval_L_real(const MetricSpec& spec, const Vec4d& x, const Vec4d& y);

/// Jet of sigma(x) for a conformal spec (x-variables only carry derivatives).
Jet eval_sigma(const MetricSpec& spec, const Vec4d& x, DegreeCaps caps = {1, 0});

/// Deterministic pseudo-random points of a domain; |y| lies in [0.5, 2].
std::vector<SamplePoint> sample_domain(const DomainSpec& domain, const SamplePlan& plan);

/// Like sample_domain but additionally rejects points outside the metric's
/// own validity region (e.g. |b(x)| >= 1 for Randers).
std::vector<SamplePoint> sample_points(const MetricSpec& spec, const SamplePlan& plan);

}  // namespace finsler4
