#pragma once

// Truncated multivariate Taylor arithmetic in the eight tangent-bundle
// coordinates (x^1..x^4, y^1..y^4).
//
// A Jet stores f^(a)/a! for every multi-index a whose x-degree and y-degree
// stay within DegreeCaps. Multiplication is a truncated convolution, so one
// evaluation of a smooth expression in jet arithmetic yields every mixed
// partial up to the caps.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace finsler4 {

inline constexpr int kNumVars = 8;
inline constexpr int kDim = 4;

/// Slot numbering: 0..3 are x^1..x^4, 4..7 are y^1..y^4.
constexpr int x_slot(int i) { return i; }
constexpr int y_slot(int i) { return kDim + i; }

struct DegreeCaps {
  int x_max = 1;  ///< total degree allowed in the x-variables
  int y_max = 4;  ///< total degree allowed in the y-variables

  friend bool operator==(const DegreeCaps&, const DegreeCaps&) = default;
  int total() const { return x_max + y_max; }
  bool contains(const DegreeCaps& other) const {
    return other.x_max <= x_max && other.y_max <= y_max;
  }
};

/// Exponents per slot; the same slot numbering as x_slot / y_slot.
using MultiIndex = std::array<int, kNumVars>;

namespace detail {
struct JetLayout;
const JetLayout& layout_for(DegreeCaps caps);
}  // namespace detail

class Jet {
 public:
  /// Untyped constant zero. Adopts the caps of the first typed operand it
  /// meets, which lets generic code accumulate into `T sum{}`.
  Jet() = default;
  Jet(DegreeCaps caps, double constant);

  /// Jet of the coordinate function in `slot`, expanded around `value`.
  static Jet variable(int slot, double value, DegreeCaps caps);

  bool typed() const { return layout_ != nullptr; }
  DegreeCaps caps() const;
  double value() const { return coeffs_.empty() ? constant_ : coeffs_[0]; }

  /// Taylor coefficient f^(a)/a! (zero when a is outside the caps).
  double coefficient(const MultiIndex& a) const;
  /// Mixed partial derivative f^(a) at the expansion point.
  double partial(const MultiIndex& order) const;
  /// First partial along one slot.
  double d(int slot) const;

  std::span<const double> coefficients() const { return coeffs_; }
  /// The multi-index of coefficient number `k` in coefficients().
  MultiIndex multi_index(std::size_t k) const;

  /// Derivative with respect to one slot; the result has that group's cap
  /// lowered by one.
  Jet derivative(int slot) const;
  Jet dx(int i) const { return derivative(x_slot(i)); }
  Jet dy(int i) const { return derivative(y_slot(i)); }

  /// Drop every coefficient outside `caps` (which must not exceed ours).
  Jet truncated(DegreeCaps caps) const;

  Jet operator-() const;
  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(const Jet& o);
  Jet& operator/=(const Jet& o);
  Jet& operator+=(double c);
  Jet& operator-=(double c);
  Jet& operator*=(double c);
  Jet& operator/=(double c);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator+(Jet a, double c) { return a += c; }
  friend Jet operator+(double c, Jet a) { return a += c; }
  friend Jet operator-(Jet a, double c) { return a -= c; }
  friend Jet operator-(double c, const Jet& a) { return -a + c; }
  friend Jet operator*(Jet a, double c) { return a *= c; }
  friend Jet operator*(double c, Jet a) { return a *= c; }
  friend Jet operator/(Jet a, double c) { return a /= c; }
  friend Jet operator/(double c, const Jet& a);

  /// f(a) for a scalar function with Taylor coefficients `series`
  /// (series[k] = f^(k)(a0)/k!, k = 0..caps.total()).
  Jet compose(std::span<const double> series) const;

 private:
  const detail::JetLayout* layout_ = nullptr;
  std::vector<double> coeffs_;
  double constant_ = 0.0;

  void promote_to(const detail::JetLayout* layout);
  static const detail::JetLayout* unify(const Jet& a, const Jet& b);
};

Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet reciprocal(const Jet& a);
/// a^r; integer r uses repeated multiplication, otherwise exp(r log a).
Jet pow_const(const Jet& a, double r);

/// Convenience: jets of all eight coordinates at (x, y).
std::array<Jet, kNumVars> coordinate_jets(const std::array<double, kDim>& x,
                                          const std::array<double, kDim>& y,
                                          DegreeCaps caps);

}  // namespace finsler4
