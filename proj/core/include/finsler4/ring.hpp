#pragma once

// Uniform scalar interface over the two numeric rings used by the library:
// plain floating-point numbers and Jets. Generic geometry code calls ring::sqrt(x) etc. and
// works unchanged for both. Domain violations throw in both rings.

#include <cmath>
#include <concepts>
#include <string>

#include "finsler4/error.hpp"
#include "finsler4/jet.hpp"

namespace finsler4::ring {

template <std::floating_point F>
F value(F v) {
  return v;
}
inline double value(const Jet& v) { return v.value(); }

/// A constant in the same ring (and with the same caps) as `like`.
template <std::floating_point F>
F constant_like(double c, F) {
  return static_cast<F>(c);
}
inline Jet constant_like(double c, const Jet& like) {
  return like.typed() ? Jet(like.caps(), c) : Jet{} + c;
}

namespace detail {
[[noreturn]] inline void domain(const char* fn, double v) {
  throw Error(ErrorKind::DomainViolation,
              std::string(fn) + " evaluated outside its domain at " + std::to_string(v));
}
}  // namespace detail

template <std::floating_point F>
F sqrt(F v) {
  if (!(v > 0)) detail::domain("sqrt", static_cast<double>(v));
  return std::sqrt(v);
}
template <std::floating_point F>
F log(F v) {
  if (!(v > 0)) detail::domain("log", static_cast<double>(v));
  return std::log(v);
}
template <std::floating_point F>
F exp(F v) {
  return std::exp(v);
}
template <std::floating_point F>
F sin(F v) {
  return std::sin(v);
}
template <std::floating_point F>
F cos(F v) {
  return std::cos(v);
}
template <std::floating_point F>
F div(F a, F b) {
  if (b == 0) detail::domain("division", static_cast<double>(b));
  return a / b;
}
template <std::floating_point F>
F pow_const(F a, double r) {
  if (r == std::floor(r) && std::fabs(r) <= 64.0) {
    if (r < 0 && a == 0) detail::domain("pow", static_cast<double>(a));
    return std::pow(a, static_cast<F>(r));
  }
  if (!(a > 0)) detail::domain("pow", static_cast<double>(a));
  return std::exp(static_cast<F>(r) * std::log(a));
}

inline Jet sqrt(const Jet& v) { return finsler4::sqrt(v); }
inline Jet log(const Jet& v) { return finsler4::log(v); }
inline Jet exp(const Jet& v) { return finsler4::exp(v); }
inline Jet sin(const Jet& v) { return finsler4::sin(v); }
inline Jet cos(const Jet& v) { return finsler4::cos(v); }
inline Jet div(const Jet& a, const Jet& b) { return a / b; }
inline Jet pow_const(const Jet& a, double r) { return finsler4::pow_const(a, r); }

}  // namespace finsler4::ring
