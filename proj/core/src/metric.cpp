#include "finsler4/metric.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace finsler4 {

std::string_view family_name(Family f) noexcept {
  switch (f) {
    case Family::QuarticMinkowski: return "quartic_minkowski";
    case Family::BerwaldMoor: return "berwald_moor";
    case Family::Riemannian: return "riemannian";
    case Family::Randers: return "randers";
    case Family::Expression: return "expression";
    case Family::Conformal: return "conformal";
  }
  return "?";
}

std::optional<Family> family_from_name(std::string_view name) noexcept {
  for (Family f : {Family::QuarticMinkowski, Family::BerwaldMoor, Family::Riemannian,
                   Family::Randers, Family::Expression, Family::Conformal}) {
    if (family_name(f) == name) return f;
  }
  return std::nullopt;
}

std::string_view cone_name(YCone c) noexcept {
  switch (c) {
    case YCone::AllNonzero: return "all_nonzero";
    case YCone::AllPositive: return "all_positive";
    case YCone::UnitBallInteriorShifted: return "unit_ball_interior_shifted";
  }
  return "?";
}

std::optional<YCone> cone_from_name(std::string_view name) noexcept {
  for (YCone c : {YCone::AllNonzero, YCone::AllPositive, YCone::UnitBallInteriorShifted}) {
    if (cone_name(c) == name) return c;
  }
  return std::nullopt;
}

namespace {

// The shifted-ball cone is the cone over the open ball of radius
// kShiftedRadius around the unit vector (1,1,1,1)/2.
constexpr double kShiftedRadius = 0.9;
const Vec4d kShiftCenter{0.5, 0.5, 0.5, 0.5};

double norm(const Vec4d& v) { return std::sqrt(dot(v, v)); }

Vec4d randers_b_at(const MetricSpec& spec, const Vec4d& x) {
  const auto xb = detail::x_bindings(x);
  Vec4d b{};
  for (int i = 0; i < kDim; ++i) b[i] = eval_expr(spec.randers_b()[i], xb);
  return b;
}

Vec4d box_center(const DomainSpec& d) {
  Vec4d c{};
  for (int i = 0; i < kDim; ++i) c[i] = 0.5 * (d.x_box[i].lo + d.x_box[i].hi);
  return c;
}

void validate(const MetricSpec& spec) {
  const DomainSpec& d = spec.domain();
  for (const Interval& iv : d.x_box) {
    if (!(iv.lo <= iv.hi) || !std::isfinite(iv.lo) || !std::isfinite(iv.hi)) {
      throw Error(ErrorKind::EmptyDomain, "x_box interval is empty or non-finite");
    }
  }
  if (spec.family() == Family::Randers) {
    const double nb = norm(randers_b_at(spec, box_center(d)));
    if (!(nb < 1.0)) {
      throw Error(ErrorKind::InvalidParameters,
                  "randers: |b| = " + std::to_string(nb) + " >= 1 at the centre of the x box");
    }
  }
}

}  // namespace

MetricSpec MetricSpec::quartic_minkowski() {
  MetricSpec s;
  s.family_ = Family::QuarticMinkowski;
  return s;
}

MetricSpec MetricSpec::berwald_moor() {
  MetricSpec s;
  s.family_ = Family::BerwaldMoor;
  s.domain_.y_cone = YCone::AllPositive;
  return s;
}

MetricSpec MetricSpec::riemannian(std::array<std::array<Expr, kDim>, kDim> g0) {
  for (const auto& row : g0)
    for (const Expr& e : row)
      if (e.uses_y()) {
        throw Error(ErrorKind::InvalidParameters, "riemannian coefficients must depend on x only");
      }
  MetricSpec s;
  s.family_ = Family::Riemannian;
  s.g0_ = std::move(g0);
  validate(s);
  return s;
}

MetricSpec MetricSpec::randers(std::array<Expr, kDim> b) {
  for (const Expr& e : b)
    if (e.uses_y()) throw Error(ErrorKind::InvalidParameters, "randers b_i must depend on x only");
  MetricSpec s;
  s.family_ = Family::Randers;
  s.b_ = std::move(b);
  validate(s);
  return s;
}

MetricSpec MetricSpec::expression(Expr L, DomainSpec domain) {
  MetricSpec s;
  s.family_ = Family::Expression;
  s.L_ = std::move(L);
  s.domain_ = domain;
  validate(s);
  return s;
}

MetricSpec MetricSpec::conformal(const MetricSpec& base, Expr sigma) {
  if (sigma.uses_y()) {
    throw Error(ErrorKind::SigmaUsesY, "conformal factor must depend on x only");
  }
  MetricSpec s;
  s.family_ = Family::Conformal;
  s.domain_ = base.domain_;
  s.base_ = std::make_shared<const MetricSpec>(base);
  s.sigma_ = std::move(sigma);
  return s;
}

MetricSpec MetricSpec::with_domain(DomainSpec d) const {
  MetricSpec s = *this;
  s.domain_ = d;
  if (s.base_) s.base_ = std::make_shared<const MetricSpec>(base_->with_domain(d));
  validate(s);
  return s;
}

bool MetricSpec::x_independent() const {
  switch (family_) {
    case Family::QuarticMinkowski:
    case Family::BerwaldMoor: return true;
    case Family::Riemannian:
      for (const auto& row : g0_)
        for (const Expr& e : row)
          if (e.uses_x()) return false;
      return true;
    case Family::Randers:
      for (const Expr& e : b_)
        if (e.uses_x()) return false;
      return true;
    case Family::Expression: return !L_.uses_x();
    case Family::Conformal: return sigma_.is_constant() && base_->x_independent();
  }
  return false;
}

void MetricSpec::check_point(const Vec4d& x, const Vec4d& y) const {
  for (double v : x)
    if (!std::isfinite(v)) throw Error(ErrorKind::DomainViolation, "non-finite x");
  for (double v : y)
    if (!std::isfinite(v)) throw Error(ErrorKind::DomainViolation, "non-finite y");
  const double ny = norm(y);
  if (!(ny >= domain_.y_min)) {
    throw Error(ErrorKind::DomainViolation, "|y| = " + std::to_string(ny) + " below the exclusion radius");
  }
  switch (domain_.y_cone) {
    case YCone::AllNonzero:
      for (double v : y)
        if (v == 0.0) throw Error(ErrorKind::DomainViolation, "y has a zero component");
      break;
    case YCone::AllPositive:
      for (double v : y)
        if (!(v > 0.0)) throw Error(ErrorKind::DomainViolation, "y outside the positive cone");
      break;
    case YCone::UnitBallInteriorShifted: {
      const double cosang = dot(y, kShiftCenter) / ny;
      if (!(cosang > std::sqrt(1.0 - kShiftedRadius * kShiftedRadius))) {
        throw Error(ErrorKind::DomainViolation, "y outside the shifted-ball cone");
      }
      break;
    }
  }
  switch (family_) {
    case Family::BerwaldMoor:
      if (!(y[0] * y[1] * y[2] * y[3] > 0.0)) {
        throw Error(ErrorKind::DomainViolation, "berwald_moor requires y1*y2*y3*y4 > 0");
      }
      break;
    case Family::Randers: {
      const double nb = norm(randers_b_at(*this, x));
      if (!(nb < 1.0)) {
        throw Error(ErrorKind::DomainViolation, "randers requires |b(x)| < 1, got " + std::to_string(nb));
      }
      break;
    }
    case Family::Conformal: base_->check_point(x, y); break;
    default: break;
  }
}

bool MetricSpec::admits(const Vec4d& x, const Vec4d& y) const {
  try {
    check_point(x, y);
    return true;
  } catch (const Error&) {
    return false;
  }
}

std::string MetricSpec::describe() const {
  std::ostringstream os;
  os << family_name(family_);
  switch (family_) {
    case Family::Riemannian:
      os << "(g0=[";
      for (int i = 0; i < kDim; ++i) {
        os << (i ? "; " : "");
        for (int j = 0; j < kDim; ++j) os << (j ? ", " : "") << g0_[i][j].to_string();
      }
      os << "])";
      break;
    case Family::Randers:
      os << "(b=[";
      for (int i = 0; i < kDim; ++i) os << (i ? ", " : "") << b_[i].to_string();
      os << "])";
      break;
    case Family::Expression: os << "(L=" << L_.to_string() << ")"; break;
    case Family::Conformal: os << "(" << base_->describe() << ", sigma=" << sigma_.to_string() << ")"; break;
    default: break;
  }
  return os.str();
}

MetricSpec make_builtin_metric(Family family, const MetricParams& params) {
  auto reject_extra = [&](bool g, bool b, bool L) {
    if ((params.g && !g) || (params.b && !b) || (params.L && !L)) {
      throw Error(ErrorKind::InvalidParameters,
                  "parameter not accepted by family " + std::string(family_name(family)));
    }
  };
  switch (family) {
    case Family::QuarticMinkowski:
      reject_extra(false, false, false);
      return MetricSpec::quartic_minkowski();
    case Family::BerwaldMoor:
      reject_extra(false, false, false);
      return MetricSpec::berwald_moor();
    case Family::Riemannian: {
      reject_extra(true, false, false);
      std::array<std::array<Expr, kDim>, kDim> g0;
      for (int i = 0; i < kDim; ++i)
        for (int j = 0; j < kDim; ++j)
          g0[i][j] = params.g ? parse_expr((*params.g)[i][j]) : Expr::literal(i == j ? 1.0 : 0.0);
      return MetricSpec::riemannian(std::move(g0));
    }
    case Family::Randers: {
      reject_extra(false, true, false);
      if (!params.b) throw Error(ErrorKind::InvalidParameters, "randers requires parameter b");
      std::array<Expr, kDim> b;
      for (int i = 0; i < kDim; ++i) b[i] = parse_expr((*params.b)[i]);
      return MetricSpec::randers(std::move(b));
    }
    case Family::Expression:
      reject_extra(false, false, true);
      if (!params.L) throw Error(ErrorKind::InvalidParameters, "expression family requires L");
      return MetricSpec::expression(parse_expr(*params.L));
    case Family::Conformal:
      throw Error(ErrorKind::InvalidParameters, "conformal metrics are built with MetricSpec::conformal");
  }
  throw Error(ErrorKind::InvalidParameters, "unknown family");
}

Jet eval_L(const MetricSpec& spec, const Vec4d& x, const Vec4d& y, DegreeCaps caps) {
  spec.check_point(x, y);
  const auto v = coordinate_jets(x, y, caps);
  Vec4<Jet> xj, yj;
  for (int i = 0; i < kDim; ++i) {
    xj[i] = v[x_slot(i)];
    yj[i] = v[y_slot(i)];
  }
  return eval_L_generic(spec, xj, yj);
}

double eval_L_real(const MetricSpec& spec, const Vec4d& x, const Vec4d& y) {
  spec.check_point(x, y);
  return eval_L_generic(spec, x, y);
}

Jet eval_sigma(const MetricSpec& spec, const Vec4d& x, DegreeCaps caps) {
  if (spec.family() != Family::Conformal) {
    throw Error(ErrorKind::MissingSigma, "metric has no conformal factor");
  }
  Vec4<Jet> xj;
  for (int i = 0; i < kDim; ++i)
    xj[i] = caps.x_max > 0 ? Jet::variable(x_slot(i), x[i], caps) : Jet(caps, x[i]);
  Jet s = eval_expr(spec.sigma(), detail::x_bindings(xj));
  return s.typed() ? s : Jet(caps, s.value());
}

namespace {

// Portable uniform double in [0, 1) from the 53 high bits of a 64-bit draw.
double uniform01(std::mt19937_64& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

double uniform(std::mt19937_64& eng, double lo, double hi) { return lo + (hi - lo) * uniform01(eng); }

Vec4d sample_direction(std::mt19937_64& eng, YCone cone, double margin) {
  for (;;) {
    Vec4d v{};
    switch (cone) {
      case YCone::AllNonzero:
        for (double& c : v) c = uniform(eng, -1.0, 1.0);
        break;
      case YCone::AllPositive:
        for (double& c : v) c = uniform(eng, 0.1, 1.0);
        break;
      case YCone::UnitBallInteriorShifted: {
        Vec4d w{};
        do {
          for (double& c : w) c = uniform(eng, -1.0, 1.0);
        } while (dot(w, w) >= 1.0);
        for (int i = 0; i < kDim; ++i) v[i] = kShiftCenter[i] + kShiftedRadius * w[i];
        break;
      }
    }
    const double n = norm(v);
    if (n < 0.25) continue;
    for (double& c : v) c /= n;
    if (cone != YCone::UnitBallInteriorShifted) {
      double lo = 1.0;
      for (double c : v) lo = std::min(lo, std::fabs(c));
      if (lo < margin) continue;
    }
    return v;
  }
}

SamplePoint draw(std::mt19937_64& eng, const DomainSpec& d) {
  SamplePoint p;
  for (int i = 0; i < kDim; ++i) p.x[i] = uniform(eng, d.x_box[i].lo, d.x_box[i].hi);
  const Vec4d dir = sample_direction(eng, d.y_cone, d.cone_margin);
  const double scale = uniform(eng, 0.5, 2.0);
  for (int i = 0; i < kDim; ++i) p.y[i] = scale * dir[i];
  return p;
}

}  // namespace

std::vector<SamplePoint> sample_domain(const DomainSpec& domain, const SamplePlan& plan) {
  for (const Interval& iv : domain.x_box) {
    if (!(iv.lo <= iv.hi)) throw Error(ErrorKind::EmptyDomain, "x_box interval is empty");
  }
  std::vector<SamplePoint> out;
  if (plan.count <= 0) return out;
  std::mt19937_64 eng(plan.seed);
  out.reserve(static_cast<std::size_t>(plan.count));
  for (int k = 0; k < plan.count; ++k) out.push_back(draw(eng, domain));
  return out;
}

std::vector<SamplePoint> sample_points(const MetricSpec& spec, const SamplePlan& plan) {
  const DomainSpec& d = spec.domain();
  for (const Interval& iv : d.x_box) {
    if (!(iv.lo <= iv.hi)) throw Error(ErrorKind::EmptyDomain, "x_box interval is empty");
  }
  std::vector<SamplePoint> out;
  if (plan.count <= 0) return out;
  std::mt19937_64 eng(plan.seed);
  constexpr int kMaxAttempts = 1000;
  for (int k = 0; k < plan.count; ++k) {
    int attempts = 0;
    for (;;) {
      SamplePoint p = draw(eng, d);
      if (spec.admits(p.x, p.y)) {
        out.push_back(p);
        break;
      }
      if (++attempts >= kMaxAttempts) {
        throw Error(ErrorKind::EmptyDomain, "no admissible point found in " +
                                                std::to_string(kMaxAttempts) + " draws");
      }
    }
  }
  return out;
}

}  // namespace finsler4
