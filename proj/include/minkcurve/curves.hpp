#pragma once

// Curve representations over Lorentz-Minkowski 3-space: analytic expression
// curves, a small builtin catalog, sampled polylines with finite-difference
// derivatives, curves generated from hyperbolic/circular angle functions, and
// arclength reparametrization.

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "minkcurve/error.hpp"
#include "minkcurve/expr.hpp"
#include "minkcurve/jet.hpp"
#include "minkcurve/mink3.hpp"
#include "minkcurve/numerics.hpp"

namespace minkcurve {

struct Interval {
  double a = 0.0, b = 1.0;
  double length() const { return b - a; }
  double clamp(double t) const { return std::min(std::max(t, a), b); }
  bool contains(double t, double pad = 0.0) const { return t >= a - pad && t <= b + pad; }
};

enum class CurveKind { Analytic, Builtin, Sampled, Angle, Transformed };

// How trustworthy the derivative tower of a curve is; drives tolerance and
// stencil choices downstream.
enum class DerivQuality { Exact, FrameBacked, FiniteDifference };

struct CurveSamples {
  std::vector<double> t;
  std::vector<LVec3> p;
  // Optional first/second derivative fields (tangent and curvature vector),
  // e.g. carried over from a frame integration.
  std::vector<LVec3> d1, d2;
};

namespace detail {

struct CurveImpl {
  virtual ~CurveImpl() = default;
  virtual Jet3 eval(double t, int order) const = 0;
  virtual Interval domain() const = 0;
  virtual CurveKind kind() const = 0;
  virtual DerivQuality quality() const = 0;
  virtual int max_order() const = 0;
  virtual std::string name() const { return ""; }
};

struct AnalyticImpl final : CurveImpl {
  ExprPtr x, y, z;
  Interval dom;
  std::string label;

  Jet3 eval(double t, int order) const override {
    return {eval_jet(x, t, order), eval_jet(y, t, order), eval_jet(z, t, order)};
  }
  Interval domain() const override { return dom; }
  CurveKind kind() const override { return label.empty() ? CurveKind::Analytic : CurveKind::Builtin; }
  DerivQuality quality() const override { return DerivQuality::Exact; }
  int max_order() const override { return 12; }
  std::string name() const override { return label; }
};

struct SampledImpl final : CurveImpl {
  CurveSamples samples;
  bool use_fields = true;
  bool force_unit_stride = false;

  Interval domain() const override { return {samples.t.front(), samples.t.back()}; }
  CurveKind kind() const override { return CurveKind::Sampled; }
  DerivQuality quality() const override {
    return (use_fields && !samples.d1.empty()) ? DerivQuality::FrameBacked
                                               : DerivQuality::FiniteDifference;
  }
  int max_order() const override { return 3; }

  double median_spacing() const {
    std::vector<double> gaps;
    gaps.reserve(samples.t.size() - 1);
    for (size_t i = 0; i + 1 < samples.t.size(); ++i) gaps.push_back(samples.t[i + 1] - samples.t[i]);
    std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
    return gaps[gaps.size() / 2];
  }

  // Stencil of `width` node indices around t with the given stride.
  std::vector<size_t> stencil(double t, int width, int stride) const {
    const auto& ts = samples.t;
    const size_t n = ts.size();
    const size_t span = static_cast<size_t>(width - 1) * static_cast<size_t>(stride);
    auto it = std::lower_bound(ts.begin(), ts.end(), t);
    size_t center = static_cast<size_t>(std::distance(ts.begin(), it));
    if (center >= n) center = n - 1;
    long first = static_cast<long>(center) - static_cast<long>(span / 2);
    first = std::max(0L, std::min(first, static_cast<long>(n - 1 - span)));
    std::vector<size_t> idx(static_cast<size_t>(width));
    for (int j = 0; j < width; ++j)
      idx[static_cast<size_t>(j)] = static_cast<size_t>(first) + static_cast<size_t>(j) * static_cast<size_t>(stride);
    return idx;
  }

  // Balance truncation against roundoff: higher orders use wider spacing.
  int auto_stride(int order, int width) const {
    if (force_unit_stride || order <= 1) return 1;
    const double h = median_spacing();
    const double target = order == 2 ? 5e-3 : 7e-3;
    int q = static_cast<int>(std::lround(target / h));
    const int qmax = static_cast<int>((samples.t.size() - 1) / static_cast<size_t>(width - 1));
    return std::max(1, std::min(q, qmax));
  }

  LVec3 fd(double t, int order, const std::vector<LVec3>& values, int width) const {
    width = std::min<int>(width, static_cast<int>(samples.t.size()));
    if (width < order + 2 && width < static_cast<int>(samples.t.size()))
      width = order + 2;
    const int stride = auto_stride(order, width);
    const auto idx = stencil(t, width, stride);
    std::vector<double> xs(idx.size());
    for (size_t j = 0; j < idx.size(); ++j) xs[j] = samples.t[idx[j]];
    const auto w = fornberg_weights(t, xs, order);
    LVec3 acc{};
    for (size_t j = 0; j < idx.size(); ++j) acc += w[static_cast<size_t>(order)][j] * values[idx[j]];
    return acc;
  }

  LVec3 deriv(double t, int order) const {
    const bool fields = use_fields && !samples.d1.empty() && !samples.d2.empty();
    switch (order) {
      case 0: return fd(t, 0, samples.p, 7);
      case 1: return fields ? fd(t, 0, samples.d1, 7) : fd(t, 1, samples.p, 5);
      case 2: return fields ? fd(t, 0, samples.d2, 7) : fd(t, 2, samples.p, 5);
      case 3: return fields ? fd(t, 1, samples.d2, 5) : fd(t, 3, samples.p, 5);
      default:
        raise(ErrorCode::DerivativeUnavailable, "sampled curves carry derivatives up to order 3");
    }
  }

  Jet3 eval(double t, int order) const override {
    if (order > 3)
      raise(ErrorCode::DerivativeUnavailable, "sampled curves carry derivatives up to order 3");
    Jet3 out{Jet(order), Jet(order), Jet(order)};
    for (int k = 0; k <= order; ++k) {
      const LVec3 d = deriv(t, k);
      out.x.deriv(k) = d.x;
      out.y.deriv(k) = d.y;
      out.z.deriv(k) = d.z;
    }
    return out;
  }
};

struct AngleImpl final : CurveImpl {
  ExprPtr a1, a2;
  Interval dom;
  LVec3 origin{};
  std::vector<double> grid;
  std::vector<LVec3> gamma;

  // Unit tangent from the angle parametrization; always Minkowski-unit.
  Jet3 tangent_jet(double s, int order) const {
    const Jet j1 = eval_jet(a1, s, order);
    const Jet j2 = eval_jet(a2, s, order);
    const Jet ch = jet_cosh(j1);
    return {ch * jet_cos(j2), ch * jet_sin(j2), jet_sinh(j1)};
  }

  LVec3 tangent(double s) const { return tangent_jet(s, 0).value(); }

  void build_table(int n_nodes) {
    grid.resize(static_cast<size_t>(n_nodes));
    gamma.resize(static_cast<size_t>(n_nodes));
    const double h = dom.length() / (n_nodes - 1);
    grid[0] = dom.a;
    gamma[0] = origin;
    for (int i = 1; i < n_nodes; ++i) {
      const double s0 = dom.a + (i - 1) * h;
      const double s1 = dom.a + i * h;
      grid[static_cast<size_t>(i)] = s1;
      LVec3 step{};
      for (int comp = 0; comp < 3; ++comp) {
        auto f = [&](double u) {
          const LVec3 e = tangent(u);
          return comp == 0 ? e.x : comp == 1 ? e.y : e.z;
        };
        const double v = gauss_legendre_5(f, s0, s1);
        if (comp == 0) step.x = v;
        else if (comp == 1) step.y = v;
        else step.z = v;
      }
      gamma[static_cast<size_t>(i)] = gamma[static_cast<size_t>(i - 1)] + step;
    }
  }

  LVec3 value(double s) const {
    auto it = std::lower_bound(grid.begin(), grid.end(), s);
    size_t i = static_cast<size_t>(std::distance(grid.begin(), it));
    if (i >= grid.size()) i = grid.size() - 1;
    if (i > 0 && std::abs(grid[i - 1] - s) < std::abs(grid[i] - s)) i = i - 1;
    LVec3 out = gamma[i];
    for (int comp = 0; comp < 3; ++comp) {
      auto f = [&](double u) {
        const LVec3 e = tangent(u);
        return comp == 0 ? e.x : comp == 1 ? e.y : e.z;
      };
      const double v = gauss_legendre_5(f, grid[i], s);
      if (comp == 0) out.x += v;
      else if (comp == 1) out.y += v;
      else out.z += v;
    }
    return out;
  }

  Jet3 eval(double s, int order) const override {
    const LVec3 g = value(s);
    if (order == 0) {
      Jet3 out{Jet(0), Jet(0), Jet(0)};
      out.x.deriv(0) = g.x;
      out.y.deriv(0) = g.y;
      out.z.deriv(0) = g.z;
      return out;
    }
    const Jet3 e = tangent_jet(s, order - 1);
    Jet3 out{Jet(order), Jet(order), Jet(order)};
    out.x.deriv(0) = g.x;
    out.y.deriv(0) = g.y;
    out.z.deriv(0) = g.z;
    for (int k = 1; k <= order; ++k) {
      out.x.deriv(k) = e.x.deriv(k - 1);
      out.y.deriv(k) = e.y.deriv(k - 1);
      out.z.deriv(k) = e.z.deriv(k - 1);
    }
    return out;
  }
  Interval domain() const override { return dom; }
  CurveKind kind() const override { return CurveKind::Angle; }
  DerivQuality quality() const override { return DerivQuality::Exact; }
  int max_order() const override { return 12; }
};

struct TransformedImpl final : CurveImpl {
  std::shared_ptr<const CurveImpl> base;
  LMat3 map = LMat3::identity();
  LVec3 shift{};

  Jet3 eval(double t, int order) const override {
    const Jet3 g = base->eval(t, order);
    Jet3 out{Jet(order), Jet(order), Jet(order)};
    for (int k = 0; k <= order; ++k) {
      LVec3 d = map * g.deriv(k);
      if (k == 0) d += shift;
      out.x.deriv(k) = d.x;
      out.y.deriv(k) = d.y;
      out.z.deriv(k) = d.z;
    }
    return out;
  }
  Interval domain() const override { return base->domain(); }
  CurveKind kind() const override { return CurveKind::Transformed; }
  DerivQuality quality() const override { return base->quality(); }
  int max_order() const override { return base->max_order(); }
  std::string name() const override { return base->name(); }
};

}  // namespace detail

// Immutable, cheaply copyable curve handle in an arbitrary parameter t.
class ParamCurve {
 public:
  ParamCurve() = default;

  static ParamCurve analytic(ExprPtr x, ExprPtr y, ExprPtr z, Interval domain,
                             std::string label = "") {
    auto impl = std::make_shared<detail::AnalyticImpl>();
    impl->x = std::move(x);
    impl->y = std::move(y);
    impl->z = std::move(z);
    impl->dom = domain;
    impl->label = std::move(label);
    return ParamCurve(std::move(impl));
  }

  static ParamCurve analytic(const std::string& x, const std::string& y, const std::string& z,
                             Interval domain, std::string label = "") {
    return analytic(parse(x), parse(y), parse(z), domain, std::move(label));
  }

  static ParamCurve sampled(CurveSamples samples, bool use_fields = true,
                            bool force_unit_stride = false) {
    if (samples.t.size() < 5)
      raise(ErrorCode::PreconditionViolation, "sampled curves need at least 5 nodes");
    if (samples.p.size() != samples.t.size())
      raise(ErrorCode::PreconditionViolation, "sample grid and points must match");
    for (size_t i = 0; i + 1 < samples.t.size(); ++i)
      if (!(samples.t[i + 1] > samples.t[i]))
        raise(ErrorCode::PreconditionViolation, "sample grid must strictly increase");
    auto impl = std::make_shared<detail::SampledImpl>();
    impl->samples = std::move(samples);
    impl->use_fields = use_fields;
    impl->force_unit_stride = force_unit_stride;
    return ParamCurve(std::move(impl));
  }

  static ParamCurve transformed(const ParamCurve& base, const LMat3& map, const LVec3& shift) {
    auto impl = std::make_shared<detail::TransformedImpl>();
    impl->base = base.impl_;
    impl->map = map;
    impl->shift = shift;
    return ParamCurve(std::move(impl));
  }

  Jet3 eval(double t, int order) const { return impl_->eval(t, order); }
  LVec3 point(double t) const { return impl_->eval(t, 0).value(); }
  LVec3 velocity(double t) const { return impl_->eval(t, 1).deriv(1); }

  Interval domain() const { return impl_->domain(); }
  CurveKind kind() const { return impl_->kind(); }
  DerivQuality quality() const { return impl_->quality(); }
  int max_order() const { return impl_->max_order(); }
  std::string name() const { return impl_->name(); }
  bool valid() const { return impl_ != nullptr; }

  friend ParamCurve from_angles(const ExprPtr&, const ExprPtr&, Interval, const LVec3&, int);

 private:
  explicit ParamCurve(std::shared_ptr<const detail::CurveImpl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const detail::CurveImpl> impl_;
};

// Causal class of the velocity at t.
inline CausalClass velocity_class(const ParamCurve& c, double t, double tol = kDefaultCausalTol) {
  return causal_class(c.velocity(t), tol);
}

// kappa(t) = gamma' x (gamma' x gamma'') / |gamma'|^4; equals gamma''(s) for
// unit-speed curves and is invariant under orientation-preserving
// reparametrization.
inline LVec3 curvature_vector_general(const ParamCurve& c, double t,
                                      double tol = kDefaultCausalTol) {
  const Jet3 j = c.eval(t, 2);
  const LVec3 v = j.deriv(1);
  const LVec3 a = j.deriv(2);
  const CausalClass cls = causal_class(v, tol);
  if (cls.is_zero || mink_norm(v) <= tol)
    raise(ErrorCode::DegenerateVelocity, "velocity vanishes (not a regular spacelike point)");
  if (cls.tag != Causality::Spacelike)
    raise(ErrorCode::NotSpacelike, "velocity is not spacelike");
  const double n2 = inner(v, v);
  return (1.0 / (n2 * n2)) * cross(v, cross(v, a));
}

// Curve generated from angle functions: gamma'(s) =
// (cosh a1 cos a2, cosh a1 sin a2, sinh a1), gamma(domain.a) = origin.
inline ParamCurve from_angles(const ExprPtr& a1, const ExprPtr& a2, Interval domain,
                              const LVec3& origin, int n_nodes = 1025) {
  auto impl = std::make_shared<detail::AngleImpl>();
  impl->a1 = a1;
  impl->a2 = a2;
  impl->dom = domain;
  impl->origin = origin;
  impl->build_table(std::max(n_nodes, 9));
  return ParamCurve(std::move(impl));
}

inline ParamCurve from_angles(const std::string& a1, const std::string& a2, Interval domain,
                              const LVec3& origin = {}, int n_nodes = 1025) {
  return from_angles(parse(a1), parse(a2), domain, origin, n_nodes);
}

inline bool is_unit_speed(const ParamCurve& c, double tol = 1e-8, int check_nodes = 257) {
  const Interval dom = c.domain();
  for (int i = 0; i < check_nodes; ++i) {
    const double t = dom.a + dom.length() * i / (check_nodes - 1);
    const LVec3 v = c.velocity(t);
    if (std::abs(inner(v, v) - 1.0) > tol) return false;
  }
  return true;
}

// A curve exposed in an arclength parameter s. Either the underlying curve is
// already unit-speed (s == t) or an arclength table mediates.
class UnitSpeedCurve {
 public:
  UnitSpeedCurve() = default;

  // Wrap a curve that is already parametrized by arclength.
  static UnitSpeedCurve direct(ParamCurve base, double tol = 1e-8) {
    if (!is_unit_speed(base, tol))
      raise(ErrorCode::PreconditionViolation, "curve is not unit-speed within tolerance");
    UnitSpeedCurve u;
    u.base_ = std::move(base);
    return u;
  }

  // Wrap reconstruction output: arclength grid, points, and the integrated
  // tangent/curvature fields.
  static UnitSpeedCurve from_arclength_samples(CurveSamples samples, bool use_fields = true,
                                               bool force_unit_stride = false) {
    UnitSpeedCurve u;
    u.base_ = ParamCurve::sampled(std::move(samples), use_fields, force_unit_stride);
    return u;
  }

  bool has_table() const { return static_cast<bool>(t_of_s_); }

  Jet3 eval(double s, int order) const {
    if (!t_of_s_) return base_.eval(s, order);
    const double t = s_to_t(s);
    if (order == 0) return base_.eval(t, 0);
    const Jet3 g = base_.eval(t, order);
    const Jet3 dg = g.derivative_shift();
    Jet v = jet_sqrt(jet3_inner(dg, dg));  // order-1 jet of the speed
    Jet s_jet(order);
    s_jet.deriv(0) = s;
    for (int k = 1; k <= order; ++k) s_jet.deriv(k) = v.deriv(k - 1);
    const Jet t_jet = jet_invert(s_jet, t);
    return {jet_compose(g.x, t_jet), jet_compose(g.y, t_jet), jet_compose(g.z, t_jet)};
  }

  LVec3 point(double s) const { return eval(s, 0).value(); }
  LVec3 tangent(double s) const { return eval(s, 1).deriv(1); }
  LVec3 curvature_vector(double s) const { return eval(s, 2).deriv(2); }

  Interval domain() const {
    if (!t_of_s_) return base_.domain();
    return {s_grid_.front(), s_grid_.back()};
  }

  double s_to_t(double s) const {
    if (!t_of_s_) return s;
    double t = (*t_of_s_)(std::min(std::max(s, s_grid_.front()), s_grid_.back()));
    const Interval dom = base_.domain();
    t = dom.clamp(t);
    // polish with Newton on the arclength residual, re-integrating from the
    // nearest table node with Gauss-Legendre
    for (int iter = 0; iter < 3; ++iter) {
      auto it = std::lower_bound(t_grid_.begin(), t_grid_.end(), t);
      size_t i = static_cast<size_t>(std::distance(t_grid_.begin(), it));
      if (i >= t_grid_.size()) i = t_grid_.size() - 1;
      if (i > 0 && std::abs(t_grid_[i - 1] - t) < std::abs(t_grid_[i] - t)) i = i - 1;
      auto speed = [&](double u) {
        const LVec3 v = base_.velocity(u);
        return std::sqrt(std::max(0.0, inner(v, v)));
      };
      const double s_here = s_grid_[i] + gauss_legendre_5(speed, t_grid_[i], t);
      const double v = speed(t);
      if (v <= 0) break;
      const double step = (s_here - s) / v;
      t = dom.clamp(t - step);
      if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(t))) break;
    }
    return t;
  }

  double t_to_s(double t) const {
    if (!s_of_t_) return t;
    return (*s_of_t_)(t);
  }

  const ParamCurve& base() const { return base_; }
  DerivQuality quality() const { return base_.quality(); }
  int max_order() const { return base_.max_order(); }

  friend UnitSpeedCurve reparametrize_arclength(const ParamCurve&, int, double, double);
  friend UnitSpeedCurve transformed(const UnitSpeedCurve&, const LMat3&, const LVec3&);

 private:
  ParamCurve base_;
  std::vector<double> t_grid_, s_grid_;
  std::shared_ptr<const HermiteInterp> t_of_s_;  // inverse arclength map
  std::shared_ptr<const HermiteInterp> s_of_t_;
};

// Build the arclength table by composite Simpson quadrature of the speed and
// invert it with a monotone cubic. s runs from 0 at domain.a.
inline UnitSpeedCurve reparametrize_arclength(const ParamCurve& c, int n_nodes = 257,
                                              double tol = kDefaultCausalTol,
                                              double regular_tol = 1e-12) {
  if (n_nodes < 5) raise(ErrorCode::PreconditionViolation, "need at least 5 arclength nodes");
  const Interval dom = c.domain();
  const double h = dom.length() / (n_nodes - 1);

  auto speed = [&](double t) {
    const LVec3 v = c.velocity(t);
    const CausalClass cls = causal_class(v, tol);
    if (cls.is_zero || euclid_norm(v) <= regular_tol)
      raise(ErrorCode::NonRegular, "velocity vanishes at t = " + std::to_string(t));
    if (cls.tag != Causality::Spacelike)
      raise(ErrorCode::NotSpacelike,
            std::string("velocity is ") + causality_name(cls.tag) + " at t = " + std::to_string(t));
    const double s2 = inner(v, v);
    if (std::sqrt(s2) <= tol)
      raise(ErrorCode::NonRegular, "velocity is numerically lightlike at t = " + std::to_string(t));
    return std::sqrt(s2);
  };

  UnitSpeedCurve u;
  u.base_ = c;
  u.t_grid_.resize(static_cast<size_t>(n_nodes));
  u.s_grid_.resize(static_cast<size_t>(n_nodes));
  std::vector<double> v_at(static_cast<size_t>(n_nodes));
  u.t_grid_[0] = dom.a;
  u.s_grid_[0] = 0.0;
  v_at[0] = speed(dom.a);
  for (int i = 1; i < n_nodes; ++i) {
    const double t0 = dom.a + (i - 1) * h;
    const double t1 = dom.a + i * h;
    u.t_grid_[static_cast<size_t>(i)] = t1;
    v_at[static_cast<size_t>(i)] = speed(t1);
    u.s_grid_[static_cast<size_t>(i)] =
        u.s_grid_[static_cast<size_t>(i - 1)] +
        (h / 6.0) * (v_at[static_cast<size_t>(i - 1)] + 4.0 * speed(0.5 * (t0 + t1)) +
                     v_at[static_cast<size_t>(i)]);
  }

  std::vector<double> dt_ds(static_cast<size_t>(n_nodes));
  for (int i = 0; i < n_nodes; ++i) dt_ds[static_cast<size_t>(i)] = 1.0 / v_at[static_cast<size_t>(i)];
  auto inv = std::make_shared<HermiteInterp>(u.s_grid_, u.t_grid_, dt_ds);
  inv->make_monotone();
  u.t_of_s_ = std::move(inv);
  auto fwd = std::make_shared<HermiteInterp>(u.t_grid_, u.s_grid_, v_at);
  fwd->make_monotone();
  u.s_of_t_ = std::move(fwd);
  return u;
}

// Apply an isometry x -> T x + shift; arclength is preserved, so tables carry over.
inline UnitSpeedCurve transformed(const UnitSpeedCurve& c, const LMat3& map, const LVec3& shift) {
  UnitSpeedCurve u = c;
  u.base_ = ParamCurve::transformed(c.base(), map, shift);
  return u;
}

// ---------------------------------------------------------------------------
// Builtin catalog

struct BuiltinInfo {
  std::string name;
  std::string domain_note;
  Interval default_window;
  std::string expected_type;
  std::string description;
};

inline const std::vector<BuiltinInfo>& builtin_catalog() {
  static const std::vector<BuiltinInfo> entries = {
      {"circle_s", "(-inf, inf), window default [-pi, pi]", {-3.141592653589793, 3.141592653589793},
       "S", "unit circle in the z = 0 plane"},
      {"hyperbola_t", "(-inf, inf), window default [-2, 2]", {-2.0, 2.0},
       "T", "unit hyperbola (0, sinh s, cosh s)"},
      {"parabola_l", "(-inf, inf), window default [-2, 2]", {-2.0, 2.0},
       "L", "lightlike-curvature parabola (s, s^2/2, s^2/2)"},
      {"lopez_l1", "(-inf, -1), window default [-2.5, -1.05]", {-2.5, -1.05},
       "L1 at s0 = -sqrt((1+sqrt(5))/2)", "involute-style curve with one curvature-lightlike point"},
      {"angle_gen", "(-inf, inf), window default [-1.2, 1.2]", {-1.2, 1.2},
       "L2 at s0 = 0", "angle-generated curve with a1 = s, a2 = -s"},
  };
  return entries;
}

inline ParamCurve make_builtin(const std::string& name,
                               std::optional<Interval> window = std::nullopt) {
  auto pick = [&](const char* key) {
    for (const auto& e : builtin_catalog())
      if (e.name == key) return window.value_or(e.default_window);
    raise(ErrorCode::PreconditionViolation, "catalog entry missing");
  };
  auto checked = [](ParamCurve c) {
    if (!is_unit_speed(c, 1e-8, 65))
      raise(ErrorCode::PreconditionViolation, "builtin failed its unit-speed load check");
    return c;
  };
  if (name == "circle_s")
    return checked(ParamCurve::analytic("cos(s)", "sin(s)", "0", pick("circle_s"), name));
  if (name == "hyperbola_t")
    return checked(ParamCurve::analytic("0", "sinh(s)", "cosh(s)", pick("hyperbola_t"), name));
  if (name == "parabola_l")
    return checked(ParamCurve::analytic("s", "s^2/2", "s^2/2", pick("parabola_l"), name));
  if (name == "lopez_l1") {
    Interval w = pick("lopez_l1");
    if (w.b >= -1.0)
      raise(ErrorCode::DomainError, "lopez_l1 lives on (-inf, -1); window must stay below -1");
    return checked(ParamCurve::analytic("cos(s)+s*sin(s)", "sin(s)-s*cos(s)",
                                        "(s*sqrt(s^2-1)-log(abs(s+sqrt(s^2-1))))/2", w, name));
  }
  if (name == "angle_gen")
    return checked(from_angles("s", "-s", pick("angle_gen"), LVec3{}, 2049));
  raise(ErrorCode::PreconditionViolation, "unknown builtin curve '" + name + "'");
}

}  // namespace minkcurve
