#pragma once

// Differential invariants of spacelike curves: the causal curvature function
// theta = <kappa, kappa>, curve type classification (S / T / L / L_k with
// isolated curvature-lightlike points), the sign eps, Frenet apparatus and
// torsion for Frenet arcs, the pseudo-binormal frame and pseudo-torsion mu
// near curvature-lightlike points, the torsion blow-up coefficient, and
// planarity checks.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "minkcurve/curves.hpp"
#include "minkcurve/error.hpp"
#include "minkcurve/jet.hpp"
#include "minkcurve/mink3.hpp"
#include "minkcurve/numerics.hpp"

namespace minkcurve {

struct AnalysisConfig {
  double causal_tol = 1e-10;      // vector causal classification
  double zero_tol_rel = 1e-8;     // |theta| <= this * scale counts as zero
  double gap_tol_rel = 1e-6;      // band around s0 where beta's formula is 0/0
  double fit_window = 0.1;        // outer radius of the order-k log-log fit
  double order_slope_tol = 0.2;   // fitted slope must be this close to an integer
  int nodes_per_unit = 2048;
  int min_nodes = 257;
  int max_nodes = 200001;
  int jet_order = 8;
};

inline int analysis_grid_size(const AnalysisConfig& cfg, const Interval& dom) {
  const double want = cfg.nodes_per_unit * dom.length();
  int n = static_cast<int>(std::ceil(want)) + 1;
  n = std::max(n, cfg.min_nodes);
  n = std::min(n, cfg.max_nodes);
  return n;
}

inline std::vector<double> uniform_grid(const Interval& dom, int n) {
  std::vector<double> g(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    g[static_cast<size_t>(i)] = dom.a + dom.length() * i / (n - 1);
  g.back() = dom.b;
  return g;
}

// The beta-formula band scales with how trustworthy derivatives are.
inline double effective_gap_rel(DerivQuality q, const AnalysisConfig& cfg) {
  switch (q) {
    case DerivQuality::Exact: return cfg.gap_tol_rel;
    case DerivQuality::FrameBacked: return std::max(cfg.gap_tol_rel, 1e-4);
    case DerivQuality::FiniteDifference: return std::max(cfg.gap_tol_rel, 1e-3);
  }
  return cfg.gap_tol_rel;
}

struct LightlikePoint {
  double s0 = 0.0;
  int k = 0;    // vanishing order of theta
  int eps = 0;  // sign; 0 when not evaluated (synthetic profiles)
};

struct CausalCurvatureProfile {
  std::vector<double> s, theta, theta_prime;
  std::vector<LightlikePoint> zeros;
  double theta_scale = 0.0;  // max |theta| over the grid
  std::function<double(double)> theta_fn, theta_prime_fn;
  // j-th derivative of theta at a point (jets for analytic curves, divided
  // differences otherwise); may be empty for synthetic profiles.
  std::function<double(double, int)> theta_deriv_fn;
  DerivQuality quality = DerivQuality::Exact;
};

enum class CurveTypeTag { S, T, L, Mixed };

inline const char* curve_type_name(CurveTypeTag t) {
  switch (t) {
    case CurveTypeTag::S: return "S";
    case CurveTypeTag::T: return "T";
    case CurveTypeTag::L: return "L";
    case CurveTypeTag::Mixed: return "Mixed";
  }
  return "?";
}

struct CurveTypeReport {
  CurveTypeTag tag = CurveTypeTag::S;
  std::vector<LightlikePoint> points;
  struct Segment {
    double lo, hi;
    char character;  // 'S' or 'T'
  };
  std::vector<Segment> segments;  // complementary subintervals for Mixed
};

// ---------------------------------------------------------------------------
// Zero detection on a causal-curvature profile.

namespace detail {

inline double profile_zero_tol(const CausalCurvatureProfile& p, const AnalysisConfig& cfg) {
  return cfg.zero_tol_rel * std::max(1.0, p.theta_scale);
}

inline void estimate_order(const CausalCurvatureProfile& p, const AnalysisConfig& cfg,
                           LightlikePoint& z, const Interval& dom) {
  const double span = dom.length();
  const double tol_theta = profile_zero_tol(p, cfg);
  std::vector<double> lr, lt;
  double r = std::min(cfg.fit_window, 0.45 * span);
  for (int j = 0; j < 40 && r > 1e-12 * span; ++j, r *= 0.6) {
    for (const double sg : {+1.0, -1.0}) {
      const double sp = z.s0 + sg * r;
      if (!dom.contains(sp)) continue;
      const double th = std::abs(p.theta_fn(sp));
      if (th <= 10.0 * tol_theta) continue;
      lr.push_back(std::log(r));
      lt.push_back(std::log(th));
    }
  }
  if (lr.size() < 4)
    raise(ErrorCode::OrderAmbiguous, "too few usable samples around the zero for an order fit");
  double mx = 0, my = 0;
  for (size_t i = 0; i < lr.size(); ++i) {
    mx += lr[i];
    my += lt[i];
  }
  mx /= static_cast<double>(lr.size());
  my /= static_cast<double>(lr.size());
  double num = 0, den = 0;
  for (size_t i = 0; i < lr.size(); ++i) {
    num += (lr[i] - mx) * (lt[i] - my);
    den += (lr[i] - mx) * (lr[i] - mx);
  }
  const double slope = num / den;
  const int k = static_cast<int>(std::lround(slope));
  if (k < 1 || std::abs(slope - k) > cfg.order_slope_tol)
    raise(ErrorCode::OrderAmbiguous,
          "log-log slope " + std::to_string(slope) + " is not close to a positive integer");
  if (p.theta_deriv_fn) {
    // derivative magnitudes compared as Taylor contributions at the fit radius
    const double rr = std::min(cfg.fit_window, 0.45 * span);
    double fact = 1.0;
    std::vector<double> contrib(static_cast<size_t>(k) + 1, 0.0);
    for (int j = 1; j <= k; ++j) {
      fact *= j;
      contrib[static_cast<size_t>(j)] =
          std::abs(p.theta_deriv_fn(z.s0, j)) * std::pow(rr, j) / fact;
    }
    const double lead = contrib[static_cast<size_t>(k)];
    const double floor_tol =
        (p.quality == DerivQuality::Exact ? 1e-9 : 1e-5) * std::max(1.0, p.theta_scale);
    double below = 0;
    for (int j = 1; j < k; ++j) below = std::max(below, contrib[static_cast<size_t>(j)]);
    if (lead <= floor_tol || (k > 1 && below > 0.05 * lead))
      raise(ErrorCode::OrderAmbiguous,
            "theta derivatives at the zero do not confirm order " + std::to_string(k));
  }
  z.k = k;
}

}  // namespace detail

// Locate the isolated zeros of theta and estimate their vanishing order.
// Sign changes are pinned by bisection; touching (even-order) zeros by
// minimizing |theta| and polishing on theta'.
inline std::vector<LightlikePoint> find_lightlike_points(const CausalCurvatureProfile& p,
                                                         const AnalysisConfig& cfg = {}) {
  const size_t n = p.s.size();
  if (n < 8) raise(ErrorCode::PreconditionViolation, "profile grid too coarse");
  const Interval dom{p.s.front(), p.s.back()};
  const double span = dom.length();
  const double tol_theta = detail::profile_zero_tol(p, cfg);

  // a long run of near-zero theta means the zero is not isolated; the length
  // budget is the half-width an isolated zero of order <= 6 could produce
  if (p.theta_scale <= tol_theta)
    raise(ErrorCode::NonIsolatedZero, "theta vanishes over the whole grid (type L?)");
  const double h_grid = span / static_cast<double>(n - 1);
  const double envelope = std::pow(tol_theta / p.theta_scale, 1.0 / 6.0) * span;
  const size_t max_run = std::max<size_t>(4, static_cast<size_t>(2.0 * envelope / h_grid) + 1);
  size_t run = 0;
  for (size_t i = 0; i < n; ++i) {
    if (std::abs(p.theta[i]) <= tol_theta) {
      if (++run > max_run)
        raise(ErrorCode::NonIsolatedZero,
              "theta stays within tolerance over a subinterval too long for an isolated zero");
    } else {
      run = 0;
    }
  }

  const double step = span / static_cast<double>(n - 1);
  const double xtol = 1e-10 * span;
  std::vector<double> candidates;

  for (size_t i = 0; i + 1 < n; ++i) {
    if (p.theta[i] == 0.0 && std::abs(p.theta[i]) <= tol_theta) continue;
    if (p.theta[i] * p.theta[i + 1] < 0.0)
      candidates.push_back(bisect(p.theta_fn, p.s[i], p.s[i + 1], xtol));
  }

  // touching zeros: local minima of |theta| that dip low without a sign change
  const double trigger = std::max(tol_theta, 1e-3 * p.theta_scale);
  for (size_t i = 1; i + 1 < n; ++i) {
    const double a = std::abs(p.theta[i]);
    if (a > trigger) continue;
    if (!(a <= std::abs(p.theta[i - 1]) && a <= std::abs(p.theta[i + 1]))) continue;
    if (p.theta[i - 1] * p.theta[i] < 0.0 || p.theta[i] * p.theta[i + 1] < 0.0) continue;
    const double lo = p.s[i > 1 ? i - 2 : 0];
    const double hi = p.s[std::min(i + 2, n - 1)];
    double s0 = golden_min([&](double x) { return std::abs(p.theta_fn(x)); }, lo, hi, xtol);
    if (p.theta_prime_fn) {
      const double dl = p.theta_prime_fn(lo), dh = p.theta_prime_fn(hi);
      if (dl * dh < 0.0) s0 = bisect(p.theta_prime_fn, lo, hi, xtol);
    }
    if (std::abs(p.theta_fn(s0)) <= std::max(tol_theta, 1e-6 * trigger)) candidates.push_back(s0);
  }

  std::sort(candidates.begin(), candidates.end());
  // merge duplicates from adjacent brackets, reject genuinely close pairs
  std::vector<double> zeros_s;
  for (double c : candidates) {
    if (!zeros_s.empty() && std::abs(c - zeros_s.back()) <= 2.0 * xtol) continue;
    if (!zeros_s.empty() && std::abs(c - zeros_s.back()) <= 3.0 * step)
      raise(ErrorCode::NonIsolatedZero, "two detected zeros within 3 grid steps");
    zeros_s.push_back(c);
  }

  std::vector<LightlikePoint> out;
  for (double s0 : zeros_s) {
    LightlikePoint z;
    z.s0 = s0;
    detail::estimate_order(p, cfg, z, dom);
    out.push_back(z);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Profile computation from a curve.

// eps at a curvature-lightlike point: e(s0) x kappa(s0) = eps kappa(s0).
inline int sign_epsilon(const UnitSpeedCurve& c, double s0, double tol = 1e-6) {
  const Jet3 g = c.eval(s0, 2);
  return lightlike_cross_sign(g.deriv(1), g.deriv(2), tol);
}

inline CausalCurvatureProfile causal_curvature(const UnitSpeedCurve& c,
                                               const AnalysisConfig& cfg = {},
                                               bool locate_zeros = true) {
  const Interval dom = c.domain();
  const int n = analysis_grid_size(cfg, dom);
  CausalCurvatureProfile p;
  p.quality = c.quality();
  p.s = uniform_grid(dom, n);
  p.theta.resize(p.s.size());
  p.theta_prime.resize(p.s.size());

  for (size_t i = 0; i < p.s.size(); ++i) {
    const Jet3 g = c.eval(p.s[i], 3);
    const LVec3 kv = g.deriv(2);
    if (euclid_norm(kv) <= std::max(cfg.causal_tol, 1e-12))
      raise(ErrorCode::ZeroCurvatureVector,
            "curvature vector vanishes at s = " + std::to_string(p.s[i]));
    p.theta[i] = inner(kv, kv);
    p.theta_prime[i] = 2.0 * inner(g.deriv(3), kv);
    p.theta_scale = std::max(p.theta_scale, std::abs(p.theta[i]));
  }

  p.theta_fn = [c](double s) {
    const Jet3 g = c.eval(s, 2);
    const LVec3 kv = g.deriv(2);
    return inner(kv, kv);
  };
  p.theta_prime_fn = [c](double s) {
    const Jet3 g = c.eval(s, 3);
    return 2.0 * inner(g.deriv(3), g.deriv(2));
  };

  if (c.quality() == DerivQuality::Exact) {
    const int jo = std::min(cfg.jet_order + 2, c.max_order());
    p.theta_deriv_fn = [c, jo](double s, int j) {
      if (j + 2 > jo) raise(ErrorCode::DerivativeUnavailable, "theta derivative order too high");
      const Jet3 g = c.eval(s, jo);
      const Jet3 kj = g.derivative_shift().derivative_shift();
      const Jet th = jet3_inner(kj, kj);
      return th.deriv(j);
    };
  } else {
    // divided differences on the theta evaluator with a roundoff-aware spacing
    auto theta_fn = p.theta_fn;
    const double span = dom.length();
    p.theta_deriv_fn = [theta_fn, dom, span](double s, int j) {
      const double h = std::max(1e-2, span / 100.0) / 4.0;
      const int m = j + 4;
      std::vector<double> xs(static_cast<size_t>(m)), ys(static_cast<size_t>(m));
      for (int i = 0; i < m; ++i) {
        double x = s + (i - (m - 1) / 2.0) * h;
        x = std::min(std::max(x, dom.a), dom.b);
        xs[static_cast<size_t>(i)] = x;
        ys[static_cast<size_t>(i)] = theta_fn(x);
      }
      const auto w = fornberg_weights(s, xs, j);
      double acc = 0;
      for (int i = 0; i < m; ++i)
        acc += w[static_cast<size_t>(j)][static_cast<size_t>(i)] * ys[static_cast<size_t>(i)];
      return acc;
    };
  }

  // a theta that vanishes over the whole grid is type L, not a zero hunt
  if (locate_zeros && p.theta_scale > detail::profile_zero_tol(p, cfg)) {
    p.zeros = find_lightlike_points(p, cfg);
    for (auto& z : p.zeros) z.eps = sign_epsilon(c, z.s0);
  }
  return p;
}

inline CurveTypeReport classify(const CausalCurvatureProfile& p, const AnalysisConfig& cfg = {}) {
  const double tol_theta = detail::profile_zero_tol(p, cfg);
  bool all_pos = true, all_neg = true, all_zero = true;
  for (double th : p.theta) {
    all_pos = all_pos && th > tol_theta;
    all_neg = all_neg && th < -tol_theta;
    all_zero = all_zero && std::abs(th) <= tol_theta;
  }
  CurveTypeReport r;
  if (all_pos) {
    r.tag = CurveTypeTag::S;
    return r;
  }
  if (all_neg) {
    r.tag = CurveTypeTag::T;
    return r;
  }
  if (all_zero) {
    r.tag = CurveTypeTag::L;
    return r;
  }
  r.tag = CurveTypeTag::Mixed;
  r.points = p.zeros;
  std::vector<double> cuts{p.s.front()};
  for (const auto& z : r.points) cuts.push_back(z.s0);
  cuts.push_back(p.s.back());
  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    const double th = p.theta_fn ? p.theta_fn(mid) : 0.0;
    r.segments.push_back({cuts[i], cuts[i + 1], th >= 0 ? 'S' : 'T'});
  }
  return r;
}

// ---------------------------------------------------------------------------
// Frenet apparatus (types S and T).

struct FrenetApparatus {
  std::vector<double> s;
  std::vector<LVec3> e, n, b;
  std::vector<double> kappa, tau;
  int sigma = -1;  // -1 for type S, +1 for type T
  double max_residual = 0.0;  // Frenet-Serret equation residual over the grid
};

namespace detail {

struct FrenetPoint {
  LVec3 e, n, b, e1, n1, b1;  // values and first derivatives
  double kappa, tau;
};

inline FrenetPoint frenet_point(const UnitSpeedCurve& c, double s, int sigma) {
  const Jet3 g = c.eval(s, 3);
  const Jet3 e_jet = g.derivative_shift().truncated(1);
  const Jet3 k_jet = g.derivative_shift().derivative_shift().truncated(1);
  const Jet theta_jet = jet3_inner(k_jet, k_jet);
  const Jet kappa_jet = jet_sqrt(sigma < 0 ? theta_jet : -theta_jet);
  const Jet inv_kappa = Jet::constant(1.0, 1) / kappa_jet;
  const Jet3 n_jet = inv_kappa * k_jet;
  const Jet sig = Jet::constant(sigma, 1);
  const Jet3 b_jet = sig * jet3_cross(e_jet, n_jet);
  FrenetPoint out;
  out.e = e_jet.deriv(0);
  out.n = n_jet.deriv(0);
  out.b = b_jet.deriv(0);
  out.e1 = e_jet.deriv(1);
  out.n1 = n_jet.deriv(1);
  out.b1 = b_jet.deriv(1);
  out.kappa = kappa_jet.value();
  out.tau = inner(out.n1, out.b);
  return out;
}

}  // namespace detail

inline FrenetApparatus frenet_apparatus(const UnitSpeedCurve& c, Interval sub,
                                        const AnalysisConfig& cfg = {}, int n_nodes = 0) {
  const int n = n_nodes > 0 ? n_nodes : analysis_grid_size(cfg, sub);
  FrenetApparatus f;
  f.s = uniform_grid(sub, n);

  // the sign of theta decides sigma and must not change on the subinterval
  std::vector<double> thetas(f.s.size());
  double scale = 0.0;
  for (size_t i = 0; i < f.s.size(); ++i) {
    const Jet3 g = c.eval(f.s[i], 2);
    const LVec3 kv = g.deriv(2);
    thetas[i] = inner(kv, kv);
    scale = std::max(scale, std::abs(thetas[i]));
  }
  const double tol_theta = cfg.zero_tol_rel * std::max(1.0, scale);
  for (size_t i = 0; i < thetas.size(); ++i) {
    if (std::abs(thetas[i]) <= tol_theta || (thetas[i] > 0) != (thetas[0] > 0))
      raise(ErrorCode::MixedCausality,
            "theta changes sign or touches zero inside the subinterval (not a Frenet arc)");
  }
  f.sigma = thetas[0] > 0 ? -1 : +1;

  f.e.resize(f.s.size());
  f.n.resize(f.s.size());
  f.b.resize(f.s.size());
  f.kappa.resize(f.s.size());
  f.tau.resize(f.s.size());
  for (size_t i = 0; i < f.s.size(); ++i) {
    const auto pt = detail::frenet_point(c, f.s[i], f.sigma);
    f.e[i] = pt.e;
    f.n[i] = pt.n;
    f.b[i] = pt.b;
    f.kappa[i] = pt.kappa;
    f.tau[i] = pt.tau;
    const double sg = f.sigma;
    const double r1 = euclid_norm(pt.e1 - pt.kappa * pt.n);
    const double r2 = euclid_norm(pt.n1 - sg * (pt.kappa * pt.e + pt.tau * pt.b));
    const double r3 = euclid_norm(pt.b1 - sg * pt.tau * pt.n);
    f.max_residual = std::max({f.max_residual, r1, r2, r3});
  }
  return f;
}

// tau from the determinant identity det(gamma', gamma'', gamma''') = -theta tau.
inline double torsion_via_det(const UnitSpeedCurve& c, double s, double tol = 1e-10) {
  const Jet3 g = c.eval(s, 3);
  const LVec3 kv = g.deriv(2);
  const double theta = inner(kv, kv);
  if (std::abs(theta) <= tol)
    raise(ErrorCode::NearLightlike, "theta too small for the determinant torsion formula");
  return -scalar_triple(g.deriv(1), kv, g.deriv(3)) / theta;
}

// tau = -mu - theta'/(2 theta) away from curvature-lightlike points.
inline double torsion_via_mu(double theta, double theta_prime, double mu, double tol = 1e-10) {
  if (std::abs(theta) <= tol)
    raise(ErrorCode::NearLightlike, "theta too small for the mu-based torsion formula");
  return -mu - 0.5 * theta_prime / theta;
}

// ---------------------------------------------------------------------------
// Pseudo-binormal frames.

struct PseudoFrame {
  std::vector<double> s;
  std::vector<LVec3> e, kvec, beta;
  std::vector<double> mu, theta;
  std::vector<char> valid;  // 1 where beta came from its defining formula
  int eps = 0;
  double max_relation_residual = 0.0;  // frame relations on valid nodes
  double mu_jump = 0.0;                // extrapolated-mu mismatch across s0
};

namespace detail {

// beta for a type-L point: the unique lightlike solution of <e,beta> = 0,
// <kappa,beta> = 1. The homogeneous direction is kappa itself, so the
// quadratic condition becomes linear in the line parameter.
inline LVec3 solve_lightlike_beta(const LVec3& e, const LVec3& kv) {
  const LVec3 r1 = lower(e), r2 = lower(kv);
  const double g11 = euclid_dot(r1, r1), g12 = euclid_dot(r1, r2), g22 = euclid_dot(r2, r2);
  const double det = g11 * g22 - g12 * g12;
  if (std::abs(det) < 1e-300)
    raise(ErrorCode::Singular, "tangent and curvature vector are numerically dependent");
  const double alpha = -g12 / det;
  const double beta = g11 / det;
  const LVec3 x0 = alpha * r1 + beta * r2;
  const double t = -0.5 * inner(x0, x0);
  return x0 + t * kv;
}

}  // namespace detail

// Frame for curves of type L (theta identically zero): beta solved pointwise,
// mu = -<kappa', beta>.
inline PseudoFrame typeL_frame(const UnitSpeedCurve& c, const AnalysisConfig& cfg = {}) {
  const Interval dom = c.domain();
  const int n = analysis_grid_size(cfg, dom);
  PseudoFrame f;
  f.s = uniform_grid(dom, n);
  f.e.resize(f.s.size());
  f.kvec.resize(f.s.size());
  f.beta.resize(f.s.size());
  f.mu.resize(f.s.size());
  f.theta.resize(f.s.size());
  f.valid.assign(f.s.size(), 1);

  double kappa_scale = 0.0;
  for (size_t i = 0; i < f.s.size(); ++i) {
    const Jet3 g = c.eval(f.s[i], 2);
    kappa_scale = std::max(kappa_scale, euclid_norm2(g.deriv(2)));
  }
  const double tol_theta = cfg.zero_tol_rel * std::max(1.0, kappa_scale);

  for (size_t i = 0; i < f.s.size(); ++i) {
    const Jet3 g = c.eval(f.s[i], 3);
    const LVec3 e = g.deriv(1);
    const LVec3 kv = g.deriv(2);
    if (euclid_norm(kv) <= std::max(cfg.causal_tol, 1e-12))
      raise(ErrorCode::ZeroCurvatureVector,
            "curvature vector vanishes at s = " + std::to_string(f.s[i]));
    const double th = inner(kv, kv);
    if (std::abs(th) > tol_theta)
      raise(ErrorCode::NotTypeL, "theta is not identically zero (|theta| = " +
                                     std::to_string(std::abs(th)) + " at s = " +
                                     std::to_string(f.s[i]) + ")");
    const LVec3 beta = detail::solve_lightlike_beta(e, kv);
    f.e[i] = e;
    f.kvec[i] = kv;
    f.beta[i] = beta;
    f.theta[i] = th;
    f.mu[i] = -inner(g.deriv(3), beta);
    f.max_relation_residual = std::max(
        {f.max_relation_residual, std::abs(inner(e, beta)), std::abs(inner(kv, beta) - 1.0),
         std::abs(inner(beta, beta))});
    if (i == 0) f.eps = euclid_dot(cross(e, kv), kv) >= 0 ? +1 : -1;
  }
  return f;
}

namespace detail {

// Least-squares cubic extrapolation of one beta/mu component from one side.
inline double side_extrapolate(const std::vector<double>& xs, const std::vector<double>& ys,
                               double at) {
  const int deg = xs.size() >= 6 ? 3 : static_cast<int>(xs.size()) - 1;
  PolyFit fit(xs, ys, deg);
  return fit.eval(at);
}

}  // namespace detail

// Pseudo-binormal frame near an isolated curvature-lightlike point s0 with
// sign eps: beta = -(1/theta)(eps e x kappa - kappa) where theta is safely
// away from zero, bridged across the gap by cubic extrapolation from both
// sides. mu = -<kappa', beta>.
inline PseudoFrame pseudo_frame_on_grid(const UnitSpeedCurve& c, double s0, int eps,
                                        std::vector<double> grid,
                                        const AnalysisConfig& cfg = {}) {
  PseudoFrame f;
  f.eps = eps;
  f.s = std::move(grid);
  const size_t nn = f.s.size();
  f.e.resize(nn);
  f.kvec.resize(nn);
  f.beta.assign(nn, LVec3{});
  f.mu.assign(nn, 0.0);
  f.theta.resize(nn);
  f.valid.assign(nn, 0);

  std::vector<LVec3> kprime(nn);
  double theta_scale = 0.0;
  for (size_t i = 0; i < nn; ++i) {
    const Jet3 g = c.eval(f.s[i], 3);
    f.e[i] = g.deriv(1);
    f.kvec[i] = g.deriv(2);
    kprime[i] = g.deriv(3);
    f.theta[i] = inner(f.kvec[i], f.kvec[i]);
    theta_scale = std::max(theta_scale, std::abs(f.theta[i]));
  }
  const double gap_tol = effective_gap_rel(c.quality(), cfg) * theta_scale;

  for (size_t i = 0; i < nn; ++i) {
    if (std::abs(f.theta[i]) <= gap_tol) continue;
    const LVec3 num = static_cast<double>(eps) * cross(f.e[i], f.kvec[i]) - f.kvec[i];
    f.beta[i] = (-1.0 / f.theta[i]) * num;
    f.mu[i] = -inner(kprime[i], f.beta[i]);
    f.valid[i] = 1;
    const LMat3 frame = LMat3::from_columns(f.e[i], f.kvec[i], f.beta[i]);
    f.max_relation_residual = std::max(
        {f.max_relation_residual, std::abs(inner(f.e[i], f.beta[i])),
         std::abs(inner(f.kvec[i], f.beta[i]) - 1.0), std::abs(inner(f.beta[i], f.beta[i])),
         std::abs(frame.det() - eps)});
  }

  // bridge every invalid node from valid flanks (>= 4 nodes each side)
  std::vector<size_t> gaps;
  for (size_t i = 0; i < nn; ++i)
    if (!f.valid[i]) gaps.push_back(i);

  if (!gaps.empty()) {
    auto collect = [&](size_t from, int dir, size_t count) {
      std::vector<size_t> idx;
      for (long i = static_cast<long>(from); i >= 0 && i < static_cast<long>(nn);
           i += dir) {
        if (f.valid[static_cast<size_t>(i)]) {
          idx.push_back(static_cast<size_t>(i));
          if (idx.size() == count) break;
        }
      }
      return idx;
    };
    for (size_t gi : gaps) {
      const auto left = collect(gi, -1, 12);
      const auto right = collect(gi, +1, 12);
      if (left.size() < 4 && right.size() < 4)
        raise(ErrorCode::GapTooWide, "fewer than 4 valid nodes flank the gap on both sides");
      auto fit_side = [&](const std::vector<size_t>& side, double at, LVec3& beta_out,
                          double& mu_out) {
        std::vector<double> xs(side.size());
        std::vector<double> bx(side.size()), by(side.size()), bz(side.size()), mm(side.size());
        for (size_t j = 0; j < side.size(); ++j) {
          xs[j] = f.s[side[j]];
          bx[j] = f.beta[side[j]].x;
          by[j] = f.beta[side[j]].y;
          bz[j] = f.beta[side[j]].z;
          mm[j] = f.mu[side[j]];
        }
        beta_out = {detail::side_extrapolate(xs, bx, at), detail::side_extrapolate(xs, by, at),
                    detail::side_extrapolate(xs, bz, at)};
        mu_out = detail::side_extrapolate(xs, mm, at);
      };
      LVec3 bl{}, br{};
      double ml = 0, mr = 0;
      int sides = 0;
      if (left.size() >= 4) {
        fit_side(left, f.s[gi], bl, ml);
        ++sides;
      }
      if (right.size() >= 4) {
        fit_side(right, f.s[gi], br, mr);
        ++sides;
      }
      if (sides == 2) {
        f.beta[gi] = 0.5 * (bl + br);
        f.mu[gi] = 0.5 * (ml + mr);
      } else if (left.size() >= 4) {
        f.beta[gi] = bl;
        f.mu[gi] = ml;
      } else {
        f.beta[gi] = br;
        f.mu[gi] = mr;
      }
    }

    // continuity of mu across s0, extrapolated from each side separately
    auto left_all = collect(gaps.front(), -1, 8);
    auto right_all = collect(gaps.back(), +1, 8);
    if (left_all.size() >= 4 && right_all.size() >= 4) {
      auto fit_mu = [&](const std::vector<size_t>& side) {
        std::vector<double> xs(side.size()), mm(side.size());
        for (size_t j = 0; j < side.size(); ++j) {
          xs[j] = f.s[side[j]];
          mm[j] = f.mu[side[j]];
        }
        return detail::side_extrapolate(xs, mm, s0);
      };
      f.mu_jump = std::abs(fit_mu(left_all) - fit_mu(right_all));
    }
  }
  return f;
}

inline PseudoFrame pseudo_frame_Lk(const UnitSpeedCurve& c, double s0, int eps,
                                   const AnalysisConfig& cfg = {},
                                   std::optional<Interval> window = std::nullopt) {
  const Interval dom = window.value_or(c.domain());
  return pseudo_frame_on_grid(c, s0, eps, uniform_grid(dom, analysis_grid_size(cfg, dom)), cfg);
}

// Point value of mu at the curvature-lightlike point itself, by two-sided
// cubic extrapolation of the closed-form beta evaluated just outside the gap.
inline double mu_at_lightlike_point(const UnitSpeedCurve& c, double s0, int eps,
                                    const AnalysisConfig& cfg = {}) {
  const Interval dom = c.domain();
  auto theta_at = [&](double s) {
    const Jet3 g = c.eval(s, 2);
    const LVec3 kv = g.deriv(2);
    return inner(kv, kv);
  };
  double theta_scale = 0.0;
  for (int i = 0; i < 33; ++i)
    theta_scale = std::max(theta_scale, std::abs(theta_at(dom.a + dom.length() * i / 32.0)));
  const double gap_tol = effective_gap_rel(c.quality(), cfg) * theta_scale;
  const double span = dom.length();

  double delta = (c.quality() == DerivQuality::Exact) ? 1e-7 * span : 2.0 * span / 1000.0;
  for (int i = 0; i < 60; ++i) {
    const bool lo_ok = !dom.contains(s0 - delta) || std::abs(theta_at(s0 - delta)) > 10 * gap_tol;
    const bool hi_ok = !dom.contains(s0 + delta) || std::abs(theta_at(s0 + delta)) > 10 * gap_tol;
    if (lo_ok && hi_ok) break;
    delta *= 2.0;
  }

  auto mu_formula = [&](double s) {
    const Jet3 g = c.eval(s, 3);
    const LVec3 e = g.deriv(1);
    const LVec3 kv = g.deriv(2);
    const double th = inner(kv, kv);
    const LVec3 beta = (-1.0 / th) * (static_cast<double>(eps) * cross(e, kv) - kv);
    return -inner(g.deriv(3), beta);
  };

  std::vector<double> xs, ys;
  for (int j = 1; j <= 5; ++j) {
    for (const double sg : {-1.0, +1.0}) {
      const double s = s0 + sg * delta * j;
      if (!dom.contains(s)) continue;
      if (std::abs(theta_at(s)) <= 10 * gap_tol) continue;
      xs.push_back(s);
      ys.push_back(mu_formula(s));
    }
  }
  if (xs.size() < 4) raise(ErrorCode::GapTooWide, "not enough room around s0 to extrapolate mu");
  PolyFit fit(xs, ys, 3);
  return fit.eval(s0);
}

// ---------------------------------------------------------------------------
// Torsion blow-up coefficient: lim (s - s0) tau(s) = -k/2 for type L_k.

inline double blowup_coefficient(const UnitSpeedCurve& c, double s0, int k,
                                 const AnalysisConfig& cfg = {},
                                 std::optional<int> eps_hint = std::nullopt) {
  const int eps = eps_hint ? *eps_hint : sign_epsilon(c, s0);
  const Interval dom = c.domain();
  (void)k;
  (void)cfg;

  auto probe = [&](double s) {
    const Jet3 g = c.eval(s, 3);
    const LVec3 e = g.deriv(1);
    const LVec3 kv = g.deriv(2);
    const double theta = inner(kv, kv);
    const double theta_prime = 2.0 * inner(g.deriv(3), kv);
    const LVec3 beta = (-1.0 / theta) * (static_cast<double>(eps) * cross(e, kv) - kv);
    const double mu = -inner(g.deriv(3), beta);
    const double tau = -mu - 0.5 * theta_prime / theta;
    return (s - s0) * tau;
  };

  auto theta_at = [&](double s) {
    const Jet3 g = c.eval(s, 2);
    const LVec3 kv = g.deriv(2);
    return inner(kv, kv);
  };
  double theta_scale = 0.0;
  for (int i = 0; i < 33; ++i)
    theta_scale = std::max(theta_scale, std::abs(theta_at(dom.a + dom.length() * i / 32.0)));
  const double floor_rel = (c.quality() == DerivQuality::Exact)        ? 1e-12
                           : (c.quality() == DerivQuality::FrameBacked) ? 1e-8
                                                                         : 1e-4;
  const double theta_floor = std::max(floor_rel * theta_scale, 1e-300);

  std::vector<double> ladder;
  if (c.quality() == DerivQuality::Exact) {
    for (int m = 2; m <= 5; ++m) ladder.push_back(std::pow(10.0, -m));
  } else {
    // pick the base so theta is resolvable, then halve twice
    double base = 4e-2;
    for (int i = 0; i < 40; ++i) {
      const bool ok = std::abs(theta_at(dom.clamp(s0 + base / 4))) > 10 * theta_floor &&
                      std::abs(theta_at(dom.clamp(s0 - base / 4))) > 10 * theta_floor;
      if (ok) break;
      base *= 1.5;
    }
    ladder = {base, base / 2, base / 4};
  }

  std::vector<std::pair<double, double>> pairs;  // (delta, symmetric average)
  for (double d : ladder) {
    const double lo = s0 - d, hi = s0 + d;
    if (!dom.contains(lo) || !dom.contains(hi)) continue;
    if (std::abs(theta_at(lo)) <= theta_floor || std::abs(theta_at(hi)) <= theta_floor)
      raise(ErrorCode::NearLightlike,
            "blow-up probe at delta = " + std::to_string(d) + " falls inside the gap band");
    pairs.emplace_back(d, 0.5 * (probe(lo) + probe(hi)));
  }
  if (pairs.size() < 2)
    raise(ErrorCode::NearLightlike, "not enough room around s0 for the blow-up ladder");
  std::sort(pairs.begin(), pairs.end(), [](auto& a, auto& b) { return a.first > b.first; });
  return richardson(pairs, 2.0);
}

// ---------------------------------------------------------------------------
// Planarity.

struct PlanarityReport {
  bool planar = false;
  LVec3 point{};        // a point on the fitted plane (the centroid)
  LVec3 normal{};       // Minkowski normal of the fitted plane, sign-normalized
  CausalClass normal_class{};
  double residual = 0.0;  // max Euclidean distance to the fitted plane
  double span = 0.0;      // bounding-box diagonal used as the scale
  std::string warning;
};

inline PlanarityReport planarity_check(const UnitSpeedCurve& c, const AnalysisConfig& cfg = {}) {
  const Interval dom = c.domain();
  const int n = std::min(analysis_grid_size(cfg, dom), 4097);
  const auto grid = uniform_grid(dom, n);

  std::vector<LVec3> pts(grid.size());
  LVec3 centroid{};
  LVec3 lo{1e300, 1e300, 1e300}, hi{-1e300, -1e300, -1e300};
  for (size_t i = 0; i < grid.size(); ++i) {
    pts[i] = c.point(grid[i]);
    centroid += pts[i];
    lo = {std::min(lo.x, pts[i].x), std::min(lo.y, pts[i].y), std::min(lo.z, pts[i].z)};
    hi = {std::max(hi.x, pts[i].x), std::max(hi.y, pts[i].y), std::max(hi.z, pts[i].z)};
  }
  centroid = (1.0 / static_cast<double>(pts.size())) * centroid;

  double a00 = 0, a01 = 0, a02 = 0, a11 = 0, a12 = 0, a22 = 0;
  for (const auto& p : pts) {
    const LVec3 d = p - centroid;
    a00 += d.x * d.x;
    a01 += d.x * d.y;
    a02 += d.x * d.z;
    a11 += d.y * d.y;
    a12 += d.y * d.z;
    a22 += d.z * d.z;
  }
  const auto eig = symmetric_eigen3(a00, a01, a02, a11, a12, a22);
  LVec3 n_e{eig.vectors[0][0], eig.vectors[0][1], eig.vectors[0][2]};

  PlanarityReport r;
  r.point = centroid;
  r.span = euclid_norm(hi - lo);
  for (const auto& p : pts)
    r.residual = std::max(r.residual, std::abs(euclid_dot(p - centroid, n_e)));
  r.planar = r.residual < 1e-8 * std::max(r.span, 1e-30);

  // the plane's Minkowski normal; same components as Z * (euclid normal)
  LVec3 m{n_e.x, n_e.y, -n_e.z};
  double lead = m.x;
  if (std::abs(m.y) > std::abs(lead)) lead = m.y;
  if (std::abs(m.z) > std::abs(lead)) lead = m.z;
  if (lead < 0) m = -m;
  const double nrm = euclid_norm(m);
  if (nrm > 0) m = (1.0 / nrm) * m;
  m = {m.x + 0.0, m.y + 0.0, m.z + 0.0};  // clear negative zeros
  r.normal = m;
  r.normal_class = causal_class(m, std::max(cfg.causal_tol, 1e-9));

  // invariant cross-checks (geometric fit still stands if these are unavailable)
  try {
    AnalysisConfig quick = cfg;
    quick.nodes_per_unit = std::min(cfg.nodes_per_unit, 512);
    quick.min_nodes = 129;
    const auto profile = causal_curvature(c, quick, /*locate_zeros=*/false);
    std::vector<LightlikePoint> zeros;
    bool zero_scan_failed = false;
    try {
      auto p2 = profile;
      p2.zeros = find_lightlike_points(p2, quick);
      zeros = p2.zeros;
    } catch (const Error&) {
      zero_scan_failed = true;
    }
    const auto type = classify(profile, quick);
    if (!zero_scan_failed && !zeros.empty()) {
      // a type-L_k point rules out planarity
      if (r.planar)
        r.warning = "geometric fit reported planar despite a curvature-lightlike point";
      r.planar = false;
    } else if (type.tag == CurveTypeTag::L) {
      if (!r.planar)
        r.warning = "type-L curve did not pass the geometric planarity fit";
      else if (r.normal_class.tag != Causality::Lightlike)
        r.warning = "type-L curve fitted a plane with a non-lightlike normal";
    } else if (type.tag == CurveTypeTag::S || type.tag == CurveTypeTag::T) {
      double tau_max = 0.0;
      const auto fr = frenet_apparatus(c, dom, quick, 257);
      for (double t : fr.tau) tau_max = std::max(tau_max, std::abs(t));
      const bool invariant_planar = tau_max < 1e-6;
      if (invariant_planar != r.planar)
        r.warning = "geometric fit and tau==0 criterion disagree";
    }
  } catch (const Error& err) {
    r.warning = std::string("invariant cross-check unavailable: ") + err.what();
  }
  return r;
}

// ---------------------------------------------------------------------------
// Whole-curve analysis: profile, classification, per-point invariants,
// planarity, and the profile columns the CLI serializes.

struct LkPointRecord {
  double s0 = 0.0;
  int k = 0;
  int eps = 0;
  double mu0 = std::numeric_limits<double>::quiet_NaN();
  double blowup = std::numeric_limits<double>::quiet_NaN();
};

struct CurveAnalysis {
  CausalCurvatureProfile profile;
  CurveTypeReport type;
  std::vector<LkPointRecord> lk_points;
  PlanarityReport planarity;
  // per-profile-node columns; NaN marks "undefined here"
  std::vector<double> mu_col, tau_col;
  std::string warning;
};

inline CurveAnalysis analyze_curve(const UnitSpeedCurve& c, const AnalysisConfig& cfg = {}) {
  CurveAnalysis a;
  a.profile = causal_curvature(c, cfg);
  a.type = classify(a.profile, cfg);
  const size_t n = a.profile.s.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  a.mu_col.assign(n, nan);
  a.tau_col.assign(n, nan);

  switch (a.type.tag) {
    case CurveTypeTag::S:
    case CurveTypeTag::T: {
      const auto fr = frenet_apparatus(c, c.domain(), cfg, static_cast<int>(n));
      a.tau_col = fr.tau;
      break;
    }
    case CurveTypeTag::L: {
      const auto pf = typeL_frame(c, cfg);
      // typeL_frame uses the same uniform grid sizing as the profile
      a.mu_col = pf.mu;
      break;
    }
    case CurveTypeTag::Mixed: {
      // per-anchor windows split halfway between neighboring zeros
      const auto& zs = a.type.points;
      std::vector<double> cuts{a.profile.s.front()};
      for (size_t i = 0; i + 1 < zs.size(); ++i)
        cuts.push_back(0.5 * (zs[i].s0 + zs[i + 1].s0));
      cuts.push_back(a.profile.s.back());
      if (zs.size() > 1)
        a.warning = "multiple curvature-lightlike points; pseudo-torsion computed per anchor";
      for (size_t zi = 0; zi < zs.size(); ++zi) {
        std::vector<double> grid;
        std::vector<size_t> idx;
        for (size_t i = 0; i < n; ++i) {
          if (a.profile.s[i] >= cuts[zi] && a.profile.s[i] <= cuts[zi + 1]) {
            grid.push_back(a.profile.s[i]);
            idx.push_back(i);
          }
        }
        if (grid.size() < 16) continue;
        const auto pf = pseudo_frame_on_grid(c, zs[zi].s0, zs[zi].eps, grid, cfg);
        for (size_t j = 0; j < idx.size(); ++j) {
          a.mu_col[idx[j]] = pf.mu[j];
          if (pf.valid[j])
            a.tau_col[idx[j]] = -pf.mu[j] - 0.5 * a.profile.theta_prime[idx[j]] / a.profile.theta[idx[j]];
        }
        LkPointRecord rec;
        rec.s0 = zs[zi].s0;
        rec.k = zs[zi].k;
        rec.eps = zs[zi].eps;
        try {
          rec.mu0 = mu_at_lightlike_point(c, rec.s0, rec.eps, cfg);
        } catch (const Error& e) {
          a.warning += std::string(a.warning.empty() ? "" : "; ") + "mu(s0) unavailable: " + e.what();
        }
        try {
          rec.blowup = blowup_coefficient(c, rec.s0, rec.k, cfg, rec.eps);
        } catch (const Error& e) {
          a.warning += std::string(a.warning.empty() ? "" : "; ") + "blow-up unavailable: " + e.what();
        }
        a.lk_points.push_back(rec);
      }
      break;
    }
  }
  a.planarity = planarity_check(c, cfg);
  return a;
}

}  // namespace minkcurve
