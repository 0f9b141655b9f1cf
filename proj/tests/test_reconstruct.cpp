#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "minkcurve/invariants.hpp"
#include "minkcurve/reconstruct.hpp"

namespace mc = minkcurve;

namespace {

mc::TypeLkData lk_data(const std::string& theta, const std::string& mu, int eps, double s0,
                       mc::Interval dom) {
  mc::TypeLkData d;
  d.theta = mc::ScalarFn::from_expr(theta);
  d.mu = mc::ScalarFn::from_expr(mu);
  d.eps = eps;
  d.s0 = s0;
  d.domain = dom;
  return d;
}

mc::LMat3 random_so_plus(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ang(0.0, 6.283185307179586);
  std::uniform_real_distribution<double> rap(-1.2, 1.2);
  return mc::rotation_xy(ang(rng)) * mc::boost_xz(rap(rng)) * mc::rotation_xy(ang(rng));
}

}  // namespace

TEST(Reconstruct, InitialFrameRelations) {
  for (int eps : {+1, -1}) {
    const mc::LMat3 f = mc::initial_frame(eps);
    const mc::LVec3 e = f.col(0), kv = f.col(1), beta = f.col(2);
    EXPECT_DOUBLE_EQ(mc::inner(e, e), 1.0);
    EXPECT_DOUBLE_EQ(mc::inner(e, kv), 0.0);
    EXPECT_DOUBLE_EQ(mc::inner(e, beta), 0.0);
    EXPECT_NEAR(mc::inner(kv, kv), 0.0, 1e-15);
    EXPECT_NEAR(mc::inner(beta, beta), 0.0, 1e-15);
    EXPECT_NEAR(mc::inner(kv, beta), 1.0, 1e-15);
    EXPECT_NEAR(f.det(), eps, 1e-15);
    // E = S E' with S = diag(1,-1,-1)
    const mc::LMat3 s = mc::LMat3::diag(1, -1, -1);
    EXPECT_LT(mc::max_abs_entry(f - s * mc::initial_frame_primed(eps)), 1e-15);
  }
  EXPECT_THROW(mc::initial_frame(0), mc::Error);
}

TEST(Reconstruct, FrenetInitialFrames) {
  for (int sigma : {-1, +1}) {
    const mc::LMat3 f = mc::frenet_initial_frame(sigma);
    EXPECT_DOUBLE_EQ(mc::inner(f.col(0), f.col(0)), 1.0);
    EXPECT_DOUBLE_EQ(mc::inner(f.col(1), f.col(1)), -sigma);
    EXPECT_DOUBLE_EQ(mc::inner(f.col(2), f.col(2)), sigma);
    EXPECT_NEAR(f.det(), 1.0, 1e-15);
  }
}

TEST(Reconstruct, FrenetCircleCongruence) {
  mc::FrenetData d;
  d.kappa = mc::ScalarFn::constant(1.0);
  d.tau = mc::ScalarFn::constant(0.0);
  d.sigma = -1;
  d.domain = {-3.141592653589793, 3.141592653589793};
  const auto res = mc::integrate_frenet(d);
  EXPECT_LT(res.frame_drift, 1e-10);
  EXPECT_LT(res.unit_speed_drift, 1e-9);

  const auto circle = mc::UnitSpeedCurve::direct(mc::make_builtin("circle_s"));
  const auto fa = mc::frenet_apparatus(circle, circle.domain(), {}, 257);
  const mc::LMat3 f_circle = mc::LMat3::from_columns(fa.e[0], fa.n[0], fa.b[0]);
  const mc::LMat3 f_rec = mc::frame_at(res.frames, res.curve.domain().a);
  const auto al =
      mc::align_by_isometry(res.curve, f_rec, circle, f_circle, circle.domain().a);
  EXPECT_LT(al.max_distance, 1e-6);
  EXPECT_NEAR(al.T.det(), 1.0, 1e-9);
}

TEST(Reconstruct, FrenetHyperbolaCongruence) {
  mc::FrenetData d;
  d.kappa = mc::ScalarFn::constant(1.0);
  d.tau = mc::ScalarFn::constant(0.0);
  d.sigma = +1;
  d.domain = {-2.0, 2.0};
  const auto res = mc::integrate_frenet(d);
  const auto hyp = mc::UnitSpeedCurve::direct(mc::make_builtin("hyperbola_t"));
  const auto fa = mc::frenet_apparatus(hyp, hyp.domain(), {}, 257);
  const auto al = mc::align_by_isometry(res.curve, mc::frame_at(res.frames, -2.0), hyp,
                                        mc::LMat3::from_columns(fa.e[0], fa.n[0], fa.b[0]), -2.0);
  EXPECT_LT(al.max_distance, 1e-6);
}

TEST(Reconstruct, FrenetWithTorsionIsNonPlanar) {
  mc::FrenetData d;
  d.kappa = mc::ScalarFn::constant(1.0);
  d.tau = mc::ScalarFn::constant(0.5);
  d.sigma = -1;
  d.domain = {0.0, 5.0};
  const auto res = mc::integrate_frenet(d);
  EXPECT_FALSE(mc::planarity_check(res.curve).planar);
}

TEST(Reconstruct, FrenetRoundtrip) {
  mc::FrenetData d;
  d.kappa = mc::ScalarFn::constant(1.0);
  d.tau = mc::ScalarFn::constant(0.0);
  d.sigma = -1;
  d.domain = {-3.0, 3.0};
  const auto rep = mc::roundtrip(mc::InvariantData{d});
  EXPECT_LT(rep.kappa_err, 1e-8);
  EXPECT_LT(rep.tau_err, 1e-8);
  EXPECT_LT(rep.frame_drift, 1e-8);
}

TEST(Reconstruct, FrenetValidation) {
  mc::FrenetData d;
  d.kappa = mc::ScalarFn::from_expr("s");  // vanishes inside the domain
  d.tau = mc::ScalarFn::constant(0.0);
  d.sigma = -1;
  d.domain = {-1.0, 1.0};
  EXPECT_THROW(mc::integrate_frenet(d), mc::Error);

  mc::FrenetData ok;
  ok.kappa = mc::ScalarFn::constant(1.0);
  ok.tau = mc::ScalarFn::constant(0.0);
  ok.sigma = -1;
  ok.domain = {-1.0, 1.0};
  mc::IntegrationConfig cfg;
  cfg.h = 0.5;  // > length/16
  EXPECT_THROW(mc::integrate_frenet(ok, cfg), mc::Error);
}

TEST(Reconstruct, TypeLParabolaCongruence) {
  mc::TypeLData d;
  d.mu = mc::ScalarFn::constant(0.0);
  d.domain = {-2.0, 2.0};
  const auto res = mc::integrate_typeL(d);

  const auto par = mc::UnitSpeedCurve::direct(mc::make_builtin("parabola_l"));
  const auto pf = mc::typeL_frame(par);
  const mc::LMat3 f_par = mc::LMat3::from_columns(pf.e[0], pf.kvec[0], pf.beta[0]);
  const auto al = mc::align_by_isometry(res.curve, mc::frame_at(res.frames, -2.0), par, f_par,
                                        pf.s[0]);
  EXPECT_LT(al.max_distance, 1e-6);
  // the default type-L gauge makes this a proper congruence
  EXPECT_NEAR(al.T.det(), 1.0, 1e-9);
  EXPECT_EQ(mc::is_lorentz(al.T, 1e-8), mc::LorentzClass::SO21);
}

TEST(Reconstruct, TypeLRoundtripAndPlanarity) {
  mc::TypeLData d;
  d.mu = mc::ScalarFn::constant(1.0);
  d.domain = {-1.5, 1.5};
  const auto rep = mc::roundtrip(mc::InvariantData{d});
  EXPECT_LT(rep.theta_err, 1e-8);
  EXPECT_LT(rep.mu_err, 1e-6);

  const auto res = mc::integrate_typeL(d);
  const auto pl = mc::planarity_check(res.curve);
  EXPECT_TRUE(pl.planar);
  EXPECT_EQ(pl.normal_class.tag, mc::Causality::Lightlike);
}

TEST(Reconstruct, TypeLBadInitialFrame) {
  mc::TypeLData d;
  d.mu = mc::ScalarFn::constant(0.0);
  d.domain = {-1.0, 1.0};
  try {
    mc::integrate_typeL(d, {}, mc::LMat3::identity());  // not a null frame
    FAIL() << "expected InvalidData";
  } catch (const mc::Error& e) {
    EXPECT_EQ(e.code(), mc::ErrorCode::InvalidData);
  }
}

TEST(Reconstruct, LkRoundtripLinearTheta) {
  const auto d = lk_data("s", "0", +1, 0.0, {-1.0, 1.0});
  const auto rep = mc::roundtrip(mc::InvariantData{d});
  EXPECT_LT(rep.theta_err, 1e-6);
  EXPECT_LT(rep.mu_err, 1e-6);
  EXPECT_LT(rep.frame_drift, 1e-8);
  EXPECT_TRUE(rep.eps_match);
}

TEST(Reconstruct, LkValidation) {
  // theta identically zero: wrong integrator
  try {
    mc::integrate_Lk(lk_data("0", "1", +1, 0.0, {-1.0, 1.0}));
    FAIL() << "expected InvalidData";
  } catch (const mc::Error& e) {
    EXPECT_EQ(e.code(), mc::ErrorCode::InvalidData);
  }
  // theta(s0) != 0
  EXPECT_THROW(mc::integrate_Lk(lk_data("s", "0", +1, 0.5, {-1.0, 1.0})), mc::Error);
  // a second zero inside the domain
  EXPECT_THROW(mc::integrate_Lk(lk_data("s*(s-0.5)", "0", +1, 0.0, {-1.0, 1.0})), mc::Error);
  // s0 outside the domain
  EXPECT_THROW(mc::integrate_Lk(lk_data("s-3", "0", +1, 3.0, {-1.0, 1.0})), mc::Error);
  // eps must be +/-1
  EXPECT_THROW(mc::integrate_Lk(lk_data("s", "0", 2, 0.0, {-1.0, 1.0})), mc::Error);
}

TEST(Reconstruct, LkThetaFromTableMatchesExpression) {
  // the same data given as an expression and as a sampled table
  const auto d_expr = lk_data("s", "sin(s)", +1, 0.0, {-1.0, 1.0});
  mc::TypeLkData d_tab = d_expr;
  std::vector<double> xs, th, mu;
  for (int i = 0; i <= 2000; ++i) {
    const double s = -1.0 + 2.0 * i / 2000;
    xs.push_back(s);
    th.push_back(s);
    mu.push_back(std::sin(s));
  }
  d_tab.theta = mc::ScalarFn::from_table(xs, th);
  d_tab.mu = mc::ScalarFn::from_table(xs, mu);

  const auto r1 = mc::integrate_Lk(d_expr);
  const auto r2 = mc::integrate_Lk(d_tab);
  double worst = 0;
  for (int i = 0; i <= 40; ++i) {
    const double s = -1.0 + 2.0 * i / 40;
    worst = std::max(worst, mc::euclid_norm(r1.curve.point(s) - r2.curve.point(s)));
  }
  EXPECT_LT(worst, 1e-7);
}

TEST(Reconstruct, LkUniquenessUpToInitialFrame) {
  const auto d = lk_data("s", "cos(s)", +1, 0.0, {-1.0, 1.0});
  const auto r1 = mc::integrate_Lk(d);
  std::mt19937_64 rng(5);
  const mc::LMat3 rot = random_so_plus(rng);
  const auto r2 = mc::integrate_Lk(d, {}, rot * mc::initial_frame(+1));
  const auto al = mc::align_by_isometry(r1.curve, mc::frame_at(r1.frames, 0.0), r2.curve,
                                        mc::frame_at(r2.frames, 0.0), 0.0);
  EXPECT_LT(al.max_distance, 1e-6);
  // exact commutation: the rotated run is R times the plain run
  double worst = 0;
  for (int i = 0; i <= 50; ++i) {
    const double s = -1.0 + 0.04 * i;
    worst = std::max(worst, mc::euclid_norm(r2.curve.point(s) - rot * r1.curve.point(s)));
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(Reconstruct, LkOppositeSignsAreImproperlyCongruent) {
  const auto dp = lk_data("s", "cos(s)", +1, 0.0, {-1.0, 1.0});
  const auto dm = lk_data("s", "cos(s)", -1, 0.0, {-1.0, 1.0});
  const auto rp = mc::integrate_Lk(dp);
  const auto rm = mc::integrate_Lk(dm);
  const auto al = mc::align_by_isometry(rp.curve, mc::frame_at(rp.frames, 0.0), rm.curve,
                                        mc::frame_at(rm.frames, 0.0), 0.0);
  EXPECT_LT(al.max_distance, 1e-6);
  EXPECT_NEAR(al.T.det(), -1.0, 1e-9);  // necessarily orientation-reversing
  EXPECT_EQ(mc::is_lorentz(al.T, 1e-8), mc::LorentzClass::O21);

  // identical theta profiles from both signs
  double worst = 0;
  for (int i = 0; i <= 50; ++i) {
    const double s = -0.9 + 1.8 * i / 50;
    const mc::LVec3 kp = rp.curve.curvature_vector(s);
    const mc::LVec3 km = rm.curve.curvature_vector(s);
    worst = std::max(worst, std::abs(mc::inner(kp, kp) - mc::inner(km, km)));
  }
  EXPECT_LT(worst, 1e-8);
}

TEST(Reconstruct, LkLopezProfileReconstruction) {
  const auto c = mc::UnitSpeedCurve::direct(mc::make_builtin("lopez_l1"));
  const auto analysis = mc::analyze_curve(c);
  const auto z = analysis.lk_points.at(0);

  mc::TypeLkData d;
  d.theta = mc::ScalarFn::from_table(analysis.profile.s, analysis.profile.theta);
  d.mu = mc::ScalarFn::from_table(analysis.profile.s, analysis.mu_col);
  d.eps = z.eps;
  d.s0 = z.s0;
  d.domain = c.domain();
  mc::IntegrationConfig cfg;
  cfg.h = 5e-4;
  const auto res = mc::integrate_Lk(d, cfg);

  // compare at an integration node, evaluating the reference frame there
  double sstar = 0;
  for (double s : res.frames.s)
    if (std::abs(s - (z.s0 + 0.15)) < std::abs(sstar - (z.s0 + 0.15))) sstar = s;
  const mc::Jet3 g = c.eval(sstar, 2);
  const mc::LVec3 e = g.deriv(1), kv = g.deriv(2);
  const double th = mc::inner(kv, kv);
  const mc::LVec3 beta = (-1.0 / th) * (double(z.eps) * mc::cross(e, kv) - kv);
  const auto al = mc::align_by_isometry(res.curve, mc::frame_at(res.frames, sstar), c,
                                        mc::LMat3::from_columns(e, kv, beta), sstar);
  EXPECT_LT(al.max_distance, 1e-6);
}

TEST(Reconstruct, RefinementShowsFourthOrder) {
  const auto d = lk_data("s", "cos(s)", +1, 0.0, {-1.0, 1.0});
  const auto table = mc::roundtrip_refinement(mc::InvariantData{d}, {1e-2, 5e-3, 2.5e-3});
  ASSERT_EQ(table.size(), 3u);
  EXPECT_GE(table[1].order, 3.5);
  EXPECT_GE(table[2].order, 3.5);
}

TEST(Reconstruct, StructurePreservationUnderRefinement) {
  // frame-relation drift decays at 4th order in h
  const auto d = lk_data("s", "cos(s)", +1, 0.0, {-1.0, 1.0});
  std::vector<double> drifts;
  for (double h : {4e-2, 2e-2, 1e-2}) {
    mc::IntegrationConfig cfg;
    cfg.h = h;
    drifts.push_back(mc::integrate_Lk(d, cfg).frame_drift);
  }
  const double o1 = std::log(drifts[0] / drifts[1]) / std::log(2.0);
  const double o2 = std::log(drifts[1] / drifts[2]) / std::log(2.0);
  EXPECT_GE(o1, 3.0);
  EXPECT_GE(o2, 3.0);
}

TEST(Reconstruct, BlowupForwardVerification) {
  // reconstruct from theta = s^k (1+s^2), mu = 0, then re-estimate -k/2
  for (int k : {1, 2, 3}) {
    const auto d = lk_data("s^" + std::to_string(k) + "*(1+s^2)", "0", +1, 0.0, {-1.0, 1.0});
    const auto res = mc::integrate_Lk(d);
    const auto prof = mc::causal_curvature(res.curve);
    ASSERT_EQ(prof.zeros.size(), 1u) << "k=" << k;
    EXPECT_EQ(prof.zeros[0].k, k);
    const double bc =
        mc::blowup_coefficient(res.curve, prof.zeros[0].s0, prof.zeros[0].k, {}, prof.zeros[0].eps);
    EXPECT_NEAR(bc, -0.5 * k, 1e-2) << "k=" << k;
  }
}

TEST(Reconstruct, OutputStrideThinsTheNodeGrid) {
  const auto d = lk_data("s", "0", +1, 0.0, {-1.0, 1.0});
  mc::IntegrationConfig cfg;
  cfg.h = 1e-2;
  cfg.output_stride = 4;
  const auto res = mc::integrate_Lk(d, cfg);
  const auto dense = mc::integrate_Lk(d);
  EXPECT_LT(res.frames.s.size(), 60u);  // ~201/4
  EXPECT_GT(res.frames.s.size(), 40u);
  // thinned output still reconstructs the same curve
  double worst = 0;
  for (double s : {-0.6, 0.1, 0.8})
    worst = std::max(worst, mc::euclid_norm(res.curve.point(s) - dense.curve.point(s)));
  EXPECT_LT(worst, 1e-7);
}

TEST(Reconstruct, ProjectionKeepsRelationsTight) {
  const auto d = lk_data("s", "cos(s)", +1, 0.0, {-1.0, 1.0});
  mc::IntegrationConfig cfg;
  cfg.h = 1e-2;
  cfg.project = true;
  cfg.projection_stride = 8;
  const auto res = mc::integrate_Lk(d, cfg);
  EXPECT_LT(res.frame_drift, 1e-7);
}

TEST(Reconstruct, NormalizeFrameCases) {
  // identity on the normal form itself
  const auto r0 = mc::normalize_frame(mc::initial_frame(+1), +1);
  EXPECT_LT(mc::max_abs_entry(r0.T - mc::LMat3::identity()), 1e-12);
  EXPECT_TRUE(r0.proper);
  EXPECT_TRUE(r0.orthochronous);
  {
    const mc::LMat3 z = mc::LMat3::diag(1, 1, -1);
    EXPECT_LT(mc::max_abs_entry(r0.T.transposed() * z * r0.T - z), 1e-9);
    EXPECT_NEAR(r0.T.det(), 1.0, 1e-9);
  }

  // random rotation: T recovers the inverse
  std::mt19937_64 rng(17);
  const mc::LMat3 rot = random_so_plus(rng);
  const auto r1 = mc::normalize_frame(rot * mc::initial_frame(-1), -1);
  EXPECT_LT(mc::max_abs_entry(r1.T - mc::inverse(rot)), 1e-10);
  EXPECT_EQ(r1.cls, mc::LorentzClass::SOplus21);

  // primed normal form: T is exactly S = diag(1,-1,-1), proper but not
  // orthochronous
  const auto r2 = mc::normalize_frame(mc::initial_frame_primed(+1), +1);
  EXPECT_LT(mc::max_abs_entry(r2.T - mc::LMat3::diag(1, -1, -1)), 1e-12);
  EXPECT_TRUE(r2.proper);
  EXPECT_FALSE(r2.orthochronous);
  EXPECT_EQ(r2.cls, mc::LorentzClass::SO21);

  // opposite-sign frame: the transfer exists but is necessarily improper
  const auto r3 = mc::normalize_frame(mc::initial_frame(-1), +1);
  EXPECT_FALSE(r3.proper);
  EXPECT_EQ(r3.cls, mc::LorentzClass::O21);
  EXPECT_LT(mc::max_abs_entry(r3.T * mc::initial_frame(-1) - mc::initial_frame(+1)), 1e-12);

  // junk input
  EXPECT_THROW(mc::normalize_frame(mc::LMat3::identity(), +1), mc::Error);
}

TEST(Reconstruct, AlignByIsometryRecoversSyntheticMotion) {
  const auto c = mc::UnitSpeedCurve::direct(mc::make_builtin("circle_s"));
  const auto fa = mc::frenet_apparatus(c, c.domain(), {}, 65);
  const mc::LMat3 f0 = mc::LMat3::from_columns(fa.e[32], fa.n[32], fa.b[32]);

  // identity case
  const auto self = mc::align_by_isometry(c, f0, c, f0, fa.s[32]);
  EXPECT_LT(self.max_distance, 1e-12);

  std::mt19937_64 rng(23);
  const mc::LMat3 rot = random_so_plus(rng);
  const mc::LVec3 shift{0.4, -1.0, 0.2};
  const auto moved = mc::transformed(c, rot, shift);
  const auto al = mc::align_by_isometry(c, f0, moved, rot * f0, fa.s[32]);
  EXPECT_LT(mc::max_abs_entry(al.T - rot), 1e-10);
  EXPECT_LT(mc::euclid_norm(al.translation - shift), 1e-10);
  EXPECT_LT(al.max_distance, 1e-10);
}

TEST(Reconstruct, ScalarFnTableDerivative) {
  std::vector<double> xs, vs;
  for (int i = 0; i <= 400; ++i) {
    const double x = -1.0 + 2.0 * i / 400;
    xs.push_back(x);
    vs.push_back(std::sin(2 * x));
  }
  const auto f = mc::ScalarFn::from_table(xs, vs);
  EXPECT_NEAR(f(0.3), std::sin(0.6), 1e-8);
  EXPECT_NEAR(f.deriv(0.3), 2 * std::cos(0.6), 1e-5);
}

TEST(Reconstruct, StepTooLargeOnStiffData) {
  // exponentially growing mu with a coarse step drives the frame residual up
  mc::TypeLkData d = lk_data("s", "exp(4*s)*20", +1, 0.0, {-8.0, 8.0});
  mc::IntegrationConfig cfg;
  cfg.h = 0.5;
  try {
    mc::integrate_Lk(d, cfg);
    FAIL() << "expected StepTooLarge";
  } catch (const mc::Error& e) {
    EXPECT_EQ(e.code(), mc::ErrorCode::StepTooLarge);
  }
}
