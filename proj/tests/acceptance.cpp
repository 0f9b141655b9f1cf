// Acceptance suite: ten end-to-end criteria for the library, each printed as
// a single PASS/FAIL line. Exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "minkcurve/curves.hpp"
#include "minkcurve/expr.hpp"
#include "minkcurve/invariants.hpp"
#include "minkcurve/mink3.hpp"
#include "minkcurve/reconstruct.hpp"

namespace mc = minkcurve;

namespace {

int g_failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] %2d. %-38s %s\n", pass ? "PASS" : "FAIL", number, name.c_str(),
              detail.c_str());
  if (!pass) ++g_failures;
}

std::string fmt(const char* pattern, double a, double b = 0, double c = 0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double lopez_theta(double s) { return (std::pow(s, 4) - s * s - 1) / (s * s - 1); }
double lopez_mu(double s) {
  const double q = std::sqrt(s * s - 1);
  return (q * (std::pow(s, 6) - 2 * std::pow(s, 4) - 2 * s * s + 2) -
          s * (std::pow(s, 4) - 2 * s * s + 2)) /
         ((s * s - 1) * (std::pow(s, 4) - s * s - 1));
}
double lopez_tau(double s) {
  const double q = std::sqrt(s * s - 1);
  return (-std::pow(s, 6) + 2 * std::pow(s, 4) + 2 * s * s - 2) /
         (q * (std::pow(s, 4) - s * s - 1));
}

// 1. Worked-example reproduction on the catalog L1 curve.
void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;
  try {
    const auto c = mc::UnitSpeedCurve::direct(mc::make_builtin("lopez_l1", mc::Interval{-2.5, -1.05}));
    const auto analysis = mc::analyze_curve(c);
    const double s0_exact = -std::sqrt((1.0 + std::sqrt(5.0)) / 2.0);
    const double mu0_exact = std::sqrt(5.0 * std::sqrt(5.0) - 11.0) / (2.0 * std::sqrt(2.0));

    pass = pass && analysis.lk_points.size() == 1;
    if (!pass) {
      report(1, "worked-example reproduction", false, "expected exactly one lightlike point");
      return;
    }
    const auto z = analysis.lk_points[0];
    const double s0_err = std::abs(z.s0 - s0_exact);
    const double mu0_err = std::abs(z.mu0 - mu0_exact);
    const double blow_err = std::abs(z.blowup - (-0.5));
    pass = pass && s0_err < 1e-8 && z.k == 1 && mu0_err < 1e-5 && blow_err < 1e-3;

    // closed forms of theta, mu, tau at 50 sample points
    const int eps = z.eps;
    double worst = 0;
    int tau_points = 0;
    for (int i = 0; i < 50; ++i) {
      const double s = -2.45 + (1.35) * i / 49.0;
      const mc::Jet3 g = c.eval(s, 3);
      const mc::LVec3 e = g.deriv(1), kv = g.deriv(2);
      const double th = mc::inner(kv, kv);
      worst = std::max(worst, std::abs(th - lopez_theta(s)));
      const mc::LVec3 beta = (-1.0 / th) * (double(eps) * mc::cross(e, kv) - kv);
      const double mu = -mc::inner(g.deriv(3), beta);
      worst = std::max(worst, std::abs(mu - lopez_mu(s)));
      if (std::abs(th) > 1e-3) {
        const double tau = mc::torsion_via_det(c, s);
        worst = std::max(worst, std::abs(tau - lopez_tau(s)) /
                                    std::max(1.0, std::abs(lopez_tau(s))));
        ++tau_points;
      }
    }
    pass = pass && worst < 1e-6 && tau_points >= 40;
    const double dt = seconds_since(t0);
    pass = pass && dt < 5.0;
    detail = fmt("s0 err %.1e, mu0 err %.1e, closed-form err %.1e", s0_err, mu0_err, worst) +
             fmt(", blowup err %.1e, %.2fs", blow_err, dt);
  } catch (const std::exception& e) {
    pass = false;
    detail = e.what();
  }
  report(1, "worked-example reproduction", pass, detail);
}

// 2. Torsion blow-up law for reconstructed theta = s^k (1+s^2).
void criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;
  try {
    double worst = 0;
    for (int k : {1, 2, 3}) {
      mc::TypeLkData d;
      d.theta = mc::ScalarFn::from_expr("s^" + std::to_string(k) + "*(1+s^2)");
      d.mu = mc::ScalarFn::constant(0.0);
      d.eps = +1;
      d.s0 = 0.0;
      d.domain = {-1.0, 1.0};
      const auto res = mc::integrate_Lk(d);
      const auto prof = mc::causal_curvature(res.curve);
      if (prof.zeros.size() != 1 || prof.zeros[0].k != k) {
        pass = false;
        detail = "re-detection failed for k=" + std::to_string(k);
        break;
      }
      const double bc = mc::blowup_coefficient(res.curve, prof.zeros[0].s0, prof.zeros[0].k, {},
                                               prof.zeros[0].eps);
      worst = std::max(worst, std::abs(bc - (-0.5 * k)));
    }
    const double dt = seconds_since(t0);
    pass = pass && worst < 1e-2 && dt < 30.0;
    if (detail.empty()) detail = fmt("max |est + k/2| = %.1e, %.2fs", worst, dt);
  } catch (const std::exception& e) {
    pass = false;
    detail = e.what();
  }
  report(2, "torsion blow-up law (k = 1,2,3)", pass, detail);
}

// 3. Vector-identity suites: exact integers plus float residuals.
void criterion_3() {
  bool pass = true;
  std::string detail;
  try {
    using IVec = mc::Vec3<long long>;
    std::mt19937_64 rng(20240819);
    std::uniform_int_distribution<long long> coord(-10, 10);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto ivec = [&]() { return IVec{coord(rng), coord(rng), coord(rng)}; };
    long long bad = 0;
    double worst_float = 0;
    for (int i = 0; i < 10000; ++i) {
      const IVec a = ivec(), v = ivec(), w = ivec();
      if (mc::scalar_triple(a, v, w) != mc::inner(a, mc::cross(v, w))) ++bad;
      const IVec vt = mc::cross(a, mc::cross(v, w));
      if (!(vt == mc::inner(a, v) * w - mc::inner(a, w) * v)) ++bad;
      const IVec cc = mc::cross(v, w);
      if (mc::inner(cc, cc) !=
          -mc::inner(v, v) * mc::inner(w, w) + mc::inner(v, w) * mc::inner(v, w))
        ++bad;
      if (mc::inner(v, cc) != 0 || mc::inner(w, cc) != 0) ++bad;

      const mc::LVec3 dv{u(rng), u(rng), u(rng)}, dw{u(rng), u(rng), u(rng)},
          du{u(rng), u(rng), u(rng)};
      worst_float = std::max(
          worst_float, std::abs(mc::scalar_triple(du, dv, dw) - mc::inner(du, mc::cross(dv, dw))));
      const mc::LVec3 c2 = mc::cross(dv, dw);
      worst_float = std::max(worst_float,
                             std::abs(mc::inner(c2, c2) + mc::inner(dv, dv) * mc::inner(dw, dw) -
                                      mc::inner(dv, dw) * mc::inner(dv, dw)));
    }
    // lightlike cross products, constructed orthogonal pairs
    std::uniform_real_distribution<double> ang(0.0, 6.283185307179586);
    double worst_fact = 0;
    for (int i = 0; i < 10000; ++i) {
      const double phi = ang(rng);
      const double r = 0.25 + std::abs(u(rng));
      const mc::LVec3 w{r * std::cos(phi), r * std::sin(phi), r};
      const mc::LVec3 tangent{-std::sin(phi), std::cos(phi), 0};
      const mc::LVec3 v = (u(rng) + (u(rng) >= 0 ? 1.1 : -1.1)) * tangent + u(rng) * w;
      const mc::LVec3 c = mc::cross(v, w);
      const double nv = mc::mink_norm(v);
      worst_fact =
          std::max(worst_fact, std::min(mc::euclid_norm(c - nv * w), mc::euclid_norm(c + nv * w)) /
                                   mc::euclid_norm(w));
    }
    pass = bad == 0 && worst_float < 1e-12 && worst_fact < 1e-12;
    detail = fmt("exact failures %.0f, float resid %.1e, lightlike resid %.1e",
                 static_cast<double>(bad), worst_float, worst_fact);
  } catch (const std::exception& e) {
    pass = false;
    detail = e.what();
  }
  report(3, "vector-identity suites (1e4 trials)", pass, detail);
}

// 4. Fundamental-theorem round-trip with both signs.
void criterion_4() {
  bool pass = true;
  std::string detail;
  try {
    mc::TypeLkData dp;
    dp.theta = mc::ScalarFn::from_expr("s");
    dp.mu = mc::ScalarFn::from_expr("cos(s)");
    dp.eps = +1;
    dp.s0 = 0.0;
    dp.domain = {-1.0, 1.0};
    mc::TypeLkData dm = dp;
    dm.eps = -1;
    mc::IntegrationConfig cfg;
    cfg.h = 1e-3;

    const auto repp = mc::roundtrip(mc::InvariantData{dp}, cfg);
    const auto repm = mc::roundtrip(mc::InvariantData{dm}, cfg);
    pass = pass && repp.theta_err < 1e-6 && repp.mu_err < 1e-6 && repp.frame_drift < 1e-8 &&
           repp.eps_match;
    pass = pass && repm.theta_err < 1e-6 && repm.mu_err < 1e-6 && repm.frame_drift < 1e-8 &&
           repm.eps_match;

    const auto rp = mc::integrate_Lk(dp, cfg);
    const auto rm = mc::integrate_Lk(dm, cfg);
    const auto al = mc::align_by_isometry(rp.curve, mc::frame_at(rp.frames, 0.0), rm.curve,
                                          mc::frame_at(rm.frames, 0.0), 0.0);
    const bool improper = std::abs(al.T.det() + 1.0) < 1e-9 &&
                          mc::is_lorentz(al.T, 1e-8) == mc::LorentzClass::O21;
    pass = pass && al.max_distance < 1e-6 && improper;

    // identical invariant profiles from the two signs, each computed with
    // its own sign's pseudo-binormal
    auto mu_of = [](const mc::UnitSpeedCurve& c, double s, int eps) {
      const mc::Jet3 g = c.eval(s, 3);
      const mc::LVec3 e = g.deriv(1), kv = g.deriv(2);
      const double th = mc::inner(kv, kv);
      const mc::LVec3 beta = (-1.0 / th) * (double(eps) * mc::cross(e, kv) - kv);
      return -mc::inner(g.deriv(3), beta);
    };
    double prof_diff = 0;
    for (int i = 0; i <= 50; ++i) {
      const double s = -0.9 + 1.8 * i / 50;
      const mc::LVec3 kp = rp.curve.curvature_vector(s);
      const mc::LVec3 km = rm.curve.curvature_vector(s);
      prof_diff = std::max(prof_diff, std::abs(mc::inner(kp, kp) - mc::inner(km, km)));
      if (std::abs(s) > 0.05)
        prof_diff = std::max(prof_diff,
                             std::abs(mu_of(rp.curve, s, +1) - mu_of(rm.curve, s, -1)));
    }
    pass = pass && prof_diff < 1e-8;
    detail = fmt("errs %.1e/%.1e, drift %.1e", std::max(repp.theta_err, repm.theta_err),
                 std::max(repp.mu_err, repm.mu_err),
                 std::max(repp.frame_drift, repm.frame_drift)) +
             fmt(", improper-align dist %.1e, profile diff %.1e", al.max_distance, prof_diff);
  } catch (const std::exception& e) {
    pass = false;
    detail = e.what();
  }
  report(4, "fundamental-theorem round-trip", pass, detail);
}

// 5. Uniqueness as congruence for rotated initial frames.
void criterion_5() {
  bool pass = true;
  std::string detail;
  try {
    mc::TypeLkData d;
    d.theta = mc::ScalarFn::from_expr("s");
    d.mu = mc::ScalarFn::from_expr("cos(s)");
    d.eps = +1;
    d.s0 = 0.0;
    d.domain = {-1.0, 1.0};
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ang(0.0, 6.283185307179586);
    std::uniform_real_distribution<double> rap(-1.2, 1.2);
    double worst = 0;
    for (int trial = 0; trial < 3; ++trial) {
      const mc::LMat3 r =
          mc::rotation_xy(ang(rng)) * mc::boost_xz(rap(rng)) * mc::rotation_xy(ang(rng));
      const auto r1 = mc::integrate_Lk(d);
      const auto r2 = mc::integrate_Lk(d, {}, r * mc::initial_frame(+1));
      const auto al = mc::align_by_isometry(r1.curve, mc::frame_at(r1.frames, 0.0), r2.curve,
                                            mc::frame_at(r2.frames, 0.0), 0.0);
      worst = std::max(worst, al.max_distance);
    }
    pass = worst < 1e-6;
    detail = fmt("max alignment distance %.1e", worst);
  } catch (const std::exception& e) {
    pass = false;
    detail = e.what();
  }
  report(5, "uniqueness via frame rotation", pass, detail);
}

// 6. Observed integrator order >= 3.5 under h-refinement.
void criterion_6() {
  bool pass = true;
  std::string detail;
  try {
    mc::TypeLkData d;
    d.theta = mc::ScalarFn::from_expr("s");
    d.mu = mc::ScalarFn::from_expr("cos(s)");
    d.eps = +1;
    d.s0 = 0.0;
    d.domain = {-1.0, 1.0};
    const auto table = mc::roundtrip_refinement(mc::InvariantData{d}, {1e-2, 5e-3, 2.5e-3});
    pass = table.size() == 3 && table[1].order >= 3.5 && table[2].order >= 3.5;
    detail = fmt("orders %.2f, %.2f", table[1].order, table[2].order);
  } catch (const std::exception& e) {
    pass = false;
    detail = e.what();
  }
  report(6, "integrator convergence order >= 3.5", pass, detail);
}

// 7. Type-specific frames on the builtin witnesses.
void criterion_7() {
  bool pass = true;
  std::string detail;
  try {
    const auto circ = mc::UnitSpeedCurve::direct(mc::make_builtin("circle_s"));
    const auto fc = mc::frenet_apparatus(circ, circ.domain(), {}, 257);
    double c_err = 0;
    for (size_t i = 0; i < fc.s.size(); ++i)
      c_err = std::max({c_err, std::abs(fc.kappa[i] - 1.0), std::abs(fc.tau[i])});
    pass = pass && fc.sigma == -1 && c_err < 1e-8;

    const auto hyp = mc::UnitSpeedCurve::direct(mc::make_builtin("hyperbola_t"));
    const auto fh = mc::frenet_apparatus(hyp, hyp.domain(), {}, 257);
    double h_err = 0;
    for (size_t i = 0; i < fh.s.size(); ++i)
      h_err = std::max({h_err, std::abs(fh.kappa[i] - 1.0), std::abs(fh.tau[i])});
    pass = pass && fh.sigma == +1 && h_err < 1e-8;

    const auto par = mc::UnitSpeedCurve::direct(mc::make_builtin("parabola_l"));
    const auto pf = mc::typeL_frame(par);
    double p_err = 0;
    for (size_t i = 0; i < pf.s.size(); ++i) {
      const double s = pf.s[i];
      const mc::LVec3 want{-s, (1 - s * s) / 2, -(1 + s * s) / 2};
      p_err = std::max({p_err, std::abs(pf.theta[i]), std::abs(pf.mu[i]),
                        mc::euclid_norm(pf.beta[i] - want)});
    }
    const auto pl = mc::planarity_check(par);
    pass = pass && p_err < 1e-8 && pl.planar && pl.normal_class.tag == mc::Causality::Lightlike;
    detail = fmt("circle err %.1e, hyperbola err %.1e, parabola err %.1e", c_err, h_err, p_err);
  } catch (const std::exception& e) {
    pass = false;
    detail = e.what();
  }
  report(7, "type-specific frames (S/T/L)", pass, detail);
}

// 8. Planarity corollary on the builtin suite.
void criterion_8() {
  bool pass = true;
  std::string detail;
  try {
    const auto lop = mc::planarity_check(mc::UnitSpeedCurve::direct(mc::make_builtin("lopez_l1")));
    pass = pass && !lop.planar;
    double worst = 0;
    for (const char* name : {"circle_s", "hyperbola_t"}) {
      const auto r = mc::planarity_check(mc::UnitSpeedCurve::direct(mc::make_builtin(name)));
      pass = pass && r.planar;
      worst = std::max(worst, r.residual);
    }
    pass = pass && worst < 1e-8;
    detail = fmt("flat-curve residual %.1e, L1 curve planar=%.0f", worst, lop.planar ? 1.0 : 0.0);
  } catch (const std::exception& e) {
    pass = false;
    detail = e.what();
  }
  report(8, "planarity corollary", pass, detail);
}

// 9. Three torsion computations agree pairwise away from s0.
void criterion_9() {
  bool pass = true;
  std::string detail;
  try {
    const auto c = mc::UnitSpeedCurve::direct(mc::make_builtin("lopez_l1"));
    const auto prof = mc::causal_curvature(c);
    const int eps = prof.zeros.at(0).eps;
    double worst = 0;
    int used = 0;
    // exactly 100 sample points with |theta| > 1e-3
    for (int i = 0; i < 400 && used < 100; ++i) {
      const double s = -2.45 + 1.35 * i / 399.0;
      const double th = prof.theta_fn(s);
      if (std::abs(th) <= 1e-3) continue;
      const double t_det = mc::torsion_via_det(c, s);
      const mc::Jet3 g = c.eval(s, 3);
      const mc::LVec3 e = g.deriv(1), kv = g.deriv(2);
      const mc::LVec3 beta = (-1.0 / th) * (double(eps) * mc::cross(e, kv) - kv);
      const double mu = -mc::inner(g.deriv(3), beta);
      const double t_mu = mc::torsion_via_mu(th, prof.theta_prime_fn(s), mu);
      // Frenet route <n', b> on a tiny single-sign window around s
      const auto fr = mc::frenet_apparatus(c, {s - 5e-4, s + 5e-4}, {}, 5);
      const double t_fr = fr.tau[2];
      worst = std::max({worst, std::abs(t_det - t_mu), std::abs(t_det - t_fr),
                        std::abs(t_mu - t_fr)});
      ++used;
    }
    pass = used == 100 && worst < 1e-6;
    detail = fmt("pairwise torsion gap %.1e over %.0f points", worst, double(used));
  } catch (const std::exception& e) {
    pass = false;
    detail = e.what();
  }
  report(9, "torsion consistency", pass, detail);
}

// 10. Parser golden corpus and jet-vs-finite-difference agreement.
void criterion_10() {
  bool pass = true;
  std::string detail;
  try {
    const std::vector<std::pair<std::string, std::string>> corpus = {
        {"s^2 - 1", "s^2-1"},
        {"(s^4 - s^2 - 1)/(s^2 - 1)", "(s^4-s^2-1)/(s^2-1)"},
        {"1 + 2*s", "1+2*s"},
        {"(1 + 2)*s", "(1+2)*s"},
        {"-s^2", "-s^2"},
        {"(-s)^2", "(-s)^2"},
        {"2^3^2", "2^3^2"},
        {"(2^3)^2", "(2^3)^2"},
        {"s^-2", "s^-2"},
        {"1 - 2 - 3", "1-2-3"},
        {"1 - (2 - 3)", "1-(2-3)"},
        {"1/2/3", "1/2/3"},
        {"1/(2/3)", "1/(2/3)"},
        {"2*s + 3*s^2", "2*s+3*s^2"},
        {"sin(cos(s))", "sin(cos(s))"},
        {"sqrt(abs(s))", "sqrt(abs(s))"},
        {"-sin(s)", "-sin(s)"},
        {"-(s + 1)", "-(s+1)"},
        {"s*-s", "s*-s"},
        {"pi*s + e", "pi*s+e"},
        {"2e3 + s", "2000+s"},
        {"cosh(s)^2 - sinh(s)^2", "cosh(s)^2-sinh(s)^2"},
        {"s/2 + s^2/2", "s/2+s^2/2"},
        {"exp(-s^2/2)", "exp(-s^2/2)"},
    };
    for (const auto& [in, want] : corpus) {
      if (mc::print(mc::parse(in)) != want) {
        pass = false;
        detail = "corpus mismatch on " + in;
      }
    }

    // 100 fuzzed expressions: first derivative vs central differences
    std::mt19937_64 rng(31415);
    std::uniform_real_distribution<double> pt(-2.0, 2.0);
    std::uniform_real_distribution<double> lit(0.0, 4.0);
    std::uniform_int_distribution<int> pick(0, 9);
    std::function<mc::ExprPtr(int)> gen = [&](int depth) -> mc::ExprPtr {
      const int what = depth <= 0 ? pick(rng) % 3 : pick(rng);
      switch (what) {
        case 0: return mc::Expr::make_var();
        case 1: return mc::Expr::make_number(lit(rng));
        case 2: return mc::Expr::make_var();
        case 3: return mc::Expr::make_unary(gen(depth - 1));
        case 4: return mc::Expr::make_binary(mc::ExprKind::Add, gen(depth - 1), gen(depth - 1));
        case 5: return mc::Expr::make_binary(mc::ExprKind::Mul, gen(depth - 1), gen(depth - 1));
        case 6: return mc::Expr::make_binary(mc::ExprKind::Div, gen(depth - 1), gen(depth - 1));
        case 7: {
          std::uniform_int_distribution<int> e(0, 3);
          return mc::Expr::make_binary(mc::ExprKind::Pow, gen(depth - 1),
                                       mc::Expr::make_number(e(rng)));
        }
        default: {
          static const char* fns[] = {"sin", "cos", "sinh", "cosh", "tanh", "exp"};
          std::uniform_int_distribution<int> f(0, 5);
          return mc::Expr::make_call(fns[f(rng)], gen(depth - 1));
        }
      }
    };
    double worst_rel = 0;
    int done = 0;
    while (done < 100) {
      const auto e = gen(3);
      const double s = pt(rng);
      double d1, fp, fm;
      try {
        const mc::Jet j = mc::eval_jet(e, s, 1);
        d1 = j.deriv(1);
        fp = mc::eval(e, s + 1e-5);
        fm = mc::eval(e, s - 1e-5);
      } catch (const mc::Error&) {
        continue;
      }
      if (!std::isfinite(d1) || !std::isfinite(fp) || !std::isfinite(fm)) continue;
      if (std::abs(d1) > 1e3) continue;
      const double fd = (fp - fm) / 2e-5;
      worst_rel = std::max(worst_rel, std::abs(d1 - fd) / std::max(1.0, std::abs(fd)));
      ++done;
    }
    pass = pass && worst_rel < 1e-6;
    if (detail.empty()) detail = fmt("worst relative derivative gap %.1e", worst_rel);
  } catch (const std::exception& e) {
    pass = false;
    detail = e.what();
  }
  report(10, "parser and jet derivatives", pass, detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (g_failures == 0) {
    std::printf("all 10 acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria FAILED\n", g_failures);
  return 1;
}
