// Command-line front end: analyze curves, reconstruct curves from invariant
// data, run round-trip and h-refinement checks, run the seeded vector-identity
// suites, and list the builtin catalog.
//
// Exit codes: 0 success, 1 I/O, 2 input/analysis, 3 integration, 64 usage.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "minkcurve/curves.hpp"
#include "minkcurve/error.hpp"
#include "minkcurve/invariants.hpp"
#include "minkcurve/io.hpp"
#include "minkcurve/mink3.hpp"
#include "minkcurve/reconstruct.hpp"

namespace mc = minkcurve;

namespace {

int exit_code_for(const mc::Error& e) {
  switch (e.code()) {
    case mc::ErrorCode::IoError: return 1;
    case mc::ErrorCode::StepTooLarge: return 3;
    default: return 2;
  }
}

double env_causal_tol() {
  if (const char* v = std::getenv("MINKCURVE_TOL")) {
    char* end = nullptr;
    const double t = std::strtod(v, &end);
    if (end != v && t > 0) return t;
    std::cerr << "warning: ignoring malformed MINKCURVE_TOL='" << v << "'\n";
  }
  return mc::kDefaultCausalTol;
}

std::string join_path(const std::string& dir, const std::string& file) {
  if (dir.empty() || dir == ".") return file;
  if (dir.back() == '/') return dir + file;
  return dir + "/" + file;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeArgs {
  std::string builtin, csv_path, json_path, out_dir = ".";
  std::vector<double> window;
  int nodes = 0;
  double tol = 0.0;
};

int run_analyze(const AnalyzeArgs& args) {
  mc::AnalysisConfig cfg;
  cfg.causal_tol = args.tol > 0 ? args.tol : env_causal_tol();
  if (args.nodes > 0) cfg.nodes_per_unit = args.nodes;

  const int sources = (!args.builtin.empty()) + (!args.csv_path.empty()) + (!args.json_path.empty());
  if (sources != 1) {
    std::cerr << "analyze needs exactly one of --builtin, --csv, --json\n";
    return 64;
  }
  std::optional<mc::Interval> window;
  if (args.window.size() == 2) window = mc::Interval{args.window[0], args.window[1]};

  std::string curve_id;
  mc::ParamCurve curve;
  if (!args.builtin.empty()) {
    curve_id = args.builtin;
    curve = mc::make_builtin(args.builtin, window);
  } else if (!args.csv_path.empty()) {
    curve_id = args.csv_path;
    curve = mc::ParamCurve::sampled(mc::read_curve_csv(args.csv_path));
    if (window) std::cerr << "warning: --window is ignored for CSV input\n";
  } else {
    curve_id = args.json_path;
    mc::json j = mc::load_json_file(args.json_path);
    if (window) {
      j["domain"] = mc::json::array({window->a, window->b});
    }
    curve = mc::analytic_curve_from_json(j);
  }

  mc::UnitSpeedCurve unit;
  if (mc::is_unit_speed(curve)) {
    unit = mc::UnitSpeedCurve::direct(curve);
  } else {
    unit = mc::reparametrize_arclength(curve, std::max(257, mc::analysis_grid_size(cfg, curve.domain())),
                                       cfg.causal_tol);
  }

  const mc::CurveAnalysis analysis = mc::analyze_curve(unit, cfg);

  const std::string profile_path = join_path(args.out_dir, "profile.csv");
  mc::ProfileTable table;
  table.s = analysis.profile.s;
  table.theta = analysis.profile.theta;
  table.theta_prime = analysis.profile.theta_prime;
  table.mu = analysis.mu_col;
  table.tau = analysis.tau_col;
  mc::write_profile_csv(profile_path, table);

  mc::AnalysisReport report;
  report.curve_id = curve_id;
  report.type = mc::curve_type_name(analysis.type.tag);
  report.segments = analysis.type.segments;
  report.points = analysis.lk_points;
  report.planar = analysis.planarity.planar;
  report.plane_point = analysis.planarity.point;
  report.plane_normal = analysis.planarity.normal;
  report.normal_class = mc::causality_name(analysis.planarity.normal_class.tag);
  report.planar_residual = analysis.planarity.residual;
  report.window = unit.domain();
  report.nodes = static_cast<int>(analysis.profile.s.size());
  report.profile_csv = "profile.csv";
  report.warning = analysis.warning;
  if (!analysis.planarity.warning.empty())
    report.warning += (report.warning.empty() ? "" : "; ") + analysis.planarity.warning;

  const std::string report_path = join_path(args.out_dir, "report.json");
  {
    auto out = mc::detail::open_out(report_path);
    out << mc::report_to_json(report).dump(2) << '\n';
  }

  std::cout << "curve:  " << curve_id << "\n"
            << "type:   " << report.type << "\n";
  for (const auto& p : report.points)
    std::cout << "  L_" << p.k << " point at s0 = " << mc::format_g17(p.s0)
              << "  eps = " << (p.eps > 0 ? "+1" : "-1") << "  mu(s0) = " << p.mu0
              << "  lim (s-s0) tau = " << p.blowup << "\n";
  std::cout << "planar: " << (report.planar ? "yes" : "no");
  if (report.planar)
    std::cout << "  (normal [" << report.plane_normal.x << ", " << report.plane_normal.y << ", "
              << report.plane_normal.z << "], " << report.normal_class << ")";
  std::cout << "\nwrote " << report_path << " and " << profile_path << "\n";
  if (!report.warning.empty()) std::cerr << "warning: " << report.warning << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// reconstruct

struct ReconstructArgs {
  std::string json_path, out_dir = ".";
  double h = 1e-3;
  bool project = false;
};

int run_reconstruct(const ReconstructArgs& args) {
  const mc::InvariantData data = mc::invariant_data_from_json(mc::load_json_file(args.json_path));
  mc::IntegrationConfig cfg;
  cfg.h = args.h;
  cfg.project = args.project;

  mc::ReconstructionResult res;
  std::string kind;
  if (const auto* lk = std::get_if<mc::TypeLkData>(&data)) {
    res = mc::integrate_Lk(*lk, cfg);
    kind = "Lk";
  } else if (const auto* tl = std::get_if<mc::TypeLData>(&data)) {
    res = mc::integrate_typeL(*tl, cfg);
    kind = "L";
  } else {
    res = mc::integrate_frenet(std::get<mc::FrenetData>(data), cfg);
    kind = "Frenet";
  }

  const auto dom = res.curve.domain();
  std::vector<double> s = res.frames.s;
  std::vector<mc::LVec3> pts(s.size());
  for (size_t i = 0; i < s.size(); ++i) pts[i] = res.curve.point(s[i]);

  const std::string curve_path = join_path(args.out_dir, "curve.csv");
  const std::string frames_path = join_path(args.out_dir, "frames.csv");
  const std::string report_path = join_path(args.out_dir, "report.json");
  mc::write_curve_csv(curve_path, s, pts);
  mc::write_frames_csv(frames_path, res.frames);

  mc::json rep;
  rep["kind"] = kind;
  rep["h"] = cfg.h;
  rep["domain"] = mc::json::array({dom.a, dom.b});
  rep["eps"] = res.eps;
  rep["diagnostics"] =
      mc::json{{"frame_drift", res.frame_drift}, {"unit_speed_drift", res.unit_speed_drift}};
  rep["curve_csv"] = "curve.csv";
  rep["frames_csv"] = "frames.csv";
  {
    auto out = mc::detail::open_out(report_path);
    out << rep.dump(2) << '\n';
  }
  std::cout << "reconstructed " << kind << " curve on [" << dom.a << ", " << dom.b << "], "
            << s.size() << " nodes\n"
            << "frame drift " << res.frame_drift << ", unit-speed drift " << res.unit_speed_drift
            << "\nwrote " << curve_path << ", " << frames_path << ", " << report_path << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// roundtrip

struct RoundtripArgs {
  std::string json_path, out_dir = ".", steps;
  double h = 1e-3;
};

int run_roundtrip(const RoundtripArgs& args) {
  const mc::InvariantData data = mc::invariant_data_from_json(mc::load_json_file(args.json_path));
  const std::string csv_path = join_path(args.out_dir, "roundtrip.csv");

  if (!args.steps.empty()) {
    std::vector<double> steps;
    std::stringstream ss(args.steps);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) continue;
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || !(v > 0)) {
        std::cerr << "bad --steps entry '" << tok << "'\n";
        return 64;
      }
      steps.push_back(v);
    }
    if (steps.size() < 2) {
      std::cerr << "--steps needs at least two comma-separated step sizes\n";
      return 64;
    }
    const auto table = mc::roundtrip_refinement(data, steps);
    std::printf("%12s %14s %14s %10s\n", "h", "theta_err", "mu_err", "order");
    auto out = mc::detail::open_out(csv_path);
    out << "h,theta_err,mu_err,order\n";
    for (const auto& row : table) {
      std::printf("%12g %14.6e %14.6e %10s\n", row.h, row.theta_err, row.mu_err,
                  std::isnan(row.order) ? "-" : mc::format_g17(row.order).c_str());
      out << mc::format_g17(row.h) << ',' << mc::format_g17(row.theta_err) << ','
          << mc::format_g17(row.mu_err) << ','
          << (std::isnan(row.order) ? "" : mc::format_g17(row.order)) << '\n';
    }
    std::cout << "wrote " << csv_path << "\n";
    return 0;
  }

  mc::IntegrationConfig cfg;
  cfg.h = args.h;
  const mc::RoundtripReport rep = mc::roundtrip(data, cfg);

  std::vector<std::pair<std::string, double>> rows;
  if (!std::isnan(rep.theta_err)) rows.emplace_back("theta_err", rep.theta_err);
  if (!std::isnan(rep.mu_err)) rows.emplace_back("mu_err", rep.mu_err);
  if (!std::isnan(rep.kappa_err)) rows.emplace_back("kappa_err", rep.kappa_err);
  if (!std::isnan(rep.tau_err)) rows.emplace_back("tau_err", rep.tau_err);
  rows.emplace_back("frame_drift", rep.frame_drift);
  rows.emplace_back("unit_speed_drift", rep.unit_speed_drift);

  auto out = mc::detail::open_out(csv_path);
  out << "metric,value\n";
  for (const auto& [name, value] : rows) {
    std::printf("%-18s %14.6e\n", name.c_str(), value);
    out << name << ',' << mc::format_g17(value) << '\n';
  }
  if (rep.eps_in != 0) {
    std::printf("%-18s %s (in %+d, out %+d)\n", "eps_match", rep.eps_match ? "yes" : "NO",
                rep.eps_in, rep.eps_out);
    out << "eps_match," << (rep.eps_match ? 1 : 0) << '\n';
  }
  std::cout << "wrote " << csv_path << "\n";
  return rep.eps_match ? 0 : 2;
}

// ---------------------------------------------------------------------------
// identities

struct IdentityArgs {
  unsigned long long seed = 42;
  long long trials = 10000;
  bool inject_failure = false;
};

struct IdentityFailure {
  std::string suite;
  std::string detail;
};

using IVec = mc::Vec3<long long>;

int run_identities(const IdentityArgs& args) {
  if (args.trials < 1) {
    std::cerr << "--trials must be >= 1\n";
    return 64;
  }
  std::mt19937_64 rng(args.seed);
  std::uniform_int_distribution<long long> coord(-10, 10);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  std::uniform_real_distribution<double> rapidity(-1.5, 1.5);
  auto ivec = [&]() { return IVec{coord(rng), coord(rng), coord(rng)}; };
  auto dvec = [&]() { return mc::LVec3{unit(rng), unit(rng), unit(rng)}; };

  std::vector<IdentityFailure> failures;
  auto record = [&](const std::string& suite, const std::string& detail) {
    failures.push_back({suite, detail});
  };
  auto show = [](const IVec& v) {
    return "(" + std::to_string(v.x) + "," + std::to_string(v.y) + "," + std::to_string(v.z) + ")";
  };

  // scalar triple, vector triple, area formula, orthogonality: exact integers
  long long bad_scalar = 0, bad_vector = 0, bad_area = 0, bad_orth = 0;
  for (long long i = 0; i < args.trials; ++i) {
    const IVec u = ivec(), v = ivec(), w = ivec();
    long long lhs = mc::scalar_triple(u, v, w);
    if (args.inject_failure && i == args.trials / 2) lhs += 1;
    if (lhs != mc::inner(u, mc::cross(v, w))) {
      if (!bad_scalar++)
        record("scalar-triple", "u=" + show(u) + " v=" + show(v) + " w=" + show(w));
    }
    const IVec vt = mc::cross(u, mc::cross(v, w));
    const IVec rhs = mc::inner(u, v) * w - mc::inner(u, w) * v;
    if (!(vt == rhs)) {
      if (!bad_vector++)
        record("vector-triple", "u=" + show(u) + " v=" + show(v) + " w=" + show(w));
    }
    const IVec c = mc::cross(v, w);
    if (mc::inner(c, c) != -mc::inner(v, v) * mc::inner(w, w) + mc::inner(v, w) * mc::inner(v, w)) {
      if (!bad_area++) record("area-formula", "v=" + show(v) + " w=" + show(w));
    }
    if (mc::inner(v, c) != 0 || mc::inner(w, c) != 0) {
      if (!bad_orth++) record("orthogonality", "v=" + show(v) + " w=" + show(w));
    }
  }

  // Fact on lightlike cross products, constructed integer inputs:
  // w = (m^2-n^2, 2mn, m^2+n^2) is lightlike; u = (-w_y, w_x, 0) is spacelike
  // and orthogonal to w; v = a u + b w. Then v x w = eps |v| w with
  // |v| = |a| |w_z| exactly.
  long long bad_fact = 0;
  std::uniform_int_distribution<long long> mn(1, 8);
  std::uniform_int_distribution<long long> ab(-6, 6);
  for (long long i = 0; i < args.trials; ++i) {
    const long long m = mn(rng);
    long long n = mn(rng);
    if (m == n) n = m + 1;
    const IVec w{m * m - n * n, 2 * m * n, m * m + n * n};
    const IVec u{-w.y, w.x, 0};
    long long a = ab(rng);
    if (a == 0) a = 1;
    const long long b = ab(rng);
    const IVec v = a * u + b * w;
    const IVec c = mc::cross(v, w);
    const long long norm_v = std::abs(a) * w.z;  // |v| in exact arithmetic
    const IVec plus = norm_v * w;
    const bool is_plus = c == plus;
    const bool is_minus = c == IVec{-plus.x, -plus.y, -plus.z};
    if (!(is_plus || is_minus)) {
      if (!bad_fact++) record("lightlike-cross", "v=" + show(v) + " w=" + show(w));
    }
  }

  // floating-point residuals: the same identities on unit-scale doubles
  double worst_float = 0.0;
  for (long long i = 0; i < args.trials; ++i) {
    const mc::LVec3 u = dvec(), v = dvec(), w = dvec();
    worst_float = std::max(worst_float,
                           std::abs(mc::scalar_triple(u, v, w) - mc::inner(u, mc::cross(v, w))));
    const mc::LVec3 vt = mc::cross(u, mc::cross(v, w));
    const mc::LVec3 rhs = mc::inner(u, v) * w - mc::inner(u, w) * v;
    worst_float = std::max(worst_float, mc::euclid_norm(vt - rhs));
    const mc::LVec3 c = mc::cross(v, w);
    worst_float =
        std::max(worst_float, std::abs(mc::inner(c, c) + mc::inner(v, v) * mc::inner(w, w) -
                                       mc::inner(v, w) * mc::inner(v, w)));
  }
  if (worst_float > 1e-12)
    record("float-residual", "max residual " + mc::format_g17(worst_float));

  // equivariance under random Lorentz transforms, unit-scale floats
  double worst_equi = 0.0;
  for (long long i = 0; i < args.trials; ++i) {
    mc::LMat3 t = mc::rotation_xy(angle(rng)) * mc::boost_xz(rapidity(rng)) *
                  mc::rotation_xy(angle(rng));
    double det_t = 1.0;
    if (i % 3 == 1) {  // improper representative
      t = mc::LMat3::diag(1, 1, -1) * t;
      det_t = -1.0;
    }
    const mc::LVec3 v = dvec(), w = dvec();
    const mc::LVec3 lhs = mc::cross(t * v, t * w);
    const mc::LVec3 rhs = det_t * (t * mc::cross(v, w));
    worst_equi = std::max(worst_equi, mc::euclid_norm(lhs - rhs));
  }
  if (worst_equi > 1e-11) record("equivariance", "max residual " + mc::format_g17(worst_equi));

  // Fact residual with constructed floating inputs
  double worst_fact = 0.0;
  for (long long i = 0; i < args.trials; ++i) {
    const double phi = angle(rng);
    const double r = 0.25 + std::abs(unit(rng));
    const mc::LVec3 w{r * std::cos(phi), r * std::sin(phi), r};
    const mc::LVec3 u{-std::sin(phi), std::cos(phi), 0};
    const double a = unit(rng) + (unit(rng) >= 0 ? 1.0 : -1.0) * 1.1;
    const double b = unit(rng);
    const mc::LVec3 v = a * u + b * w;
    const mc::LVec3 c = mc::cross(v, w);
    const double nv = mc::mink_norm(v);
    const double resid = std::min(mc::euclid_norm(c - nv * w), mc::euclid_norm(c + nv * w));
    worst_fact = std::max(worst_fact, resid / mc::euclid_norm(w));
  }
  if (worst_fact > 1e-12)
    record("lightlike-cross-float", "max residual " + mc::format_g17(worst_fact));

  struct Row {
    const char* name;
    long long bad;
  } rows[] = {{"scalar-triple (exact)", bad_scalar}, {"vector-triple (exact)", bad_vector},
              {"area-formula (exact)", bad_area},    {"orthogonality (exact)", bad_orth},
              {"lightlike-cross (exact)", bad_fact}};
  for (const auto& r : rows)
    std::printf("%-26s %s (%lld trials)\n", r.name, r.bad ? "FAIL" : "ok",
                static_cast<long long>(args.trials));
  std::printf("%-26s %s (max %.3e)\n", "float residuals", worst_float > 1e-12 ? "FAIL" : "ok",
              worst_float);
  std::printf("%-26s %s (max %.3e)\n", "equivariance", worst_equi > 1e-11 ? "FAIL" : "ok",
              worst_equi);
  std::printf("%-26s %s (max %.3e)\n", "lightlike-cross residual",
              worst_fact > 1e-12 ? "FAIL" : "ok", worst_fact);

  if (!failures.empty()) {
    std::cerr << "\ncounterexamples:\n";
    for (const auto& f : failures) std::cerr << "  [" << f.suite << "] " << f.detail << "\n";
    return 2;
  }
  std::cout << "all identity suites passed\n";
  return 0;
}

// ---------------------------------------------------------------------------
// catalog

int run_catalog() {
  std::printf("%-12s %-42s %-22s %s\n", "name", "domain", "expected type", "description");
  for (const auto& e : mc::builtin_catalog())
    std::printf("%-12s %-42s %-22s %s\n", e.name.c_str(), e.domain_note.c_str(),
                e.expected_type.c_str(), e.description.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"invariants and reconstruction of spacelike curves in Lorentz-Minkowski 3-space"};
  app.require_subcommand(1);
  // the step-size flag is --h, so help keeps only its long form
  app.set_help_flag("--help", "print help");

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "compute invariants and type of a curve");
  analyze->add_option("--builtin", an.builtin, "builtin curve name (see catalog)");
  analyze->add_option("--csv", an.csv_path, "sampled curve CSV (t,x,y,z)");
  analyze->add_option("--json", an.json_path, "analytic curve JSON {x,y,z,domain}");
  analyze->add_option("--window", an.window, "parameter window a b")->expected(2);
  analyze->add_option("--nodes", an.nodes, "analysis nodes per unit parameter length");
  analyze->add_option("--tol", an.tol, "causal classification tolerance");
  analyze->add_option("--out", an.out_dir, "output directory (default .)");

  ReconstructArgs rc;
  auto* reconstruct = app.add_subcommand("reconstruct", "integrate a curve from invariant data");
  reconstruct->set_help_flag("--help", "print help");
  reconstruct->add_option("--json", rc.json_path, "invariant data JSON")->required();
  reconstruct->add_option("--h", rc.h, "integration step (default 1e-3)");
  reconstruct->add_flag("--project", rc.project, "re-project frames during integration");
  reconstruct->add_option("--out", rc.out_dir, "output directory (default .)");

  RoundtripArgs rt;
  auto* roundtrip = app.add_subcommand("roundtrip", "reconstruct, re-analyze, compare");
  roundtrip->set_help_flag("--help", "print help");
  roundtrip->add_option("--json", rt.json_path, "invariant data JSON")->required();
  roundtrip->add_option("--h", rt.h, "integration step (default 1e-3)");
  roundtrip->add_option("--steps", rt.steps, "comma-separated h values for a refinement table");
  roundtrip->add_option("--out", rt.out_dir, "output directory (default .)");

  IdentityArgs id;
  auto* identities = app.add_subcommand("identities", "seeded vector-identity property suites");
  identities->add_option("--seed", id.seed, "RNG seed (default 42)");
  identities->add_option("--trials", id.trials, "trials per suite (default 10000)");
  identities->add_flag("--inject-failure", id.inject_failure,
                       "test hook: corrupt one trial to confirm failures are caught")
      ->group("");  // hidden

  auto* catalog = app.add_subcommand("catalog", "list builtin curves");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64;
  }

  try {
    if (analyze->parsed()) return run_analyze(an);
    if (reconstruct->parsed()) return run_reconstruct(rc);
    if (roundtrip->parsed()) return run_roundtrip(rt);
    if (identities->parsed()) return run_identities(id);
    if (catalog->parsed()) return run_catalog();
  } catch (const mc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 64;
}
