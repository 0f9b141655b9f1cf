#pragma once

// File formats: curve CSV (t,x,y,z), profile CSV (s,theta,theta_prime,mu,tau
// with empty cells where a quantity is undefined), frames CSV, the analysis
// report JSON, and the invariant-data JSON schema.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "minkcurve/curves.hpp"
#include "minkcurve/error.hpp"
#include "minkcurve/invariants.hpp"
#include "minkcurve/reconstruct.hpp"

namespace minkcurve {

using json = nlohmann::ordered_json;

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace detail {

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) raise(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  return out;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(ErrorCode::IoError, "cannot open '" + path + "' for reading");
  return in;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline double parse_field(const std::string& f, const std::string& path, size_t lineno) {
  if (f.empty()) return std::numeric_limits<double>::quiet_NaN();
  char* end = nullptr;
  const double v = std::strtod(f.c_str(), &end);
  if (end == f.c_str())
    raise(ErrorCode::IoError,
          "malformed number '" + f + "' in " + path + " line " + std::to_string(lineno));
  return v;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Curve CSV: header t,x,y,z.

inline void write_curve_csv(const std::string& path, const std::vector<double>& t,
                            const std::vector<LVec3>& p) {
  auto out = detail::open_out(path);
  out << "t,x,y,z\n";
  for (size_t i = 0; i < t.size(); ++i)
    out << format_g17(t[i]) << ',' << format_g17(p[i].x) << ',' << format_g17(p[i].y) << ','
        << format_g17(p[i].z) << '\n';
}

inline CurveSamples read_curve_csv(const std::string& path) {
  auto in = detail::open_in(path);
  std::string line;
  if (!std::getline(in, line)) raise(ErrorCode::IoError, "empty curve CSV: " + path);
  const auto head = detail::split_csv_line(line);
  if (head.size() != 4 || (head[0] != "t" && head[0] != "s") || head[1] != "x" ||
      head[2] != "y" || head[3] != "z")
    raise(ErrorCode::IoError, "curve CSV must start with header t,x,y,z: " + path);
  CurveSamples s;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 4)
      raise(ErrorCode::IoError, path + " line " + std::to_string(lineno) + ": expected 4 fields");
    s.t.push_back(detail::parse_field(f[0], path, lineno));
    s.p.push_back({detail::parse_field(f[1], path, lineno), detail::parse_field(f[2], path, lineno),
                   detail::parse_field(f[3], path, lineno)});
  }
  return s;
}

// ---------------------------------------------------------------------------
// Profile CSV: s,theta,theta_prime,mu,tau; empty cells where undefined.

struct ProfileTable {
  std::vector<double> s, theta, theta_prime, mu, tau;  // NaN marks undefined
};

inline void write_profile_csv(const std::string& path, const ProfileTable& p) {
  auto out = detail::open_out(path);
  out << "s,theta,theta_prime,mu,tau\n";
  auto cell = [](double v) { return std::isnan(v) ? std::string() : format_g17(v); };
  for (size_t i = 0; i < p.s.size(); ++i)
    out << format_g17(p.s[i]) << ',' << cell(p.theta[i]) << ',' << cell(p.theta_prime[i]) << ','
        << cell(p.mu[i]) << ',' << cell(p.tau[i]) << '\n';
}

inline ProfileTable read_profile_csv(const std::string& path) {
  auto in = detail::open_in(path);
  std::string line;
  if (!std::getline(in, line)) raise(ErrorCode::IoError, "empty profile CSV: " + path);
  if (line != "s,theta,theta_prime,mu,tau" && line != "s,theta,theta_prime,mu,tau\r")
    raise(ErrorCode::IoError, "bad profile CSV header in " + path);
  ProfileTable p;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 5)
      raise(ErrorCode::IoError, path + " line " + std::to_string(lineno) + ": expected 5 fields");
    p.s.push_back(detail::parse_field(f[0], path, lineno));
    p.theta.push_back(detail::parse_field(f[1], path, lineno));
    p.theta_prime.push_back(detail::parse_field(f[2], path, lineno));
    p.mu.push_back(detail::parse_field(f[3], path, lineno));
    p.tau.push_back(detail::parse_field(f[4], path, lineno));
  }
  return p;
}

// ---------------------------------------------------------------------------
// Frames CSV: s,e1..e3,k1..k3,b1..b3 (frame columns flattened).

inline void write_frames_csv(const std::string& path, const FrameField& field) {
  auto out = detail::open_out(path);
  out << "s,e1,e2,e3,k1,k2,k3,b1,b2,b3\n";
  for (size_t i = 0; i < field.s.size(); ++i) {
    const LMat3& f = field.frames[i];
    out << format_g17(field.s[i]);
    for (int c = 0; c < 3; ++c) {
      const LVec3 v = f.col(c);
      out << ',' << format_g17(v.x) << ',' << format_g17(v.y) << ',' << format_g17(v.z);
    }
    out << '\n';
  }
}

inline FrameField read_frames_csv(const std::string& path) {
  auto in = detail::open_in(path);
  std::string line;
  if (!std::getline(in, line)) raise(ErrorCode::IoError, "empty frames CSV: " + path);
  FrameField field;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 10)
      raise(ErrorCode::IoError, path + " line " + std::to_string(lineno) + ": expected 10 fields");
    field.s.push_back(detail::parse_field(f[0], path, lineno));
    LVec3 cols[3];
    for (int c = 0; c < 3; ++c)
      cols[c] = {detail::parse_field(f[1 + 3 * c], path, lineno),
                 detail::parse_field(f[2 + 3 * c], path, lineno),
                 detail::parse_field(f[3 + 3 * c], path, lineno)};
    field.frames.push_back(LMat3::from_columns(cols[0], cols[1], cols[2]));
  }
  return field;
}

// ---------------------------------------------------------------------------
// Analysis report JSON.

struct AnalysisReport {
  std::string curve_id;
  std::string type;
  std::vector<CurveTypeReport::Segment> segments;
  std::vector<LkPointRecord> points;
  bool planar = false;
  LVec3 plane_point{}, plane_normal{};
  std::string normal_class;
  double planar_residual = 0.0;
  Interval window{};
  int nodes = 0;
  std::string profile_csv;
  std::string warning;
};

inline json vec_to_json(const LVec3& v) { return json::array({v.x, v.y, v.z}); }

inline LVec3 vec_from_json(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

inline json number_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

inline double number_from_json(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

inline json report_to_json(const AnalysisReport& r) {
  json j;
  j["curve"] = r.curve_id;
  j["type"] = r.type;
  j["window"] = json::array({r.window.a, r.window.b});
  j["nodes"] = r.nodes;
  json segs = json::array();
  for (const auto& s : r.segments)
    segs.push_back(json{{"from", s.lo}, {"to", s.hi}, {"character", std::string(1, s.character)}});
  j["segments"] = segs;
  json pts = json::array();
  for (const auto& p : r.points)
    pts.push_back(json{{"s0", p.s0},
                       {"k", p.k},
                       {"eps", p.eps},
                       {"mu", number_or_null(p.mu0)},
                       {"blowup", number_or_null(p.blowup)}});
  j["lightlike_points"] = pts;
  j["planarity"] = json{{"planar", r.planar},
                        {"point", vec_to_json(r.plane_point)},
                        {"normal", vec_to_json(r.plane_normal)},
                        {"normal_class", r.normal_class},
                        {"residual", r.planar_residual}};
  j["profile_csv"] = r.profile_csv;
  j["warning"] = r.warning;
  return j;
}

inline AnalysisReport report_from_json(const json& j) {
  AnalysisReport r;
  r.curve_id = j.at("curve").get<std::string>();
  r.type = j.at("type").get<std::string>();
  r.window = {j.at("window").at(0).get<double>(), j.at("window").at(1).get<double>()};
  r.nodes = j.at("nodes").get<int>();
  for (const auto& s : j.at("segments"))
    r.segments.push_back({s.at("from").get<double>(), s.at("to").get<double>(),
                          s.at("character").get<std::string>().at(0)});
  for (const auto& p : j.at("lightlike_points")) {
    LkPointRecord rec;
    rec.s0 = p.at("s0").get<double>();
    rec.k = p.at("k").get<int>();
    rec.eps = p.at("eps").get<int>();
    rec.mu0 = number_from_json(p.at("mu"));
    rec.blowup = number_from_json(p.at("blowup"));
    r.points.push_back(rec);
  }
  const auto& pl = j.at("planarity");
  r.planar = pl.at("planar").get<bool>();
  r.plane_point = vec_from_json(pl.at("point"));
  r.plane_normal = vec_from_json(pl.at("normal"));
  r.normal_class = pl.at("normal_class").get<std::string>();
  r.planar_residual = pl.at("residual").get<double>();
  r.profile_csv = j.at("profile_csv").get<std::string>();
  r.warning = j.at("warning").get<std::string>();
  return r;
}

inline bool nan_equal(double a, double b) {
  return (std::isnan(a) && std::isnan(b)) || a == b;
}

inline bool report_equal(const AnalysisReport& a, const AnalysisReport& b) {
  if (a.curve_id != b.curve_id || a.type != b.type || a.nodes != b.nodes ||
      a.profile_csv != b.profile_csv || a.warning != b.warning || a.planar != b.planar ||
      a.normal_class != b.normal_class)
    return false;
  if (!nan_equal(a.window.a, b.window.a) || !nan_equal(a.window.b, b.window.b)) return false;
  if (!nan_equal(a.planar_residual, b.planar_residual)) return false;
  if (!(a.plane_point == b.plane_point) || !(a.plane_normal == b.plane_normal)) return false;
  if (a.segments.size() != b.segments.size() || a.points.size() != b.points.size()) return false;
  for (size_t i = 0; i < a.segments.size(); ++i)
    if (!nan_equal(a.segments[i].lo, b.segments[i].lo) ||
        !nan_equal(a.segments[i].hi, b.segments[i].hi) ||
        a.segments[i].character != b.segments[i].character)
      return false;
  for (size_t i = 0; i < a.points.size(); ++i)
    if (!nan_equal(a.points[i].s0, b.points[i].s0) || a.points[i].k != b.points[i].k ||
        a.points[i].eps != b.points[i].eps || !nan_equal(a.points[i].mu0, b.points[i].mu0) ||
        !nan_equal(a.points[i].blowup, b.points[i].blowup))
      return false;
  return true;
}

// ---------------------------------------------------------------------------
// Invariant-data JSON:
// {kind:"Frenet"|"L"|"Lk", theta?, mu?, kappa?, tau?, sigma?, eps?, s0?,
//  domain:[a,b]}; function fields are expression strings or
// {"table":{"s":[...], "v":[...]}}.

inline ScalarFn scalar_fn_from_json(const json& j, const std::string& field) {
  try {
    if (j.is_string()) return ScalarFn::from_expr(j.get<std::string>());
    if (j.is_number()) return ScalarFn::constant(j.get<double>());
    if (j.is_object() && j.contains("table")) {
      const auto& t = j.at("table");
      auto s = t.at("s").get<std::vector<double>>();
      auto v = t.at("v").get<std::vector<double>>();
      if (s.size() != v.size() || s.size() < 3)
        raise(ErrorCode::InvalidData, "table for '" + field + "' needs matching s/v, >= 3 rows");
      return ScalarFn::from_table(std::move(s), std::move(v));
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    raise(ErrorCode::InvalidData, "bad function field '" + field + "': " + e.what());
  }
  raise(ErrorCode::InvalidData,
        "function field '" + field + "' must be an expression string or {table:{s,v}}");
}

inline InvariantData invariant_data_from_json(const json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    if (!j.contains("domain") || !j.at("domain").is_array() || j.at("domain").size() != 2)
      raise(ErrorCode::InvalidData, "invariant data needs domain:[a,b]");
    Interval dom{j.at("domain").at(0).get<double>(), j.at("domain").at(1).get<double>()};
    if (!(dom.b > dom.a)) raise(ErrorCode::InvalidData, "domain must satisfy a < b");

    if (kind == "Lk") {
      TypeLkData d;
      if (!j.contains("theta") || !j.contains("mu"))
        raise(ErrorCode::InvalidData, "kind Lk needs theta and mu");
      d.theta = scalar_fn_from_json(j.at("theta"), "theta");
      d.mu = scalar_fn_from_json(j.at("mu"), "mu");
      d.eps = j.value("eps", 1);
      d.s0 = j.value("s0", 0.0);
      d.domain = dom;
      return d;
    }
    if (kind == "L") {
      TypeLData d;
      if (!j.contains("mu")) raise(ErrorCode::InvalidData, "kind L needs mu");
      d.mu = scalar_fn_from_json(j.at("mu"), "mu");
      d.domain = dom;
      return d;
    }
    if (kind == "Frenet") {
      FrenetData d;
      if (!j.contains("kappa") || !j.contains("tau"))
        raise(ErrorCode::InvalidData, "kind Frenet needs kappa and tau");
      d.kappa = scalar_fn_from_json(j.at("kappa"), "kappa");
      d.tau = scalar_fn_from_json(j.at("tau"), "tau");
      d.sigma = j.value("sigma", -1);
      d.domain = dom;
      return d;
    }
    raise(ErrorCode::InvalidData, "kind must be \"Frenet\", \"L\" or \"Lk\" (got \"" + kind + "\")");
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    raise(ErrorCode::InvalidData, std::string("invariant-data schema error: ") + e.what());
  }
}

// Analytic curve JSON: {x:"...", y:"...", z:"...", domain:[a,b]}.
inline ParamCurve analytic_curve_from_json(const json& j) {
  try {
    const auto x = j.at("x").get<std::string>();
    const auto y = j.at("y").get<std::string>();
    const auto z = j.at("z").get<std::string>();
    Interval dom{j.at("domain").at(0).get<double>(), j.at("domain").at(1).get<double>()};
    if (!(dom.b > dom.a)) raise(ErrorCode::InvalidData, "domain must satisfy a < b");
    return ParamCurve::analytic(x, y, z, dom);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    raise(ErrorCode::InvalidData, std::string("analytic curve schema error: ") + e.what());
  }
}

inline json load_json_file(const std::string& path) {
  auto in = detail::open_in(path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    raise(ErrorCode::InvalidData, "cannot parse JSON from '" + path + "': " + e.what());
  }
  return j;
}

}  // namespace minkcurve
