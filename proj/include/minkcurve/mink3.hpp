#pragma once

// Vector and matrix algebra of Lorentz-Minkowski 3-space L^3 with the
// metric signature (+,+,-):  <v,w> = vx*wx + vy*wy - vz*wz.
//
// Everything is templated on the scalar so the identity suites can run in
// exact integer arithmetic (Vec3<long long>) next to the double production
// path. All operations are pure.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include "minkcurve/error.hpp"

namespace minkcurve {

template <typename T>
struct Vec3 {
  T x{}, y{}, z{};

  friend constexpr Vec3 operator+(const Vec3& a, const Vec3& b) {
    return {a.x + b.x, a.y + b.y, a.z + b.z};
  }
  friend constexpr Vec3 operator-(const Vec3& a, const Vec3& b) {
    return {a.x - b.x, a.y - b.y, a.z - b.z};
  }
  friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
  friend constexpr Vec3 operator*(T s, const Vec3& a) { return {s * a.x, s * a.y, s * a.z}; }
  friend constexpr Vec3 operator*(const Vec3& a, T s) { return s * a; }
  friend constexpr Vec3 operator/(const Vec3& a, T s) { return {a.x / s, a.y / s, a.z / s}; }
  friend constexpr bool operator==(const Vec3& a, const Vec3& b) {
    return a.x == b.x && a.y == b.y && a.z == b.z;
  }
  Vec3& operator+=(const Vec3& b) { x += b.x; y += b.y; z += b.z; return *this; }
  Vec3& operator-=(const Vec3& b) { x -= b.x; y -= b.y; z -= b.z; return *this; }
  Vec3& operator*=(T s) { x *= s; y *= s; z *= s; return *this; }
};

using LVec3 = Vec3<double>;

// Minkowski pairing <v,w> = vx wx + vy wy - vz wz.
template <typename T>
constexpr T inner(const Vec3<T>& v, const Vec3<T>& w) {
  return v.x * w.x + v.y * w.y - v.z * w.z;
}

// Lorentzian vector product v x w := Z (v x_e w), Z = diag(1,1,-1).
// The result is Minkowski-orthogonal to both arguments.
template <typename T>
constexpr Vec3<T> cross(const Vec3<T>& v, const Vec3<T>& w) {
  return {v.y * w.z - v.z * w.y,
          v.z * w.x - v.x * w.z,
          -(v.x * w.y - v.y * w.x)};
}

// det(u,v,w) with u,v,w as columns, expanded directly. Kept independent of
// cross() so the identity det(u,v,w) = <u, v x w> is a genuine two-route check.
template <typename T>
constexpr T scalar_triple(const Vec3<T>& u, const Vec3<T>& v, const Vec3<T>& w) {
  return u.x * (v.y * w.z - v.z * w.y)
       - v.x * (u.y * w.z - u.z * w.y)
       + w.x * (u.y * v.z - u.z * v.y);
}

template <typename T>
constexpr T euclid_dot(const Vec3<T>& v, const Vec3<T>& w) {
  return v.x * w.x + v.y * w.y + v.z * w.z;
}

template <typename T>
constexpr T euclid_norm2(const Vec3<T>& v) {
  return euclid_dot(v, v);
}

inline double euclid_norm(const LVec3& v) { return std::sqrt(euclid_norm2(v)); }

// |v| = sqrt(|<v,v>|); zero exactly for lightlike or zero vectors.
inline double mink_norm(const LVec3& v) { return std::sqrt(std::abs(inner(v, v))); }

// Metric lowering: m(v) such that <v,x> = m(v) . x (Euclidean dot).
template <typename T>
constexpr Vec3<T> lower(const Vec3<T>& v) {
  return {v.x, v.y, -v.z};
}

enum class Causality { Spacelike, Timelike, Lightlike };

inline const char* causality_name(Causality c) {
  switch (c) {
    case Causality::Spacelike: return "spacelike";
    case Causality::Timelike: return "timelike";
    case Causality::Lightlike: return "lightlike";
  }
  return "?";
}

struct CausalClass {
  Causality tag = Causality::Spacelike;
  bool is_zero = false;

  friend bool operator==(const CausalClass& a, const CausalClass& b) {
    return a.tag == b.tag && a.is_zero == b.is_zero;
  }
};

constexpr double kDefaultCausalTol = 1e-10;

// Classification convention: the zero vector counts as spacelike (flagged),
// otherwise the sign of <v,v> decides, with a tolerance relative to the
// squared Euclidean magnitude.
inline CausalClass causal_class(const LVec3& v, double tol = kDefaultCausalTol) {
  if (euclid_norm(v) <= tol) return {Causality::Spacelike, true};
  const double q = inner(v, v);
  const double scale = tol * std::max(1.0, euclid_norm2(v));
  if (q > scale) return {Causality::Spacelike, false};
  if (q < -scale) return {Causality::Timelike, false};
  return {Causality::Lightlike, false};
}

// For spacelike v and lightlike w with <v,w> = 0, v x w = eps |v| w for a
// unique sign eps. The Minkowski pairing of two proportional lightlike
// vectors vanishes identically, so the sign is read off a Euclidean dot.
inline int lightlike_cross_sign(const LVec3& v, const LVec3& w, double tol = kDefaultCausalTol) {
  const double wn = euclid_norm(w);
  if (wn <= tol) raise(ErrorCode::DegenerateInput, "lightlike factor is (numerically) zero");
  const CausalClass cv = causal_class(v, tol);
  if (cv.tag != Causality::Spacelike || cv.is_zero)
    raise(ErrorCode::PreconditionViolation, "first factor is not a nonzero spacelike vector");
  if (causal_class(w, tol).tag != Causality::Lightlike)
    raise(ErrorCode::PreconditionViolation, "second factor is not lightlike");
  if (std::abs(inner(v, w)) > tol * std::max(1.0, euclid_norm(v) * wn))
    raise(ErrorCode::PreconditionViolation, "factors are not Minkowski-orthogonal");

  const LVec3 c = cross(v, w);
  const int eps = euclid_dot(c, w) >= 0.0 ? +1 : -1;
  const double residual = euclid_norm(c - (eps * mink_norm(v)) * w);
  if (residual > tol * std::max(1.0, mink_norm(v)) * wn)
    raise(ErrorCode::PreconditionViolation,
          "cross product is not proportional to the lightlike factor (residual " +
              std::to_string(residual) + ")");
  return eps;
}

// 3x3 matrix with column-major semantics: col(i) is the i-th frame vector.
template <typename T>
struct Mat3 {
  std::array<Vec3<T>, 3> c{};  // columns

  static constexpr Mat3 identity() {
    return {{{Vec3<T>{1, 0, 0}, Vec3<T>{0, 1, 0}, Vec3<T>{0, 0, 1}}}};
  }
  static constexpr Mat3 diag(T a, T b, T d) {
    return {{{Vec3<T>{a, 0, 0}, Vec3<T>{0, b, 0}, Vec3<T>{0, 0, d}}}};
  }
  static constexpr Mat3 from_columns(const Vec3<T>& c0, const Vec3<T>& c1, const Vec3<T>& c2) {
    return {{{c0, c1, c2}}};
  }

  constexpr const Vec3<T>& col(int i) const { return c[static_cast<size_t>(i)]; }
  constexpr Vec3<T>& col(int i) { return c[static_cast<size_t>(i)]; }

  // entry (row, col), zero-based
  constexpr T operator()(int row, int col_) const {
    const Vec3<T>& v = c[static_cast<size_t>(col_)];
    return row == 0 ? v.x : (row == 1 ? v.y : v.z);
  }

  friend constexpr Vec3<T> operator*(const Mat3& m, const Vec3<T>& v) {
    return v.x * m.c[0] + v.y * m.c[1] + v.z * m.c[2];
  }
  friend constexpr Mat3 operator*(const Mat3& a, const Mat3& b) {
    return from_columns(a * b.c[0], a * b.c[1], a * b.c[2]);
  }
  friend constexpr Mat3 operator*(T s, const Mat3& m) {
    return from_columns(s * m.c[0], s * m.c[1], s * m.c[2]);
  }
  friend constexpr Mat3 operator+(const Mat3& a, const Mat3& b) {
    return from_columns(a.c[0] + b.c[0], a.c[1] + b.c[1], a.c[2] + b.c[2]);
  }
  friend constexpr Mat3 operator-(const Mat3& a, const Mat3& b) {
    return from_columns(a.c[0] - b.c[0], a.c[1] - b.c[1], a.c[2] - b.c[2]);
  }

  constexpr T det() const { return scalar_triple(c[0], c[1], c[2]); }

  constexpr Mat3 transposed() const {
    return {{{Vec3<T>{c[0].x, c[1].x, c[2].x},
              Vec3<T>{c[0].y, c[1].y, c[2].y},
              Vec3<T>{c[0].z, c[1].z, c[2].z}}}};
  }
};

using LMat3 = Mat3<double>;

inline LMat3 inverse(const LMat3& m) {
  const double d = m.det();
  if (std::abs(d) < 1e-300) raise(ErrorCode::Singular, "matrix is not invertible");
  // column j of the inverse is (row_{j+1} x row_{j+2}) / det
  const LMat3 t = m.transposed();
  const LVec3 r0 = t.col(0), r1 = t.col(1), r2 = t.col(2);
  auto ecross = [](const LVec3& a, const LVec3& b) {
    return LVec3{a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
  };
  return (1.0 / d) * LMat3::from_columns(ecross(r1, r2), ecross(r2, r0), ecross(r0, r1));
}

inline double max_abs_entry(const LMat3& m) {
  double r = 0;
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) r = std::max(r, std::abs(m(i, j)));
  return r;
}

inline double frobenius_norm2(const LMat3& m) {
  return euclid_norm2(m.col(0)) + euclid_norm2(m.col(1)) + euclid_norm2(m.col(2));
}

enum class LorentzClass { NotLorentz, O21, SO21, SOplus21 };

inline const char* lorentz_class_name(LorentzClass c) {
  switch (c) {
    case LorentzClass::NotLorentz: return "not_lorentz";
    case LorentzClass::O21: return "O21";
    case LorentzClass::SO21: return "SO21";
    case LorentzClass::SOplus21: return "SOplus21";
  }
  return "?";
}

// Strongest applicable membership: A^T Z A = Z (O(2,1)); det = 1 (SO(2,1));
// additionally a33 > 0 (SO+(2,1), orthochronous).
inline LorentzClass is_lorentz(const LMat3& a, double tol = 1e-10) {
  const LMat3 z = LMat3::diag(1, 1, -1);
  const LMat3 residual = a.transposed() * z * a - z;
  if (max_abs_entry(residual) > tol * std::max(1.0, frobenius_norm2(a)))
    return LorentzClass::NotLorentz;
  const double d = a.det();
  if (std::abs(d - 1.0) > tol * std::max(1.0, frobenius_norm2(a))) return LorentzClass::O21;
  if (a(2, 2) > 0) return LorentzClass::SOplus21;
  return LorentzClass::SO21;
}

// Generators of SO+(2,1): rotation in the xy-plane and boosts.
inline LMat3 rotation_xy(double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  return LMat3::from_columns({c, s, 0}, {-s, c, 0}, {0, 0, 1});
}

inline LMat3 boost_xz(double t) {
  const double ch = std::cosh(t), sh = std::sinh(t);
  return LMat3::from_columns({ch, 0, sh}, {0, 1, 0}, {sh, 0, ch});
}

inline LMat3 boost_yz(double t) {
  const double ch = std::cosh(t), sh = std::sinh(t);
  return LMat3::from_columns({1, 0, 0}, {0, ch, sh}, {0, sh, ch});
}

}  // namespace minkcurve
