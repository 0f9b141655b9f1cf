#pragma once

// Truncated-Taylor (jet) arithmetic. A Jet of order N stores the derivative
// values (f, f', ..., f^(N)) at a point; products follow the Leibniz rule and
// elementary functions follow Faa di Bruno through order N. Internally the
// recurrences run on Taylor coefficients c_k = f^(k)/k!.

#include <cmath>
#include <vector>

#include "minkcurve/error.hpp"
#include "minkcurve/mink3.hpp"

namespace minkcurve {

namespace series {

// Taylor-coefficient kernels; every vector has length order+1.

inline std::vector<double> mul(const std::vector<double>& a, const std::vector<double>& b) {
  const size_t n = a.size();
  std::vector<double> r(n, 0.0);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; i + j < n; ++j) r[i + j] += a[i] * b[j];
  return r;
}

inline std::vector<double> div(const std::vector<double>& a, const std::vector<double>& b) {
  const size_t n = a.size();
  if (b[0] == 0.0) raise(ErrorCode::DomainError, "division by zero");
  std::vector<double> r(n, 0.0);
  for (size_t k = 0; k < n; ++k) {
    double s = a[k];
    for (size_t j = 0; j < k; ++j) s -= r[j] * b[k - j];
    r[k] = s / b[0];
  }
  return r;
}

inline std::vector<double> exp(const std::vector<double>& a) {
  const size_t n = a.size();
  std::vector<double> r(n, 0.0);
  r[0] = std::exp(a[0]);
  for (size_t k = 1; k < n; ++k) {
    double s = 0;
    for (size_t j = 1; j <= k; ++j) s += j * a[j] * r[k - j];
    r[k] = s / static_cast<double>(k);
  }
  return r;
}

inline std::vector<double> log(const std::vector<double>& a) {
  const size_t n = a.size();
  if (a[0] <= 0.0) raise(ErrorCode::DomainError, "log of a non-positive value");
  std::vector<double> r(n, 0.0);
  r[0] = std::log(a[0]);
  for (size_t k = 1; k < n; ++k) {
    double s = a[k];
    for (size_t j = 1; j < k; ++j) s -= (static_cast<double>(j) / k) * r[j] * a[k - j];
    r[k] = s / a[0];
  }
  return r;
}

inline void sin_cos(const std::vector<double>& a, std::vector<double>& s, std::vector<double>& c) {
  const size_t n = a.size();
  s.assign(n, 0.0);
  c.assign(n, 0.0);
  s[0] = std::sin(a[0]);
  c[0] = std::cos(a[0]);
  for (size_t k = 1; k < n; ++k) {
    double ss = 0, cc = 0;
    for (size_t j = 1; j <= k; ++j) {
      ss += j * a[j] * c[k - j];
      cc += j * a[j] * s[k - j];
    }
    s[k] = ss / static_cast<double>(k);
    c[k] = -cc / static_cast<double>(k);
  }
}

inline void sinh_cosh(const std::vector<double>& a, std::vector<double>& s,
                      std::vector<double>& c) {
  const size_t n = a.size();
  s.assign(n, 0.0);
  c.assign(n, 0.0);
  s[0] = std::sinh(a[0]);
  c[0] = std::cosh(a[0]);
  for (size_t k = 1; k < n; ++k) {
    double ss = 0, cc = 0;
    for (size_t j = 1; j <= k; ++j) {
      ss += j * a[j] * c[k - j];
      cc += j * a[j] * s[k - j];
    }
    s[k] = ss / static_cast<double>(k);
    c[k] = cc / static_cast<double>(k);
  }
}

inline std::vector<double> sqrt(const std::vector<double>& a) {
  const size_t n = a.size();
  if (a[0] < 0.0) raise(ErrorCode::DomainError, "sqrt of a negative value");
  if (a[0] == 0.0 && n > 1) raise(ErrorCode::DomainError, "sqrt is not smooth at zero");
  std::vector<double> r(n, 0.0);
  r[0] = std::sqrt(a[0]);
  for (size_t k = 1; k < n; ++k) {
    double s = a[k];
    for (size_t j = 1; j < k; ++j) s -= r[j] * r[k - j];
    r[k] = s / (2.0 * r[0]);
  }
  return r;
}

inline std::vector<double> pow_int(std::vector<double> base, long long e) {
  const size_t n = base.size();
  std::vector<double> r(n, 0.0);
  r[0] = 1.0;
  bool invert = e < 0;
  unsigned long long m = invert ? static_cast<unsigned long long>(-e)
                                : static_cast<unsigned long long>(e);
  while (m) {
    if (m & 1ULL) r = mul(r, base);
    base = mul(base, base);
    m >>= 1;
  }
  if (invert) {
    std::vector<double> one(n, 0.0);
    one[0] = 1.0;
    r = div(one, r);
  }
  return r;
}

// h = f(g) where fc expands f around g's constant term.
inline std::vector<double> compose(const std::vector<double>& fc, const std::vector<double>& gc) {
  const size_t n = fc.size();
  std::vector<double> g0 = gc;
  g0[0] = 0.0;
  std::vector<double> h(n, 0.0);
  for (size_t j = n; j-- > 0;) {
    h = mul(h, g0);
    h[0] += fc[j];
  }
  return h;
}

// Series inverse: given s(t) coefficients a (a[1] != 0), return the
// coefficients of t(s) with constant term t0.
inline std::vector<double> invert(const std::vector<double>& a, double t0) {
  const size_t n = a.size();
  if (a.size() < 2 || a[1] == 0.0)
    raise(ErrorCode::Singular, "series inversion requires a nonzero linear term");
  std::vector<double> b(n, 0.0);
  b[0] = t0;
  b[1] = 1.0 / a[1];
  std::vector<double> ashift = a;
  ashift[0] = 0.0;
  for (size_t m = 2; m < n; ++m) {
    std::vector<double> bt = b;
    bt[0] = 0.0;
    const std::vector<double> comp = compose(ashift, bt);  // should equal sigma through order m-1
    b[m] = -comp[m] / a[1];
  }
  return b;
}

}  // namespace series

class Jet {
 public:
  Jet() : d_(1, 0.0) {}
  explicit Jet(int order) : d_(static_cast<size_t>(order) + 1, 0.0) {
    if (order < 0) raise(ErrorCode::PreconditionViolation, "jet order must be >= 0");
  }

  static Jet variable(double s, int order) {
    Jet j(order);
    j.d_[0] = s;
    if (order >= 1) j.d_[1] = 1.0;
    return j;
  }
  static Jet constant(double c, int order) {
    Jet j(order);
    j.d_[0] = c;
    return j;
  }
  static Jet from_derivs(std::vector<double> d) {
    Jet j;
    j.d_ = std::move(d);
    return j;
  }

  int order() const { return static_cast<int>(d_.size()) - 1; }
  double value() const { return d_[0]; }
  double deriv(int k) const { return d_[static_cast<size_t>(k)]; }
  double& deriv(int k) { return d_[static_cast<size_t>(k)]; }

  Jet truncated(int order) const {
    Jet j(order);
    for (int k = 0; k <= order && k <= this->order(); ++k) j.d_[static_cast<size_t>(k)] = d_[static_cast<size_t>(k)];
    return j;
  }

  // Jet of the derivative function (one order lower).
  Jet derivative_shift() const {
    if (order() < 1) raise(ErrorCode::DerivativeUnavailable, "jet order too low to shift");
    Jet j(order() - 1);
    for (int k = 0; k < static_cast<int>(d_.size()) - 1; ++k)
      j.d_[static_cast<size_t>(k)] = d_[static_cast<size_t>(k) + 1];
    return j;
  }

  std::vector<double> taylor() const {
    std::vector<double> c = d_;
    double fact = 1.0;
    for (size_t k = 1; k < c.size(); ++k) {
      fact *= static_cast<double>(k);
      c[k] /= fact;
    }
    return c;
  }
  static Jet from_taylor(const std::vector<double>& c) {
    Jet j;
    j.d_ = c;
    double fact = 1.0;
    for (size_t k = 1; k < j.d_.size(); ++k) {
      fact *= static_cast<double>(k);
      j.d_[k] *= fact;
    }
    return j;
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    Jet r = a.matched(b);
    for (size_t k = 0; k < r.d_.size(); ++k) r.d_[k] += b.d_[k];
    return r;
  }
  friend Jet operator-(const Jet& a, const Jet& b) {
    Jet r = a.matched(b);
    for (size_t k = 0; k < r.d_.size(); ++k) r.d_[k] -= b.d_[k];
    return r;
  }
  friend Jet operator-(const Jet& a) {
    Jet r = a;
    for (double& v : r.d_) v = -v;
    return r;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    a.check_match(b);
    return from_taylor(series::mul(a.taylor(), b.taylor()));
  }
  friend Jet operator/(const Jet& a, const Jet& b) {
    a.check_match(b);
    return from_taylor(series::div(a.taylor(), b.taylor()));
  }
  friend Jet operator*(double s, const Jet& a) {
    Jet r = a;
    for (double& v : r.d_) v *= s;
    return r;
  }
  friend Jet operator*(const Jet& a, double s) { return s * a; }
  friend Jet operator+(const Jet& a, double s) {
    Jet r = a;
    r.d_[0] += s;
    return r;
  }
  friend Jet operator+(double s, const Jet& a) { return a + s; }
  friend Jet operator-(const Jet& a, double s) { return a + (-s); }
  friend Jet operator-(double s, const Jet& a) { return (-a) + s; }
  friend Jet operator/(const Jet& a, double s) { return (1.0 / s) * a; }

 private:
  Jet matched(const Jet& b) const {
    check_match(b);
    return *this;
  }
  void check_match(const Jet& b) const {
    if (d_.size() != b.d_.size())
      raise(ErrorCode::PreconditionViolation, "jet orders do not match");
  }

  std::vector<double> d_;
};

inline Jet jet_exp(const Jet& a) { return Jet::from_taylor(series::exp(a.taylor())); }
inline Jet jet_log(const Jet& a) { return Jet::from_taylor(series::log(a.taylor())); }
inline Jet jet_sqrt(const Jet& a) { return Jet::from_taylor(series::sqrt(a.taylor())); }
inline Jet jet_sin(const Jet& a) {
  std::vector<double> s, c;
  series::sin_cos(a.taylor(), s, c);
  return Jet::from_taylor(s);
}
inline Jet jet_cos(const Jet& a) {
  std::vector<double> s, c;
  series::sin_cos(a.taylor(), s, c);
  return Jet::from_taylor(c);
}
inline Jet jet_sinh(const Jet& a) {
  std::vector<double> s, c;
  series::sinh_cosh(a.taylor(), s, c);
  return Jet::from_taylor(s);
}
inline Jet jet_cosh(const Jet& a) {
  std::vector<double> s, c;
  series::sinh_cosh(a.taylor(), s, c);
  return Jet::from_taylor(c);
}
inline Jet jet_tanh(const Jet& a) {
  std::vector<double> s, c;
  series::sinh_cosh(a.taylor(), s, c);
  return Jet::from_taylor(series::div(s, c));
}
inline Jet jet_pow_int(const Jet& a, long long e) {
  if (e < 0 && a.value() == 0.0) raise(ErrorCode::DomainError, "zero base with negative exponent");
  return Jet::from_taylor(series::pow_int(a.taylor(), e));
}
inline Jet jet_pow_real(const Jet& a, double e) {
  if (a.value() <= 0.0)
    raise(ErrorCode::DomainError, "real exponent requires a positive base");
  return jet_exp(e * jet_log(a));
}
inline Jet jet_abs(const Jet& a) {
  if (a.value() == 0.0) {
    if (a.order() >= 1) raise(ErrorCode::NonSmooth, "abs is not differentiable at 0");
    return Jet::constant(0.0, 0);
  }
  return a.value() > 0.0 ? a : -a;
}

// f(g): f expanded at g.value(), g expanded in the outer variable.
inline Jet jet_compose(const Jet& f, const Jet& g) {
  return Jet::from_taylor(series::compose(f.taylor(), g.taylor()));
}

// Inverse-function jet: given the jet of s(t) at t0, returns the jet of t(s).
inline Jet jet_invert(const Jet& s_of_t, double t0) {
  return Jet::from_taylor(series::invert(s_of_t.taylor(), t0));
}

// A 3-vector of jets: the derivative tower of a curve component triple.
struct Jet3 {
  Jet x, y, z;

  int order() const { return x.order(); }
  LVec3 deriv(int k) const { return {x.deriv(k), y.deriv(k), z.deriv(k)}; }
  LVec3 value() const { return deriv(0); }

  Jet3 derivative_shift() const {
    return {x.derivative_shift(), y.derivative_shift(), z.derivative_shift()};
  }
  Jet3 truncated(int order) const {
    return {x.truncated(order), y.truncated(order), z.truncated(order)};
  }

  friend Jet3 operator+(const Jet3& a, const Jet3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Jet3 operator-(const Jet3& a, const Jet3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Jet3 operator*(const Jet& s, const Jet3& a) { return {s * a.x, s * a.y, s * a.z}; }
  friend Jet3 operator*(double s, const Jet3& a) { return {s * a.x, s * a.y, s * a.z}; }
};

inline Jet jet3_inner(const Jet3& a, const Jet3& b) {
  return a.x * b.x + a.y * b.y - a.z * b.z;
}

inline Jet3 jet3_cross(const Jet3& a, const Jet3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, -(a.x * b.y - a.y * b.x)};
}

}  // namespace minkcurve
