#pragma once

// Shared numerical machinery: finite-difference weights on arbitrary nodes,
// quadrature, scalar root finding / minimization, Hermite and spline
// interpolation, small least-squares polynomial fits, and a 3x3 symmetric
// eigensolver for plane fitting.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "minkcurve/error.hpp"

namespace minkcurve {

// Fornberg's algorithm: weights of derivatives 0..max_order at point z from
// the given nodes. Returns w[order][j] with sum_j w[order][j] f(x[j]) the
// approximation of f^(order)(z).
inline std::vector<std::vector<double>> fornberg_weights(double z,
                                                         const std::vector<double>& x,
                                                         int max_order) {
  const int n = static_cast<int>(x.size());
  if (n < max_order + 1)
    raise(ErrorCode::DerivativeUnavailable, "stencil has too few nodes for requested order");
  std::vector<std::vector<double>> c(static_cast<size_t>(n),
                                     std::vector<double>(static_cast<size_t>(max_order) + 1, 0.0));
  double c1 = 1.0;
  double c4 = x[0] - z;
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, max_order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[static_cast<size_t>(i)] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[static_cast<size_t>(i)] - x[static_cast<size_t>(j)];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k)
          c[static_cast<size_t>(i)][static_cast<size_t>(k)] =
              c1 * (k * c[static_cast<size_t>(i - 1)][static_cast<size_t>(k - 1)] -
                    c5 * c[static_cast<size_t>(i - 1)][static_cast<size_t>(k)]) / c2;
        c[static_cast<size_t>(i)][0] = -c1 * c5 * c[static_cast<size_t>(i - 1)][0] / c2;
      }
      for (int k = mn; k >= 1; --k)
        c[static_cast<size_t>(j)][static_cast<size_t>(k)] =
            (c4 * c[static_cast<size_t>(j)][static_cast<size_t>(k)] -
             k * c[static_cast<size_t>(j)][static_cast<size_t>(k - 1)]) / c3;
      c[static_cast<size_t>(j)][0] = c4 * c[static_cast<size_t>(j)][0] / c3;
    }
    c1 = c2;
  }
  // transpose to w[order][node]
  std::vector<std::vector<double>> w(static_cast<size_t>(max_order) + 1,
                                     std::vector<double>(static_cast<size_t>(n), 0.0));
  for (int j = 0; j < n; ++j)
    for (int k = 0; k <= max_order; ++k)
      w[static_cast<size_t>(k)][static_cast<size_t>(j)] =
          c[static_cast<size_t>(j)][static_cast<size_t>(k)];
  return w;
}

// Composite Simpson rule with midpoint evaluations; f is called at the panel
// endpoints and midpoints.
inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
  if (panels < 1) panels = 1;
  const double h = (b - a) / panels;
  double acc = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double x0 = a + i * h;
    const double x1 = x0 + h;
    acc += (h / 6.0) * (f(x0) + 4.0 * f(0.5 * (x0 + x1)) + f(x1));
  }
  return acc;
}

// 5-point Gauss-Legendre on [a, b].
inline double gauss_legendre_5(const std::function<double(double)>& f, double a, double b) {
  static const double xs[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                               0.5384693101056831, 0.9061798459386640};
  static const double ws[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                               0.4786286704993665, 0.2369268850561891};
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < 5; ++i) acc += ws[i] * f(mid + half * xs[i]);
  return acc * half;
}

// Bisection on a bracketing interval [a,b] with f(a), f(b) of opposite sign.
inline double bisect(const std::function<double(double)>& f, double a, double b, double xtol,
                     int max_iter = 200) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0) == (fb > 0))
    raise(ErrorCode::PreconditionViolation, "bisection interval does not bracket a root");
  for (int i = 0; i < max_iter && (b - a) > xtol; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Golden-section minimization of f on [a,b].
inline double golden_min(const std::function<double(double)>& f, double a, double b, double xtol,
                         int max_iter = 200) {
  const double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < max_iter && (b - a) > xtol; ++i) {
    if (f1 < f2) {
      b = x2; x2 = x1; f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1; x1 = x2; f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

// Piecewise-cubic Hermite interpolant with prescribed nodes, values, slopes.
// With make_monotone() the slopes get the Fritsch-Carlson limiter so monotone
// data yields a monotone interpolant.
class HermiteInterp {
 public:
  HermiteInterp() = default;
  HermiteInterp(std::vector<double> x, std::vector<double> y, std::vector<double> slope)
      : x_(std::move(x)), y_(std::move(y)), m_(std::move(slope)) {
    if (x_.size() < 2 || x_.size() != y_.size() || x_.size() != m_.size())
      raise(ErrorCode::PreconditionViolation, "Hermite interpolant needs matching arrays, n >= 2");
  }

  void make_monotone() {
    for (size_t i = 0; i + 1 < x_.size(); ++i) {
      const double d = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
      if (d == 0.0) {
        m_[i] = m_[i + 1] = 0.0;
        continue;
      }
      const double a = m_[i] / d, b = m_[i + 1] / d;
      const double r = a * a + b * b;
      if (r > 9.0) {
        const double t = 3.0 / std::sqrt(r);
        m_[i] = t * a * d;
        m_[i + 1] = t * b * d;
      }
    }
  }

  double operator()(double x) const { return eval(x, nullptr); }

  double eval(double x, double* deriv) const {
    const size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double t = (x - x_[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    if (deriv) {
      const double d00 = (6 * t2 - 6 * t) / h, d10 = (3 * t2 - 4 * t + 1);
      const double d01 = (-6 * t2 + 6 * t) / h, d11 = (3 * t2 - 2 * t);
      *deriv = d00 * y_[i] + d10 * m_[i] + d01 * y_[i + 1] + d11 * m_[i + 1];
    }
    return h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] + h11 * h * m_[i + 1];
  }

  const std::vector<double>& nodes() const { return x_; }

 private:
  size_t segment(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    size_t i = static_cast<size_t>(std::distance(x_.begin(), it));
    if (i == 0) return 0;
    if (i >= x_.size()) return x_.size() - 2;
    return i - 1;
  }

  std::vector<double> x_, y_, m_;
};

// Natural cubic spline with analytic first/second derivatives.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const size_t n = x_.size();
    if (n < 3 || y_.size() != n)
      raise(ErrorCode::PreconditionViolation, "spline needs >= 3 matching nodes");
    for (size_t i = 0; i + 1 < n; ++i)
      if (!(x_[i + 1] > x_[i]))
        raise(ErrorCode::PreconditionViolation, "spline nodes must strictly increase");
    // solve the tridiagonal system for second derivatives (natural ends)
    std::vector<double> a(n, 0), b(n, 0), c(n, 0), d(n, 0);
    b[0] = b[n - 1] = 1.0;
    for (size_t i = 1; i + 1 < n; ++i) {
      const double hl = x_[i] - x_[i - 1];
      const double hr = x_[i + 1] - x_[i];
      a[i] = hl;
      b[i] = 2.0 * (hl + hr);
      c[i] = hr;
      d[i] = 6.0 * ((y_[i + 1] - y_[i]) / hr - (y_[i] - y_[i - 1]) / hl);
    }
    m_.assign(n, 0.0);
    std::vector<double> cp(n, 0), dp(n, 0);
    cp[0] = c[0] / b[0];
    dp[0] = d[0] / b[0];
    for (size_t i = 1; i < n; ++i) {
      const double den = b[i] - a[i] * cp[i - 1];
      cp[i] = c[i] / den;
      dp[i] = (d[i] - a[i] * dp[i - 1]) / den;
    }
    m_[n - 1] = dp[n - 1];
    for (size_t i = n - 1; i-- > 0;) m_[i] = dp[i] - cp[i] * m_[i + 1];
  }

  double operator()(double x) const { return eval(x, nullptr, nullptr); }
  double deriv(double x) const {
    double d1 = 0;
    eval(x, &d1, nullptr);
    return d1;
  }

  double eval(double x, double* d1, double* d2) const {
    const size_t i = segment(x);
    const double h = x_[i + 1] - x_[i];
    const double A = (x_[i + 1] - x) / h;
    const double B = (x - x_[i]) / h;
    const double val = A * y_[i] + B * y_[i + 1] +
                       ((A * A * A - A) * m_[i] + (B * B * B - B) * m_[i + 1]) * h * h / 6.0;
    if (d1)
      *d1 = (y_[i + 1] - y_[i]) / h -
            (3 * A * A - 1) * h * m_[i] / 6.0 + (3 * B * B - 1) * h * m_[i + 1] / 6.0;
    if (d2) *d2 = A * m_[i] + B * m_[i + 1];
    return val;
  }

  double front() const { return x_.front(); }
  double back() const { return x_.back(); }

 private:
  size_t segment(double x) const {
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    size_t i = static_cast<size_t>(std::distance(x_.begin(), it));
    if (i == 0) return 0;
    if (i >= x_.size()) return x_.size() - 2;
    return i - 1;
  }

  std::vector<double> x_, y_, m_;  // m_ holds second derivatives at nodes
};

// Least-squares polynomial fit (modified Gram-Schmidt QR on the Vandermonde
// with the abscissa shifted/scaled to [-1,1] for conditioning). Returns
// coefficients in the *original* variable basis of the scaled variable:
// use PolyFit::eval.
class PolyFit {
 public:
  PolyFit(const std::vector<double>& x, const std::vector<double>& y, int degree) {
    const size_t n = x.size();
    const size_t m = static_cast<size_t>(degree) + 1;
    if (n < m) raise(ErrorCode::PreconditionViolation, "polynomial fit is underdetermined");
    double lo = x[0], hi = x[0];
    for (double v : x) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    shift_ = 0.5 * (lo + hi);
    scale_ = (hi > lo) ? 2.0 / (hi - lo) : 1.0;

    std::vector<std::vector<double>> q(m, std::vector<double>(n));
    for (size_t j = 0; j < m; ++j)
      for (size_t i = 0; i < n; ++i)
        q[j][i] = std::pow((x[i] - shift_) * scale_, static_cast<double>(j));
    std::vector<std::vector<double>> r(m, std::vector<double>(m, 0.0));
    for (size_t j = 0; j < m; ++j) {
      for (size_t k = 0; k < j; ++k) {
        double dot = 0;
        for (size_t i = 0; i < n; ++i) dot += q[k][i] * q[j][i];
        r[k][j] = dot;
        for (size_t i = 0; i < n; ++i) q[j][i] -= dot * q[k][i];
      }
      double nrm = 0;
      for (size_t i = 0; i < n; ++i) nrm += q[j][i] * q[j][i];
      nrm = std::sqrt(nrm);
      if (nrm < 1e-14) raise(ErrorCode::Singular, "rank-deficient polynomial fit");
      r[j][j] = nrm;
      for (size_t i = 0; i < n; ++i) q[j][i] /= nrm;
    }
    std::vector<double> qty(m, 0.0);
    for (size_t j = 0; j < m; ++j)
      for (size_t i = 0; i < n; ++i) qty[j] += q[j][i] * y[i];
    coef_.assign(m, 0.0);
    for (size_t j = m; j-- > 0;) {
      double s = qty[j];
      for (size_t k = j + 1; k < m; ++k) s -= r[j][k] * coef_[k];
      coef_[j] = s / r[j][j];
    }
  }

  double eval(double x) const {
    const double u = (x - shift_) * scale_;
    double acc = 0;
    for (size_t j = coef_.size(); j-- > 0;) acc = acc * u + coef_[j];
    return acc;
  }

 private:
  std::vector<double> coef_;
  double shift_ = 0, scale_ = 1;
};

// Eigen-decomposition of a symmetric 3x3 matrix by cyclic Jacobi rotations.
// Returns eigenvalues ascending with matching unit eigenvectors as columns.
struct SymmetricEigen3 {
  double values[3];
  double vectors[3][3];  // vectors[i] is the eigenvector for values[i]
};

inline SymmetricEigen3 symmetric_eigen3(double a00, double a01, double a02, double a11, double a12,
                                        double a22) {
  double a[3][3] = {{a00, a01, a02}, {a01, a11, a12}, {a02, a12, a22}};
  double v[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (int sweep = 0; sweep < 50; ++sweep) {
    double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
    if (off < 1e-15 * (std::abs(a[0][0]) + std::abs(a[1][1]) + std::abs(a[2][2]) + 1e-300)) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < 3; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < 3; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < 3; ++k) {
          const double vkp = v[k][p], vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }
  int order[3] = {0, 1, 2};
  std::sort(order, order + 3, [&](int i, int j) { return a[i][i] < a[j][j]; });
  SymmetricEigen3 out{};
  for (int i = 0; i < 3; ++i) {
    out.values[i] = a[order[i]][order[i]];
    for (int k = 0; k < 3; ++k) out.vectors[i][k] = v[k][order[i]];
  }
  return out;
}

// One pass of Richardson extrapolation assuming err ~ step^power; `pairs`
// holds (step, value) sorted by decreasing step.
inline double richardson(std::vector<std::pair<double, double>> pairs, double power) {
  while (pairs.size() > 1) {
    std::vector<std::pair<double, double>> next;
    for (size_t i = 0; i + 1 < pairs.size(); ++i) {
      const double r = std::pow(pairs[i].first / pairs[i + 1].first, power);
      next.emplace_back(pairs[i + 1].first,
                        (r * pairs[i + 1].second - pairs[i].second) / (r - 1.0));
    }
    pairs = std::move(next);
    power += 2.0;  // symmetric error expansions advance in even powers
  }
  return pairs[0].second;
}

}  // namespace minkcurve
