#pragma once

// Reference computations used by the tests. None of these call into the
// library's linear algebra: they use power iteration, pivoted Cholesky,
// brute-force sampling with std::mt19937 and truncated Taylor series.

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline CVector random_unit(Eigen::Index d, std::mt19937_64& g) {
  std::normal_distribution<double> n;
  CVector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = Complex(n(g), n(g));
  return v / v.norm();
}

/// Largest singular value by power iteration on a*a.
inline double spectral_norm(const CMatrix& a, int iters = 5000) {
  const CMatrix h = a.adjoint() * a;
  std::mt19937_64 g(12345);
  CVector v = random_unit(a.cols(), g);
  double lam = 0.0;
  for (int i = 0; i < iters; ++i) {
    CVector w = h * v;
    const double n = w.norm();
    if (n == 0.0) return 0.0;
    lam = n;
    v = w / n;
  }
  return std::sqrt(lam);
}

/// Positive semidefiniteness by Cholesky with full diagonal pivoting:
/// stop when the largest remaining pivot is below tol; PSD iff no pivot
/// went negative beyond -tol and the Schur complement is negligible.
inline bool psd_by_pivoted_cholesky(CMatrix h, double tol) {
  const Eigen::Index n = h.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index p = k;
    for (Eigen::Index i = k; i < n; ++i)
      if (h(i, i).real() > h(p, p).real()) p = i;
    const double piv = h(p, p).real();
    if (piv <= tol) {
      for (Eigen::Index i = k; i < n; ++i) {
        if (h(i, i).real() < -tol) return false;
        for (Eigen::Index j = k; j < n; ++j)
          if (std::abs(h(i, j)) > 10.0 * std::sqrt(tol)) return false;
      }
      return true;
    }
    h.row(k).swap(h.row(p));
    h.col(k).swap(h.col(p));
    const CVector col = h.col(k).tail(n - k - 1) / piv;
    h.bottomRightCorner(n - k - 1, n - k - 1) -= piv * col * col.adjoint();
  }
  return true;
}

/// Points v*Tv for many random unit vectors.
inline std::vector<Complex> numerical_range_samples(const CMatrix& t, int count, unsigned seed = 7) {
  std::mt19937_64 g(seed);
  std::vector<Complex> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const CVector v = random_unit(t.rows(), g);
    out.push_back(v.dot(t * v));
  }
  return out;
}

/// exp(x) by scaling and squaring a degree-30 Taylor polynomial.
inline CMatrix expm(const CMatrix& x) {
  const double n = x.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  while (std::ldexp(n, -s) > 0.25) ++s;
  const CMatrix y = x * std::ldexp(1.0, -s);
  CMatrix term = CMatrix::Identity(x.rows(), x.cols()), sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * y / double(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

/// max over b ∈ B of min over a ∈ A of |a - b|.
inline double directed_hausdorff(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double h = 0.0;
  for (const auto& y : b) {
    double m = INFINITY;
    for (const auto& x : a) m = std::min(m, std::abs(x - y));
    h = std::max(h, m);
  }
  return h;
}

/// Distance from z to the convex polygon with vertices `poly` in either
/// orientation (repeated vertices allowed); 0 inside.
inline double distance_outside_polygon(const std::vector<Complex>& poly, Complex z) {
  bool pos = true, neg = true;
  double best = INFINITY;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Complex a = poly[i], b = poly[(i + 1) % poly.size()];
    const Complex e = b - a, w = z - a;
    if (std::norm(e) == 0.0) {
      best = std::min(best, std::abs(w));
      continue;
    }
    const double cross = (std::conj(e) * w).imag();
    if (cross < -1e-14) pos = false;
    if (cross > 1e-14) neg = false;
    const double t = std::clamp((std::conj(e) * w).real() / std::norm(e), 0.0, 1.0);
    best = std::min(best, std::abs(w - t * e));
  }
  return pos || neg ? 0.0 : best;
}

/// Extreme arguments of W(T) from a dense sweep of the support function:
/// for each direction φ the top eigenvector of Re(e^{-iφ}T) gives a boundary
/// point. Points within `zero` of the origin are ignored.
inline std::pair<double, double> argument_range(const CMatrix& t, int grid = 20000, double zero = 1e-9) {
  double lo = INFINITY, hi = -INFINITY;
  for (int k = 0; k < grid; ++k) {
    const Complex r = std::polar(1.0, -2.0 * M_PI * k / grid);
    const CMatrix h = 0.5 * (r * t + std::conj(r) * t.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    const CVector v = es.eigenvectors().col(t.rows() - 1);
    const Complex z = v.dot(t * v);
    if (std::abs(z) <= zero) continue;
    lo = std::min(lo, std::arg(z));
    hi = std::max(hi, std::arg(z));
  }
  return {lo, hi};
}

}  // namespace oracle
