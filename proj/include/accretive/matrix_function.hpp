#pragma once

// Blocked Schur–Parlett evaluation of f(T) for functions analytic on a
// neighbourhood of the spectrum.
//
// T = U R U* (complex Schur). Eigenvalues are grouped into clusters; the
// Schur form is reordered so each cluster is a contiguous diagonal block.
// Diagonal blocks are evaluated by a Taylor series about the cluster mean
// (exact scalar evaluation for 1×1 blocks), and off-diagonal blocks solve
// the Sylvester equations implied by F R = R F.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numeric>
#include <vector>

#include "accretive/matcore.hpp"

namespace accretive {

/// Scalar function interface consumed by schur_parlett.
///
/// value(z):           f(z)
/// taylor(s, k):       f^{(j)}(s)/j! for j = 0..k-1
/// cluster_radius(z):  eigenvalues closer than this are evaluated together
/// convergence(s):     radius of the Taylor disc about s
struct ScalarFunction {
  virtual ~ScalarFunction() = default;
  virtual Complex value(Complex z) const = 0;
  virtual std::vector<Complex> taylor(Complex s, int k) const = 0;
  virtual double cluster_radius(Complex z) const = 0;
  virtual double convergence(Complex s) const = 0;
};

/// Principal power z^α = exp(α Log z).
class PowerFunction final : public ScalarFunction {
 public:
  explicit PowerFunction(double alpha) : alpha_(alpha) {}

  Complex value(Complex z) const override {
    if (z == Complex(0.0)) return alpha_ > 0 ? Complex(0.0) : Complex(1.0);
    return std::exp(alpha_ * std::log(z));
  }
  std::vector<Complex> taylor(Complex s, int k) const override {
    std::vector<Complex> c(k);
    c[0] = value(s);
    for (int j = 1; j < k; ++j) c[j] = c[j - 1] * ((alpha_ - (j - 1)) / (double(j) * s));
    return c;
  }
  double cluster_radius(Complex z) const override { return 0.1 * std::abs(z); }
  double convergence(Complex s) const override { return std::abs(s); }

 private:
  double alpha_;
};

/// Principal logarithm.
class LogFunction final : public ScalarFunction {
 public:
  Complex value(Complex z) const override { return std::log(z); }
  std::vector<Complex> taylor(Complex s, int k) const override {
    std::vector<Complex> c(k);
    c[0] = std::log(s);
    Complex inv = 1.0 / s, p = inv;
    for (int j = 1; j < k; ++j) {
      c[j] = ((j % 2) ? 1.0 : -1.0) * p / double(j);
      p *= inv;
    }
    return c;
  }
  double cluster_radius(Complex z) const override { return 0.1 * std::abs(z); }
  double convergence(Complex s) const override { return std::abs(s); }
};

class ExpFunction final : public ScalarFunction {
 public:
  Complex value(Complex z) const override { return std::exp(z); }
  std::vector<Complex> taylor(Complex s, int k) const override {
    std::vector<Complex> c(k);
    c[0] = std::exp(s);
    for (int j = 1; j < k; ++j) c[j] = c[j - 1] / double(j);
    return c;
  }
  double cluster_radius(Complex) const override { return 0.1; }
  double convergence(Complex) const override { return std::numeric_limits<double>::infinity(); }
};

namespace detail {

// Swaps diagonal entries k and k+1 of the upper triangular r, keeping
// u r u* invariant.
inline void swap_schur_pair(CMatrix& r, CMatrix& u, Eigen::Index k) {
  const Complex a = r(k, k), b = r(k + 1, k + 1), c = r(k, k + 1);
  const Complex x0 = c, x1 = b - a;
  const double n = std::hypot(std::abs(x0), std::abs(x1));
  if (n == 0.0) return;
  Eigen::Matrix2cd q;
  q << x0 / n, -std::conj(x1) / n,
       x1 / n, std::conj(x0) / n;
  r.middleRows(k, 2) = q.adjoint() * r.middleRows(k, 2);
  r.middleCols(k, 2) = r.middleCols(k, 2) * q;
  u.middleCols(k, 2) = u.middleCols(k, 2) * q;
  r(k + 1, k) = 0.0;
  r(k, k) = b;
  r(k + 1, k + 1) = a;
}

// Union-find clustering of the diagonal of r.
inline std::vector<int> cluster_eigenvalues(const CVector& ev, const ScalarFunction& f) {
  const int n = static_cast<int>(ev.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double rad = std::min(f.cluster_radius(ev(i)), f.cluster_radius(ev(j)));
      if (std::abs(ev(i) - ev(j)) <= rad) parent[find(i)] = find(j);
    }
  // Relabel clusters in order of first appearance.
  std::vector<int> label(n, -1), out(n);
  int next = 0;
  for (int i = 0; i < n; ++i) {
    const int root = find(i);
    if (label[root] < 0) label[root] = next++;
    out[i] = label[root];
  }
  return out;
}

inline CMatrix taylor_block(const CMatrix& block, const ScalarFunction& f) {
  const Eigen::Index m = block.rows();
  if (m == 1) return CMatrix::Constant(1, 1, f.value(block(0, 0)));
  const Complex sigma = block.diagonal().mean();
  const CMatrix n = block - sigma * identity(m);
  double spread = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) spread = std::max(spread, std::abs(n(i, i)));
  if (spread >= 0.9 * f.convergence(sigma)) {
    throw Error(ErrorKind::NonConvergence, "eigenvalue cluster too wide for Taylor evaluation");
  }
  constexpr int kMaxTerms = 400;
  const auto coeff = f.taylor(sigma, kMaxTerms);
  CMatrix result = coeff[0] * identity(m);
  CMatrix power = identity(m);
  int small_run = 0;
  for (int j = 1; j < kMaxTerms; ++j) {
    power = power * n;
    const CMatrix term = coeff[j] * power;
    result += term;
    const double tn = term.norm();
    if (tn <= 1e-17 * std::max(result.norm(), 1e-300)) {
      if (++small_run >= 3 && j >= m) return result;
    } else {
      small_run = 0;
    }
    if (power.norm() == 0.0) return result;
  }
  throw Error(ErrorKind::NonConvergence, "Taylor series for diagonal block did not converge");
}

// Solves A X - X B = C for upper triangular A, B with disjoint spectra.
inline CMatrix solve_triangular_sylvester(const CMatrix& a, const CMatrix& b, CMatrix c) {
  const Eigen::Index p = a.rows(), q = b.rows();
  CMatrix x(p, q);
  for (Eigen::Index col = 0; col < q; ++col) {
    CVector rhs = c.col(col);
    for (Eigen::Index r = 0; r < col; ++r) rhs += x.col(r) * b(r, col);
    CMatrix shifted = a - b(col, col) * identity(p);
    x.col(col) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }
  return x;
}

}  // namespace detail

/// f(T) by blocked Schur–Parlett.
///
/// With zero_radius ≥ 0, eigenvalues of modulus ≤ zero_radius are treated as
/// a semisimple zero eigenvalue and f(0) = 0 is imposed: writing the
/// reordered Schur form as [[0, B], [0, R2]], f(R) = [[0, B R2^{-1} f(R2)],
/// [0, f(R2)]]. This is exact when the zero eigenvalue is semisimple, which
/// holds whenever W(T) avoids the negative axis.
inline CMatrix schur_parlett(const CMatrix& t, const ScalarFunction& f, double zero_radius = -1.0) {
  require_square(t);
  const Eigen::Index d = t.rows();
  if (d == 1) {
    if (std::abs(t(0, 0)) <= zero_radius) return CMatrix::Zero(1, 1);
    return CMatrix::Constant(1, 1, f.value(t(0, 0)));
  }

  Eigen::ComplexSchur<CMatrix> schur(t);
  CMatrix r = schur.matrixT().triangularView<Eigen::Upper>();
  CMatrix u = schur.matrixU();

  std::vector<int> labels(d);
  {
    std::vector<Eigen::Index> live;
    for (Eigen::Index k = 0; k < d; ++k)
      if (!(std::abs(r(k, k)) <= zero_radius)) live.push_back(k);
    CVector ev(static_cast<Eigen::Index>(live.size()));
    for (std::size_t k = 0; k < live.size(); ++k) ev(static_cast<Eigen::Index>(k)) = r(live[k], live[k]);
    const auto live_labels = detail::cluster_eigenvalues(ev, f);
    std::fill(labels.begin(), labels.end(), -1);
    for (std::size_t k = 0; k < live.size(); ++k) labels[live[k]] = live_labels[k];
  }
  // Bubble the diagonal into cluster order; the zero cluster (label -1) first.
  for (Eigen::Index pass = 0; pass < d; ++pass) {
    bool swapped = false;
    for (Eigen::Index k = 0; k + 1 < d; ++k) {
      if (labels[k] > labels[k + 1]) {
        detail::swap_schur_pair(r, u, k);
        std::swap(labels[k], labels[k + 1]);
        swapped = true;
      }
    }
    if (!swapped) break;
  }

  const Eigen::Index zeros = std::count(labels.begin(), labels.end(), -1);
  std::vector<Eigen::Index> starts;
  for (Eigen::Index k = zeros; k < d; ++k)
    if (k == zeros || labels[k] != labels[k - 1]) starts.push_back(k);
  starts.push_back(d);
  const std::size_t nb = starts.size() - 1;
  auto blk = [&](const CMatrix& m, std::size_t i, std::size_t j) {
    return m.block(starts[i], starts[j], starts[i + 1] - starts[i], starts[j + 1] - starts[j]);
  };

  CMatrix fr = CMatrix::Zero(d, d);
  for (std::size_t i = 0; i < nb; ++i) {
    CMatrix block = blk(r, i, i);
    fr.block(starts[i], starts[i], block.rows(), block.cols()) = detail::taylor_block(block, f);
  }
  for (std::size_t gap = 1; gap < nb; ++gap) {
    for (std::size_t i = 0; i + gap < nb; ++i) {
      const std::size_t j = i + gap;
      CMatrix c = blk(fr, i, i) * blk(r, i, j) - blk(r, i, j) * blk(fr, j, j);
      for (std::size_t k = i + 1; k < j; ++k) c += blk(fr, i, k) * blk(r, k, j) - blk(r, i, k) * blk(fr, k, j);
      CMatrix x = detail::solve_triangular_sylvester(blk(r, i, i), blk(r, j, j), c);
      fr.block(starts[i], starts[j], x.rows(), x.cols()) = x;
    }
  }
  if (zeros > 0 && zeros < d) {
    const Eigen::Index rest = d - zeros;
    const CMatrix r2 = r.bottomRightCorner(rest, rest);
    const CMatrix b = r.topRightCorner(zeros, rest);
    // Y = B R2^{-1}, i.e. R2^T Y^T = B^T.
    const CMatrix yt = r2.transpose().triangularView<Eigen::Lower>().solve(b.transpose());
    fr.topRightCorner(zeros, rest) = yt.transpose() * fr.bottomRightCorner(rest, rest);
  }
  return u * fr * u.adjoint();
}

}  // namespace accretive
