#pragma once

// Disk and bidisk functional calculus on absolutely convergent power series.
//
// A DiskFunction stores c_0..c_{L-1} and a bound on Σ_{k≥L}|c_k|. Tails are
// controlled in operator norm: for a contraction T,
//   ‖Σ_{k>K} c_k T^k‖ ≤ ‖T^{K+1}‖ · Σ_{k>K}|c_k|,
// which decays even when the ℓ1 tail alone decays slowly (binomial series
// on the unit circle).
//
// A BidiskFunction is a finite sum of terms, each either a dense coefficient
// block Σ c_nm z^n w^m or a separable product α·u(z)·v(w) of DiskFunctions.

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <vector>

#include "accretive/matcore.hpp"

namespace accretive {

inline constexpr double kSeriesTail = 1e-10;
inline constexpr int kDiskMaxTerms = 20000;
inline constexpr int kBidiskMaxK = 4000;

class DiskFunction {
 public:
  DiskFunction() : DiskFunction(std::vector<Complex>{}) {}

  explicit DiskFunction(std::vector<Complex> coeffs, double beyond = 0.0,
                        std::optional<double> sup_norm_bound = std::nullopt)
      : coeffs_(std::move(coeffs)), beyond_(beyond), sup_norm_bound(sup_norm_bound) {
    if (coeffs_.empty()) coeffs_.push_back(0.0);
    suffix_.assign(coeffs_.size() + 1, 0.0);
    for (std::size_t k = coeffs_.size(); k-- > 0;) suffix_[k] = suffix_[k + 1] + std::abs(coeffs_[k]);
  }

  static DiskFunction monomial(int k, Complex c = 1.0) {
    std::vector<Complex> v(k + 1, 0.0);
    v[k] = c;
    return DiskFunction(std::move(v), 0.0, std::abs(c));
  }

  /// ((1 - z)/2)^s for s ∈ (0, 1]. Coefficients 2^{-s} C(s,k) (-1)^k from
  /// C(s,k+1) = C(s,k)(s-k)/(k+1); since Σ_{k≥1}|C(s,k)| = 1 the tail beyond
  /// the stored terms is known exactly.
  static DiskFunction half_shift_power(double s, int terms = kDiskMaxTerms + 1) {
    if (!(s > 0.0 && s <= 1.0)) throw Error(ErrorKind::InvalidArgument, "exponent must lie in (0, 1]");
    const double scale = std::pow(2.0, -s);
    std::vector<Complex> c;
    c.reserve(terms);
    double b = 1.0, head = 0.0;
    c.push_back(scale);
    for (int k = 0; k + 1 < terms; ++k) {
      b = b * -(s - k) / (k + 1.0);
      if (b == 0.0) break;
      c.push_back(scale * b);
      head += std::abs(b);
    }
    const double beyond = s == 1.0 ? 0.0 : scale * std::max(0.0, 1.0 - head);
    return DiskFunction(std::move(c), beyond, 1.0);
  }

  std::size_t stored() const { return coeffs_.size(); }
  Complex coeff(std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Complex(0.0); }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  double beyond() const { return beyond_; }

  /// Σ_{k>K}|c_k|.
  double abs_tail_bound(std::size_t k) const {
    const std::size_t from = std::min(k + 1, coeffs_.size());
    return suffix_[from] + beyond_;
  }
  double l1_norm() const { return suffix_[0] + beyond_; }

  /// Best available bound on the sup norm over the closed disk.
  double norm_bound() const { return sup_norm_bound ? std::min(*sup_norm_bound, l1_norm()) : l1_norm(); }

  Complex value(Complex z) const {
    Complex acc = 0.0;
    for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * z + coeffs_[k];
    return acc;
  }

 private:
  std::vector<Complex> coeffs_;
  std::vector<double> suffix_;
  double beyond_ = 0.0;

 public:
  std::optional<double> sup_norm_bound;
};

inline DiskFunction operator+(const DiskFunction& a, const DiskFunction& b) {
  std::vector<Complex> c(std::max(a.stored(), b.stored()));
  for (std::size_t k = 0; k < c.size(); ++k) c[k] = a.coeff(k) + b.coeff(k);
  std::optional<double> sup;
  if (a.sup_norm_bound && b.sup_norm_bound) sup = *a.sup_norm_bound + *b.sup_norm_bound;
  return DiskFunction(std::move(c), a.beyond() + b.beyond(), sup);
}

inline DiskFunction operator*(Complex s, const DiskFunction& a) {
  std::vector<Complex> c(a.coeffs());
  for (auto& v : c) v *= s;
  std::optional<double> sup;
  if (a.sup_norm_bound) sup = std::abs(s) * *a.sup_norm_bound;
  return DiskFunction(std::move(c), std::abs(s) * a.beyond(), sup);
}

inline DiskFunction operator-(const DiskFunction& a, const DiskFunction& b) { return a + Complex(-1.0) * b; }

/// Cauchy product truncated to `max_len` stored terms; everything with
/// index ≥ max_len is absorbed into the tail bound
///   Σ_{i+j≥L}|u_i||v_j| = ‖u‖₁‖v‖₁ - Σ_{i+j<L}|u_i||v_j|.
inline DiskFunction product(const DiskFunction& u, const DiskFunction& v, std::size_t max_len = kBidiskMaxK + 1) {
  const std::size_t len = std::min(u.stored() + v.stored() - 1, max_len);
  std::vector<Complex> c(len, 0.0);
  double inside = 0.0;
  for (std::size_t i = 0; i < std::min(u.stored(), len); ++i) {
    const Complex ui = u.coeff(i);
    const double ai = std::abs(ui);
    for (std::size_t j = 0; i + j < len && j < v.stored(); ++j) {
      c[i + j] += ui * v.coeff(j);
      inside += ai * std::abs(v.coeff(j));
    }
  }
  const double beyond = std::max(0.0, u.l1_norm() * v.l1_norm() - inside);
  std::optional<double> sup;
  if (u.sup_norm_bound && v.sup_norm_bound) sup = *u.sup_norm_bound * *v.sup_norm_bound;
  return DiskFunction(std::move(c), beyond, sup);
}

inline DiskFunction power(const DiskFunction& u, int n, std::size_t max_len = kBidiskMaxK + 1) {
  DiskFunction out = DiskFunction::monomial(0);
  for (int i = 0; i < n; ++i) out = product(out, u, max_len);
  return out;
}

/// Estimate of sup_{|z|=1}|h(z)|: 4096-point grid refined by golden-section
/// search around the best grid points.
inline double boundary_sup_estimate(const DiskFunction& h, int grid = 4096) {
  std::vector<double> val(grid);
  for (int j = 0; j < grid; ++j) val[j] = std::abs(h.value(std::polar(1.0, 2.0 * kPi * j / grid)));
  double best = *std::max_element(val.begin(), val.end());
  std::vector<int> order(grid);
  for (int j = 0; j < grid; ++j) order[j] = j;
  const int top = std::min(grid, 4);
  std::partial_sort(order.begin(), order.begin() + top, order.end(), [&](int a, int b) { return val[a] > val[b]; });
  const double h_step = 2.0 * kPi / grid;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  auto f = [&](double t) { return std::abs(h.value(std::polar(1.0, t))); };
  for (int c = 0; c < top; ++c) {
    double lo = h_step * (order[c] - 1), hi = h_step * (order[c] + 1);
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 40; ++it) {
      if (f1 > f2) { hi = x2; x2 = x1; f2 = f1; x1 = hi - g * (hi - lo); f1 = f(x1); }
      else { lo = x1; x1 = x2; f1 = f2; x2 = lo + g * (hi - lo); f2 = f(x2); }
    }
    best = std::max({best, f1, f2});
  }
  return best;
}

inline double boundary_min_real_part(const DiskFunction& h, int grid = 4096) {
  double m = std::numeric_limits<double>::infinity();
  for (int j = 0; j < grid; ++j) m = std::min(m, h.value(std::polar(1.0, 2.0 * kPi * j / grid)).real());
  return m;
}

namespace detail {

inline void require_contraction(const CMatrix& t, const TolerancePolicy& tol) {
  require_square(t);
  require_finite(t);
  if (operator_norm(t) > 1.0 + tol.norm_tol) {
    throw Error(ErrorKind::NotAContraction, "functional calculus needs ‖T‖ ≤ 1");
  }
}

// Powers T^0..T^K and bounds ρ_K = sup_{k>K}‖T^k‖ ≤ ‖T^{K+1}‖·max(1,‖T‖)^{cap}.
struct PowerTable {
  std::vector<CMatrix> p;
  std::vector<double> frob;
  double slack = 1.0;

  PowerTable(const CMatrix& t, int cap) {
    slack = std::pow(std::max(1.0, operator_norm(t)), cap);
    p.push_back(identity(t.rows()));
    frob.push_back(p.back().norm());
  }
  void extend(const CMatrix& t, std::size_t k) {
    while (p.size() <= k) {
      p.push_back(p.back() * t);
      frob.push_back(p.back().norm());
    }
  }
  // Bound on sup_{k>K}‖T^k‖ (Frobenius dominates the operator norm).
  double rho(const CMatrix& t, std::size_t k) {
    extend(t, k + 1);
    return std::min(1.0, frob[k + 1]) * slack;
  }
};

inline CMatrix partial_sum(const DiskFunction& h, PowerTable& pt, const CMatrix& t, std::size_t k) {
  pt.extend(t, k);
  CMatrix acc = CMatrix::Zero(t.rows(), t.cols());
  for (std::size_t j = 0; j <= k && j < h.stored(); ++j) acc += h.coeff(j) * pt.p[j];
  return acc;
}

}  // namespace detail

/// h(T) for a contraction T; the truncation K is increased until the
/// operator-norm tail bound is ≤ 1e-10.
inline CMatrix eval_disk(const DiskFunction& h, const CMatrix& t, const TolerancePolicy& tol = {}) {
  detail::require_contraction(t, tol);
  detail::PowerTable pt(t, kDiskMaxTerms);
  const Eigen::Index d = t.rows();
  CMatrix acc = CMatrix::Zero(d, d);
  for (std::size_t k = 0; k <= static_cast<std::size_t>(kDiskMaxTerms); ++k) {
    pt.extend(t, k + 1);
    if (k < h.stored()) acc += h.coeff(k) * pt.p[k];
    const double tail = h.abs_tail_bound(k);
    if (tail == 0.0 || pt.rho(t, k) * tail <= kSeriesTail) return acc;
  }
  throw Error(ErrorKind::NonConvergence, "disk series tail bound not met within the term cap");
}

class BidiskFunction {
 public:
  struct Dense {
    // coeffs[n][m] multiplies z^n w^m.
    std::vector<std::vector<Complex>> coeffs;
  };
  struct Separable {
    Complex alpha;
    DiskFunction u, v;
  };

  static BidiskFunction dense(std::vector<std::vector<Complex>> c, std::optional<double> sup = std::nullopt) {
    BidiskFunction f;
    f.dense_.push_back({std::move(c)});
    f.sup_norm_bound = sup;
    return f;
  }
  static BidiskFunction separable(Complex alpha, DiskFunction u, DiskFunction v) {
    BidiskFunction f;
    f.sep_.push_back({alpha, std::move(u), std::move(v)});
    if (f.sep_.back().u.sup_norm_bound && f.sep_.back().v.sup_norm_bound) {
      f.sup_norm_bound = std::abs(alpha) * *f.sep_.back().u.sup_norm_bound * *f.sep_.back().v.sup_norm_bound;
    }
    return f;
  }
  static BidiskFunction constant(Complex c) { return dense({{c}}, std::abs(c)); }

  BidiskFunction& operator+=(const BidiskFunction& o) {
    dense_.insert(dense_.end(), o.dense_.begin(), o.dense_.end());
    sep_.insert(sep_.end(), o.sep_.begin(), o.sep_.end());
    if (sup_norm_bound && o.sup_norm_bound) sup_norm_bound = *sup_norm_bound + *o.sup_norm_bound;
    else sup_norm_bound.reset();
    return *this;
  }

  const std::vector<Dense>& dense_terms() const { return dense_; }
  const std::vector<Separable>& separable_terms() const { return sep_; }

  /// Coefficient of z^n w^m.
  Complex coeff(std::size_t n, std::size_t m) const {
    Complex c = 0.0;
    for (const auto& d : dense_)
      if (n < d.coeffs.size() && m < d.coeffs[n].size()) c += d.coeffs[n][m];
    for (const auto& s : sep_) c += s.alpha * s.u.coeff(n) * s.v.coeff(m);
    return c;
  }

  /// Σ|c_nm| over (n, m) outside the square [0, K]², bounded term by term.
  double abs_tail_bound(std::size_t k) const {
    double t = 0.0;
    for (const auto& d : dense_)
      for (std::size_t n = 0; n < d.coeffs.size(); ++n)
        for (std::size_t m = 0; m < d.coeffs[n].size(); ++m)
          if (n > k || m > k) t += std::abs(d.coeffs[n][m]);
    for (const auto& s : sep_) {
      t += std::abs(s.alpha) * (s.u.abs_tail_bound(k) * s.v.l1_norm() + s.u.l1_norm() * s.v.abs_tail_bound(k));
    }
    return t;
  }

  Complex value(Complex z, Complex w) const {
    Complex c = 0.0;
    for (const auto& d : dense_) {
      Complex zn = 1.0;
      for (std::size_t n = 0; n < d.coeffs.size(); ++n, zn *= z) {
        Complex wm = 1.0;
        for (std::size_t m = 0; m < d.coeffs[n].size(); ++m, wm *= w) c += d.coeffs[n][m] * zn * wm;
      }
    }
    for (const auto& s : sep_) c += s.alpha * s.u.value(z) * s.v.value(w);
    return c;
  }

  std::optional<double> sup_norm_bound;

 private:
  std::vector<Dense> dense_;
  std::vector<Separable> sep_;
};

/// f(S, T) for commuting contractions. Dense blocks are summed exactly over
/// their support (a rectangle of at most 4000×4000); separable terms
/// α·u(S)v(T) are truncated on a common K×K square grown until the tail
/// bound Σ ρ_S(K)·tail_u(K)‖v‖₁ + ‖u‖₁·ρ_T(K)·tail_v(K) is ≤ 1e-10.
inline CMatrix eval_bidisk(const BidiskFunction& f, const CMatrix& s, const CMatrix& t,
                           const TolerancePolicy& tol = {}) {
  detail::require_contraction(s, tol);
  detail::require_contraction(t, tol);
  require_same_dim(s, t);
  if (!commutes(s, t, tol)) throw Error(ErrorKind::NotCommuting, "bidisk calculus needs ST = TS");
  const Eigen::Index d = s.rows();
  detail::PowerTable ps(s, kBidiskMaxK), pt(t, kBidiskMaxK);

  CMatrix acc = CMatrix::Zero(d, d);
  for (const auto& block : f.dense_terms()) {
    if (block.coeffs.size() > static_cast<std::size_t>(kBidiskMaxK) + 1) {
      throw Error(ErrorKind::NonConvergence, "dense bidisk block exceeds the truncation cap");
    }
    for (std::size_t n = 0; n < block.coeffs.size(); ++n) {
      if (block.coeffs[n].size() > static_cast<std::size_t>(kBidiskMaxK) + 1) {
        throw Error(ErrorKind::NonConvergence, "dense bidisk block exceeds the truncation cap");
      }
      ps.extend(s, n);
      pt.extend(t, block.coeffs[n].size());
      CMatrix row = CMatrix::Zero(d, d);
      for (std::size_t m = 0; m < block.coeffs[n].size(); ++m) row += block.coeffs[n][m] * pt.p[m];
      acc += ps.p[n] * row;
    }
  }
  if (f.separable_terms().empty()) return acc;

  for (std::size_t k = 16;; k = std::min<std::size_t>(2 * k, kBidiskMaxK)) {
    double tail = 0.0;
    for (const auto& term : f.separable_terms()) {
      tail += std::abs(term.alpha) * (ps.rho(s, k) * term.u.abs_tail_bound(k) * term.v.l1_norm() +
                                      term.u.l1_norm() * pt.rho(t, k) * term.v.abs_tail_bound(k));
    }
    if (tail <= kSeriesTail) {
      CMatrix out = acc;
      for (const auto& term : f.separable_terms()) {
        out += term.alpha * detail::partial_sum(term.u, ps, s, k) * detail::partial_sum(term.v, pt, t, k);
      }
      return out;
    }
    if (k == static_cast<std::size_t>(kBidiskMaxK)) break;
  }
  throw Error(ErrorKind::NonConvergence, "bidisk tail bound not met at K = 4000");
}

/// Formal composition f(g(z), h(w)). Dense terms expand as Σ c_nm g^n ⊗ h^m
/// (series products truncated to 4001 terms with ℓ1 tail accounting);
/// separable terms α·u⊗v become α·(u∘g)⊗(v∘h).
inline BidiskFunction compose(const BidiskFunction& f, const DiskFunction& g, const DiskFunction& h,
                              const TolerancePolicy& tol = {}) {
  if (g.norm_bound() > 1.0 + tol.norm_tol || h.norm_bound() > 1.0 + tol.norm_tol) {
    throw Error(ErrorKind::NormBoundExceeded, "inner functions must map the disk into the disk");
  }
  auto compose1 = [&](const DiskFunction& u, const DiskFunction& inner) {
    if (u.beyond() > 0.0) {
      throw Error(ErrorKind::NonConvergence, "outer factor must be a polynomial to compose formally");
    }
    DiskFunction p = DiskFunction::monomial(0);
    std::vector<Complex> c;
    double beyond = 0.0;
    for (std::size_t k = 0; k < u.stored(); ++k) {
      if (k > 0) p = k == 1 ? inner : product(p, inner);
      const Complex a = u.coeff(k);
      if (a == Complex(0.0)) continue;
      if (c.size() < p.stored()) c.resize(p.stored(), 0.0);
      for (std::size_t j = 0; j < p.stored(); ++j) c[j] += a * p.coeff(j);
      beyond += std::abs(a) * p.beyond();
    }
    return DiskFunction(std::move(c), beyond, u.sup_norm_bound);
  };

  BidiskFunction out;
  std::vector<DiskFunction> gp{DiskFunction::monomial(0)}, hp{DiskFunction::monomial(0)};
  auto gpow = [&](std::size_t n) -> const DiskFunction& {
    while (gp.size() <= n) gp.push_back(gp.size() == 1 ? g : product(gp.back(), g));
    return gp[n];
  };
  auto hpow = [&](std::size_t m) -> const DiskFunction& {
    while (hp.size() <= m) hp.push_back(hp.size() == 1 ? h : product(hp.back(), h));
    return hp[m];
  };
  for (const auto& block : f.dense_terms()) {
    for (std::size_t n = 0; n < block.coeffs.size(); ++n)
      for (std::size_t m = 0; m < block.coeffs[n].size(); ++m) {
        const Complex c = block.coeffs[n][m];
        if (c == Complex(0.0)) continue;
        out += BidiskFunction::separable(c, gpow(n), hpow(m));
      }
  }
  for (const auto& term : f.separable_terms()) {
    out += BidiskFunction::separable(term.alpha, compose1(term.u, g), compose1(term.v, h));
  }
  out.sup_norm_bound = f.sup_norm_bound;
  return out;
}

}  // namespace accretive
