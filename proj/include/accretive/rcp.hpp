#pragma once

// Linear maps on matrix subspaces: Choi matrices, complete positivity, the
// sampled real-complete-positivity test, the A + A* extension, Stinespring
// factorisation and an empirical OCP constant.
//
// Subspace elements are handled through coordinates in the stored basis;
// vec(x) is the column-major flattening.

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "accretive/cones.hpp"
#include "accretive/matcore.hpp"
#include "accretive/random.hpp"
#include "accretive/report.hpp"

namespace accretive {

namespace detail {

inline CVector vec(const CMatrix& x) { return Eigen::Map<const CVector>(x.data(), x.size()); }

inline CMatrix unvec(const CVector& v, Eigen::Index d) { return Eigen::Map<const CMatrix>(v.data(), d, d); }

}  // namespace detail

class MatrixSubspace {
 public:
  MatrixSubspace() = default;

  MatrixSubspace(int ambient_dim, std::vector<CMatrix> basis)
      : ambient_dim_(ambient_dim), basis_(std::move(basis)) {
    if (ambient_dim_ < 1) throw Error(ErrorKind::InvalidArgument, "ambient dimension must be positive");
    if (basis_.empty()) throw Error(ErrorKind::InvalidArgument, "subspace basis is empty");
    const Eigen::Index d = ambient_dim_;
    vecs_.resize(d * d, static_cast<Eigen::Index>(basis_.size()));
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if (basis_[i].rows() != d || basis_[i].cols() != d) {
        throw Error(ErrorKind::DimensionMismatch, "basis element has the wrong size");
      }
      require_finite(basis_[i]);
      vecs_.col(static_cast<Eigen::Index>(i)) = detail::vec(basis_[i]);
    }
    Eigen::JacobiSVD<CMatrix> svd(vecs_, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVector& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 1e-10 * sv(0)) {
      throw Error(ErrorKind::InvalidArgument, "basis is linearly dependent");
    }
    orth_ = svd.matrixU();
    pinv_ = svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().adjoint();

    const CVector id = detail::vec(identity(d));
    contains_identity_ = (id - orth_ * (orth_.adjoint() * id)).norm() <= 1e-10 * std::sqrt(double(d));
    build_selfadjoint_part();
  }

  /// M_d with the matrix units E_ij in row-major order (index i·d + j).
  static MatrixSubspace full(int d) {
    std::vector<CMatrix> b;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        CMatrix e = CMatrix::Zero(d, d);
        e(i, j) = 1.0;
        b.push_back(e);
      }
    return MatrixSubspace(d, std::move(b));
  }

  int ambient_dim() const { return ambient_dim_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<CMatrix>& basis() const { return basis_; }
  bool contains_identity() const { return contains_identity_; }
  bool is_full() const { return dim() == static_cast<std::size_t>(ambient_dim_ * ambient_dim_); }
  /// Hermitian matrices whose complex span is Δ(A) = A ∩ A*.
  const std::vector<CMatrix>& selfadjoint_part_basis() const { return sa_basis_; }

  CVector coordinates(const CMatrix& x) const { return pinv_ * detail::vec(x); }

  CMatrix combine(const CVector& c) const { return detail::unvec(vecs_ * c, ambient_dim_); }

  /// Orthogonal (Frobenius) projection onto the subspace.
  CMatrix project(const CMatrix& x) const {
    return detail::unvec(orth_ * (orth_.adjoint() * detail::vec(x)), ambient_dim_);
  }

  double distance(const CMatrix& x) const { return (x - project(x)).norm(); }

 private:
  void build_selfadjoint_part() {
    // x = Σ c_i b_i = Σ c'_j b_j*  ⇔  [B, -B†] (c, c') = 0.
    const Eigen::Index m = static_cast<Eigen::Index>(basis_.size());
    const Eigen::Index d = ambient_dim_;
    CMatrix stacked(d * d, 2 * m);
    stacked.leftCols(m) = vecs_;
    for (Eigen::Index j = 0; j < m; ++j) stacked.col(m + j) = -detail::vec(basis_[j].adjoint());
    Eigen::JacobiSVD<CMatrix> svd(stacked, Eigen::ComputeFullV);
    const RVector& sv = svd.singularValues();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > 1e-10 * sv(0)) ++rank;
    std::vector<CMatrix> candidates;
    for (Eigen::Index c = rank; c < 2 * m; ++c) {
      const CMatrix x = combine(svd.matrixV().col(c).head(m));
      candidates.push_back(hermitian_part(x));
      candidates.push_back(skew_part(x));
    }
    // Greedy independent subset (Gram–Schmidt on vec).
    std::vector<CVector> q;
    for (const auto& h : candidates) {
      CVector v = detail::vec(h);
      const double n0 = v.norm();
      if (n0 == 0.0) continue;
      for (const auto& u : q) v -= u * u.dot(v);
      for (const auto& u : q) v -= u * u.dot(v);
      if (v.norm() > 1e-8 * n0) {
        q.push_back(v / v.norm());
        sa_basis_.push_back(h / n0);
      }
    }
  }

  int ambient_dim_ = 0;
  std::vector<CMatrix> basis_;
  CMatrix vecs_, orth_, pinv_;
  bool contains_identity_ = false;
  std::vector<CMatrix> sa_basis_;
};

class SubspaceMap {
 public:
  SubspaceMap() = default;

  SubspaceMap(MatrixSubspace domain, int codomain_dim, std::vector<CMatrix> images)
      : domain_(std::move(domain)), codomain_dim_(codomain_dim), images_(std::move(images)) {
    if (images_.size() != domain_.dim()) {
      throw Error(ErrorKind::DimensionMismatch, "one image per basis element is required");
    }
    for (const auto& y : images_) {
      if (y.rows() != codomain_dim_ || y.cols() != codomain_dim_) {
        throw Error(ErrorKind::DimensionMismatch, "image has the wrong size");
      }
      require_finite(y);
    }
  }

  /// Map on M_d given as a function of matrix units.
  template <class F>
  static SubspaceMap on_full(int d, int k, F&& f) {
    MatrixSubspace dom = MatrixSubspace::full(d);
    std::vector<CMatrix> imgs;
    for (const auto& e : dom.basis()) imgs.push_back(f(e));
    return SubspaceMap(std::move(dom), k, std::move(imgs));
  }

  /// Restriction of a map on M_d to the subspace spanned by `basis`.
  template <class F>
  static SubspaceMap restriction(int d, int k, std::vector<CMatrix> basis, F&& f) {
    MatrixSubspace dom(d, std::move(basis));
    std::vector<CMatrix> imgs;
    for (const auto& b : dom.basis()) imgs.push_back(f(b));
    return SubspaceMap(std::move(dom), k, std::move(imgs));
  }

  const MatrixSubspace& domain() const { return domain_; }
  int codomain_dim() const { return codomain_dim_; }
  const std::vector<CMatrix>& images() const { return images_; }

  /// T(x) for x in the domain (x is taken through its coordinates).
  CMatrix apply(const CMatrix& x) const {
    const CVector c = domain_.coordinates(x);
    CMatrix y = CMatrix::Zero(codomain_dim_, codomain_dim_);
    for (std::size_t i = 0; i < images_.size(); ++i) y += c(static_cast<Eigen::Index>(i)) * images_[i];
    return y;
  }

  /// T_n([x_pq]) = [T(x_pq)] for an n×n block matrix with blocks in the domain.
  CMatrix amplify(const CMatrix& x) const {
    const Eigen::Index d = domain_.ambient_dim(), k = codomain_dim_;
    if (x.rows() != x.cols() || x.rows() % d != 0) {
      throw Error(ErrorKind::DimensionMismatch, "amplification input is not a block matrix over M_d");
    }
    const Eigen::Index n = x.rows() / d;
    CMatrix y(n * k, n * k);
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = 0; q < n; ++q) y.block(p * k, q * k, k, k) = apply(x.block(p * d, q * d, d, d));
    return y;
  }

 private:
  MatrixSubspace domain_;
  int codomain_dim_ = 0;
  std::vector<CMatrix> images_;
};

struct ChoiMatrix {
  CMatrix matrix;
  SubspaceMap source_map;
  int d = 0;
  int k = 0;
};

/// Σ_ij E_ij ⊗ T(E_ij); block (i, j) of the result is T(E_ij).
inline ChoiMatrix choi(const SubspaceMap& t) {
  if (!t.domain().is_full()) throw Error(ErrorKind::DomainNotFull, "Choi matrix needs the domain to be all of M_d");
  const int d = t.domain().ambient_dim(), k = t.codomain_dim();
  ChoiMatrix c;
  c.d = d;
  c.k = k;
  c.source_map = t;
  c.matrix.resize(d * k, d * k);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      CMatrix e = CMatrix::Zero(d, d);
      e(i, j) = 1.0;
      c.matrix.block(i * k, j * k, k, k) = t.apply(e);
    }
  return c;
}

/// The map on M_d whose Choi matrix is `c` (d·k square).
inline SubspaceMap map_from_choi(const CMatrix& c, int d) {
  if (c.rows() != c.cols() || d < 1 || c.rows() % d != 0) {
    throw Error(ErrorKind::DimensionMismatch, "Choi matrix size is not a multiple of d");
  }
  const int k = static_cast<int>(c.rows() / d);
  return SubspaceMap::on_full(d, k, [&](const CMatrix& e) {
    Eigen::Index i = 0, j = 0;
    e.cwiseAbs().maxCoeff(&i, &j);
    return CMatrix(c.block(i * k, j * k, k, k));
  });
}

inline bool is_cp(const ChoiMatrix& c, const TolerancePolicy& tol = {}) {
  try {
    return is_psd(c.matrix, tol);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::NotHermitian) return false;
    throw;
  }
}

namespace detail {

// Random element of M_n(A): each block a random combination of the basis.
inline CMatrix random_block_element(const MatrixSubspace& a, int n, Rng& rng) {
  const int d = a.ambient_dim();
  CMatrix x(n * d, n * d);
  for (int p = 0; p < n; ++p)
    for (int q = 0; q < n; ++q) {
      CVector c(static_cast<Eigen::Index>(a.dim()));
      for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = rng.cnormal();
      x.block(p * d, q * d, d, d) = a.combine(c);
    }
  return x;
}

// Accretive element of M_n(A) or nothing when the sampler cannot produce one.
inline std::optional<CMatrix> sample_accretive(const MatrixSubspace& a, int n, int variant, Rng& rng) {
  const int nd = n * a.ambient_dim();
  if (variant == 1 && a.is_full()) {
    // vv* + i·s·K: Hermitian part vv* ≥ 0.
    const CVector v = random_unit_vector(nd, rng);
    CMatrix x = v * v.adjoint();
    if (rng.uniform() < 0.75) {
      const double s = std::pow(10.0, rng.uniform(-1.0, 2.0));
      x += Complex(0.0, s) * random_hermitian(nd, rng);
    }
    return x;
  }
  if (a.contains_identity()) {
    // Shift a random element until its Hermitian part is singular PSD.
    CMatrix x = random_block_element(a, n, rng);
    double t = -real_part_min(x);
    if (rng.uniform() < 0.25) t += rng.uniform(0.0, 0.5);
    return CMatrix(x + t * identity(nd));
  }
  for (int attempt = 0; attempt < 64; ++attempt) {
    CMatrix x = random_block_element(a, n, rng);
    if (real_part_min(x) >= 0.0) return x;
  }
  return std::nullopt;
}

}  // namespace detail

struct RcpOptions {
  bool stop_at_witness = true;
  std::string property_id = "rcp";
};

/// Sampled test of: Re x ≥ 0 ⇒ Re T_n(x) ≥ 0 for x ∈ M_n(A), n ≤ L.
///
/// Margin per sample: λ_min(Re T_n(x)) / max(1, ‖T_n(x)‖). A failing sample
/// is a witness that T is not real completely positive.
inline PropertyReport rcp_check(const SubspaceMap& t, int levels, int trials, std::uint64_t seed,
                                const TolerancePolicy& tol = {}, const RcpOptions& opt = {}) {
  if (levels < 1) throw Error(ErrorKind::InvalidArgument, "levels must be at least 1");
  PropertyReport rep;
  rep.property_id = opt.property_id;
  const std::string check = "image_accretive";
  rep.check(check, tol.psd_tol);
  double witness_margin = std::numeric_limits<double>::infinity();
  int skipped = 0;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = Rng::stream(seed, opt.property_id, static_cast<std::uint64_t>(trial));
    const int n = levels - (trial % levels);
    const int variant = (trial / levels) % 2;
    auto x = detail::sample_accretive(t.domain(), n, variant, rng);
    ++rep.trials_run;
    if (!x) {
      ++skipped;
      continue;
    }
    const CMatrix y = t.amplify(*x);
    const double margin = real_part_min(y) / scale_of(operator_norm(y));
    rep.record(check, tol.psd_tol, margin, trial_digest(trial, {&*x}));
    if (classify_margin(margin, tol.psd_tol) == Status::Fail && margin < witness_margin) {
      witness_margin = margin;
      rep.witness = *x;
      if (opt.stop_at_witness) break;
    }
  }
  if (skipped > 0) rep.notes.push_back(std::to_string(skipped) + " trials produced no accretive sample");
  rep.finalize();
  return rep;
}

struct IkhuhResult {
  bool holds = true;
  std::optional<Complex> witness;
  double worst_margin = std::numeric_limits<double>::infinity();
  bool borderline = false;
};

/// zx ∈ 𝔯 for z = cos θ e^{iθ}, θ_j = -π/2 + πj/m (j = 1..m-1). When the
/// grid passes, λ_min(Re(zx)) is further minimised over θ by golden-section
/// search on each grid cell next to ±π/2 and around the best grid point.
inline IkhuhResult ikhuh_check(const CMatrix& x, int m, const TolerancePolicy& tol = {}) {
  require_square(x);
  if (m < 8) throw Error(ErrorKind::InvalidArgument, "z grid needs at least 8 points");
  const double thr = tol.psd_tol * scale_of(operator_norm(x));
  auto zof = [](double th) { return std::cos(th) * std::polar(1.0, th); };
  auto margin = [&](double th) { return real_part_min(zof(th) * x); };
  IkhuhResult out;
  double best_theta = 0.0;
  for (int j = 1; j < m; ++j) {
    const double th = -kPi / 2 + kPi * j / m;
    const double mg = margin(th);
    if (mg < out.worst_margin) {
      out.worst_margin = mg;
      best_theta = th;
    }
  }
  if (out.worst_margin < -thr) {
    out.holds = false;
    out.witness = zof(best_theta);
  } else {
    const double h = kPi / m, g = 0.5 * (std::sqrt(5.0) - 1.0);
    const double cells[3][2] = {{-kPi / 2, -kPi / 2 + h}, {kPi / 2 - h, kPi / 2}, {best_theta - h, best_theta + h}};
    for (const auto& cell : cells) {
      double lo = cell[0], hi = cell[1];
      double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
      double f1 = margin(x1), f2 = margin(x2);
      for (int it = 0; it < 80; ++it) {
        if (f1 < f2) { hi = x2; x2 = x1; f2 = f1; x1 = hi - g * (hi - lo); f1 = margin(x1); }
        else { lo = x1; x1 = x2; f1 = f2; x2 = lo + g * (hi - lo); f2 = margin(x2); }
      }
      const double th = f1 < f2 ? x1 : x2;
      const double mg = std::min(f1, f2);
      if (mg < out.worst_margin) {
        out.worst_margin = mg;
        best_theta = th;
      }
    }
    if (out.worst_margin < -thr) {
      out.holds = false;
      out.witness = zof(best_theta);
    }
  }
  out.borderline = std::abs(out.worst_margin) <= 2.0 * thr;
  return out;
}

/// T̃(a + b*) = T(a) + T(b)* on span(A ∪ A*). Well defined iff T(h) is
/// Hermitian for every Hermitian h ∈ Δ(A).
inline SubspaceMap extend_to_selfadjoint(const SubspaceMap& t) {
  const MatrixSubspace& a = t.domain();
  if (!a.contains_identity()) throw Error(ErrorKind::InvalidArgument, "extension needs a unital domain");
  for (const auto& h : a.selfadjoint_part_basis()) {
    const CMatrix th = t.apply(h);
    if (operator_norm(th - th.adjoint()) > 1e-9 * scale_of(operator_norm(th))) {
      throw Error(ErrorKind::IllDefinedExtension, "T(h*) ≠ T(h)* on the selfadjoint part of the domain");
    }
  }
  std::vector<CMatrix> basis, images;
  std::vector<CVector> q;
  auto try_add = [&](const CMatrix& b, const CMatrix& img) {
    CVector v = detail::vec(b);
    const double n0 = v.norm();
    for (const auto& u : q) v -= u * u.dot(v);
    for (const auto& u : q) v -= u * u.dot(v);
    if (v.norm() > 1e-8 * n0) {
      q.push_back(v / v.norm());
      basis.push_back(b);
      images.push_back(img);
    }
  };
  for (std::size_t i = 0; i < a.dim(); ++i) try_add(a.basis()[i], t.images()[i]);
  for (std::size_t i = 0; i < a.dim(); ++i) try_add(a.basis()[i].adjoint(), t.images()[i].adjoint());
  return SubspaceMap(MatrixSubspace(a.ambient_dim(), std::move(basis)), t.codomain_dim(), std::move(images));
}

/// Samples PSD elements of M_n(S), n ≤ levels, for a selfadjoint unital
/// domain S: m*m with every block projected onto S, then shifted by t·I to
/// be PSD with a nontrivial kernel. Margin: the smaller of
/// λ_min(Re T_n(y)) and -‖T_n(y) - T_n(y)*‖, relative to max(1, ‖T_n(y)‖).
inline PropertyReport positivity_check(const SubspaceMap& t, int levels, int trials, std::uint64_t seed,
                                       double tolerance = 1e-8) {
  const MatrixSubspace& s = t.domain();
  if (!s.contains_identity()) throw Error(ErrorKind::InvalidArgument, "positivity sampling needs a unital domain");
  PropertyReport rep;
  rep.property_id = "positivity";
  const int d = s.ambient_dim();
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = Rng::stream(seed, "positivity", static_cast<std::uint64_t>(trial));
    const int n = 1 + trial % levels;
    const CMatrix m = random_gaussian(n * d, rng);
    CMatrix y = m.adjoint() * m;
    for (int p = 0; p < n; ++p)
      for (int qq = 0; qq < n; ++qq) y.block(p * d, qq * d, d, d) = s.project(y.block(p * d, qq * d, d, d));
    y = hermitian_part(y);
    y += std::max(0.0, -lambda_min(y)) * identity(n * d);
    const CMatrix img = t.amplify(y);
    const double sc = scale_of(operator_norm(img));
    const double mg = std::min(real_part_min(img), -operator_norm(img - img.adjoint())) / sc;
    ++rep.trials_run;
    rep.record("image_positive", tolerance, mg, trial_digest(trial, {&y}));
    if (classify_margin(mg, tolerance) == Status::Fail && !rep.witness) rep.witness = y;
  }
  rep.finalize();
  return rep;
}

struct StinespringFactorization {
  CMatrix V;                    // (r·d) × k, stacking K_1*, …, K_r*
  std::vector<CMatrix> kraus;   // K_i : C^d → C^k
  int multiplicity = 0;         // r; π(x) = I_r ⊗ x
  int d = 0;
  int k = 0;
  double cb_norm = 0.0;         // ‖V‖² = ‖Σ K_i K_i*‖ = ‖T(1)‖

  CMatrix pi(const CMatrix& x) const { return kron(identity(multiplicity), x); }
  CMatrix apply(const CMatrix& x) const { return V.adjoint() * pi(x) * V; }
};

/// T(x) = Σ K_i x K_i* = V*(I_r ⊗ x)V from the eigendecomposition of the
/// Choi matrix: for eigenpairs (μ, w), column i of K is √μ·w[i·k, (i+1)·k).
inline StinespringFactorization stinespring(const ChoiMatrix& c, const TolerancePolicy& tol = {}) {
  if (!is_cp(c, tol)) throw Error(ErrorKind::NotCP, "Stinespring factorisation needs a CP map");
  const CMatrix h = hermitian_part(c.matrix);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const double thr = tol.psd_tol * scale_of(operator_norm(h));
  StinespringFactorization f;
  f.d = c.d;
  f.k = c.k;
  for (Eigen::Index e = es.eigenvalues().size(); e-- > 0;) {
    const double mu = es.eigenvalues()(e);
    if (mu <= thr) break;
    CMatrix kr(c.k, c.d);
    for (int i = 0; i < c.d; ++i) kr.col(i) = std::sqrt(mu) * es.eigenvectors().col(e).segment(i * c.k, c.k);
    f.kraus.push_back(kr);
  }
  f.multiplicity = static_cast<int>(f.kraus.size());
  f.V = CMatrix::Zero(std::max(1, f.multiplicity) * c.d, c.k);
  for (int r = 0; r < f.multiplicity; ++r) f.V.block(r * c.d, 0, c.d, c.k) = f.kraus[r].adjoint();
  if (f.multiplicity == 0) f.multiplicity = 1;
  const double vn = operator_norm(f.V);
  f.cb_norm = vn * vn;
  return f;
}

/// inf{c > 0 : ‖c - y‖ ≤ c} by bisection; +∞ when no finite c exists. The
/// function c ↦ ‖c - y‖ - c is nonincreasing, with limit -λ_min(Re y).
inline double minimal_f_scale(const CMatrix& y, const TolerancePolicy& tol = {}) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double yn = operator_norm(y);
  if (yn == 0.0) return 0.0;
  if (real_part_min(y) < -tol.psd_tol * scale_of(yn)) return inf;
  const CMatrix id = identity(y.rows());
  auto inside = [&](double c) { return operator_norm(c * id - y) <= c * (1.0 + 1e-15); };
  double hi = yn;
  while (!inside(hi)) {
    hi *= 2.0;
    if (hi > 1e12 * scale_of(yn)) return inf;
  }
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (inside(mid)) hi = mid; else lo = mid;
  }
  return hi;
}

struct OcpEstimate {
  double estimate = 0.0;          // sup over samples of the minimal c
  double worst_oracle_gap = 0.0;  // max |bisection - min_c_constant| / max(1, c) over finite samples
  int samples = 0;
};

/// Empirical sup over f ∈ 𝔉_{M_n(A)}, n ≤ L, of the minimal c with
/// T_n(f) ∈ c𝔉. Samples: f = 1 - c with c ∈ M_n(A), ‖c‖ = 1, plus f = 2·1
/// and, on the full algebra, f = 2vv*.
inline OcpEstimate ocp_constant_estimate(const SubspaceMap& t, int levels, int trials, std::uint64_t seed,
                                         const TolerancePolicy& tol = {}) {
  const MatrixSubspace& a = t.domain();
  if (!a.contains_identity()) throw Error(ErrorKind::InvalidArgument, "OCP sampling needs a unital domain");
  OcpEstimate out;
  const int d = a.ambient_dim();
  auto consider = [&](const CMatrix& f) {
    const CMatrix y = t.amplify(f);
    const double c = minimal_f_scale(y, tol);
    const double oracle = min_c_constant(y, tol);
    if (std::isfinite(c) && std::isfinite(oracle)) {
      out.worst_oracle_gap = std::max(out.worst_oracle_gap, std::abs(c - oracle) / scale_of(c));
    }
    out.estimate = std::max(out.estimate, c);
    ++out.samples;
  };
  for (int n = 1; n <= levels; ++n) consider(2.0 * identity(n * d));
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng = Rng::stream(seed, "ocp", static_cast<std::uint64_t>(trial));
    const int n = 1 + trial % levels;
    if (a.is_full() && trial % 3 == 2) {
      const CVector v = random_unit_vector(n * d, rng);
      consider(2.0 * v * v.adjoint());
      continue;
    }
    CMatrix c = detail::random_block_element(a, n, rng);
    c /= operator_norm(c);
    consider(identity(n * d) - c);
  }
  return out;
}

}  // namespace accretive
