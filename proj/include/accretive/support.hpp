#pragma once

// Support projections of accretive matrices. For accretive x the kernels of
// x and x* coincide, so the projections onto range(x) and onto ker(x)^⊥ are
// the same; s(x) is also the support of x(1+x)^{-1} and the norm limit of
// x^{1/n}.

#include <cmath>
#include <vector>

#include "accretive/matcore.hpp"
#include "accretive/powers.hpp"

namespace accretive {

struct SupportProjectionResult {
  CMatrix projection;
  bool left_right_agree = false;
  int rank = 0;
  double principal_angle_gap = 0.0;  // ‖P_range(x) - P_range(x*)‖
  bool rank_ambiguous = false;       // a singular value within 10× of the threshold
};

namespace detail {

inline CMatrix orthogonal_projector(const CMatrix& basis) {
  return hermitian_part(basis * basis.adjoint());
}

inline SupportProjectionResult range_supports(const CMatrix& x, const TolerancePolicy& tol) {
  Eigen::JacobiSVD<CMatrix> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVector& sv = svd.singularValues();
  const double thr = tol.psd_tol * sv(0);
  SupportProjectionResult out;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > thr) ++out.rank;
    if (sv(i) > thr / 10.0 && sv(i) <= thr * 10.0) out.rank_ambiguous = true;
  }
  const CMatrix left = orthogonal_projector(svd.matrixU().leftCols(out.rank));
  const CMatrix right = orthogonal_projector(svd.matrixV().leftCols(out.rank));
  out.projection = left;
  out.principal_angle_gap = operator_norm(left - right);
  out.left_right_agree = out.principal_angle_gap <= tol.angle_tol;
  return out;
}

inline void require_support_input(const CMatrix& x, const TolerancePolicy& tol) {
  require_square(x);
  require_finite(x);
  if (operator_norm(x) == 0.0) throw Error(ErrorKind::ZeroMatrix, "support of the zero matrix");
  if (!is_accretive(x, tol)) throw Error(ErrorKind::NotAccretive, "support projection needs x + x* ≥ 0");
}

}  // namespace detail

/// Orthogonal projection onto range(x), with the left/right comparison.
inline SupportProjectionResult support_projection(const CMatrix& x, const TolerancePolicy& tol = {}) {
  detail::require_support_input(x, tol);
  return detail::range_supports(x, tol);
}

/// Left/right supports of an arbitrary nonzero matrix; used to show that the
/// agreement fails without accretivity.
inline SupportProjectionResult support_diagnostic(const CMatrix& x, const TolerancePolicy& tol = {}) {
  require_square(x);
  if (operator_norm(x) == 0.0) throw Error(ErrorKind::ZeroMatrix, "support of the zero matrix");
  return detail::range_supports(x, tol);
}

/// s(x(1+x)^{-1}).
inline SupportProjectionResult support_via_cayley(const CMatrix& x, const TolerancePolicy& tol = {}) {
  detail::require_support_input(x, tol);
  return detail::range_supports(cayley_transform(x, 1.0), tol);
}

struct RootLimitResult {
  std::vector<int> n;
  std::vector<double> distance;  // ‖x^{1/n} - s(x)‖
  // Bound constant: with L the logarithm of x on its support,
  // ‖x^{1/n} - s(x)‖ ≤ (e^{‖L‖/n} - 1) ≤ C/n for every n ≥ n_0, where
  // C = ‖L‖e^{‖L‖/n_0} and n_0 is the smallest scheduled n.
  double constant = 0.0;
  // Least-squares fit of distance ≈ c/n over the scheduled n ≥ 16 (all n if
  // none qualify).
  double fitted_c = 0.0;
};

inline RootLimitResult root_limit(const CMatrix& x, const std::vector<int>& schedule,
                                  const TolerancePolicy& tol = {}) {
  const auto sp = support_projection(x, tol);
  RootLimitResult out;
  if (schedule.empty()) return out;
  for (int n : schedule) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "schedule entries must be positive");
  }
  PowerOptions opt;
  opt.compute_residual = false;
  for (int n : schedule) {
    const CMatrix root = principal_power(x, 1.0 / n, PowerAlgorithm::TriangularSchurRecurrence, tol, opt).value;
    out.n.push_back(n);
    out.distance.push_back(operator_norm(root - sp.projection));
  }

  // x = U diag(x_r, 0) U* in the orthogonal splitting range ⊕ kernel.
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sp.projection);
  const CMatrix u = es.eigenvectors().rightCols(sp.rank);
  const CMatrix xr = u.adjoint() * x * u;
  const double lnorm = operator_norm(principal_log(xr, tol));
  int n0 = schedule.front();
  for (int n : schedule) n0 = std::min(n0, n);
  out.constant = lnorm * std::exp(lnorm / n0);

  double num = 0.0, den = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < out.n.size(); ++i) any = any || out.n[i] >= 16;
  for (std::size_t i = 0; i < out.n.size(); ++i) {
    if (any && out.n[i] < 16) continue;
    const double inv = 1.0 / out.n[i];
    num += out.distance[i] * inv;
    den += inv * inv;
  }
  out.fitted_c = den > 0.0 ? num / den : 0.0;
  return out;
}

}  // namespace accretive
