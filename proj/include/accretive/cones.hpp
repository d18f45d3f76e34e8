#pragma once

// Membership in 𝔉 = {a : ‖1 - a‖ ≤ 1}, ½𝔉 = {a : ‖1 - 2a‖ ≤ 1}, the
// accretive cone 𝔯 and 𝔠 (x*x ≤ C(x + x*) for some C), plus the scalar
// cardioid {re^{iθ} : r ≤ ½cos θ + ½}.

#include <cmath>
#include <limits>

#include "accretive/matcore.hpp"

namespace accretive {

struct ConeMargins {
  double one_minus_a = 0.0;      // ‖1 - a‖
  double one_minus_2a = 0.0;     // ‖1 - 2a‖
  double re_min = 0.0;           // λ_min(a + a*)
  double c_min = 0.0;
};

struct ConeMembershipReport {
  bool in_F = false;
  bool in_half_F = false;
  bool accretive = false;
  bool in_c = false;
  double c_min = 0.0;
  ConeMargins margins;
};

/// Smallest C with x*x ≤ C(x + x*), or +∞.
///
/// With H = x + x*, finiteness needs H ≥ 0 and ker H ⊆ ker x; then
/// C = λ_max(H^{+/2} x*x H^{+/2}) with H^{+/2} the pseudo-inverse square root.
inline double min_c_constant(const CMatrix& x, const TolerancePolicy& tol = {}) {
  require_square(x);
  constexpr double inf = std::numeric_limits<double>::infinity();
  const Eigen::Index d = x.rows();
  const CMatrix h = hermitian_part(x) * 2.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const RVector& ev = es.eigenvalues();
  const double thr = tol.psd_tol * scale_of(ev.cwiseAbs().maxCoeff());
  if (ev(0) < -thr) return inf;

  CMatrix range_vectors(d, 0);
  RVector range_values(0);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (ev(i) > thr) {
      range_vectors.conservativeResize(d, range_vectors.cols() + 1);
      range_vectors.col(range_vectors.cols() - 1) = es.eigenvectors().col(i);
      range_values.conservativeResize(range_values.size() + 1);
      range_values(range_values.size() - 1) = ev(i);
    }
  }
  const CMatrix p = range_vectors * range_vectors.adjoint();
  const double xn = operator_norm(x);
  if (operator_norm(x * (identity(d) - p)) > tol.psd_tol * scale_of(xn)) return inf;
  if (range_vectors.cols() == 0) return 0.0;

  // H^{+/2} restricted to range(H), expressed in the eigenbasis.
  const CMatrix w = range_vectors * range_values.cwiseSqrt().cwiseInverse().asDiagonal();
  const CMatrix xw = x * w;
  return std::max(0.0, lambda_max(hermitian_part(xw.adjoint() * xw)));
}

inline ConeMembershipReport cone_membership(const CMatrix& a, const TolerancePolicy& tol = {}) {
  require_square(a);
  require_finite(a);
  const Eigen::Index d = a.rows();
  ConeMembershipReport r;
  r.margins.one_minus_a = operator_norm(identity(d) - a);
  r.margins.one_minus_2a = operator_norm(identity(d) - 2.0 * a);
  const CMatrix h = hermitian_part(a) * 2.0;
  r.margins.re_min = lambda_min(h);
  r.in_F = r.margins.one_minus_a <= 1.0 + tol.norm_tol;
  r.in_half_F = r.margins.one_minus_2a <= 1.0 + tol.norm_tol;
  r.accretive = r.margins.re_min >= -tol.psd_tol * scale_of(operator_norm(h));
  r.c_min = min_c_constant(a, tol);
  r.margins.c_min = r.c_min;
  r.in_c = std::isfinite(r.c_min);
  return r;
}

/// ½cos(arg z) + ½ - |z|; nonnegative exactly on the cardioid.
inline double cardioid_margin(Complex z) {
  if (z == Complex(0.0)) return 1.0;
  return 0.5 * std::cos(std::arg(z)) + 0.5 - std::abs(z);
}

inline bool in_cardioid(Complex z, const TolerancePolicy& tol = {}) {
  return cardioid_margin(z) >= -tol.norm_tol;
}

/// |1 - 2z| ≤ 1.
inline bool scalar_half_F(Complex z) { return std::abs(1.0 - 2.0 * z) <= 1.0; }

}  // namespace accretive
