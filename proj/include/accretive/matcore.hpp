#pragma once

// Dense complex matrix substrate shared by every other header: the matrix
// type, the tolerance policy, the error type, and the handful of spectral
// primitives (norms, Hermitian parts, PSD and commutation tests).

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace accretive {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

enum class ErrorKind {
  NotHermitian,
  DimensionMismatch,
  NotSquare,
  NonFinite,
  NegativeAxisIntrusion,
  SeriesNotApplicable,
  NonConvergence,
  SpectrumOnCut,
  SingularResolvent,
  NotAContraction,
  NotCommuting,
  NormBoundExceeded,
  NotAccretive,
  ZeroMatrix,
  DomainNotFull,
  NotCP,
  IllDefinedExtension,
  UnknownProperty,
  InvalidArgument,
  InputParseError,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotSquare: return "NotSquare";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NegativeAxisIntrusion: return "NegativeAxisIntrusion";
    case ErrorKind::SeriesNotApplicable: return "SeriesNotApplicable";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::SpectrumOnCut: return "SpectrumOnCut";
    case ErrorKind::SingularResolvent: return "SingularResolvent";
    case ErrorKind::NotAContraction: return "NotAContraction";
    case ErrorKind::NotCommuting: return "NotCommuting";
    case ErrorKind::NormBoundExceeded: return "NormBoundExceeded";
    case ErrorKind::NotAccretive: return "NotAccretive";
    case ErrorKind::ZeroMatrix: return "ZeroMatrix";
    case ErrorKind::DomainNotFull: return "DomainNotFull";
    case ErrorKind::NotCP: return "NotCP";
    case ErrorKind::IllDefinedExtension: return "IllDefinedExtension";
    case ErrorKind::UnknownProperty: return "UnknownProperty";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InputParseError: return "InputParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Slack used by every predicate in the library. Relative tolerances are
/// anchored at max(1, scale).
struct TolerancePolicy {
  double psd_tol = 1e-9;
  double norm_tol = 1e-10;
  double angle_tol = 1e-7;
  double commute_tol = 1e-10;

  void validate() const {
    if (!(psd_tol >= 0 && norm_tol >= 0 && angle_tol >= 0 && commute_tol >= 0)) {
      throw Error(ErrorKind::InvalidArgument, "tolerances must be nonnegative");
    }
  }
};

inline void require_square(const CMatrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorKind::NotSquare, "expected a nonempty square matrix");
  }
}

inline void require_finite(const CMatrix& a) {
  if (!a.allFinite()) throw Error(ErrorKind::NonFinite, "matrix has NaN or Inf entries");
}

inline void require_same_dim(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::to_string(a.rows()) + " vs " + std::to_string(b.rows()));
  }
}

inline CMatrix identity(Eigen::Index d) { return CMatrix::Identity(d, d); }

/// (a + a*)/2, symmetrized so the result is exactly Hermitian.
inline CMatrix hermitian_part(const CMatrix& a) {
  CMatrix h = (a + a.adjoint()) * 0.5;
  for (Eigen::Index i = 0; i < h.rows(); ++i) h(i, i) = Complex(h(i, i).real(), 0.0);
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    for (Eigen::Index j = i + 1; j < h.cols(); ++j) h(j, i) = std::conj(h(i, j));
  return h;
}

/// (a - a*)/(2i); a = hermitian_part(a) + i * skew_part(a).
inline CMatrix skew_part(const CMatrix& a) {
  return hermitian_part((a - a.adjoint()) * Complex(0.0, -0.5));
}

/// Largest singular value.
inline double operator_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  if (a.rows() == 1 && a.cols() == 1) return std::abs(a(0, 0));
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

inline double scale_of(double norm) { return std::max(1.0, norm); }

// Eigenvalues of a matrix already known to be Hermitian (ascending).
inline RVector hermitian_eigenvalues(const CMatrix& h) {
  if (h.rows() == 1) return RVector::Constant(1, h(0, 0).real());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline double lambda_min(const CMatrix& h) { return hermitian_eigenvalues(h)(0); }

inline double lambda_max(const CMatrix& h) {
  RVector ev = hermitian_eigenvalues(h);
  return ev(ev.size() - 1);
}

/// λ_min of the symmetric Hermitian part; the basic accretivity margin.
inline double real_part_min(const CMatrix& a) { return lambda_min(hermitian_part(a)); }

inline bool is_hermitian(const CMatrix& h, const TolerancePolicy& tol) {
  return operator_norm(h - h.adjoint()) <= tol.norm_tol * scale_of(operator_norm(h));
}

inline bool is_psd(const CMatrix& h, const TolerancePolicy& tol = {}) {
  require_square(h);
  const double nrm = operator_norm(h);
  if (operator_norm(h - h.adjoint()) > tol.norm_tol * scale_of(nrm)) {
    throw Error(ErrorKind::NotHermitian, "is_psd needs a Hermitian argument");
  }
  return lambda_min(hermitian_part(h)) >= -tol.psd_tol * scale_of(nrm);
}

/// Accretive: a + a* is positive semidefinite (within psd_tol).
inline bool is_accretive(const CMatrix& a, const TolerancePolicy& tol = {}) {
  return is_psd(hermitian_part(a), tol);
}

inline bool commutes(const CMatrix& a, const CMatrix& b, const TolerancePolicy& tol = {}) {
  require_same_dim(a, b);
  const double comm = operator_norm(a * b - b * a);
  return comm <= tol.commute_tol * scale_of(operator_norm(a) * operator_norm(b));
}

/// Eigenvalues of a general square matrix via the complex Schur form.
inline CVector eigenvalues(const CMatrix& a) {
  if (a.rows() == 1) return CVector::Constant(1, a(0, 0));
  Eigen::ComplexSchur<CMatrix> schur(a, false);
  return schur.matrixT().diagonal();
}

/// Kronecker product a ⊗ b.
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace accretive
