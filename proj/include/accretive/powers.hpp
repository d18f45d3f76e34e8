#pragma once

// Principal fractional powers T^α for matrices whose numerical range avoids
// the strictly negative reals, the principal logarithm, the resolvent
// transform t·a(1 + t·a)^{-1}, and iterated powers.

#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "accretive/matcore.hpp"
#include "accretive/matrix_function.hpp"
#include "accretive/numrange.hpp"

namespace accretive {

enum class PowerAlgorithm {
  SpectralDiagonalization,
  TriangularSchurRecurrence,
  BinomialSeriesHalfF,
};

inline const char* to_string(PowerAlgorithm alg) {
  switch (alg) {
    case PowerAlgorithm::SpectralDiagonalization: return "SpectralDiagonalization";
    case PowerAlgorithm::TriangularSchurRecurrence: return "TriangularSchurRecurrence";
    case PowerAlgorithm::BinomialSeriesHalfF: return "BinomialSeriesHalfF";
  }
  return "Unknown";
}

inline PowerAlgorithm parse_power_algorithm(const std::string& name) {
  if (name == "SpectralDiagonalization" || name == "spectral") return PowerAlgorithm::SpectralDiagonalization;
  if (name == "TriangularSchurRecurrence" || name == "schur") return PowerAlgorithm::TriangularSchurRecurrence;
  if (name == "BinomialSeriesHalfF" || name == "series") return PowerAlgorithm::BinomialSeriesHalfF;
  throw Error(ErrorKind::InvalidArgument, "unknown power algorithm '" + name + "'");
}

struct PowerResult {
  CMatrix value;
  PowerAlgorithm algorithm = PowerAlgorithm::TriangularSchurRecurrence;
  double residual = 0.0;
  double shift_used = 0.0;
};

/// How a (numerically) zero eigenvalue is handled.
///   Deflate:     exact split of the semisimple zero eigenspace, f(0) = 0.
///   Extrapolate: evaluate (T + εI)^α for each shift and eliminate the ε^α
///                and ε terms by extrapolation.
enum class ZeroSpectrumPolicy { Deflate, Extrapolate };

inline ZeroSpectrumPolicy parse_zero_policy(const std::string& name) {
  if (name == "deflate") return ZeroSpectrumPolicy::Deflate;
  if (name == "extrapolate") return ZeroSpectrumPolicy::Extrapolate;
  throw Error(ErrorKind::InvalidArgument, "unknown shift policy '" + name + "'");
}

/// Knobs for the singular-spectrum path and the series route.
struct PowerOptions {
  ZeroSpectrumPolicy zero_policy = ZeroSpectrumPolicy::Deflate;
  std::vector<double> shifts{1e-6, 1e-8, 1e-10};
  int max_terms = 20000;
  double series_tail = 1e-12;
  bool compute_residual = true;
};

namespace detail {

inline CMatrix power_spectral(const CMatrix& t, double alpha, double zero_radius) {
  Eigen::ComplexEigenSolver<CMatrix> es(t);
  const CMatrix& v = es.eigenvectors();
  PowerFunction f(alpha);
  CVector fd(t.rows());
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    const Complex lambda = es.eigenvalues()(i);
    fd(i) = std::abs(lambda) <= zero_radius ? Complex(0.0) : f.value(lambda);
  }
  const RVector sv = Eigen::JacobiSVD<CMatrix>(v).singularValues();
  Eigen::FullPivLU<CMatrix> lu(v);
  if (!(sv(sv.size() - 1) > 1e-12 * sv(0)) || !lu.isInvertible()) {
    throw Error(ErrorKind::NonConvergence, "eigenvector matrix is numerically singular (defective input)");
  }
  // X V = V diag(fd)  =>  X = V diag(fd) V^{-1}
  CMatrix vd = v * fd.asDiagonal();
  return vd * lu.inverse();
}

// x^s = 2^{-s} Σ_k C(s,k) (-1)^k (1-2x)^k for x ∈ ½𝔉, s ∈ (0, 1].
inline CMatrix power_series_half_f(const CMatrix& x, double s, const TolerancePolicy& tol,
                                   const PowerOptions& opt) {
  const Eigen::Index d = x.rows();
  const CMatrix c = identity(d) - 2.0 * x;
  if (operator_norm(c) > 1.0 + tol.norm_tol) {
    throw Error(ErrorKind::SeriesNotApplicable, "input is not in ½𝔉 (‖1 - 2x‖ > 1)");
  }
  CMatrix sum = identity(d);
  CMatrix power = identity(d);
  double b = 1.0;         // C(s,k)(-1)^k
  double abs_head = 0.0;  // Σ_{1≤j≤k} |C(s,j)|
  for (int k = 0; k < opt.max_terms; ++k) {
    b = b * -(s - k) / (k + 1.0);
    power = power * c;
    sum += b * power;
    abs_head += std::abs(b);
    // Σ_{j≥1}|C(s,j)| = 1 for s ∈ (0,1), so the scalar tail is 1 - head;
    // ‖Σ_{j>k+1} b_j c^j‖ ≤ ‖c^{k+1}‖ · scalar tail.
    const double scalar_tail = std::max(0.0, 1.0 - abs_head);
    if (s == 1.0 || power.norm() * scalar_tail * std::pow(2.0, -s) < opt.series_tail) {
      return std::pow(2.0, -s) * sum;
    }
  }
  throw Error(ErrorKind::NonConvergence, "binomial series tail bound not met within max_terms");
}

inline CMatrix power_core(const CMatrix& t, double alpha, PowerAlgorithm alg,
                          const TolerancePolicy& tol, const PowerOptions& opt,
                          double zero_radius = -1.0) {
  if (t.rows() == 1) {
    if (std::abs(t(0, 0)) <= zero_radius) return CMatrix::Zero(1, 1);
    return CMatrix::Constant(1, 1, PowerFunction(alpha).value(t(0, 0)));
  }
  switch (alg) {
    case PowerAlgorithm::SpectralDiagonalization: return power_spectral(t, alpha, zero_radius);
    case PowerAlgorithm::TriangularSchurRecurrence:
      return schur_parlett(t, PowerFunction(alpha), zero_radius);
    case PowerAlgorithm::BinomialSeriesHalfF: return power_series_half_f(t, alpha, tol, opt);
  }
  return {};
}

// Weights w with Σw = 1, Σ w ε^α = 0 and (three shifts) Σ w ε = 0.
inline std::vector<double> extrapolation_weights(const std::vector<double>& eps, double alpha) {
  const std::size_t n = eps.size();
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(0) = 1.0;
  const double e0 = eps.front();
  for (std::size_t j = 0; j < n; ++j) {
    a(0, j) = 1.0;
    if (n > 1) a(1, j) = std::pow(eps[j] / e0, alpha);
    if (n > 2) a(2, j) = eps[j] / e0;
  }
  Eigen::VectorXd w = a.fullPivLu().solve(rhs);
  return {w.data(), w.data() + n};
}

inline CMatrix integer_power(const CMatrix& a, int k) {
  CMatrix out = identity(a.rows());
  for (int i = 0; i < k; ++i) out = out * a;
  return out;
}

}  // namespace detail

/// Principal power T^α, α > 0. Values α > 1 are handled as (T^{α/2^k})^{2^k}.
inline PowerResult principal_power(const CMatrix& t, double alpha,
                                   PowerAlgorithm alg = PowerAlgorithm::TriangularSchurRecurrence,
                                   const TolerancePolicy& tol = {}, const PowerOptions& opt = {}) {
  require_square(t);
  require_finite(t);
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw Error(ErrorKind::InvalidArgument, "exponent must be a positive finite number");
  }
  if (!avoids_negative_reals(t, tol)) {
    throw Error(ErrorKind::NegativeAxisIntrusion, "numerical range contains strictly negative numbers");
  }
  const Eigen::Index d = t.rows();
  PowerResult out;
  out.algorithm = alg;

  if (alpha > 1.0) {
    int k = 0;
    double a = alpha;
    while (a > 1.0) { a *= 0.5; ++k; }
    // The residual reported is that of the base power T^{α/2^k}.
    PowerResult base = principal_power(t, a, alg, tol, opt);
    out.value = base.value;
    for (int i = 0; i < k; ++i) out.value = out.value * out.value;
    out.shift_used = base.shift_used;
    out.residual = base.residual;
    return out;
  }
  if (alpha == 1.0) {
    out.value = t;
    return out;
  }

  const double tnorm = operator_norm(t);
  const double radius = tol.psd_tol * scale_of(tnorm);
  if (tnorm == 0.0) {
    out.value = CMatrix::Zero(d, d);
    return out;
  }

  bool singular = false;
  if (alg != PowerAlgorithm::BinomialSeriesHalfF) {
    const CVector ev = eigenvalues(t);
    for (Eigen::Index i = 0; i < ev.size(); ++i) singular = singular || std::abs(ev(i)) <= radius;
  }

  if (!singular) {
    out.value = detail::power_core(t, alpha, alg, tol, opt);
  } else if (opt.zero_policy == ZeroSpectrumPolicy::Deflate) {
    out.value = detail::power_core(t, alpha, alg, tol, opt, radius);
  } else {
    std::vector<double> eps = opt.shifts;
    if (eps.empty()) throw Error(ErrorKind::InvalidArgument, "shift policy is empty");
    if (alpha > 0.9 && eps.size() > 2) eps.resize(2);
    const auto w = detail::extrapolation_weights(eps, alpha);
    out.value = CMatrix::Zero(d, d);
    for (std::size_t j = 0; j < eps.size(); ++j) {
      out.value += w[j] * detail::power_core(t + eps[j] * identity(d), alpha, alg, tol, opt);
    }
    out.shift_used = *std::min_element(eps.begin(), eps.end());
  }

  if (opt.compute_residual) {
    const double inv = 1.0 / alpha;
    const double k = std::round(inv);
    if (std::abs(inv - k) < 1e-9 && k <= 64) {
      out.residual = operator_norm(detail::integer_power(out.value, static_cast<int>(k)) - t);
    } else {
      PowerOptions inner = opt;
      inner.compute_residual = false;
      const CMatrix rest = principal_power(t, 1.0 - alpha, alg, tol, inner).value;
      out.residual = operator_norm(out.value * rest - t);
    }
  }
  return out;
}

/// Principal logarithm; the spectrum must avoid (-∞, 0].
inline CMatrix principal_log(const CMatrix& t, const TolerancePolicy& tol = {}) {
  require_square(t);
  require_finite(t);
  const double radius = tol.psd_tol * scale_of(operator_norm(t));
  const CVector ev = eigenvalues(t);
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const Complex z = ev(i);
    if (std::abs(z) <= radius || (z.real() < 0.0 && std::abs(z.imag()) <= radius)) {
      throw Error(ErrorKind::SpectrumOnCut, "spectrum meets the branch cut (-inf, 0]");
    }
  }
  return schur_parlett(t, LogFunction());
}

inline CMatrix matrix_exp(const CMatrix& x) { return schur_parlett(x, ExpFunction()); }

/// t·a·(1 + t·a)^{-1}; maps accretive a into ½𝔉 and commutes with a.
inline CMatrix cayley_transform(const CMatrix& a, double t) {
  require_square(a);
  if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "t must be positive");
  const Eigen::Index d = a.rows();
  const CMatrix m = identity(d) + t * a;
  Eigen::PartialPivLU<CMatrix> lu(m);
  if (!(lu.rcond() > 1e-13)) {
    throw Error(ErrorKind::SingularResolvent, "1 + t·a is numerically singular");
  }
  // a and (1 + ta)^{-1} commute, so solving from the left is equivalent.
  return lu.solve(t * a);
}

/// ((T^{α₁})^{α₂})···
inline CMatrix power_chain(const CMatrix& t, const std::vector<double>& alphas,
                           PowerAlgorithm alg = PowerAlgorithm::TriangularSchurRecurrence,
                           const TolerancePolicy& tol = {}) {
  PowerOptions opt;
  opt.compute_residual = false;
  CMatrix v = t;
  for (double a : alphas) {
    if (!(a > 0.0 && a <= 1.0)) throw Error(ErrorKind::InvalidArgument, "chain exponents must lie in (0, 1]");
    v = principal_power(v, a, alg, tol, opt).value;
  }
  return v;
}

}  // namespace accretive
