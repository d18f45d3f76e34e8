#pragma once

// Numerical range W(T) = {v*Tv : |v| = 1}: sampled boundary, avoidance of the
// strictly negative real axis, and sector fitting.
//
// Every question about W(T) reduces to extreme eigenvalues of Hermitian
// pencils: max over W of Re(e^{iθ}z) is λ_max(Re(e^{iθ}T)), and
// max over W of Im(e^{-iα}z) is λ_max(Im(e^{-iα}T)).

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <vector>

#include "accretive/matcore.hpp"

namespace accretive {

/// e^{iθ} S_φ = {0} ∪ {z : |arg(z e^{-iθ})| ≤ φ}.
struct Sector {
  double theta = 0.0;
  double phi = 0.0;

  bool contains(Complex z, double angle_tol = 0.0, double zero_radius = 0.0) const {
    if (std::abs(z) <= zero_radius) return true;
    return std::abs(std::arg(z * std::polar(1.0, -theta))) <= phi + angle_tol;
  }

  // Half-angle of the smallest sector centred on the positive axis that
  // contains this one.
  double symmetric_half_angle() const { return std::abs(theta) + phi; }
};

struct NumericalRangeBoundary {
  std::vector<double> thetas;
  std::vector<Complex> points;
  std::vector<double> support_values;
  int n_angles = 0;
};

inline constexpr int kDefaultAngles = 720;

namespace detail {

struct TopEigenpair {
  double value;
  CVector vector;
};

inline TopEigenpair top_eigenpair(const CMatrix& h) {
  if (h.rows() == 1) return {h(0, 0).real(), CVector::Ones(1)};
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const auto last = h.rows() - 1;
  return {es.eigenvalues()(last), es.eigenvectors().col(last)};
}

inline CMatrix rotated_real_part(const CMatrix& t, double angle) {
  return hermitian_part(std::polar(1.0, angle) * t);
}

// max over W(t) of Im(e^{-iα} z).
inline double max_imag_rotated(const CMatrix& t, double alpha) {
  return lambda_max(skew_part(std::polar(1.0, -alpha) * t));
}

// Smallest α at or above `estimate` with max Im(e^{-iα}W) ≤ slack. `estimate`
// is the argument of a sampled point of W of modulus `radius`.
inline double upper_argument(const CMatrix& t, double estimate, double radius, double slack) {
  double below = estimate - std::min(0.5, 4.0 * slack / std::max(radius, 1e-300) + 1e-13);
  for (int k = 0; k < 8 && max_imag_rotated(t, below) <= slack; ++k) {
    below -= std::min(0.5, (estimate - below));
  }
  if (max_imag_rotated(t, below) <= slack) return estimate;

  double step = 1e-7;
  double prev = below;
  double above = estimate + step;
  while (max_imag_rotated(t, above) > slack) {
    prev = above;
    step *= 4.0;
    if (step > kPi) return estimate + kPi;
    above = estimate + step;
  }
  double lo = prev, hi = above;
  for (int it = 0; it < 64 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (max_imag_rotated(t, mid) > slack) lo = mid; else hi = mid;
  }
  return hi;
}

}  // namespace detail

/// Samples the boundary of W(T): for each θ on a uniform grid of [0, 2π) the
/// top eigenvector v of Re(e^{iθ}T) gives the extremal point v*Tv.
inline NumericalRangeBoundary boundary(const CMatrix& t, int n_angles = kDefaultAngles) {
  require_square(t);
  if (n_angles < 8) throw Error(ErrorKind::InvalidArgument, "n_angles must be at least 8");
  NumericalRangeBoundary out;
  out.n_angles = n_angles;
  out.thetas.reserve(n_angles);
  out.points.reserve(n_angles);
  out.support_values.reserve(n_angles);
  for (int k = 0; k < n_angles; ++k) {
    const double theta = 2.0 * kPi * k / n_angles;
    out.thetas.push_back(theta);
    if (t.rows() == 1) {
      out.points.push_back(t(0, 0));
      out.support_values.push_back((std::polar(1.0, theta) * t(0, 0)).real());
      continue;
    }
    auto top = detail::top_eigenpair(detail::rotated_real_part(t, theta));
    out.points.push_back(top.vector.dot(t * top.vector));
    out.support_values.push_back(top.value);
  }
  return out;
}

/// CSV rows "theta,re,im,support_value" with a header row.
inline void write_boundary_csv(std::ostream& os, const NumericalRangeBoundary& b) {
  const auto old = os.precision(17);
  os << "theta,re,im,support_value\n";
  for (std::size_t k = 0; k < b.points.size(); ++k) {
    os << b.thetas[k] << ',' << b.points[k].real() << ',' << b.points[k].imag() << ','
       << b.support_values[k] << '\n';
  }
  os.precision(old);
}

/// Radius below which boundary points count as the origin.
inline double zero_radius(const CMatrix& t, const TolerancePolicy& tol) {
  return tol.psd_tol * scale_of(operator_norm(t));
}

/// True iff W(T) misses the ray (-∞, -δ], δ = psd_tol·max(1, ‖T‖).
///
/// Two certificates are combined. A separating direction φ ∈ [-π/2, π/2]
/// with min Re(e^{iφ}W) + δ cos φ > 0 proves avoidance; a sampled boundary
/// polygon (an inner approximation of W) crossing the ray proves intrusion.
inline bool avoids_negative_reals(const CMatrix& t, const TolerancePolicy& tol = {}) {
  require_square(t);
  const double delta = zero_radius(t, tol);

  auto separation = [&](double phi) {
    return lambda_min(detail::rotated_real_part(t, phi)) + delta * std::cos(phi);
  };

  if (separation(0.0) > 0.0) return true;

  constexpr int kGrid = 64;
  std::vector<double> values(kGrid + 1);
  std::vector<Complex> polygon;
  polygon.reserve(2 * kGrid + 2);
  bool separated = false;
  for (int k = 0; k <= kGrid; ++k) {
    const double phi = -kPi / 2 + kPi * k / kGrid;
    values[k] = separation(phi);
    if (values[k] > 0.0) separated = true;
  }

  if (!separated) {
    // Refine around the three best grid angles.
    std::vector<int> order(kGrid + 1);
    for (int k = 0; k <= kGrid; ++k) order[k] = k;
    std::partial_sort(order.begin(), order.begin() + 3, order.end(),
                      [&](int a, int b) { return values[a] > values[b]; });
    const double h = kPi / kGrid;
    for (int c = 0; c < 3 && !separated; ++c) {
      double lo = -kPi / 2 + h * (order[c] - 1), hi = -kPi / 2 + h * (order[c] + 1);
      lo = std::max(lo, -kPi / 2);
      hi = std::min(hi, kPi / 2);
      const double g = 0.5 * (std::sqrt(5.0) - 1.0);
      double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
      double f1 = separation(x1), f2 = separation(x2);
      for (int it = 0; it < 60; ++it) {
        if (f1 > 0.0 || f2 > 0.0) { separated = true; break; }
        if (f1 > f2) {
          hi = x2; x2 = x1; f2 = f1; x1 = hi - g * (hi - lo); f1 = separation(x1);
        } else {
          lo = x1; x1 = x2; f1 = f2; x2 = lo + g * (hi - lo); f2 = separation(x2);
        }
      }
    }
  }
  if (!separated) return false;
  if (t.rows() == 1) return true;

  // Hull check: sampled boundary points are points of W; an edge between two
  // of them crossing the real axis left of -δ is an intrusion certificate.
  auto pts = boundary(t, 2 * kGrid).points;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const Complex a = pts[k], b = pts[(k + 1) % pts.size()];
    if (a.imag() == 0.0 && a.real() <= -delta) return false;
    if ((a.imag() < 0.0) != (b.imag() < 0.0) && a.imag() != b.imag()) {
      const double s = a.imag() / (a.imag() - b.imag());
      const double x = a.real() + s * (b.real() - a.real());
      if (x <= -delta) return false;
    }
  }
  return true;
}

/// Minimal sector e^{iθ}S_φ containing W(T) (points within the zero radius
/// treated as the origin). Boundary samples locate the extreme arguments;
/// each is then refined to a tangent ray by bisection on an exact
/// eigenvalue criterion.
inline Sector sector_fit(const CMatrix& t, const TolerancePolicy& tol = {}, int n_angles = 256) {
  require_square(t);
  if (!avoids_negative_reals(t, tol)) {
    throw Error(ErrorKind::NegativeAxisIntrusion, "numerical range meets the negative axis");
  }
  const double radius = zero_radius(t, tol);
  if (t.rows() == 1) {
    const Complex z = t(0, 0);
    if (std::abs(z) <= radius) return {};
    return {std::arg(z), 0.0};
  }

  auto pts = boundary(t, n_angles).points;
  double arg_lo = std::numeric_limits<double>::infinity();
  double arg_hi = -arg_lo;
  double mag_lo = 0.0, mag_hi = 0.0;
  for (const auto& z : pts) {
    const double m = std::abs(z);
    if (m <= radius) continue;
    const double a = std::arg(z);
    if (a < arg_lo) { arg_lo = a; mag_lo = m; }
    if (a > arg_hi) { arg_hi = a; mag_hi = m; }
  }
  if (!std::isfinite(arg_lo)) return {};

  const double hi = detail::upper_argument(t, arg_hi, mag_hi, radius);
  const double lo = -detail::upper_argument(t.conjugate(), -arg_lo, mag_lo, radius);
  Sector s{0.5 * (lo + hi), 0.5 * (hi - lo)};
  if (s.phi < 0.0) s.phi = 0.0;
  return s;
}

/// Re-centres a fitted sector so that |θ| ≤ π/2 while keeping φ ≤ π/2, the
/// normalisation used for rotated products of roots.
inline Sector admissible_sector(Sector s) {
  if (std::abs(s.theta) <= kPi / 2) return s;
  const double lo = s.theta - s.phi, hi = s.theta + s.phi;
  const double c = s.theta > 0 ? kPi / 2 : -kPi / 2;
  return {c, std::max(hi - c, c - lo)};
}

/// W(T) ⊆ e^{iθ}S_φ, up to angle_tol and the zero radius.
inline bool in_sector(const CMatrix& t, const Sector& s, const TolerancePolicy& tol = {}) {
  require_square(t);
  if (s.phi >= kPi) return true;
  const double radius = zero_radius(t, tol);
  if (s.phi + tol.angle_tol <= kPi / 2) {
    // Convex sector: intersection of two half-planes bounded by its edges.
    const double upper = s.theta + s.phi + tol.angle_tol;
    const double lower = s.theta - s.phi - tol.angle_tol;
    if (detail::max_imag_rotated(t, upper) > radius) return false;
    if (-lambda_min(skew_part(std::polar(1.0, -lower) * t)) > radius) return false;
  }
  for (const auto& z : boundary(t, t.rows() == 1 ? 8 : 256).points) {
    if (!s.contains(z, tol.angle_tol, radius)) return false;
  }
  return true;
}

}  // namespace accretive
