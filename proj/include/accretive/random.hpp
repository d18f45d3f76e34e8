#pragma once

// Counter-based random streams and the matrix generators used by the
// property checks.
//
// A stream is keyed by (seed, property id, trial index): the key is folded
// through SplitMix64 and the stream itself is SplitMix64 over a counter, so
// any trial can be replayed on its own. Normals use Box–Muller with libm
// log/sqrt/cos/sin only; no <random> distributions are involved because
// their output differs between standard libraries.

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

#include "accretive/matcore.hpp"

namespace accretive {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xCBF29CE484222325ULL) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

class Rng {
 public:
  explicit Rng(std::uint64_t key) : key_(splitmix64(key)) {}

  static Rng stream(std::uint64_t seed, std::string_view property_id, std::uint64_t trial) {
    std::uint64_t k = splitmix64(seed);
    k = splitmix64(k ^ fnv1a(property_id));
    k = splitmix64(k ^ trial);
    return Rng(k);
  }

  std::uint64_t next_u64() { return splitmix64(key_ + 0x632BE59BD9B4E019ULL * ++counter_); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
  }

  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  /// Complex standard normal: E|z|² = 1.
  Complex cnormal() { return Complex(normal(), normal()) * std::sqrt(0.5); }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

inline CMatrix random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = rng.cnormal();
  return m;
}

inline CMatrix random_gaussian(Eigen::Index d, Rng& rng) { return random_gaussian(d, d, rng); }

inline CVector random_unit_vector(Eigen::Index d, Rng& rng) {
  CVector v = random_gaussian(d, 1, rng);
  return v / v.norm();
}

inline CMatrix random_hermitian(Eigen::Index d, Rng& rng) { return hermitian_part(random_gaussian(d, rng)); }

/// Haar-distributed unitary (QR of a Gaussian with the phase correction).
inline CMatrix random_unitary(Eigen::Index d, Rng& rng) {
  Eigen::HouseholderQR<CMatrix> qr(random_gaussian(d, rng));
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR();
  for (Eigen::Index j = 0; j < d; ++j) {
    const double m = std::abs(r(j, j));
    if (m > 0.0) q.col(j) *= r(j, j) / m;
  }
  return q;
}

/// Contraction with ‖c‖ drawn uniformly from [lo, hi].
inline CMatrix random_contraction(Eigen::Index d, Rng& rng, double lo = 0.0, double hi = 1.0) {
  const CMatrix g = random_gaussian(d, rng);
  const double n = operator_norm(g);
  return g * (rng.uniform(lo, hi) / (n > 0.0 ? n : 1.0));
}

/// (1 - c)/2 for a random contraction c: an element of ½𝔉.
inline CMatrix random_half_f(Eigen::Index d, Rng& rng, double max_norm = 1.0) {
  return (identity(d) - random_contraction(d, rng, 0.0, max_norm)) * 0.5;
}

/// Gaussian shifted to be accretive; with probability 1/2 the Hermitian part
/// is left singular (boundary of the cone).
inline CMatrix random_accretive(Eigen::Index d, Rng& rng) {
  const CMatrix g = random_gaussian(d, rng);
  double shift = -real_part_min(g);
  if (rng.uniform() < 0.5) shift += rng.uniform(0.0, 1.0);
  return g + shift * identity(d);
}

/// Accretive matrix of the given rank: U (A ⊕ 0) U* with A an invertible
/// accretive r×r block whose Hermitian part is at least δ·I, δ ∈ [0.1, 1].
inline CMatrix random_accretive_rank(Eigen::Index d, Eigen::Index rank, Rng& rng) {
  CMatrix block = CMatrix::Zero(d, d);
  if (rank > 0) {
    const CMatrix g = random_gaussian(rank, rng);
    block.topLeftCorner(rank, rank) = g + (rng.uniform(0.1, 1.0) - real_part_min(g)) * identity(rank);
  }
  const CMatrix u = random_unitary(d, rng);
  return u * block * u.adjoint();
}

/// p(M) for coefficients c_0..c_k (Horner).
inline CMatrix polynomial_of(const CMatrix& m, const std::vector<Complex>& c) {
  CMatrix acc = CMatrix::Zero(m.rows(), m.cols());
  for (std::size_t k = c.size(); k-- > 0;) acc = acc * m + c[k] * identity(m.rows());
  return acc;
}

enum class FamilyTarget { Contraction, HalfF, Accretive };

/// n mutually commuting matrices, each a polynomial in one Gaussian M (degree
/// drawn from {1, …, d}) moved into the target set by scaling (contractions),
/// a ↦ (1 - c)/2 (½𝔉) or a shift by λI with λ = max(0, -λ_min(Re a))
/// (accretive). Commutators vanish up to rounding in the products.
inline std::vector<CMatrix> gen_commuting_family(Eigen::Index d, int n, FamilyTarget target, Rng& rng) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "family size must be at least 1");
  const CMatrix m = random_gaussian(d, rng);
  std::vector<CMatrix> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    const int deg = rng.uniform_int(1, static_cast<int>(std::max<Eigen::Index>(d, 1)));
    std::vector<Complex> c(deg + 1);
    for (auto& v : c) v = rng.cnormal();
    CMatrix p = polynomial_of(m, c);
    switch (target) {
      case FamilyTarget::Contraction:
      case FamilyTarget::HalfF: {
        const double nrm = operator_norm(p);
        if (nrm > 0.0) p *= rng.uniform(0.0, 1.0) / nrm;
        if (target == FamilyTarget::HalfF) p = (identity(d) - p) * 0.5;
        break;
      }
      case FamilyTarget::Accretive: {
        double shift = std::max(0.0, -real_part_min(p));
        if (rng.uniform() < 0.5) shift += rng.uniform(0.0, 1.0);
        p += shift * identity(d);
        break;
      }
    }
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace accretive
