#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

#include "accretive/accretive.hpp"
#include "oracles.hpp"

using namespace accretive;

namespace {

const double kPhi = std::numbers::phi;

CMatrix m2(Complex a, Complex b, Complex c, Complex d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

CMatrix diag(std::initializer_list<Complex> v) {
  CMatrix m = CMatrix::Zero(v.size(), v.size());
  Eigen::Index i = 0;
  for (Complex z : v) m(i, i) = z, ++i;
  return m;
}

CMatrix scalar(Complex z) { return CMatrix::Constant(1, 1, z); }

CMatrix x0() { return m2(1, kI, kI, 0) / kPhi; }

double dist(const CMatrix& a, const CMatrix& b) { return operator_norm(a - b); }

}  // namespace

// ---- matcore -----------------------------------------------------------------

TEST(Matcore, HermitianPartExamples) {
  EXPECT_LT(dist(hermitian_part(m2(0, 1, 0, 0)), m2(0, 0.5, 0.5, 0)), 1e-15);
  EXPECT_LT(operator_norm(hermitian_part(kI * identity(2))), 1e-15);
  EXPECT_LT(dist(hermitian_part(m2(1, kI, kI, 0)), diag({1, 0})), 1e-15);
}

TEST(Matcore, OperatorNormExamples) {
  EXPECT_NEAR(operator_norm(identity(3)), 1.0, 1e-14);
  EXPECT_NEAR(operator_norm(diag({3, Complex(0, -4)})), 4.0, 1e-14);
  const CMatrix a = m2(1, kI, kI, 0);
  EXPECT_NEAR(operator_norm(a), kPhi, 1e-12);
  EXPECT_NEAR(operator_norm(a), oracle::spectral_norm(a), 1e-12);
}

TEST(Matcore, IsPsdExamples) {
  EXPECT_TRUE(is_psd(diag({0, 2})));
  EXPECT_FALSE(is_psd(m2(0, 1, 1, 0)));
  EXPECT_TRUE(is_psd(hermitian_part(m2(1, kI, kI, 0))));
  EXPECT_THROW(is_psd(m2(0, 1, 0, 0)), Error);
}

TEST(Matcore, CommutesExamples) {
  EXPECT_TRUE(commutes(diag({1, 2}), diag({3, 4})));
  EXPECT_FALSE(commutes(m2(0, 1, 0, 0), m2(0, 0, 1, 0)));
  Rng rng(3);
  const CMatrix m = random_gaussian(4, rng);
  const CMatrix p = polynomial_of(m, {1.0, 2.0, Complex(0, 1)});
  const CMatrix q = polynomial_of(m, {Complex(-1, 1), 0.5});
  EXPECT_TRUE(commutes(p, q));
}

TEST(Matcore, NormSubmultiplicativeAndUnitarilyInvariant) {
  for (int t = 0; t < 200; ++t) {
    Rng rng = Rng::stream(1, "norm", t);
    const Eigen::Index d = 1 + t % 6;
    const CMatrix a = random_gaussian(d, rng), b = random_gaussian(d, rng);
    const CMatrix u = random_unitary(d, rng), v = random_unitary(d, rng);
    EXPECT_LE(operator_norm(a * b), operator_norm(a) * operator_norm(b) + 1e-12);
    EXPECT_NEAR(operator_norm(u * a * v), operator_norm(a), 1e-10);
    EXPECT_LT(dist(hermitian_part(a) + kI * skew_part(a), a), 1e-14 * scale_of(operator_norm(a)));
  }
}

TEST(Matcore, IsPsdAgreesWithPivotedCholesky) {
  int compared = 0;
  for (int t = 0; t < 1000; ++t) {
    Rng rng = Rng::stream(2, "psd", t);
    const Eigen::Index d = 1 + t % 6;
    const Eigen::Index r = rng.uniform_int(1, static_cast<int>(d));
    const CMatrix g = random_gaussian(d, r, rng);
    CMatrix h = g * g.adjoint();
    if (t % 2) h -= rng.uniform(0.0, 1.0) * identity(d);
    h = hermitian_part(h);
    const double lmin = Eigen::SelfAdjointEigenSolver<CMatrix>(h).eigenvalues()(0);
    if (std::abs(lmin) < 1e-6 * scale_of(operator_norm(h))) continue;
    ++compared;
    EXPECT_EQ(is_psd(h), oracle::psd_by_pivoted_cholesky(h, 1e-10)) << "trial " << t;
  }
  EXPECT_GT(compared, 600);
}

TEST(Matcore, KroneckerMatchesDefinition) {
  const CMatrix a = m2(1, 2, 3, 4), b = m2(0, kI, 1, 0);
  const CMatrix k = kron(a, b);
  EXPECT_EQ(k(2, 1), a(1, 0) * b(0, 1));
  EXPECT_EQ(k(3, 2), a(1, 1) * b(1, 0));
}

// ---- numrange ----------------------------------------------------------------

TEST(Numrange, NormalMatrixIsHullOfEigenvalues) {
  const auto b = boundary(diag({0, 1, kI}), 360);
  const std::vector<Complex> tri{0, 1, kI};
  for (const auto& z : b.points) EXPECT_LT(oracle::distance_outside_polygon(tri, z), 1e-9);
  const auto samples = oracle::numerical_range_samples(diag({0, 1, kI}), 100000);
  double worst = 0.0;
  for (const auto& z : samples) worst = std::max(worst, oracle::distance_outside_polygon(b.points, z));
  EXPECT_LT(worst, 1e-3);
  EXPECT_LT(oracle::directed_hausdorff(b.points, tri), 1e-3);
}

TEST(Numrange, NilpotentIsDiskOfRadiusHalf) {
  const auto b = boundary(m2(0, 1, 0, 0), 360);
  for (const auto& z : b.points) EXPECT_NEAR(std::abs(z), 0.5, 1e-12);
  const auto samples = oracle::numerical_range_samples(m2(0, 1, 0, 0), 100000);
  double r = 0.0;
  for (const auto& z : samples) r = std::max(r, std::abs(z));
  EXPECT_LE(r, 0.5 + 1e-12);
  EXPECT_GT(r, 0.5 - 1e-3);
}

TEST(Numrange, ScalarBoundaryIsThePoint) {
  const Complex c(0.3, -2.0);
  for (const auto& z : boundary(scalar(c), 16).points) EXPECT_EQ(z, c);
}

TEST(Numrange, CsvHasHeaderAndRows) {
  std::ostringstream os;
  write_boundary_csv(os, boundary(identity(2), 8));
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "theta,re,im,support_value");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  EXPECT_EQ(rows, 8);
}

TEST(Numrange, AvoidsNegativeRealsExamples) {
  EXPECT_TRUE(avoids_negative_reals(diag({1, kI, -kI})));
  EXPECT_FALSE(avoids_negative_reals(diag({-1, 1})));
  for (int t = 0; t < 100; ++t) {
    Rng rng = Rng::stream(4, "anr", t);
    const Eigen::Index d = 1 + t % 5;
    const CMatrix a = random_half_f(d, rng);
    const Complex b = 0.5 * (1.0 - std::polar(rng.uniform(), rng.uniform(-kPi, kPi)));
    EXPECT_TRUE(avoids_negative_reals(b * a)) << "trial " << t;
  }
}

TEST(Numrange, SectorFitExamples) {
  Sector s = sector_fit(diag({1, std::polar(1.0, kPi / 4)}));
  EXPECT_NEAR(s.theta, kPi / 8, 1e-7);
  EXPECT_NEAR(s.phi, kPi / 8, 1e-7);
  s = sector_fit(identity(2));
  EXPECT_NEAR(s.theta, 0.0, 1e-7);
  EXPECT_NEAR(s.phi, 0.0, 1e-7);
  s = sector_fit(diag({std::polar(1.0, -kPi / 3), std::polar(1.0, kPi / 6)}));
  EXPECT_NEAR(s.theta, -kPi / 12, 1e-7);
  EXPECT_NEAR(s.phi, kPi / 4, 1e-7);
  EXPECT_THROW(sector_fit(diag({-1, 1})), Error);
}

TEST(Numrange, InSectorExamples) {
  EXPECT_TRUE(in_sector(diag({1, 2}), Sector{0, 0}));
  EXPECT_FALSE(in_sector(diag({kI}), Sector{0, kPi / 4}));
  for (int t = 0; t < 40; ++t) {
    Rng rng = Rng::stream(5, "sector", t);
    const auto f = gen_commuting_family(1 + t % 4, 2, FamilyTarget::Accretive, rng);
    const double phi = sector_fit(f[0]).symmetric_half_angle();
    const double psi = sector_fit(f[1]).symmetric_half_angle();
    const CMatrix p = principal_power(f[0], 0.5).value * principal_power(f[1], 0.5).value;
    EXPECT_TRUE(in_sector(p, Sector{0, 0.5 * (phi + psi) + 1e-6})) << "trial " << t;
  }
}

TEST(Numrange, SectorFitAgreesWithSupportFunctionSweep) {
  for (int t = 0; t < 30; ++t) {
    Rng rng = Rng::stream(6, "fit", t);
    const CMatrix a = random_accretive(2 + t % 3, rng) + 0.05 * identity(2 + t % 3);
    const Sector s = sector_fit(a);
    const auto [lo, hi] = oracle::argument_range(a);
    EXPECT_NEAR(s.theta - s.phi, lo, 1e-5) << "trial " << t;
    EXPECT_NEAR(s.theta + s.phi, hi, 1e-5) << "trial " << t;
    for (const auto& z : oracle::numerical_range_samples(a, 5000, t)) {
      EXPECT_TRUE(s.contains(z, 1e-9));
    }
  }
}

TEST(Numrange, InvariantsUnderTranslationScalingAndAccretivity) {
  for (int t = 0; t < 200; ++t) {
    Rng rng = Rng::stream(7, "inv", t);
    const Eigen::Index d = 1 + t % 4;
    const CMatrix a = random_gaussian(d, rng);
    const Complex c = rng.cnormal();
    const auto b0 = boundary(a, 64), b1 = boundary(a + c * identity(d), 64);
    for (std::size_t k = 0; k < b0.points.size(); ++k) EXPECT_LT(std::abs(b1.points[k] - b0.points[k] - c), 1e-10);

    const CMatrix h = hermitian_part(a);
    const double lmin = lambda_min(h);
    if (std::abs(lmin) > 2e-9 * scale_of(operator_norm(a))) {
      EXPECT_EQ(in_sector(a, Sector{0, kPi / 2}), lmin >= 0.0) << "trial " << t;
    }
  }
  for (int t = 0; t < 50; ++t) {
    Rng rng = Rng::stream(8, "scale", t);
    const CMatrix a = random_accretive(2 + t % 3, rng);
    const double r = rng.uniform(0.1, 10.0);
    const Sector s0 = sector_fit(a), s1 = sector_fit(r * a);
    EXPECT_NEAR(s0.theta, s1.theta, 1e-7);
    EXPECT_NEAR(s0.phi, s1.phi, 1e-7);
  }
}

// ---- powers ------------------------------------------------------------------

TEST(Powers, PowerExamples) {
  EXPECT_LT(dist(principal_power(diag({4}), 0.5).value, diag({2})), 1e-14);
  const CMatrix j = m2(1, 1, 0, 1);
  EXPECT_LT(dist(principal_power(j, 0.5).value, m2(1, 0.5, 0, 1)), 1e-14);
  EXPECT_THROW(principal_power(j, 0.5, PowerAlgorithm::SpectralDiagonalization), Error);
  // J/2 lies on the edge of ½𝔉; 1 - J is nilpotent so the series terminates.
  const CMatrix half = principal_power(0.5 * j, 0.5, PowerAlgorithm::BinomialSeriesHalfF).value;
  EXPECT_LT(dist(half, m2(1, 0.5, 0, 1) / std::sqrt(2.0)), 1e-12);
  const CMatrix sq = principal_power(j, 0.5).value;
  EXPECT_LT(dist(sq * sq, j), 1e-14);
  EXPECT_LT(std::abs(principal_power(scalar(-kI), 0.5).value(0, 0) - std::polar(1.0, -kPi / 4)), 1e-15);

  const CMatrix expected = diag({std::polar(1.0, kPi / 4), 0});
  EXPECT_LT(dist(principal_power(diag({kI, 0}), 0.5).value, expected), 1e-12);
  PowerOptions ex;
  ex.zero_policy = ZeroSpectrumPolicy::Extrapolate;
  const PowerResult r = principal_power(diag({kI, 0}), 0.5, PowerAlgorithm::TriangularSchurRecurrence, {}, ex);
  EXPECT_LT(dist(r.value, expected), 1e-6);
  EXPECT_GT(r.shift_used, 0.0);
}

TEST(Powers, ScalarOracle) {
  for (int t = 0; t < 200; ++t) {
    Rng rng = Rng::stream(9, "scalar", t);
    const Complex z = std::polar(rng.uniform(0.01, 5.0), rng.uniform(-0.49 * kPi, 0.49 * kPi));
    const double a = rng.uniform(0.05, 1.0);
    EXPECT_LT(std::abs(principal_power(scalar(z), a).value(0, 0) - std::pow(z, a)), 1e-13 * scale_of(std::abs(z)));
  }
}

TEST(Powers, NegativeAxisRejected) {
  EXPECT_THROW(principal_power(diag({-1, 1}), 0.5), Error);
  EXPECT_THROW(principal_power(identity(2), 0.0), Error);
}

TEST(Powers, RootRaisedToPowerReproducesInput) {
  for (int t = 0; t < 200; ++t) {
    Rng rng = Rng::stream(10, "roots", t);
    const Eigen::Index d = 1 + t % 6;
    const CMatrix a = random_accretive(d, rng);
    const int n = 2 + t % 4;
    const CMatrix r = principal_power(a, 1.0 / n).value;
    CMatrix p = identity(d);
    for (int k = 0; k < n; ++k) p = p * r;
    EXPECT_LT(dist(p, a), 1e-9 * scale_of(operator_norm(a))) << "trial " << t;
    for (const auto& z : oracle::numerical_range_samples(r, 500, t)) {
      EXPECT_LE(std::abs(std::arg(z)), kPi / (2 * n) + 1e-6);
    }
  }
}

TEST(Powers, LogExamples) {
  EXPECT_LT(dist(principal_log(std::numbers::e * identity(2)), identity(2)), 1e-14);
  EXPECT_LT(std::abs(principal_log(diag({kI}))(0, 0) - kI * kPi / 2.0), 1e-15);
  const CMatrix l = principal_log(m2(1, 1, 0, 1));
  EXPECT_LT(dist(l, m2(0, 1, 0, 0)), 1e-14);
  EXPECT_LT(dist(oracle::expm(l), m2(1, 1, 0, 1)), 1e-13);
  EXPECT_THROW(principal_log(diag({-1, 1})), Error);
}

TEST(Powers, LogInvertsExponentialOracle) {
  for (int t = 0; t < 100; ++t) {
    Rng rng = Rng::stream(11, "log", t);
    const CMatrix a = random_accretive(2 + t % 4, rng) + 0.1 * identity(2 + t % 4);
    EXPECT_LT(dist(oracle::expm(principal_log(a)), a), 1e-10 * scale_of(operator_norm(a))) << "trial " << t;
  }
}

TEST(Powers, CayleyExamples) {
  EXPECT_LT(operator_norm(cayley_transform(CMatrix::Zero(2, 2), 3.0)), 1e-15);
  EXPECT_LT(dist(cayley_transform(identity(2), 1.0), 0.5 * identity(2)), 1e-15);
  const Complex c = cayley_transform(diag({kI}), 1.0)(0, 0);
  EXPECT_LT(std::abs(c - Complex(0.5, 0.5)), 1e-15);
  EXPECT_NEAR(std::abs(1.0 - 2.0 * c), 1.0, 1e-15);
  for (int t = 0; t < 100; ++t) {
    Rng rng = Rng::stream(12, "cayley", t);
    const CMatrix a = random_accretive(1 + t % 5, rng);
    const CMatrix c2 = cayley_transform(a, rng.uniform(0.1, 10.0));
    EXPECT_LE(operator_norm(identity(a.rows()) - 2.0 * c2), 1.0 + 1e-10);
  }
}

TEST(Powers, PowerChainExamples) {
  EXPECT_LT(dist(power_chain(diag({16}), {0.5, 0.5}), diag({2})), 1e-14);
  EXPECT_LT(dist(power_chain(identity(3), {0.3, 0.7, 1.0}), identity(3)), 1e-14);
  for (int t = 0; t < 50; ++t) {
    Rng rng = Rng::stream(13, "chain", t);
    const CMatrix a = random_accretive(1 + t % 5, rng);
    EXPECT_LT(dist(power_chain(a, {0.5, 1.0 / 3.0}), principal_power(a, 1.0 / 6.0).value), 1e-8) << "trial " << t;
  }
}

TEST(Powers, AlgorithmsAgreeOnHalfF) {
  for (int t = 0; t < 100; ++t) {
    Rng rng = Rng::stream(14, "algs", t);
    const CMatrix a = random_half_f(1 + t % 5, rng, 0.95);
    const double s = rng.uniform(0.1, 1.0);
    const CMatrix x = principal_power(a, s, PowerAlgorithm::TriangularSchurRecurrence).value;
    EXPECT_LT(dist(principal_power(a, s, PowerAlgorithm::SpectralDiagonalization).value, x), 1e-7);
    EXPECT_LT(dist(principal_power(a, s, PowerAlgorithm::BinomialSeriesHalfF).value, x), 1e-7);
  }
}

TEST(Powers, ExponentAboveOne) {
  Rng rng(15);
  const CMatrix a = random_accretive(3, rng);
  EXPECT_LT(dist(principal_power(a, 2.0).value, a * a), 1e-10 * scale_of(operator_norm(a * a)));
}

// ---- cones -------------------------------------------------------------------

TEST(Cones, MembershipExamples) {
  auto r = cone_membership(CMatrix::Zero(2, 2));
  EXPECT_TRUE(r.in_F && r.in_half_F && r.accretive && r.in_c);
  EXPECT_EQ(r.c_min, 0.0);

  r = cone_membership(scalar(kI));
  EXPECT_TRUE(r.accretive);
  EXPECT_FALSE(r.in_c);
  EXPECT_TRUE(std::isinf(r.c_min));
  EXPECT_FALSE(r.in_F);
  EXPECT_NEAR(r.margins.one_minus_a, std::sqrt(2.0), 1e-15);

  r = cone_membership(x0());
  EXPECT_TRUE(r.accretive);
  EXPECT_FALSE(r.in_half_F);
  EXPECT_NEAR(operator_norm(x0()), 1.0, 1e-15);
}

TEST(Cones, MinCExamples) {
  EXPECT_NEAR(min_c_constant(scalar(1)), 0.5, 1e-15);
  EXPECT_TRUE(std::isinf(min_c_constant(scalar(kI))));
  EXPECT_TRUE(std::isinf(min_c_constant(diag({kI, 1}))));
}

TEST(Cones, MinCIsTheSmallestConstant) {
  for (int t = 0; t < 100; ++t) {
    Rng rng = Rng::stream(16, "minc", t);
    const Eigen::Index d = 1 + t % 4;
    const CMatrix x = random_accretive(d, rng) + 0.05 * identity(d);
    const double c = min_c_constant(x);
    ASSERT_TRUE(std::isfinite(c));
    const CMatrix h = x + x.adjoint(), g = x.adjoint() * x;
    EXPECT_GE(lambda_min(hermitian_part(c * h - g)), -1e-9 * scale_of(c * operator_norm(h)));
    EXPECT_LT(lambda_min(hermitian_part(0.999 * c * h - g)), 0.0);
  }
}

TEST(Cones, CardioidExamples) {
  EXPECT_TRUE(in_cardioid(1.0));
  EXPECT_FALSE(in_cardioid(-0.1));
  EXPECT_TRUE(in_cardioid(Complex(0, 0.25)));
  EXPECT_FALSE(in_cardioid(Complex(0, 0.51)));
}

TEST(Cones, ScalarHalfFExamples) {
  EXPECT_TRUE(scalar_half_F(0.5));
  EXPECT_FALSE(scalar_half_F(1.0 + 1e-6));
  EXPECT_TRUE(scalar_half_F(Complex(0.5, 0.5)));
}

TEST(Cones, CardioidIsTheSetOfSquares) {
  // Polar form of the cardioid, r = (1 + cos θ)/2, evaluated directly.
  std::mt19937_64 g(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100000; ++i) {
    const Complex x = 0.5 * (1.0 - std::polar(std::sqrt(u(g)), 2.0 * kPi * u(g)));
    const Complex y = 0.5 * (1.0 - std::polar(std::sqrt(u(g)), 2.0 * kPi * u(g)));
    for (const Complex z : {x * x, x * y}) {
      const double th = std::arg(z);
      EXPECT_LE(std::abs(z), 0.5 * (1.0 + std::cos(th)) + 1e-12);
    }
  }
  for (int i = 0; i < 2000; ++i) {
    const double th = kPi * (2.0 * u(g) - 1.0);
    const Complex x = std::cos(th / 2) * std::polar(1.0, th / 2);
    EXPECT_NEAR(cardioid_margin(x * x), 0.0, 1e-12);
  }
}

TEST(Cones, FlagChainAndGeneratorRoundTrip) {
  for (int t = 0; t < 300; ++t) {
    Rng rng = Rng::stream(17, "flags", t);
    const Eigen::Index d = 1 + t % 5;
    CMatrix a;
    switch (t % 3) {
      case 0: a = random_half_f(d, rng); break;
      case 1: a = 2.0 * random_half_f(d, rng); break;
      default: a = random_accretive(d, rng); break;
    }
    const auto r = cone_membership(a);
    if (r.in_half_F) EXPECT_TRUE(r.in_F);
    if (r.in_F) EXPECT_TRUE(r.in_c);
    if (r.in_c) EXPECT_TRUE(r.accretive);
    if (t % 3 == 0) {
      EXPECT_TRUE(r.in_half_F);
      EXPECT_LE(operator_norm(identity(d) - 2.0 * a), 1.0 + 1e-12);
    }
  }
}

TEST(Cones, ShiftedAccretiveIsInC) {
  for (int t = 0; t < 100; ++t) {
    Rng rng = Rng::stream(18, "closure", t);
    const Eigen::Index d = 1 + t % 5;
    const CMatrix x = random_accretive_rank(d, rng.uniform_int(1, static_cast<int>(d)), rng);
    for (double eps : {1.0, 0.1, 0.01}) {
      const CMatrix y = x + eps * identity(d);
      EXPECT_TRUE(std::isfinite(min_c_constant(y)));
      const double c = eps / std::pow(operator_norm(y), 2);
      EXPECT_GE(lambda_min(hermitian_part(hermitian_part(y) - c * y.adjoint() * y)), -1e-9 * scale_of(operator_norm(y)));
    }
  }
}
