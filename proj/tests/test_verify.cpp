#include <gtest/gtest.h>

#include <cstdlib>
#include <numbers>
#include <set>

#include "accretive/accretive.hpp"

using namespace accretive;

#ifndef ACCRETIVE_DATA_DIR
#define ACCRETIVE_DATA_DIR "data"
#endif

namespace {

std::string data_file(const std::string& name) { return std::string(ACCRETIVE_DATA_DIR) + "/" + name; }

double dist(const CMatrix& a, const CMatrix& b) { return operator_norm(a - b); }

TrialConfig small_config(int trials, std::vector<std::string> ids) {
  TrialConfig cfg;
  cfg.trials = trials;
  cfg.property_ids = std::move(ids);
  return cfg;
}

const CheckSummary* find_check(const PropertyReport& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

}  // namespace

// ---- random ------------------------------------------------------------------

TEST(Random, StreamsAreReproducibleAndDistinct) {
  Rng a = Rng::stream(42, "P4", 3), b = Rng::stream(42, "P4", 3);
  Rng c = Rng::stream(42, "P4", 4), d = Rng::stream(42, "P5", 3), e = Rng::stream(43, "P4", 3);
  const std::uint64_t x = a.next_u64();
  EXPECT_EQ(x, b.next_u64());
  EXPECT_NE(x, c.next_u64());
  EXPECT_NE(x, d.next_u64());
  EXPECT_NE(x, e.next_u64());
}

TEST(Random, SplitMixReferenceValues) {
  // SplitMix64 finaliser applied to 0 + golden gamma.
  EXPECT_EQ(splitmix64(0), 0xE220A8397B1DCDAFULL);
  // FNV-1a of the empty string is the offset basis, of "a" a fixed value.
  EXPECT_EQ(fnv1a(""), 0xCBF29CE484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xAF63DC4C8601EC8CULL);
}

TEST(Random, UniformMoments) {
  Rng rng(5);
  double s = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    s += u;
    s2 += u * u;
  }
  EXPECT_NEAR(s / n, 0.5, 5e-3);
  EXPECT_NEAR(s2 / n - 0.25, 1.0 / 12.0, 5e-3);
  double c2 = 0.0;
  for (int i = 0; i < n; ++i) c2 += std::norm(rng.cnormal());
  EXPECT_NEAR(c2 / n, 1.0, 1e-2);
}

TEST(Random, FamiliesHitTheirTargets) {
  for (int t = 0; t < 200; ++t) {
    Rng rng = Rng::stream(6, "family", t);
    const Eigen::Index d = 1 + t % 6;
    const int n = 2 + t % 3;
    for (auto target : {FamilyTarget::Contraction, FamilyTarget::HalfF, FamilyTarget::Accretive}) {
      const auto fam = gen_commuting_family(d, n, target, rng);
      ASSERT_EQ(fam.size(), static_cast<std::size_t>(n));
      for (std::size_t i = 0; i < fam.size(); ++i) {
        for (std::size_t j = i + 1; j < fam.size(); ++j) {
          const double scale = scale_of(operator_norm(fam[i]) * operator_norm(fam[j]));
          EXPECT_LE(operator_norm(fam[i] * fam[j] - fam[j] * fam[i]), 1e-12 * scale);
        }
        switch (target) {
          case FamilyTarget::Contraction: EXPECT_LE(operator_norm(fam[i]), 1.0 + 1e-14); break;
          case FamilyTarget::HalfF: EXPECT_LE(operator_norm(identity(d) - 2.0 * fam[i]), 1.0 + 1e-14); break;
          case FamilyTarget::Accretive:
            EXPECT_GE(real_part_min(fam[i]), -1e-12 * scale_of(operator_norm(fam[i])));
            break;
        }
      }
    }
  }
}

TEST(Random, SmallFamilyExamples) {
  Rng rng(7);
  const auto scalars = gen_commuting_family(1, 2, FamilyTarget::HalfF, rng);
  for (const auto& z : scalars) EXPECT_LE(std::abs(1.0 - 2.0 * z(0, 0)), 1.0 + 1e-15);
  const auto contractions = gen_commuting_family(2, 2, FamilyTarget::Contraction, rng);
  EXPECT_TRUE(commutes(contractions[0], contractions[1]));
}

TEST(Random, RankAndUnitaryGenerators) {
  Rng rng(8);
  const CMatrix u = random_unitary(5, rng);
  EXPECT_LT(dist(u.adjoint() * u, identity(5)), 1e-13);
  const CMatrix x = random_accretive_rank(5, 2, rng);
  Eigen::JacobiSVD<CMatrix> svd(x);
  EXPECT_GT(svd.singularValues()(1), 1e-6);
  EXPECT_LT(svd.singularValues()(2), 1e-12);
  EXPECT_GE(real_part_min(x), -1e-12);
}

// ---- report ------------------------------------------------------------------

TEST(Report, MarginClassification) {
  EXPECT_EQ(classify_margin(0.0, 1e-8), Status::Pass);
  EXPECT_EQ(classify_margin(-1e-8, 1e-8), Status::Pass);
  EXPECT_EQ(classify_margin(-5e-8, 1e-8), Status::Inconclusive);
  EXPECT_EQ(classify_margin(-1e-7, 1e-8), Status::Inconclusive);
  EXPECT_EQ(classify_margin(-1.01e-7, 1e-8), Status::Fail);
  EXPECT_EQ(classify_margin(std::nan(""), 1e-8), Status::Fail);

  PropertyReport r;
  r.record("a", 1e-8, 1.0, "x");
  r.finalize();
  EXPECT_EQ(r.status, Status::Pass);
  r.record("a", 1e-8, -5e-8, "y");
  r.finalize();
  EXPECT_EQ(r.status, Status::Inconclusive);
  r.record("b", 1e-8, -1.0, "z");
  r.finalize();
  EXPECT_EQ(r.status, Status::Fail);
  ASSERT_EQ(r.failures.size(), 1u);
  EXPECT_EQ(r.failures[0].check, "b");
  EXPECT_EQ(r.worst_margin, -1.0);
}

// ---- json_io -----------------------------------------------------------------

TEST(JsonIo, MatrixRoundTripIsExact) {
  Rng rng(9);
  const CMatrix a = random_gaussian(4, rng);
  const Json j = parse_json_text(dump17(matrix_to_json(a)));
  EXPECT_EQ(matrix_from_json(j), a);
}

TEST(JsonIo, MatrixFormat) {
  const CMatrix m = matrix_from_json(parse_json_text(R"({"dim":2,"re":[[1,0],[0,0]],"im":[[0,1],[1,0]]})"));
  EXPECT_EQ(m(0, 1), Complex(0, 1));
  EXPECT_EQ(m(1, 0), Complex(0, 1));
  EXPECT_EQ(m(0, 0), Complex(1, 0));
}

TEST(JsonIo, MalformedInputsAreRejected) {
  for (const char* bad : {R"({"dim":2,"re":[[1,0]],"im":[[0,0],[0,0]]})", R"({"re":[[1]],"im":[[0]]})",
                          R"({"dim":1,"re":[["x"]],"im":[[0]]})", R"([1,2,3])", R"({"dim":0,"re":[],"im":[]})"}) {
    EXPECT_THROW(matrix_from_json(parse_json_text(bad)), Error) << bad;
  }
  EXPECT_THROW(parse_json_text("{not json"), Error);
  EXPECT_THROW(tolerances_from_json(parse_json_text(R"({"psd":1e-9})")), Error);
  EXPECT_THROW(tolerances_from_json(parse_json_text(R"({"psd_tol":-1})")), Error);
  EXPECT_THROW(trial_config_from_json(parse_json_text(R"({"seed":-1})")), Error);
  EXPECT_THROW(trial_config_from_json(parse_json_text(R"({"bogus":1})")), Error);
}

TEST(JsonIo, Dump17FormatsSpecialValues) {
  Json j;
  j["a"] = 0.1;
  j["b"] = std::numeric_limits<double>::infinity();
  j["c"] = -std::numeric_limits<double>::infinity();
  const std::string s = dump17(j, -1);
  EXPECT_NE(s.find("0.10000000000000001"), std::string::npos);
  EXPECT_NE(s.find("\"inf\""), std::string::npos);
  EXPECT_NE(s.find("\"-inf\""), std::string::npos);
}

TEST(JsonIo, TolerancesAndConfig) {
  const TolerancePolicy t = tolerances_from_json(parse_json_text(R"({"psd_tol":1e-7})"));
  EXPECT_EQ(t.psd_tol, 1e-7);
  EXPECT_EQ(t.norm_tol, 1e-10);
  const TrialConfig cfg = trial_config_from_json(read_json_file(data_file("config_smoke.json")));
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_EQ(cfg.trials, 5);
  EXPECT_EQ(cfg.dims, (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(cfg.property_ids.size(), 4u);
  const TrialConfig back = trial_config_from_json(trial_config_to_json(cfg));
  EXPECT_EQ(dump17(trial_config_to_json(back)), dump17(trial_config_to_json(cfg)));
}

TEST(JsonIo, ToleranceOverrideFromEnvironment) {
  ::setenv(kTolOverrideEnv, data_file("tolerances_loose.json").c_str(), 1);
  const TolerancePolicy t = tolerances_from_env();
  ::unsetenv(kTolOverrideEnv);
  EXPECT_EQ(t.psd_tol, 1e-8);
  EXPECT_EQ(t.norm_tol, 1e-9);
  EXPECT_EQ(t.angle_tol, 1e-7);
  EXPECT_EQ(tolerances_from_env().psd_tol, 1e-9);
}

TEST(JsonIo, MapAndSeriesRoundTrip) {
  const SubspaceMap t = map_from_json(read_json_file(data_file("map_transpose.json")));
  EXPECT_FALSE(is_cp(choi(t)));
  const SubspaceMap back = map_from_json(parse_json_text(dump17(map_to_json(t))));
  Rng rng(10);
  const CMatrix x = random_gaussian(2, rng);
  EXPECT_EQ(back.apply(x), t.apply(x));
  EXPECT_LT(dist(t.apply(x), x.transpose()), 1e-15);

  const DiskFunction h = DiskFunction::half_shift_power(0.5, 20);
  const DiskFunction h2 = disk_function_from_json(parse_json_text(dump17(disk_function_to_json(h))));
  for (std::size_t k = 0; k < 20; ++k) EXPECT_EQ(h.coeff(k), h2.coeff(k));
}

// ---- verify: fixtures --------------------------------------------------------

TEST(Verify, CounterexampleFixture) {
  const Json j = read_json_file(data_file("p11_counterexample.json"));
  const CMatrix x = matrix_from_json(j["x0"]);
  EXPECT_LT(dist(x, counterexample_matrix()), 1e-16);
  EXPECT_NEAR(operator_norm(x), 1.0, 1e-15);
  EXPECT_TRUE(is_accretive(x));

  const int pinned = j["pinned_n"].get<int>(), first = j["first_negative_n"].get<int>();
  EXPECT_EQ(pinned, kCounterexampleN);
  EXPECT_EQ(first, kCounterexampleFirstN);
  double worst = INFINITY;
  int arg = 0;
  for (int n = 1; n <= 16; ++n) {
    const double m = root_step_margin(x, n, {});
    if (n < first) EXPECT_GE(m, 0.0) << n;
    if (n >= first) EXPECT_LT(m, 0.0) << n;
    if (m < worst) worst = m, arg = n;
  }
  EXPECT_EQ(arg, pinned);
  EXPECT_NEAR(worst, j["lambda_min_at_pinned_n"].get<double>(), 1e-12);
  EXPECT_LT(worst, -kCounterexampleThreshold);
}

TEST(Verify, NoncommutingWitnessFixture) {
  const Json j = read_json_file(data_file("p15_witness.json"));
  const CMatrix a = matrix_from_json(j["a"]), b = matrix_from_json(j["b"]);
  const NoncommutingPair w = frozen_witness();
  EXPECT_EQ(a, w.a);
  EXPECT_EQ(b, w.b);
  EXPECT_EQ(j["seed"].get<std::uint64_t>(), kWitnessSeed);
  EXPECT_LE(operator_norm(identity(2) - 2.0 * a), 1.0 + 1e-12);
  EXPECT_LE(operator_norm(identity(2) - 2.0 * b), 1.0 + 1e-12);
  EXPECT_GT(operator_norm(a * b - b * a), 1e-3);
  const CMatrix p = principal_power(a, 0.5).value * principal_power(b, 0.5).value;
  const double m = real_part_min(p);
  EXPECT_LT(m, -kWitnessThreshold);
  EXPECT_NEAR(m, j["margin"].get<double>(), 1e-12);

  const auto again = search_noncommuting_witness(kWitnessSeed, 1, {});
  ASSERT_TRUE(again.has_value());
  EXPECT_EQ(again->a, a);
  EXPECT_EQ(again->b, b);
}

// ---- verify: properties ------------------------------------------------------

TEST(Verify, EveryPropertyPassesOnASmokeRun) {
  TrialConfig cfg = small_config(20, {});
  const auto reports = run_suite(cfg);
  ASSERT_EQ(reports.size(), 17u);
  for (const auto& r : reports) {
    EXPECT_EQ(r.status, Status::Pass) << r.property_id << " worst margin " << r.worst_margin;
    EXPECT_GT(r.trials_run, 0) << r.property_id;
    EXPECT_FALSE(r.checks.empty()) << r.property_id;
  }
}

TEST(Verify, SuiteExamples) {
  EXPECT_EQ(run_suite(small_config(1, {})).size(), 17u);
  EXPECT_EQ(run_suite(small_config(3, {"P1", "P2"})).size(), 2u);
  EXPECT_THROW(run_suite(small_config(3, {"P99"})), Error);
  EXPECT_THROW(run_property("P0", small_config(1, {})), Error);
  EXPECT_THROW(run_suite(small_config(0, {})), Error);
}

TEST(Verify, P4PassesWithRequestedMargin) {
  TrialConfig cfg = small_config(500, {});
  const auto r = run_property("P4", cfg);
  EXPECT_EQ(r.status, Status::Pass);
  EXPECT_GE(r.worst_margin, -1e-8);
  EXPECT_EQ(r.trials_run, 500);
}

TEST(Verify, P11ConfirmsCounterexample) {
  const auto r = run_property("P11", small_config(20, {}));
  EXPECT_EQ(r.status, Status::Pass);
  const auto* c = find_check(r, "counterexample_pinned_n");
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->violations, 0);
  EXPECT_GT(c->worst_margin, 0.0);
}

TEST(Verify, P15FindsWitnessAtSeven) {
  TrialConfig cfg = small_config(1, {});
  cfg.seed = kWitnessSeed;
  const auto r = run_property("P15", cfg);
  EXPECT_EQ(r.status, Status::Pass);
  ASSERT_TRUE(r.witness.has_value());
  for (const char* name : {"fixture_in_half_F", "fixture_noncommuting", "fixture_witness", "fixture_reproduces",
                           "search_witness"}) {
    const auto* c = find_check(r, name);
    ASSERT_NE(c, nullptr) << name;
    EXPECT_EQ(c->violations + c->inconclusive, 0) << name;
  }
}

TEST(Verify, P14NonCpMapsYieldWitnesses) {
  const auto r = run_property("P14", small_config(24, {}));
  EXPECT_EQ(r.status, Status::Pass);
  const auto* c = find_check(r, "noncp_witness");
  ASSERT_NE(c, nullptr);
  EXPECT_GT(c->evaluated, 0);
  EXPECT_EQ(c->inconclusive, 0);
}

TEST(Verify, CorpusHasTheDocumentedSplit) {
  int cp = 0, total = 0;
  std::set<int> dims;
  for (int i = 0; i < 200; ++i) {
    const CorpusMap m = corpus_map(42, i);
    cp += m.kind == CorpusKind::CP;
    ++total;
    dims.insert(m.d);
    EXPECT_EQ(is_cp(choi(m.map)), m.kind == CorpusKind::CP) << i;
  }
  EXPECT_EQ(cp, 100);
  EXPECT_EQ(dims, (std::set<int>{2, 3}));
}

TEST(Verify, BrokenClaimIsDetected) {
  // Sanity check that a margin pipeline reports a false claim: the
  // monotonicity margin evaluated on a non-½𝔉 input must go negative.
  EXPECT_LT(root_step_margin(counterexample_matrix(), 16, {}), 0.0);
  PropertyReport r;
  r.record("broken", kRootTol, root_step_margin(counterexample_matrix(), 16, {}), "x");
  r.finalize();
  EXPECT_EQ(r.status, Status::Fail);
}

TEST(Verify, ReportsAreByteIdenticalAcrossRuns) {
  const TrialConfig cfg = small_config(5, {});
  auto render = [&] {
    Json arr = Json::array();
    for (const auto& r : run_suite(cfg)) arr.push_back(report_to_json(r, cfg.seed));
    return dump17(arr);
  };
  const std::string a = render(), b = render();
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.find("elapsed"), std::string::npos);
}

TEST(Verify, DifferentSeedsGiveDifferentReports) {
  TrialConfig a = small_config(5, {"P4"}), b = a;
  b.seed = 43;
  EXPECT_NE(dump17(report_to_json(run_property("P4", a), a.seed)), dump17(report_to_json(run_property("P4", b), b.seed)));
}
