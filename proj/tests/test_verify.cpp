#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "tracelab/suite.hpp"

using namespace tracelab;

namespace {

VerifyConfig config(int n, std::int64_t q) {
  VerifyConfig c;
  c.n = n;
  c.q = q;
  return c;
}

std::shared_ptr<const MatrixSpace> space(std::int64_t q, int n) {
  auto [p, e] = num::split_prime_power(q);
  return std::make_shared<const MatrixSpace>(make_tower(p, e, n), n);
}

// Every element of G lies in exactly one coset H * rep, H the given subgroup.
void expect_partition(const MatrixSpace& S, const std::vector<Matrix>& reps, const std::vector<Matrix>& H) {
  std::map<Matrix, int> hits;
  for (const auto& r : reps)
    for (const auto& h : H) ++hits[S.mul(h, r)];
  EXPECT_EQ(static_cast<std::int64_t>(hits.size()), S.group_order());
  for (const auto& [g, k] : hits) EXPECT_EQ(k, 1) << g.str();
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::Config;
}

}  // namespace

TEST(Cosets, BorelRepresentativesPartitionTheGroup) {
  for (auto [q, n] : std::vector<std::pair<std::int64_t, int>>{{3, 2}, {4, 2}, {2, 3}}) {
    auto S = space(q, n);
    auto reps = borel_coset_representatives(*S);
    EXPECT_EQ(static_cast<std::int64_t>(reps.size()), S->group_order() / S->unipotent_order());
    expect_partition(*S, reps, S->unipotent_elements());
  }
}

TEST(Cosets, MirabolicRepresentativesPartitionTheGroup) {
  auto S = space(2, 3);
  std::vector<Matrix> uq;
  for (const auto& u : S->unipotent_elements())
    if (u(1, 2) == 0) uq.push_back(u);
  ASSERT_EQ(uq.size(), 4u);
  expect_partition(*S, mirabolic_coset_representatives(*S), uq);
}

TEST(Vanishing, GL2Of3DomainAndCosetCount) {
  auto rep = verify_vanishing(config(2, 3));
  // |G| - |B| = 48 - 12 = 36 elements in 12 cosets of U.
  EXPECT_EQ(rep.cosets, 12);
  EXPECT_EQ(rep.failures, 0);
  EXPECT_EQ(rep.exit_code(), 0);
  EXPECT_NE(rep.statement().find("consistent with vanishing off B"), std::string::npos);
  for (const auto& r : rep.records) EXPECT_EQ(r.exact, "0");
}

TEST(Vanishing, SwapCosetSumIsSumOfPsi) {
  // Oracle: Phi = psi(tr), and tr(u x) runs over F_3 for x the swap.
  auto S = space(3, 2);
  Matrix x({2, {0, 1, 1, 0}});
  CycloValue direct;
  for (const auto& u : S->unipotent_elements()) {
    Matrix ux = S->mul(u, x);
    direct += CycloValue::root(static_cast<std::int64_t>((ux(0, 0) + ux(1, 1)) % 3), 3);
  }
  EXPECT_TRUE(direct.is_zero());
}

TEST(Vanishing, CosetSumIsWellDefined) {
  VerifyConfig cfg = config(3, 2);
  auto phi = build_phi(make_datum<CycloValue>(cfg));
  const auto& S = phi.space();
  const auto us = S.unipotent_elements();
  auto coset_sum = [&](const Matrix& x) {
    CycloValue s;
    for (const auto& u : us) s += phi(S.mul(u, x));
    return s;
  };
  // Use a nonvanishing B-side point so the comparison is not trivially 0 = 0.
  Matrix t = S.identity();
  for (const auto& x : {t, borel_coset_representatives(S)[5]})
    for (std::size_t k = 0; k < us.size(); k += 3) EXPECT_EQ(coset_sum(S.mul(us[k], x)), coset_sum(x));
}

TEST(Vanishing, StandardAndSymmetricSquareData) {
  for (auto [n, q] : std::vector<std::pair<int, std::int64_t>>{{2, 3}, {2, 5}, {3, 2}}) {
    auto rep = verify_vanishing(config(n, q));
    EXPECT_GT(rep.cosets, 0);
    EXPECT_EQ(rep.failures, 0) << n << "," << q;
  }
  VerifyConfig c = config(2, 5);
  c.weights = WeightData::sym2(2).str();
  EXPECT_EQ(verify_vanishing(c).failures, 0);
}

TEST(Vanishing, DeterministicAcrossWorkerCounts) {
  VerifyConfig a = config(3, 2), b = config(3, 2);
  a.workers = 1;
  b.workers = 3;
  auto ra = verify(a), rb = verify(b);
  ASSERT_EQ(ra.records.size(), rb.records.size());
  for (std::size_t i = 0; i < ra.records.size(); ++i) {
    EXPECT_EQ(ra.records[i].representative, rb.records[i].representative);
    EXPECT_EQ(ra.records[i].exact, rb.records[i].exact);
  }
  EXPECT_TRUE(std::is_sorted(ra.records.begin(), ra.records.end(), [](const CosetRecord& x, const CosetRecord& y) {
    return std::tie(x.fingerprint, x.representative) < std::tie(y.fingerprint, y.representative);
  }));
}

TEST(Vanishing, FloatModeBelowTolerance) {
  VerifyConfig c = config(3, 3);
  c.mode = NumericMode::Float;
  auto rep = verify(c);
  EXPECT_EQ(rep.failures, 0);
  EXPECT_GT(rep.tolerance, 0.0);
  EXPECT_LE(rep.max_abs, rep.tolerance);
}

TEST(Vanishing, SamplingCapsCosetCount) {
  VerifyConfig c = config(3, 3);
  c.max_cosets = 25;
  auto rep = verify(c);
  EXPECT_EQ(rep.cosets, 25);
  EXPECT_EQ(rep.failures, 0);
}

TEST(Mirabolic, RankTwoMatchesBorel) {
  VerifyConfig b = config(2, 3), m = config(2, 3);
  m.variant = Variant::Mirabolic;
  auto rb = verify(b), rm = verify(m);
  EXPECT_EQ(rb.cosets, rm.cosets);
  EXPECT_EQ(rm.failures, 0);
}

TEST(Mirabolic, RankThreeOverF2) {
  VerifyConfig c = config(3, 2);
  c.variant = Variant::Mirabolic;
  auto rep = verify_mirabolic(c);
  // G minus Q: 168 - 24 = 144 elements in cosets of |U_Q| = 4.
  EXPECT_EQ(rep.cosets, 36);
  EXPECT_EQ(rep.failures, 0);
  EXPECT_NE(rep.statement().find("off Q"), std::string::npos);
}

TEST(Preconditions, TypedErrors) {
  VerifyConfig c = config(2, 3);
  c.datum = DatumKind::Constant;
  EXPECT_EQ(kind_of([&] { verify(c); }), ErrorKind::NotCentral);
  EXPECT_EQ(kind_of([&] { verify(config(4, 3)); }), ErrorKind::RankUnsupported);
  VerifyConfig small = config(3, 3);
  small.budget = 100;
  EXPECT_EQ(kind_of([&] { verify(small); }), ErrorKind::BudgetExceeded);
  EXPECT_EQ(kind_of([&] { verify(config(2, 6)); }), ErrorKind::NotPrime);
  VerifyConfig orb = config(2, 5);
  orb.datum = DatumKind::Orbit;
  orb.orbit = "1";
  EXPECT_EQ(kind_of([&] { verify(orb); }), ErrorKind::Config);
}

TEST(Preconditions, BypassedConstantDatumHasNonzeroSums) {
  VerifyConfig c = config(2, 3);
  c.datum = DatumKind::Constant;
  c.bypass_centrality = true;
  auto rep = verify(c);
  EXPECT_FALSE(rep.central);
  EXPECT_GT(rep.failures, 0);
  EXPECT_EQ(rep.exit_code(), 1);
}

TEST(Preconditions, CharacteristicDividingWeylOrderIsFlagged) {
  EXPECT_TRUE(verify(config(2, 2)).prime_divides_order);
  EXPECT_FALSE(verify(config(2, 5)).prime_divides_order);
}

TEST(Support, DiagonalCosetSumsDoNotAllVanish) {
  auto probe = support_probe(config(2, 3));
  EXPECT_EQ(probe.points, 4);
  EXPECT_GT(probe.nonzero, 0);
}

TEST(Report, JsonKeysAndCsv) {
  auto rep = verify(config(2, 3));
  auto j = to_json(rep);
  for (const char* k : {"n", "q", "variant", "mode", "cosets", "max_abs", "failures", "elapsed_ms", "version", "records"})
    EXPECT_TRUE(j.contains(k)) << k;
  EXPECT_EQ(j["records"].size(), 12u);
  EXPECT_EQ(j["version"], kVersion);
  auto csv = to_csv(rep);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 13);
}

TEST(Suite, DefaultSuitePasses) {
  auto rep = run_suite(default_suite_config());
  EXPECT_EQ(rep.results.size(), known_checks().size());
  for (const auto& r : rep.results) EXPECT_TRUE(r.passed) << r.name << " " << r.detail.dump();
  EXPECT_TRUE(rep.passed());
}

TEST(Suite, UnknownCheckIsConfigError) {
  nlohmann::json cfg = {{"checks", {{{"name", "closed-form"}}, {{"name", "no-such-check"}}}}};
  EXPECT_EQ(kind_of([&] { run_suite(cfg); }), ErrorKind::Config);
  EXPECT_EQ(kind_of([&] { run_suite(nlohmann::json::object()); }), ErrorKind::Config);
}

TEST(Suite, ErrorsInsideChecksBecomeFailures) {
  auto r = run_check({{"name", "vanishing"}, {"n", 4}, {"q", 3}});
  EXPECT_FALSE(r.passed);
  EXPECT_EQ(r.detail["error"], "RankUnsupported");
  auto advisory = run_suite({{"checks", {{{"name", "vanishing"}, {"n", 4}, {"gating", false}}}}});
  EXPECT_TRUE(advisory.passed());
}

TEST(Suite, FloatModeAndOrbitChecks) {
  auto f = run_check({{"name", "vanishing"}, {"n", 2}, {"q", 5}, {"mode", "float"}});
  EXPECT_TRUE(f.passed);
  EXPECT_LE(f.detail["max_abs"].get<double>(), f.detail["tolerance"].get<double>());
  auto o = run_check({{"name", "vanishing"}, {"n", 2}, {"q", 5}, {"datum", "orbit"}, {"orbit", "0,1"}, {"gating", false}});
  EXPECT_FALSE(o.gating);
}

TEST(Suite, WritesOneFilePerCheckAndSummary) {
  auto dir = std::filesystem::temp_directory_path() / "tracelab_suite_test";
  std::filesystem::remove_all(dir);
  nlohmann::json cfg = {{"checks", {{{"name", "artin-schreier"}, {"q", 4}}, {{"name", "lemmas"}, {"n", 2}, {"q", 3}}}}};
  auto path = dir.string() + "-config.json";
  std::ofstream(path) << cfg.dump();
  auto rep = run_suite_file(path, dir.string());
  EXPECT_TRUE(rep.passed());
  EXPECT_TRUE(std::filesystem::exists(dir / "1-artin-schreier.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "2-lemmas.json"));
  std::ifstream s(dir / "summary.json");
  auto summary = nlohmann::json::parse(s);
  EXPECT_TRUE(summary["passed"].get<bool>());
  EXPECT_EQ(summary["checks"].size(), 2u);
  std::filesystem::remove_all(dir);
  std::filesystem::remove(path);
}
