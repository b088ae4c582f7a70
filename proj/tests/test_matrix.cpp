#include <gtest/gtest.h>

#include <random>

#include "tracelab/lemmas.hpp"

using namespace tracelab;

namespace {

std::shared_ptr<const MatrixSpace> space(std::int64_t q, int n) {
  auto [p, e] = num::split_prime_power(q);
  return std::make_shared<const MatrixSpace>(make_tower(p, e, n), n);
}

// Test-only oracle: Leibniz expansion.
Elt leibniz_det(const FieldLevel& F, const Matrix& a) {
  Elt s = 0;
  for (const auto& w : all_perms(a.n)) {
    Elt t = 1;
    for (int i = 0; i < a.n; ++i) t = F.mul(t, a(i, w(i)));
    s = w.sign() > 0 ? F.add(s, t) : F.sub(s, t);
  }
  return s;
}

Matrix random_invertible(const MatrixSpace& S, std::mt19937_64& rng) {
  std::uniform_int_distribution<Elt> pick(0, S.F().size() - 1);
  for (;;) {
    Matrix g(S.n());
    for (auto& v : g.a) v = pick(rng);
    if (S.invertible(g)) return g;
  }
}

// Test-only oracle: number of g-stable lines, by enumerating projective points.
int stable_lines(const MatrixSpace& S, const Matrix& g) {
  const auto& F = S.F();
  int count = 0;
  for (Elt a = 0; a < F.size(); ++a) {
    std::vector<std::vector<Elt>> reps = {{1, a}};
    if (a == 0) reps.push_back({0, 1});
    for (const auto& v : reps) {
      auto w = S.apply(g, v);
      // w parallel to v iff the 2x2 determinant vanishes.
      if (F.sub(F.mul(v[0], w[1]), F.mul(v[1], w[0])) == 0) ++count;
    }
  }
  return count;
}

}  // namespace

TEST(CharPoly, IdentityAndCompanion) {
  auto S = space(5, 2);
  EXPECT_EQ(S->char_poly(S->identity()), (std::vector<Elt>{3, 1}));
  auto S3 = space(3, 3);
  std::vector<Elt> a{2, 0, 1};
  EXPECT_EQ(S3->char_poly(S3->companion(a)), a);
}

TEST(CharPoly, MatchesDeterminantOracleAtEveryPoint) {
  std::mt19937_64 rng(53);
  auto S = space(5, 3);
  const auto& F = S->F();
  for (int i = 0; i < 50; ++i) {
    Matrix g = random_invertible(*S, rng);
    EXPECT_EQ(S->det(g), leibniz_det(F, g));
    auto a = S->char_poly(g);
    for (Elt x = 0; x < F.size(); ++x) {
      Matrix m = S->add(S->scalar(S->identity(), x), S->scalar(g, F.neg(1)));
      Elt p = F.pow(x, 3);
      for (int k = 1; k <= 3; ++k) p = F.add(p, F.mul(a[k - 1], F.pow(x, 3 - k)));
      EXPECT_EQ(p, leibniz_det(F, m));
    }
  }
}

TEST(Strata, IdentityCompanionAndBlocks) {
  auto S = space(3, 3);
  EXPECT_EQ(S->strata_index(S->identity()), 1);
  EXPECT_EQ(S->strata_index(S->companion({1, 2, 1})), 3);
  // Companion 2-block in the top left, arbitrary invertible 1-block below.
  Matrix g(3);
  g(1, 0) = 1;
  g(0, 1) = 1;
  g(1, 1) = 2;
  g(0, 2) = 2;
  g(2, 2) = 1;
  EXPECT_EQ(S->strata_index(g), 2);
}

TEST(Mirabolic, CompanionNeedsNoConjugation) {
  auto S = space(3, 2);
  Matrix w({2, {0, 1, 1, 0}});
  auto [qe, nf] = S->mirabolic_normalize(w, 2);
  EXPECT_EQ(qe, S->identity());
  EXPECT_EQ(nf, S->companion({0, 2}));
  EXPECT_EQ(nf, w);
  try {
    S->mirabolic_normalize(S->identity(), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::StrataMismatch);
  }
}

TEST(Mirabolic, NormalFormShapeExhaustive) {
  auto S = space(2, 3);
  for (const auto& g : S->all_elements()) {
    const int m = S->strata_index(g);
    auto [qe, nf] = S->mirabolic_normalize(g, m);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(qe(i, 0), i == 0 ? 1u : 0u);
    EXPECT_EQ(S->conjugate(qe, g), nf);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m - 1; ++j) EXPECT_EQ(nf(i, j), i == j + 1 ? 1u : 0u);
    for (int i = m; i < 3; ++i)
      for (int j = 0; j < m; ++j) EXPECT_EQ(nf(i, j), 0u);
  }
}

TEST(Flags, SplitRegularAndUnipotent) {
  auto S = space(5, 3);
  auto diag = S->fixed_flags(S->diag({1, 2, 3}));
  EXPECT_EQ(diag.size(), 6u);
  std::set<std::vector<std::int64_t>> parts;
  for (const auto& [k, t] : diag) parts.insert(t);
  EXPECT_EQ(parts.size(), 6u);
  Matrix u = S->identity();
  u(0, 1) = 1;
  u(1, 2) = 1;
  auto uf = S->fixed_flags(u);
  ASSERT_EQ(uf.size(), 1u);
  EXPECT_EQ(uf[0].second, (std::vector<std::int64_t>{0, 0, 0}));
  EXPECT_EQ(S->fixed_flags(S->identity()).size(), 31u * 6u);
}

TEST(Flags, CountMatchesStableLinesOracle) {
  auto S = space(3, 2);
  EXPECT_EQ(S->flags().size(), 4u);
  for (const auto& g : S->all_elements())
    EXPECT_EQ(static_cast<int>(S->fixed_flags(g).size()), stable_lines(*S, g));
}

TEST(Classes, SizesSumToGroupOrder) {
  for (auto [q, n] : std::vector<std::pair<std::int64_t, int>>{{2, 2}, {3, 2}, {4, 2}, {5, 2}, {2, 3}, {3, 3}}) {
    auto S = space(q, n);
    auto reps = S->class_representatives();
    std::int64_t total = 0;
    for (const auto& r : reps) {
      total += r.size;
      EXPECT_EQ(r.size * S->centralizer_order(r.info), S->group_order());
      EXPECT_EQ(S->fingerprint(r.g).key, r.info.key);
    }
    EXPECT_EQ(total, S->group_order());
    EXPECT_EQ(static_cast<std::int64_t>(reps.size()), n == 2 ? q * q - 1 : q * q * q - q);
  }
}

TEST(Classes, ExhaustiveCountsAtGL2Of3) {
  auto S = space(3, 2);
  std::map<std::string, std::int64_t> counts;
  for (const auto& g : S->all_elements()) ++counts[S->fingerprint(g).key];
  for (const auto& r : S->class_representatives()) EXPECT_EQ(counts[r.info.key], r.size);
}

TEST(ClassProperty, FingerprintIsConjugationInvariant) {
  std::mt19937_64 rng(59);
  for (auto [q, n] : std::vector<std::pair<std::int64_t, int>>{{3, 3}, {4, 3}, {5, 2}}) {
    auto S = space(q, n);
    for (int i = 0; i < 100; ++i) {
      Matrix g = random_invertible(*S, rng), h = random_invertible(*S, rng);
      EXPECT_EQ(S->fingerprint(g).key, S->fingerprint(S->conjugate(h, g)).key);
    }
  }
}

TEST(Lemmas, ExhaustiveSmallCases) {
  for (auto [n, q] : std::vector<std::pair<int, std::int64_t>>{{2, 3}, {2, 5}, {3, 2}, {3, 3}}) {
    auto [p, e] = num::split_prime_power(q);
    auto rep = verify_structure_lemmas(make_tower(p, e, 1), n);
    EXPECT_TRUE(rep.passed()) << n << "," << q;
    for (const auto& c : rep.checks) {
      if (c.name == "det-slice") {
        EXPECT_EQ(c.fiber, num::ipow(q, n - 1));
      }
      if (c.name == "gl2-slice") {
        EXPECT_EQ(c.fiber, q);
        EXPECT_EQ(c.applicable, n == 2);
      }
      if (c.applicable) {
        EXPECT_GT(c.cases, 0);
      }
    }
  }
}

TEST(Lemmas, SampledModeIsDeterministic) {
  auto t = make_tower(5, 1, 1);
  LemmaOptions opt;
  opt.exhaustive = false;
  opt.samples = 50;
  opt.seed = 9;
  auto a = verify_structure_lemmas(t, 3, opt), b = verify_structure_lemmas(t, 3, opt);
  EXPECT_TRUE(a.passed());
  ASSERT_EQ(a.checks.size(), b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) EXPECT_EQ(a.checks[i].cases, b.checks[i].cases);
}
