#include <gtest/gtest.h>

#include <random>

#include "tracelab/weyl.hpp"

using namespace tracelab;

namespace {

std::shared_ptr<const FieldTower> tower(std::int64_t q, int D) {
  auto [p, e] = num::split_prime_power(q);
  return make_tower(p, e, D);
}

WeightData rows(std::vector<std::vector<std::int64_t>> r) {
  WeightData w;
  w.n = static_cast<int>(r[0].size());
  w.rows = std::move(r);
  return w;
}

const Perm kSwap({1, 0});

}  // namespace

TEST(TwistedTorus, SizesAreProductsOverCycles) {
  auto t = tower(3, 3);
  EXPECT_EQ(TwistedTorus(t, Perm::identity(3)).size(), 8);
  EXPECT_EQ(TwistedTorus(t, Perm({1, 0, 2})).size(), 16);
  EXPECT_EQ(TwistedTorus(t, Perm({1, 2, 0})).size(), 26);
}

TEST(TwistedTorus, EmbeddedPointsAreFrobeniusTwisted) {
  auto t = tower(3, 6);
  for (const auto& w : all_perms(3)) {
    TwistedTorus tt(t, w);
    const int M = 6;
    const std::int64_t oM = static_cast<std::int64_t>(t->order(M));
    for (std::int64_t idx = 0; idx < tt.size(); ++idx) {
      auto c = tt.embedded(idx, M);
      for (int i = 0; i < 3; ++i) EXPECT_EQ(c[w(i)], num::mulmod(c[i], 3, oM));
      EXPECT_EQ(tt.locate(c, M), idx);
    }
  }
}

TEST(WChi, StabilizersOfSmallCharacters) {
  auto s = w_chi({1, 1, 3}, 4);
  EXPECT_EQ(s.w_chi.size(), 2u);
  EXPECT_EQ(s.w_chi_prime.size(), 2u);
  EXPECT_EQ(w_chi({0, 1, 2}, 4).w_chi_prime.size(), 1u);
  EXPECT_EQ(w_chi({2, 2, 2}, 4).w_chi.size(), 6u);
}

TEST(WChi, ReflectionSubgroupIsFullStabilizerForGL) {
  TorusShape sh{3, 4};
  for (std::int64_t i = 0; i < sh.size(); ++i) {
    auto s = w_chi(sh.coords(i), sh.m);
    EXPECT_EQ(s.w_chi, s.w_chi_prime);
    for (const auto& w : s.w_chi_prime) EXPECT_TRUE(fixes_char(w, sh.coords(i), sh.m));
  }
}

TEST(RestrictChar, TrivialAndNormComposite) {
  auto t = tower(3, 2);
  TwistedTorus tt(t, kSwap);
  EXPECT_EQ(restrict_char({0, 0}, tt).exps, std::vector<std::int64_t>{0});
  EXPECT_EQ(restrict_char({1, 1}, tt).exps, std::vector<std::int64_t>{4});
  try {
    restrict_char({0, 1}, tt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotFixed);
  }
}

TEST(RestrictChar, InjectiveOnFixedCharactersAndMultiplicative) {
  auto t = tower(5, 2);
  TwistedTorus tt(t, kSwap);
  std::vector<std::vector<std::int64_t>> seen;
  for (std::int64_t a = 0; a < 4; ++a) {
    auto r = restrict_char({a, a}, tt);
    EXPECT_EQ(std::count(seen.begin(), seen.end(), r.exps), 0);
    seen.push_back(r.exps);
    // Agrees with chi_a(Norm x) computed in the field.
    const auto& L = t->level(2);
    for (std::int64_t idx = 0; idx < tt.size(); ++idx) {
      Elt x = L.exp(static_cast<std::uint64_t>(tt.coords(idx)[0]));
      std::int64_t e = num::mod(a * static_cast<std::int64_t>(t->level(1).dlog(t->norm_to_base(x, 2))), 4);
      EXPECT_EQ(r.value<CycloValue>(tt, idx), CycloValue::root(e, 4));
    }
  }
}

TEST(Lift, StandardWeightsLiftToW) {
  for (const auto& w : all_perms(3)) EXPECT_EQ(lift_weight_perm(WeightData::standard(3), w), w);
}

TEST(Lift, ForcedLiftFixesSumRow) {
  EXPECT_EQ(lift_weight_perm(rows({{1, 0}, {0, 1}, {1, 1}}), kSwap), Perm({1, 0, 2}));
  try {
    lift_weight_perm(rows({{1, 0}, {1, 1}}), kSwap);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotStable);
  }
}

TEST(Lift, LiftsDifferByRowStabilizer) {
  auto rho = rows({{1, 0}, {1, 0}, {0, 1}, {0, 1}});
  for (const auto& w : all_perms(2)) {
    auto lifts = all_lifts(rho, w);
    EXPECT_EQ(lifts.size(), 4u);
    for (const auto& a : lifts)
      for (const auto& b : lifts) {
        Perm s = b.inverse() * a;
        for (int i = 0; i < s.size(); ++i) EXPECT_EQ(rho.rows[s(i)], rho.rows[i]);
      }
  }
}

TEST(BesselTwisted, IdentityIsUntwisted) {
  auto t = tower(5, 2);
  for (const auto& rho : {WeightData::standard(2), WeightData::sym2(2)}) {
    TwistedTorus tt(t, Perm::identity(2));
    EXPECT_EQ(bessel_twisted<CycloValue>(tt, rho), bessel_function<CycloValue>(*t, rho).values);
  }
}

TEST(BesselTwisted, SwapIsPsiOfTraceForStandardWeights) {
  // sign(w) sign(eta) (-1)^r = (-1)(-1)(+1).
  auto t = tower(3, 2);
  TwistedTorus tt(t, kSwap);
  auto f = bessel_twisted<CycloValue>(tt, WeightData::standard(2));
  const auto& L = t->level(2);
  for (std::int64_t idx = 0; idx < tt.size(); ++idx) {
    Elt x = L.exp(static_cast<std::uint64_t>(tt.coords(idx)[0]));
    EXPECT_EQ(f[idx], CycloValue::root(t->level(1).trace_to_prime(t->trace_to_base(x, 2)), 3));
  }
}

TEST(BesselTwisted, LiftIndependenceWithRepeatedRows) {
  for (std::int64_t q : {3, 5}) {
    auto rho = rows({{1, 0}, {1, 0}, {0, 1}, {0, 1}});
    auto t = tower(q, 4);
    for (const auto& w : all_perms(2)) {
      TwistedTorus tt(t, w);
      std::vector<CycloValue> ref;
      for (const auto& eta : all_lifts(rho, w)) {
        auto f = twisted_sum<CycloValue>(tt, rho, eta);
        if (eta.sign() < 0)
          for (auto& v : f) v = -v;
        if (ref.empty()) ref = f;
        EXPECT_EQ(f, ref);
      }
    }
  }
}

TEST(Datum, RankOneGammaIsMinusPsi) {
  auto t = tower(7, 1);
  auto d = gamma_datum<CycloValue>(t, WeightData::standard(1));
  ASSERT_EQ(d.perms.size(), 1u);
  for (std::int64_t i = 0; i < d.tori[0].size(); ++i)
    EXPECT_EQ(d.f[0][i], -add_char_value<CycloValue>(*t, AddChar{}, t->level(1).exp(static_cast<std::uint64_t>(i))));
}

TEST(Centrality, GammaDataAreCentral) {
  for (std::int64_t q : {3, 5})
    for (int n : {2, 3})
      for (const auto& rho : {WeightData::standard(n), WeightData::sym2(n), WeightData::det_twisted(n)}) {
        auto d = gamma_datum<CycloValue>(tower(q, required_max_ext(rho)), rho);
        EXPECT_TRUE(centrality_check(d, CentralityMode::WChiPrime).passed()) << q << " " << rho.str();
      }
}

TEST(Centrality, ConstantDatumFailsAtTrivialCharacter) {
  const std::int64_t q = 3;
  auto d = constant_datum<CycloValue>(tower(q, 2), 2);
  auto rep = centrality_check(d);
  EXPECT_FALSE(rep.passed());
  for (const auto& c : rep.cells)
    if (c.chi == TorusChar{0, 0} && c.w == kSwap) {
      EXPECT_EQ(c.twisted, CycloValue::integer(q * q - 1));
      EXPECT_EQ(c.expected, CycloValue::integer(-(q - 1) * (q - 1)));
      EXPECT_FALSE(c.pass);
    }
}

TEST(Centrality, SignDeltaAndOrbitDataAreCentral) {
  auto t = tower(5, 2);
  EXPECT_TRUE(centrality_check(sign_delta_datum<CycloValue>(t, 2)).passed());
  TorusShape sh{2, 4};
  for (std::int64_t i = 0; i < sh.size(); ++i) {
    auto d = orbit_datum<CycloValue>(t, char_orbit(sh.coords(i), 4));
    EXPECT_TRUE(centrality_check(d).passed());
  }
}

TEST(OrbitDatum, TrivialOrbitAndRegularSpectrum) {
  auto t = tower(5, 2);
  auto triv = orbit_datum<CycloValue>(t, {{0, 0}});
  for (std::size_t i = 0; i < triv.perms.size(); ++i)
    for (const auto& v : triv.f[i]) EXPECT_EQ(v, CycloValue::rational(triv.perms[i].sign(), triv.tori[i].size()));
  auto reg = orbit_datum<CycloValue>(t, char_orbit({0, 1}, 4));
  auto spec = mellin(reg.identity_function());
  int support = 0;
  for (const auto& v : spec.values) support += v.is_zero() ? 0 : 1;
  EXPECT_EQ(support, 2);
  try {
    orbit_datum<CycloValue>(t, {{0, 1}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAnOrbit);
  }
}

TEST(DatumProperty, ConjugationConsistency) {
  auto rho = WeightData::standard(3);
  EXPECT_TRUE(conjugation_consistent(gamma_datum<CycloValue>(tower(3, required_max_ext(rho)), rho)));
  auto sym = WeightData::sym2(2);
  EXPECT_TRUE(conjugation_consistent(gamma_datum<CycloValue>(tower(5, required_max_ext(sym)), sym)));
}

TEST(DatumProperty, RandomCentralityCellsMatchDirectSum) {
  // Independent recomputation of TM_w(chi) for random (w, chi) pairs.
  std::mt19937_64 rng(47);
  auto rho = WeightData::standard(3);
  auto d = gamma_datum<CycloValue>(tower(3, required_max_ext(rho)), rho);
  auto spectrum = mellin(d.identity_function());
  std::uniform_int_distribution<std::int64_t> pick(0, d.shape().size() - 1);
  for (int i = 0; i < 30; ++i) {
    auto chi = d.shape().coords(pick(rng));
    for (std::size_t wi = 0; wi < d.perms.size(); ++wi) {
      if (!fixes_char(d.perms[wi], chi, d.m())) continue;
      auto th = restrict_char(chi, d.tori[wi]);
      CycloValue s;
      for (std::int64_t t = 0; t < d.tori[wi].size(); ++t) s += d.f[wi][t] * th.value<CycloValue>(d.tori[wi], t);
      EXPECT_EQ(s, spectrum[d.shape().index(chi)].scaled(d.perms[wi].sign(), 1));
    }
  }
}
