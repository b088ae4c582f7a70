#include <gtest/gtest.h>

#include <random>

#include "tracelab/cyclo.hpp"
#include "tracelab/field.hpp"
#include "tracelab/value.hpp"

using namespace tracelab;

namespace {

// Test-only oracle: schoolbook multiplication of coefficient vectors mod (modulus, p).
Elt oracle_mul(const FieldLevel& L, Elt a, Elt b) {
  const int p = L.p();
  const auto& m = L.modulus();
  const int k = static_cast<int>(m.size()) - 1;
  std::vector<int> x(k, 0), y(k, 0);
  for (int i = 0; i < k; ++i, a /= p, b /= p) {
    x[i] = static_cast<int>(a % p);
    y[i] = static_cast<int>(b % p);
  }
  std::vector<int> prod(2 * k, 0);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + x[i] * y[j]) % p;
  for (int d = 2 * k - 1; d >= k; --d) {
    int c = prod[d];
    if (c == 0) continue;
    for (int i = 0; i <= k; ++i) prod[d - k + i] = ((prod[d - k + i] - c * m[i]) % p + p) % p;
  }
  Elt out = 0;
  for (int i = k - 1; i >= 0; --i) out = out * p + static_cast<Elt>(prod[i]);
  return out;
}

std::uint64_t brute_order(const FieldLevel& L, Elt x) {
  Elt y = x;
  std::uint64_t k = 1;
  while (y != 1) {
    y = L.mul(y, x);
    ++k;
  }
  return k;
}

}  // namespace

TEST(Tower, OrdersOfLevels) {
  auto t = make_tower(3, 1, 2);
  EXPECT_EQ(t->q(), 3);
  EXPECT_EQ(t->order(1), 2u);
  EXPECT_EQ(t->order(2), 8u);
  EXPECT_EQ(t->level(2).size(), 9u);
}

TEST(Tower, RejectsNonPrimeCharacteristic) {
  try {
    make_tower(4, 1, 1);
    FAIL() << "no error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotPrime);
  }
}

TEST(Tower, GeneratorHasFullOrder) {
  for (auto [p, e, D] : std::vector<std::tuple<int, int, int>>{{2, 1, 3}, {3, 1, 3}, {2, 2, 3}, {5, 1, 2}, {3, 2, 2}, {7, 1, 2}}) {
    auto t = make_tower(p, e, D);
    for (int d = 1; d <= D; ++d) {
      const auto& L = t->level(d);
      EXPECT_EQ(brute_order(L, L.generator()), L.order()) << "p=" << p << " e=" << e << " d=" << d;
    }
  }
}

TEST(Tower, GeneratorOfF9HasOrderEightOnDivisors) {
  auto t = make_tower(3, 1, 2);
  const auto& L = t->level(2);
  for (std::int64_t d : {1, 2, 4}) EXPECT_NE(L.pow(L.generator(), d), 1u);
  EXPECT_EQ(L.pow(L.generator(), 8), 1u);
}

TEST(Tower, GeneratorsAreNormCompatible) {
  for (auto [p, e] : std::vector<std::pair<int, int>>{{2, 1}, {3, 1}, {2, 2}, {5, 1}}) {
    auto t = make_tower(p, e, 3);
    for (int d = 1; d <= 3; ++d)
      for (int c = 1; c <= d; ++c)
        if (d % c == 0) {
          EXPECT_EQ(t->norm(t->level(d).generator(), d, c), t->level(c).generator());
        }
  }
}

TEST(Tower, TraceOfOneIsDegree) {
  auto t = make_tower(3, 1, 3);
  EXPECT_EQ(t->trace_to_base(1, 2), 2u);
  EXPECT_EQ(t->trace_to_base(1, 3), 0u);
}

TEST(Tower, NormSurjectiveWithEqualFibers) {
  auto t = make_tower(3, 1, 3);
  for (int d : {2, 3}) {
    const auto& L = t->level(d);
    std::vector<std::uint64_t> fiber(t->level(1).size(), 0);
    for (Elt x = 1; x < L.size(); ++x) ++fiber[t->norm_to_base(x, d)];
    EXPECT_EQ(fiber[0], 0u);
    for (Elt y = 1; y < t->level(1).size(); ++y) EXPECT_EQ(fiber[y], L.order() / t->order(1));
  }
}

TEST(Tower, NormIsTransitive) {
  auto t = make_tower(2, 1, 4);
  const auto& L = t->level(4);
  for (Elt x = 1; x < L.size(); ++x) EXPECT_EQ(t->norm(x, 4, 1), t->norm(t->norm(x, 4, 2), 2, 1));
}

TEST(Tower, EmbedRestrictRoundTrip) {
  auto t = make_tower(3, 1, 4);
  for (Elt x = 0; x < t->level(2).size(); ++x) {
    Elt y = t->embed(x, 2, 4);
    EXPECT_TRUE(t->in_subfield(y, 4, 2));
    EXPECT_EQ(t->restrict(y, 4, 2), x);
  }
}

TEST(FieldProperty, MultiplicationMatchesSchoolbookOracle) {
  std::mt19937_64 rng(11);
  for (auto [p, k] : std::vector<std::pair<int, int>>{{2, 3}, {3, 2}, {3, 3}, {5, 2}, {7, 2}, {2, 6}}) {
    auto t = make_tower(p, 1, k);
    const auto& L = t->level(k);
    std::uniform_int_distribution<Elt> pick(0, L.size() - 1);
    for (int i = 0; i < 200; ++i) {
      Elt a = pick(rng), b = pick(rng);
      EXPECT_EQ(L.mul(a, b), oracle_mul(L, a, b));
    }
  }
}

TEST(FieldProperty, RingAxiomsOnRandomTriples) {
  std::mt19937_64 rng(7);
  for (std::int64_t q : {4, 8, 9, 25, 27}) {
    auto [p, e] = num::split_prime_power(q);
    auto t = make_tower(p, e, 1);
    const auto& F = t->level(1);
    std::uniform_int_distribution<Elt> pick(0, F.size() - 1);
    for (int i = 0; i < 200; ++i) {
      Elt a = pick(rng), b = pick(rng), c = pick(rng);
      EXPECT_EQ(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)));
      EXPECT_EQ(F.mul(F.mul(a, b), c), F.mul(a, F.mul(b, c)));
      EXPECT_EQ(F.add(a, F.neg(a)), 0u);
      EXPECT_EQ(F.sub(F.add(a, b), b), a);
      if (a != 0) {
        EXPECT_EQ(F.mul(a, F.inv(a)), 1u);
      }
    }
  }
}

TEST(FieldProperty, DlogIsAHomomorphism) {
  std::mt19937_64 rng(3);
  auto t = make_tower(3, 1, 3);
  const auto& L = t->level(3);
  std::uniform_int_distribution<Elt> pick(1, L.size() - 1);
  EXPECT_EQ(L.dlog(1), 0u);
  EXPECT_EQ(L.dlog(L.generator()), 1u);
  for (int i = 0; i < 100; ++i) {
    Elt x = pick(rng), y = pick(rng);
    EXPECT_EQ(L.dlog(L.mul(x, y)), (L.dlog(x) + L.dlog(y)) % L.order());
    EXPECT_EQ(L.exp(L.dlog(x)), x);
  }
}

TEST(FieldProperty, TraceIsAdditiveAndFrobeniusHasOrderD) {
  std::mt19937_64 rng(5);
  auto t = make_tower(5, 1, 3);
  const auto& L = t->level(3);
  std::uniform_int_distribution<Elt> pick(0, L.size() - 1);
  for (int i = 0; i < 100; ++i) {
    Elt x = pick(rng), y = pick(rng);
    EXPECT_EQ(t->trace_to_base(L.add(x, y), 3), t->level(1).add(t->trace_to_base(x, 3), t->trace_to_base(y, 3)));
    EXPECT_EQ(L.frobenius(x, 3), x);
  }
}

TEST(Cyclo, RootsReduceCanonically) {
  EXPECT_EQ(CycloValue::root(3, 3), CycloValue::integer(1));
  EXPECT_EQ(CycloValue::root(1, 3) + CycloValue::root(2, 3), CycloValue::integer(-1));
  EXPECT_EQ(CycloValue::root(1, 4) * CycloValue::root(1, 4), CycloValue::integer(-1));
  // Sum of all primitive 15th roots is mu(15) = 1.
  CycloValue s;
  for (int k = 1; k < 15; ++k)
    if (std::gcd(k, 15) == 1) s += CycloValue::root(k, 15);
  EXPECT_EQ(s, CycloValue::integer(1));
}

TEST(Cyclo, FloatShadowOfExactZeroIsZero) {
  CycloValue z = CycloValue::root(1, 7) - CycloValue::root(8, 7);
  EXPECT_TRUE(z.is_zero());
  EXPECT_EQ(z.to_complex(), Complex(0.0, 0.0));
}

TEST(CycloProperty, FieldOperationsAgreeWithComplexShadow) {
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<int> coef(-3, 3), expo(0, 23);
  std::uniform_int_distribution<int> cond_pick(0, 4);
  const int conductors[] = {3, 4, 8, 12, 24};
  for (int i = 0; i < 200; ++i) {
    auto random_value = [&] {
      int n = conductors[cond_pick(rng)];
      CycloValue v;
      for (int j = 0; j < 4; ++j) v += CycloValue::root(expo(rng), n).scaled(coef(rng), 1);
      return v;
    };
    CycloValue a = random_value(), b = random_value();
    EXPECT_LT(std::abs((a * b).to_complex() - a.to_complex() * b.to_complex()), 1e-9);
    EXPECT_LT(std::abs((a + b).to_complex() - (a.to_complex() + b.to_complex())), 1e-9);
    EXPECT_LT(std::abs(a.conj().to_complex() - std::conj(a.to_complex())), 1e-9);
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((a + b) - b, a);
  }
}
