#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include "tracelab/field.hpp"
#include "tracelab/value.hpp"

namespace tracelab {

/// x -> zeta_p^{Tr(a x)} on F_{q^d}, trace taken down to F_p.
struct AddChar {
  int level = 1;
  Elt scale = 1;

  bool trivial() const { return scale == 0; }

  /// Exponent of zeta_p.
  int exponent(const FieldTower& t, Elt x) const { return t.level(level).trace_to_prime(t.level(level).mul(scale, x)); }
};

/// g_d^m -> zeta_{q^d - 1}^{k m}; never evaluated at 0.
struct MultChar {
  int level = 1;
  std::uint64_t exponent = 0;

  bool trivial(const FieldTower& t) const { return exponent % t.order(level) == 0; }

  /// Exponent of zeta_{q^d - 1}.
  std::uint64_t at(const FieldTower& t, Elt x) const {
    const auto& L = t.level(level);
    return static_cast<std::uint64_t>(num::mulmod(static_cast<std::int64_t>(exponent % L.order()),
                                                  static_cast<std::int64_t>(L.dlog(x)),
                                                  static_cast<std::int64_t>(L.order())));
  }

  MultChar inverse(const FieldTower& t) const {
    std::uint64_t o = t.order(level);
    return {level, (o - exponent % o) % o};
  }
};

template <class V>
V add_char_value(const FieldTower& t, const AddChar& psi, Elt x) {
  return value_traits<V>::root(psi.exponent(t, x), t.p());
}

template <class V>
V mult_char_value(const FieldTower& t, const MultChar& chi, Elt x) {
  if (x == 0) throw Error(ErrorKind::ZeroElement, "multiplicative character at zero");
  return value_traits<V>::root(static_cast<std::int64_t>(chi.at(t, x)), static_cast<std::int64_t>(t.order(chi.level)));
}

/// Sum of chi(x) psi(x) over nonzero x.
template <class V>
V gauss_sum(const FieldTower& t, const MultChar& chi, const AddChar& psi) {
  if (psi.trivial()) throw Error(ErrorKind::TrivialAddChar, "Gauss sum needs a nontrivial additive character");
  if (chi.level != psi.level) throw Error(ErrorKind::Config, "character levels differ");
  const auto& L = t.level(chi.level);
  const std::int64_t o = static_cast<std::int64_t>(L.order());
  const std::int64_t p = t.p();
  const std::int64_t n = num::lcm(p, o);
  std::vector<std::int64_t> counts(n, 0);
  for (Elt x = 1; x < L.size(); ++x) {
    std::int64_t e = static_cast<std::int64_t>(chi.at(t, x)) * (n / o) + psi.exponent(t, x) * (n / p);
    ++counts[e % n];
  }
  return value_traits<V>::from_counts(std::move(counts), n);
}

/// Sum of psi(x + a/x) over nonzero x in F_{q^d}.
template <class V>
V kloosterman(const FieldTower& t, Elt a, int level = 1, Elt psi_scale = 1) {
  const auto& L = t.level(level);
  AddChar psi{level, psi_scale};
  std::vector<std::int64_t> counts(t.p(), 0);
  for (Elt x = 1; x < L.size(); ++x) ++counts[psi.exponent(t, L.add(x, L.div(a, x)))];
  return value_traits<V>::from_counts(std::move(counts), t.p());
}

/// Sum of psi over all of F_{q^d}; zero for nontrivial psi.
template <class V>
V artin_schreier_sum(const FieldTower& t, int level = 1, Elt psi_scale = 1) {
  const auto& L = t.level(level);
  AddChar psi{level, psi_scale};
  std::vector<std::int64_t> counts(t.p(), 0);
  for (Elt x = 0; x < L.size(); ++x) ++counts[psi.exponent(t, x)];
  return value_traits<V>::from_counts(std::move(counts), t.p());
}

/// Memo of g(chi_k, psi_1) per (level, k) with the standard additive character.
template <class V>
class GaussTable {
 public:
  explicit GaussTable(std::shared_ptr<const FieldTower> t) : tower_(std::move(t)) {}

  const FieldTower& tower() const { return *tower_; }

  V get(int level, std::uint64_t k) const {
    k %= tower_->order(level);
    auto key = std::make_pair(level, k);
    {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find(key);
      if (it != cache_.end()) return it->second;
    }
    V v = gauss_sum<V>(*tower_, MultChar{level, k}, AddChar{level, 1});
    std::lock_guard<std::mutex> lock(mu_);
    return cache_.emplace(key, std::move(v)).first->second;
  }

 private:
  std::shared_ptr<const FieldTower> tower_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, std::uint64_t>, V> cache_;
};

/// g(chi o Norm, psi o Tr) == (-1)^{d-1} g(chi, psi)^d, exactly.
inline bool hasse_davenport_check(const FieldTower& t, std::uint64_t k, int d) {
  MultChar lifted{d, (k % t.order(1)) * t.index(1, d)};
  CycloValue lhs = gauss_sum<CycloValue>(t, lifted, AddChar{d, 1});
  CycloValue g = gauss_sum<CycloValue>(t, MultChar{1, k}, AddChar{1, 1});
  CycloValue rhs = CycloValue::integer(d % 2 == 1 ? 1 : -1);
  for (int i = 0; i < d; ++i) rhs *= g;
  return lhs == rhs;
}

}  // namespace tracelab
