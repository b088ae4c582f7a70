#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "tracelab/numeric.hpp"

namespace tracelab {

/// Element of some level F_{q^d}: base-p digits of its polynomial residue, constant term lowest.
using Elt = std::uint64_t;

inline constexpr std::uint64_t kTableBudget = std::uint64_t{1} << 22;
inline constexpr std::uint64_t kTowerBudget = std::uint64_t{1} << 40;
inline constexpr std::uint64_t kAddTableBudget = 256;

namespace detail {

// Dense polynomials over F_p, coefficient of x^i at index i, no trailing zeros.
using PolyP = std::vector<int>;

inline void trim(PolyP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline PolyP poly_mod(PolyP a, const PolyP& m, int p) {
  trim(a);
  int lead_inv = static_cast<int>(num::inverse_mod(m.back(), p));
  while (a.size() >= m.size()) {
    int c = static_cast<int>(num::mulmod(a.back(), lead_inv, p));
    std::size_t shift = a.size() - m.size();
    for (std::size_t i = 0; i < m.size(); ++i) a[shift + i] = static_cast<int>(num::mod(a[shift + i] - c * m[i], p));
    trim(a);
  }
  return a;
}

inline PolyP poly_mulmod(const PolyP& a, const PolyP& b, const PolyP& m, int p) {
  if (a.empty() || b.empty()) return {};
  PolyP r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return poly_mod(std::move(r), m, p);
}

inline PolyP poly_powmod(PolyP a, std::uint64_t e, const PolyP& m, int p) {
  PolyP r{1};
  a = poly_mod(std::move(a), m, p);
  while (e > 0) {
    if (e & 1) r = poly_mulmod(r, a, m, p);
    a = poly_mulmod(a, a, m, p);
    e >>= 1;
  }
  return r;
}

inline PolyP poly_sub(PolyP a, const PolyP& b, int p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = static_cast<int>(num::mod(a[i] - b[i], p));
  trim(a);
  return a;
}

inline PolyP poly_gcd(PolyP a, PolyP b, int p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    PolyP r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Rabin-style test: f of degree k is irreducible iff gcd(x^{p^i} - x, f) = 1 for i <= k/2.
inline bool is_irreducible(const PolyP& f, int p) {
  int k = static_cast<int>(f.size()) - 1;
  if (k <= 0) return false;
  if (k == 1) return true;
  PolyP x{0, 1};
  PolyP xp = x;
  for (int i = 1; i <= k / 2; ++i) {
    xp = poly_powmod(xp, static_cast<std::uint64_t>(p), f, p);
    PolyP g = poly_gcd(f, poly_sub(xp, x, p), p);
    if (g.size() > 1) return false;
  }
  return true;
}

// Lexicographically smallest monic irreducible of degree k, comparing c_0 first.
inline PolyP smallest_irreducible(int p, int k) {
  std::uint64_t total = static_cast<std::uint64_t>(num::ipow(p, k));
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    PolyP f(k + 1, 0);
    f[k] = 1;
    std::uint64_t t = idx;
    for (int i = k - 1; i >= 0; --i) {
      // c_0 is the most significant digit of idx.
      f[k - 1 - i] = static_cast<int>(t / static_cast<std::uint64_t>(num::ipow(p, i)));
      t %= static_cast<std::uint64_t>(num::ipow(p, i));
    }
    if (is_irreducible(f, p)) return f;
  }
  throw Error(ErrorKind::Config, "no irreducible polynomial found");
}

inline Elt poly_to_code(const PolyP& a, int p) {
  Elt c = 0;
  for (std::size_t i = a.size(); i-- > 0;) c = c * static_cast<Elt>(p) + static_cast<Elt>(a[i]);
  return c;
}

inline PolyP code_to_poly(Elt c, int p) {
  PolyP a;
  while (c > 0) {
    a.push_back(static_cast<int>(c % static_cast<Elt>(p)));
    c /= static_cast<Elt>(p);
  }
  return a;
}

}  // namespace detail

class FieldTower;
std::shared_ptr<const FieldTower> make_tower(int p, int e, int D);

/// One level F_{q^d} = F_p[x]/(f) with deg f = e*d.
class FieldLevel {
 public:
  FieldLevel(int p, int degree_over_p, int d) : p_(p), k_(degree_over_p), d_(d) {
    size_ = static_cast<std::uint64_t>(num::ipow(p, k_));
    order_ = size_ - 1;
    modulus_ = detail::smallest_irreducible(p, k_);
    for (auto [r, _] : num::factorize(static_cast<std::int64_t>(order_))) order_primes_.push_back(static_cast<std::uint64_t>(r));
    tabled_ = order_ <= kTableBudget;
    if (size_ <= kAddTableBudget) {
      add_table_.resize(size_ * size_);
      for (Elt a = 0; a < size_; ++a)
        for (Elt b = 0; b < size_; ++b) add_table_[a * size_ + b] = add_digits(a, b, 1);
    }
  }

  int p() const { return p_; }
  int degree() const { return d_; }
  int degree_over_prime() const { return k_; }
  std::uint64_t size() const { return size_; }
  std::uint64_t order() const { return order_; }
  const std::vector<int>& modulus() const { return modulus_; }
  Elt generator() const { return generator_; }

  Elt one() const { return 1; }
  Elt from_int(std::int64_t v) const { return static_cast<Elt>(num::mod(v, p_)); }

  Elt add(Elt a, Elt b) const {
    if (!add_table_.empty()) return add_table_[a * size_ + b];
    return add_digits(a, b, 1);
  }
  Elt sub(Elt a, Elt b) const { return add_digits(a, b, p_ - 1); }
  Elt neg(Elt a) const { return add_digits(0, a, p_ - 1); }

  Elt mul(Elt a, Elt b) const {
    if (a == 0 || b == 0) return 0;
    if (tabled_) {
      std::uint64_t s = log_[a] + log_[b];
      if (s >= order_) s -= order_;
      return exp_[s];
    }
    return detail::poly_to_code(
        detail::poly_mulmod(detail::code_to_poly(a, p_), detail::code_to_poly(b, p_), modulus_, p_), p_);
  }

  Elt inv(Elt a) const {
    if (a == 0) throw Error(ErrorKind::ZeroElement, "inverse of zero");
    return exp((order_ - dlog(a)) % order_);
  }

  Elt div(Elt a, Elt b) const { return mul(a, inv(b)); }

  Elt pow(Elt a, std::int64_t e) const {
    if (a == 0) {
      if (e == 0) return 1;
      if (e < 0) throw Error(ErrorKind::ZeroElement, "negative power of zero");
      return 0;
    }
    std::uint64_t m = static_cast<std::uint64_t>(num::mod(e, static_cast<std::int64_t>(order_)));
    if (tabled_) return exp_[num::mulmod(static_cast<std::int64_t>(log_[a]), static_cast<std::int64_t>(m),
                                        static_cast<std::int64_t>(order_))];
    return raw_pow(a, m);
  }

  /// g^m for the chosen generator g.
  Elt exp(std::uint64_t m) const {
    m %= order_;
    if (tabled_) return exp_[m];
    return raw_pow(generator_, m);
  }

  /// Discrete logarithm to base g; throws ZeroElement for 0.
  std::uint64_t dlog(Elt x) const {
    if (x == 0) throw Error(ErrorKind::ZeroElement, "dlog of zero");
    if (tabled_) return log_[x];
    return bsgs(x);
  }

  /// x -> x^q.
  Elt frobenius(Elt x, int times = 1) const {
    if (x == 0) return 0;
    std::uint64_t l = dlog(x);
    std::uint64_t q = static_cast<std::uint64_t>(num::ipow(p_, k_ / d_));
    for (int i = 0; i < times; ++i) l = static_cast<std::uint64_t>(num::mulmod(static_cast<std::int64_t>(l), static_cast<std::int64_t>(q), static_cast<std::int64_t>(order_)));
    return exp(l);
  }

  /// Absolute trace to F_p, returned as an integer in [0, p).
  int trace_to_prime(Elt x) const {
    if (!trace_.empty()) return trace_[x];
    return raw_trace(x);
  }

  bool tabled() const { return tabled_; }

 private:
  friend class FieldTower;
  friend std::shared_ptr<const FieldTower> make_tower(int p, int e, int D);

  int p_, k_, d_;
  std::uint64_t size_ = 0, order_ = 0;
  std::vector<int> modulus_;
  std::vector<std::uint64_t> order_primes_;
  Elt generator_ = 0;
  bool tabled_ = false;
  std::vector<Elt> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<int> trace_;
  std::vector<Elt> add_table_;
  mutable std::unordered_map<Elt, std::uint64_t> baby_;
  std::uint64_t giant_m_ = 0;

  Elt add_digits(Elt a, Elt b, int bscale) const {
    Elt r = 0, place = 1;
    const Elt p = static_cast<Elt>(p_);
    while (a > 0 || b > 0) {
      Elt s = (a % p + (b % p) * static_cast<Elt>(bscale)) % p;
      r += s * place;
      place *= p;
      a /= p;
      b /= p;
    }
    return r;
  }

  Elt raw_mul(Elt a, Elt b) const {
    return detail::poly_to_code(
        detail::poly_mulmod(detail::code_to_poly(a, p_), detail::code_to_poly(b, p_), modulus_, p_), p_);
  }

  Elt raw_pow(Elt a, std::uint64_t e) const {
    return detail::poly_to_code(detail::poly_powmod(detail::code_to_poly(a, p_), e, modulus_, p_), p_);
  }

  bool has_full_order(Elt a) const {
    if (a == 0) return false;
    for (auto r : order_primes_)
      if (raw_pow(a, order_ / r) == 1) return false;
    return true;
  }

  // Minimal polynomial over F_p, coefficients are F_p constants (low to high).
  std::vector<Elt> minimal_polynomial(Elt x) const {
    std::vector<Elt> orbit;
    Elt y = x;
    do {
      orbit.push_back(y);
      y = raw_pow(y, static_cast<std::uint64_t>(p_));
    } while (y != x);
    std::vector<Elt> coeffs{1};
    for (Elt z : orbit) {
      std::vector<Elt> next(coeffs.size() + 1, 0);
      for (std::size_t i = 0; i < coeffs.size(); ++i) {
        next[i + 1] = add_digits(next[i + 1], coeffs[i], 1);
        next[i] = add_digits(next[i], raw_mul(coeffs[i], z), p_ - 1);
      }
      coeffs = std::move(next);
    }
    return coeffs;
  }

  Elt evaluate_prime_poly(const std::vector<Elt>& coeffs, Elt x) const {
    Elt acc = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = add_digits(raw_mul(acc, x), coeffs[i], 1);
    return acc;
  }

  int raw_trace(Elt x) const {
    Elt s = 0, y = x;
    for (int i = 0; i < k_; ++i) {
      s = add_digits(s, y, 1);
      y = raw_pow(y, static_cast<std::uint64_t>(p_));
    }
    return static_cast<int>(s);
  }

  void build_tables() {
    if (!tabled_) {
      giant_m_ = 1;
      while (giant_m_ * giant_m_ < order_) ++giant_m_;
      Elt y = 1;
      for (std::uint64_t j = 0; j < giant_m_; ++j) {
        baby_.emplace(y, j);
        y = raw_mul(y, generator_);
      }
      return;
    }
    exp_.assign(order_, 0);
    log_.assign(size_, 0);
    Elt y = 1;
    for (std::uint64_t m = 0; m < order_; ++m) {
      exp_[m] = y;
      log_[y] = static_cast<std::uint32_t>(m);
      y = raw_mul(y, generator_);
    }
    trace_.assign(size_, 0);
    for (Elt x = 0; x < size_; ++x) trace_[x] = raw_trace(x);
  }

  std::uint64_t bsgs(Elt x) const {
    Elt factor = raw_pow(generator_, order_ - giant_m_ % order_);
    Elt y = x;
    for (std::uint64_t i = 0; i <= giant_m_; ++i) {
      auto it = baby_.find(y);
      if (it != baby_.end()) return (i * giant_m_ + it->second) % order_;
      y = raw_mul(y, factor);
    }
    throw Error(ErrorKind::ZeroElement, "discrete log not found");
  }
};

/// The fields F_{q^d}, 1 <= d <= D, with norm-compatible generators.
class FieldTower {
 public:
  int p() const { return p_; }
  int e() const { return e_; }
  int max_ext() const { return D_; }
  std::int64_t q() const { return q_; }

  const FieldLevel& level(int d) const {
    if (d < 1 || d > D_) throw Error(ErrorKind::Config, "extension degree " + std::to_string(d) + " outside tower");
    return *levels_[d - 1];
  }
  const FieldLevel& base() const { return level(1); }

  /// |F_{q^d}^x|.
  std::uint64_t order(int d) const { return level(d).order(); }

  /// (q^d - 1) / (q^c - 1); the dlog scale of the embedding level c -> level d.
  std::uint64_t index(int c, int d) const {
    if (c < 1 || d % c != 0) throw Error(ErrorKind::Config, "degree does not divide");
    return order(d) / order(c);
  }

  Elt embed(Elt x, int c, int d) const {
    if (x == 0) return 0;
    if (c == d) return x;
    return level(d).exp(level(c).dlog(x) * index(c, d));
  }

  /// Inverse of embed; throws NotFixed when x does not lie in the subfield.
  Elt restrict(Elt x, int d, int c) const {
    if (x == 0) return 0;
    if (c == d) return x;
    std::uint64_t k = index(c, d);
    std::uint64_t l = level(d).dlog(x);
    if (l % k != 0) throw Error(ErrorKind::NotFixed, "element is not in the subfield");
    return level(c).exp(l / k);
  }

  bool in_subfield(Elt x, int d, int c) const {
    if (x == 0 || c == d) return true;
    return level(d).dlog(x) % index(c, d) == 0;
  }

  /// Sum of x^{q^j}, j < d, as an element of F_q.
  Elt trace_to_base(Elt x, int d) const {
    const auto& L = level(d);
    Elt s = 0, y = x;
    for (int j = 0; j < d; ++j) {
      s = L.add(s, y);
      y = L.frobenius(y);
    }
    return restrict(s, d, 1);
  }

  /// Product of x^{q^j}, j < d; throws ZeroNorm for 0.
  Elt norm_to_base(Elt x, int d) const {
    if (x == 0) throw Error(ErrorKind::ZeroNorm, "norm of zero");
    // Norm-compatible generators: dlog_1(N(x)) = dlog_d(x) mod (q - 1).
    return level(1).exp(level(d).dlog(x) % order(1));
  }

  /// Norm from level d to level c (c | d).
  Elt norm(Elt x, int d, int c) const {
    if (x == 0) throw Error(ErrorKind::ZeroNorm, "norm of zero");
    return level(c).exp(level(d).dlog(x) % order(c));
  }

  friend std::shared_ptr<const FieldTower> make_tower(int p, int e, int D);

 private:
  int p_ = 0, e_ = 0, D_ = 0;
  std::int64_t q_ = 0;
  std::vector<std::unique_ptr<FieldLevel>> levels_;
};

/// Builds F_{q^d} for d <= D with q = p^e. Deterministic: same inputs, same codes and generators.
inline std::shared_ptr<const FieldTower> make_tower(int p, int e, int D) {
  if (!num::is_prime(p)) throw Error(ErrorKind::NotPrime, std::to_string(p) + " is not prime");
  if (e < 1 || D < 1) throw Error(ErrorKind::Config, "degrees must be positive");
  double top = std::pow(static_cast<double>(p), static_cast<double>(e) * D);
  if (top - 1.0 > static_cast<double>(kTowerBudget))
    throw Error(ErrorKind::TowerTooLarge, "q^D - 1 exceeds 2^40");
  auto t = std::shared_ptr<FieldTower>(new FieldTower());
  t->p_ = p;
  t->e_ = e;
  t->D_ = D;
  t->q_ = num::ipow(p, e);
  for (int d = 1; d <= D; ++d) {
    auto L = std::make_unique<FieldLevel>(p, e * d, d);
    // (index, minpoly of g_c) for each proper divisor c.
    std::vector<std::pair<std::uint64_t, std::vector<Elt>>> constraints;
    for (int c = 1; c < d; ++c)
      if (d % c == 0) {
        const auto& Lc = *t->levels_[c - 1];
        constraints.emplace_back(L->order() / Lc.order(), Lc.minimal_polynomial(Lc.generator_));
      }
    for (Elt g = 1; g < L->size(); ++g) {
      if (!L->has_full_order(g)) continue;
      bool ok = true;
      for (const auto& [k, m] : constraints) {
        if (L->evaluate_prime_poly(m, L->raw_pow(g, k)) != 0) {
          ok = false;
          break;
        }
      }
      if (ok) {
        L->generator_ = g;
        break;
      }
    }
    if (L->generator_ == 0) throw Error(ErrorKind::Config, "no compatible generator found");
    L->build_tables();
    t->levels_.push_back(std::move(L));
  }
  return t;
}

}  // namespace tracelab
