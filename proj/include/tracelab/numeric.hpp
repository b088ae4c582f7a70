#pragma once

#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "tracelab/error.hpp"

namespace tracelab::num {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorKind::Overflow, "int64 addition");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorKind::Overflow, "int64 multiplication");
  return r;
}

/// Non-negative residue of a modulo m (m > 0).
inline std::int64_t mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>(
      static_cast<__int128>(mod(a, m)) * static_cast<__int128>(mod(b, m)) % m);
}

inline std::int64_t powmod(std::int64_t base, std::int64_t exp, std::int64_t m) {
  std::int64_t result = 1 % m;
  base = mod(base, m);
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

inline std::int64_t ipow(std::int64_t base, int exp) {
  std::int64_t r = 1;
  for (int i = 0; i < exp; ++i) r = checked_mul(r, base);
  return r;
}

inline std::int64_t lcm(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  return checked_mul(a / std::gcd(a, b), b);
}

/// Extended Euclid; returns (g, x) with a*x = g (mod m).
inline std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  std::int64_t old_r = mod(a, m), r = m, old_s = 1, s = 0;
  while (r != 0) {
    std::int64_t qt = old_r / r;
    std::int64_t t = old_r - qt * r;
    old_r = r;
    r = t;
    t = old_s - qt * s;
    old_s = s;
    s = t;
  }
  if (old_r != 1) throw Error(ErrorKind::Config, "value is not invertible modulo m");
  return mod(old_s, m);
}

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Prime factorization as (prime, exponent) pairs in increasing prime order.
inline std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
  std::vector<std::pair<std::int64_t, int>> out;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    int k = 0;
    while (n % d == 0) {
      n /= d;
      ++k;
    }
    out.emplace_back(d, k);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

/// Splits q = p^e; throws NotPrime if q is not a prime power.
inline std::pair<int, int> split_prime_power(std::int64_t q) {
  auto f = factorize(q);
  if (q < 2 || f.size() != 1) throw Error(ErrorKind::NotPrime, "q = " + std::to_string(q) + " is not a prime power");
  return {static_cast<int>(f[0].first), f[0].second};
}

inline std::int64_t factorial(int n) {
  std::int64_t r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

}  // namespace tracelab::num
