#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <tuple>
#include <utility>
#include <vector>

#include "tracelab/field.hpp"

namespace tracelab {

/// Polynomial over one field level, coefficient of t^i at index i, no trailing zeros.
using PolyQ = std::vector<Elt>;

namespace poly {

inline void trim(PolyQ& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int degree(const PolyQ& a) { return static_cast<int>(a.size()) - 1; }

inline PolyQ add(const FieldLevel& F, PolyQ a, const PolyQ& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = F.add(a[i], b[i]);
  trim(a);
  return a;
}

inline PolyQ sub(const FieldLevel& F, PolyQ a, const PolyQ& b) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = F.sub(a[i], b[i]);
  trim(a);
  return a;
}

inline PolyQ mul(const FieldLevel& F, const PolyQ& a, const PolyQ& b) {
  if (a.empty() || b.empty()) return {};
  PolyQ r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  trim(r);
  return r;
}

inline PolyQ pow(const FieldLevel& F, const PolyQ& a, int e) {
  PolyQ r{1};
  for (int i = 0; i < e; ++i) r = mul(F, r, a);
  return r;
}

/// (quotient, remainder) for nonzero b.
inline std::pair<PolyQ, PolyQ> divmod(const FieldLevel& F, PolyQ a, const PolyQ& b) {
  trim(a);
  if (b.empty()) throw Error(ErrorKind::Config, "polynomial division by zero");
  if (a.size() < b.size()) return {{}, a};
  PolyQ quo(a.size() - b.size() + 1, 0);
  Elt lead_inv = F.inv(b.back());
  while (a.size() >= b.size() && !a.empty()) {
    std::size_t shift = a.size() - b.size();
    Elt c = F.mul(a.back(), lead_inv);
    quo[shift] = c;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] = F.sub(a[shift + i], F.mul(c, b[i]));
    trim(a);
  }
  trim(quo);
  return {quo, a};
}

inline Elt eval(const FieldLevel& F, const PolyQ& a, Elt x) {
  Elt r = 0;
  for (std::size_t i = a.size(); i-- > 0;) r = F.add(F.mul(r, x), a[i]);
  return r;
}

/// The i-th monic polynomial of degree k: lower coefficients are the base-Q digits of i.
inline PolyQ monic_from_index(std::uint64_t idx, int k, std::uint64_t Q) {
  PolyQ f(k + 1, 0);
  f[k] = 1;
  for (int i = 0; i < k; ++i) {
    f[i] = idx % Q;
    idx /= Q;
  }
  return f;
}

/// Monic irreducibles over level F, by degree 1..k, excluding t itself when skip_t is set.
/// Order within a degree: increasing index in the enumeration of monic_from_index.
inline std::vector<std::vector<PolyQ>> monic_irreducibles(const FieldLevel& F, int k, bool skip_t = true) {
  std::vector<std::vector<PolyQ>> out(k + 1);
  std::vector<std::vector<PolyQ>> all(k + 1);
  const std::uint64_t Q = F.size();
  for (int d = 1; d <= k; ++d) {
    std::uint64_t total = 1;
    for (int i = 0; i < d; ++i) total *= Q;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      PolyQ f = monic_from_index(idx, d, Q);
      bool irreducible = true;
      for (int e = 1; e <= d / 2 && irreducible; ++e)
        for (const auto& g : all[e])
          if (divmod(F, f, g).second.empty()) {
            irreducible = false;
            break;
          }
      if (!irreducible) continue;
      all[d].push_back(f);
      if (skip_t && d == 1 && f[0] == 0) continue;
      out[d].push_back(f);
    }
  }
  return out;
}

/// Memoized monic_irreducibles(F, k, false); entries live as long as the process.
inline const std::vector<std::vector<PolyQ>>& irreducibles_cached(const FieldLevel& F, int k) {
  static std::mutex mu;
  // A level is determined by (p, degree over F_p) since its modulus is chosen deterministically.
  static std::map<std::tuple<int, int, int>, std::vector<std::vector<PolyQ>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(F.p(), F.degree_over_prime(), k);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, monic_irreducibles(F, k, false)).first;
  return it->second;
}

/// Factorization into monic irreducibles with multiplicities, by trial division in enumeration order.
inline std::vector<std::pair<PolyQ, int>> factor(const FieldLevel& F, PolyQ f) {
  trim(f);
  std::vector<std::pair<PolyQ, int>> out;
  int n = degree(f);
  if (n <= 0) return out;
  const auto& irr = irreducibles_cached(F, n);
  for (int d = 1; d <= degree(f) && d <= n; ++d)
    for (const auto& g : irr[d]) {
      int mult = 0;
      while (degree(f) >= d) {
        auto [qq, r] = divmod(F, f, g);
        if (!r.empty()) break;
        f = std::move(qq);
        ++mult;
      }
      if (mult > 0) out.emplace_back(g, mult);
    }
  return out;
}

inline bool squarefree(const FieldLevel& F, const PolyQ& f) {
  for (const auto& [g, m] : factor(F, f))
    if (m > 1) return false;
  return true;
}

}  // namespace poly

}  // namespace tracelab
