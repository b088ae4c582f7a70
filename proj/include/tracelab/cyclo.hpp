#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tracelab/numeric.hpp"

namespace tracelab {

namespace detail {

// Per-conductor data for reduction onto the Zumbroich basis.
struct CycloBasis {
  std::int64_t n = 1;
  // (p, p^k, unit): unit is p^{k-1} mod p^k and 0 mod n / p^k.
  struct Component {
    std::int64_t p, pk, unit;
  };
  std::vector<Component> comps;

  explicit CycloBasis(std::int64_t conductor) : n(conductor) {
    for (auto [p, k] : num::factorize(conductor)) {
      std::int64_t pk = num::ipow(p, k);
      std::int64_t rest = conductor / pk;
      std::int64_t step = pk / p;
      // unit = rest * (rest^{-1} mod pk) * step, reduced mod n.
      std::int64_t inv = pk == 1 ? 0 : num::inverse_mod(rest % pk, pk);
      std::int64_t unit = num::mulmod(num::mulmod(rest, inv, conductor), step, conductor);
      comps.push_back({p, pk, unit});
    }
  }

  // Rewrites the dense accumulator in place so that only basis exponents remain.
  void reduce(std::vector<std::int64_t>& acc) const {
    for (const auto& c : comps) {
      std::int64_t step = c.pk / c.p;
      for (std::int64_t e = 0; e < n; ++e) {
        std::int64_t v = acc[e];
        if (v == 0) continue;
        std::int64_t j = (e % c.pk) / step;
        if (c.p == 2) {
          if (j == 1) {
            acc[e] = 0;
            std::int64_t t = (e + c.unit) % n;
            acc[t] = num::checked_add(acc[t], -v);
          }
        } else if (j == 0) {
          acc[e] = 0;
          std::int64_t t = e;
          for (std::int64_t s = 1; s < c.p; ++s) {
            t += c.unit;
            if (t >= n) t -= n;
            acc[t] = num::checked_add(acc[t], -v);
          }
        }
      }
    }
  }

  static const CycloBasis& get(std::int64_t conductor) {
    thread_local std::unordered_map<std::int64_t, CycloBasis> cache;
    auto it = cache.find(conductor);
    if (it == cache.end()) it = cache.emplace(conductor, CycloBasis(conductor)).first;
    return it->second;
  }
};

inline std::vector<std::int64_t>& scratch(std::size_t n) {
  thread_local std::vector<std::int64_t> buf;
  if (buf.size() < n) buf.resize(n);
  return buf;
}

}  // namespace detail

/// Exact element of Q(zeta_N): (sum of num_i * zeta_N^{e_i}) / den in the Zumbroich basis.
/// Values with different conductors combine in Q(zeta_lcm).
class CycloValue {
 public:
  using Term = std::pair<std::int32_t, std::int64_t>;

  CycloValue() = default;

  static CycloValue integer(std::int64_t v) { return rational(v, 1); }

  static CycloValue rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw Error(ErrorKind::Config, "zero denominator");
    CycloValue r;
    if (num != 0) r.terms_.emplace_back(0, num);
    r.den_ = den;
    r.normalize();
    return r;
  }

  /// zeta_n^e with zeta_n = exp(2 pi i / n).
  static CycloValue root(std::int64_t e, std::int64_t n) {
    CycloValue r;
    r.n_ = n;
    auto& acc = detail::scratch(n);
    std::fill(acc.begin(), acc.begin() + n, 0);
    acc[num::mod(e, n)] = 1;
    r.absorb(acc);
    return r;
  }

  /// sum over e of counts[e] * zeta_n^e; counts has length n and is consumed.
  static CycloValue from_counts(std::vector<std::int64_t> counts, std::int64_t n) {
    CycloValue r;
    r.n_ = n;
    r.absorb(counts);
    return r;
  }

  std::int64_t conductor() const { return n_; }
  std::int64_t denominator() const { return den_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::complex<double> to_complex() const { return shadow_; }

  /// Rational values are always stored with conductor 1.
  bool is_rational() const { return n_ == 1; }

  CycloValue lifted(std::int64_t n) const {
    if (n == n_) return *this;
    if (n % n_ != 0) throw Error(ErrorKind::Config, "conductor does not divide target");
    CycloValue r;
    r.n_ = n;
    r.den_ = den_;
    auto& acc = detail::scratch(n);
    std::fill(acc.begin(), acc.begin() + n, 0);
    std::int64_t f = n / n_;
    for (auto [e, c] : terms_) acc[e * f] = c;
    r.absorb(acc);
    return r;
  }

  CycloValue operator-() const {
    CycloValue r = *this;
    for (auto& t : r.terms_) t.second = -t.second;
    r.shadow_ = -shadow_;
    return r;
  }

  CycloValue& operator+=(const CycloValue& o) { return *this = add(*this, o, 1); }
  CycloValue& operator-=(const CycloValue& o) { return *this = add(*this, o, -1); }
  CycloValue& operator*=(const CycloValue& o) { return *this = mul(*this, o); }
  friend CycloValue operator+(const CycloValue& a, const CycloValue& b) { return add(a, b, 1); }
  friend CycloValue operator-(const CycloValue& a, const CycloValue& b) { return add(a, b, -1); }
  friend CycloValue operator*(const CycloValue& a, const CycloValue& b) { return mul(a, b); }

  /// Multiplication by the rational num / den.
  CycloValue scaled(std::int64_t num, std::int64_t den) const {
    if (den == 0) throw Error(ErrorKind::Config, "zero denominator");
    if (num == 0) return CycloValue();
    CycloValue r = *this;
    for (auto& t : r.terms_) t.second = num::checked_mul(t.second, num);
    r.den_ = num::checked_mul(r.den_, den);
    r.normalize();
    return r;
  }

  /// Multiplication by zeta_n^e.
  CycloValue times_root(std::int64_t e, std::int64_t n) const {
    if (is_zero()) return *this;
    std::int64_t m = num::lcm(n_, n);
    auto& acc = detail::scratch(m);
    std::fill(acc.begin(), acc.begin() + m, 0);
    std::int64_t shift = num::mod(e, n) * (m / n);
    std::int64_t f = m / n_;
    for (auto [x, c] : terms_) acc[(x * f + shift) % m] = c;
    CycloValue r;
    r.n_ = m;
    r.den_ = den_;
    r.absorb(acc);
    return r;
  }

  /// Complex conjugate (zeta -> zeta^{-1}).
  CycloValue conj() const {
    if (is_zero()) return *this;
    auto& acc = detail::scratch(n_);
    std::fill(acc.begin(), acc.begin() + n_, 0);
    for (auto [x, c] : terms_) acc[(n_ - x) % n_] = c;
    CycloValue r;
    r.n_ = n_;
    r.den_ = den_;
    r.absorb(acc);
    return r;
  }

  friend bool operator==(const CycloValue& a, const CycloValue& b) {
    if (a.n_ == b.n_) return a.den_ == b.den_ && a.terms_ == b.terms_;
    if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
    std::int64_t m = num::lcm(a.n_, b.n_);
    CycloValue x = a.lifted(m), y = b.lifted(m);
    return x.den_ == y.den_ && x.terms_ == y.terms_;
  }
  friend bool operator!=(const CycloValue& a, const CycloValue& b) { return !(a == b); }

  /// Human-readable form, e.g. "(z3^1 - z3^2)" or "-1/2".
  std::string str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    if (den_ != 1) os << "(";
    for (auto [e, c] : terms_) {
      std::int64_t a = c < 0 ? -c : c;
      if (first) {
        if (c < 0) os << "-";
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      first = false;
      if (e == 0) {
        os << a;
      } else {
        if (a != 1) os << a << "*";
        os << "z" << n_ << "^" << e;
      }
    }
    if (den_ != 1) os << ")/" << den_;
    return os.str();
  }

 private:
  std::int64_t n_ = 1;
  std::int64_t den_ = 1;
  std::vector<Term> terms_;
  std::complex<double> shadow_{0.0, 0.0};

  // Reduces the dense accumulator (length n_) and stores it.
  void absorb(std::vector<std::int64_t>& acc) {
    detail::CycloBasis::get(n_).reduce(acc);
    terms_.clear();
    for (std::int64_t e = 0; e < n_; ++e)
      if (acc[e] != 0) terms_.emplace_back(static_cast<std::int32_t>(e), acc[e]);
    normalize();
  }

  void normalize() {
    std::erase_if(terms_, [](const Term& t) { return t.second == 0; });
    if (den_ < 0) {
      den_ = -den_;
      for (auto& t : terms_) t.second = -t.second;
    }
    if (terms_.empty()) {
      den_ = 1;
      n_ = 1;
      shadow_ = {0.0, 0.0};
      return;
    }
    std::int64_t g = den_;
    for (auto& t : terms_) g = std::gcd(g, t.second);
    if (g > 1) {
      den_ /= g;
      for (auto& t : terms_) t.second /= g;
    }
    shrink();
    std::complex<double> s{0.0, 0.0};
    const double tau = 2.0 * std::numbers::pi / static_cast<double>(n_);
    for (auto [e, c] : terms_) s += static_cast<double>(c) * std::polar(1.0, tau * static_cast<double>(e));
    shadow_ = s / static_cast<double>(den_);
  }

  // Drops to conductor 1 when the value is a rational number (the basis expansion of 1).
  void shrink() {
    if (n_ == 1) return;
    // The canonical expansion of 1 in conductor n_ is reduce(zeta^0); compare proportionally.
    const auto& one = unit_expansion(n_);
    if (one.size() != terms_.size()) return;
    std::int64_t ratio = terms_[0].second / one[0].second;
    if (ratio == 0) return;
    for (std::size_t i = 0; i < one.size(); ++i)
      if (terms_[i].first != one[i].first || terms_[i].second != ratio * one[i].second) return;
    terms_.assign(1, {0, ratio});
    n_ = 1;
  }

  static const std::vector<Term>& unit_expansion(std::int64_t n) {
    thread_local std::unordered_map<std::int64_t, std::vector<Term>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<std::int64_t> acc(n, 0);
    acc[0] = 1;
    detail::CycloBasis::get(n).reduce(acc);
    std::vector<Term> t;
    for (std::int64_t e = 0; e < n; ++e)
      if (acc[e] != 0) t.emplace_back(static_cast<std::int32_t>(e), acc[e]);
    return cache.emplace(n, std::move(t)).first->second;
  }

  static CycloValue add(const CycloValue& a, const CycloValue& b, std::int64_t sign) {
    if (b.is_zero()) return a;
    if (a.is_zero()) return sign > 0 ? b : -b;
    std::int64_t m = num::lcm(a.n_, b.n_);
    std::int64_t g = std::gcd(a.den_, b.den_);
    std::int64_t fa = b.den_ / g, fb = a.den_ / g;
    CycloValue r;
    r.n_ = m;
    r.den_ = num::checked_mul(a.den_, fa);
    if (m == a.n_ && m == b.n_) {
      // Same basis: merge sorted term lists.
      std::vector<Term> out;
      out.reserve(a.terms_.size() + b.terms_.size());
      std::size_t i = 0, j = 0;
      while (i < a.terms_.size() || j < b.terms_.size()) {
        if (j == b.terms_.size() || (i < a.terms_.size() && a.terms_[i].first < b.terms_[j].first)) {
          out.emplace_back(a.terms_[i].first, num::checked_mul(a.terms_[i].second, fa));
          ++i;
        } else if (i == a.terms_.size() || b.terms_[j].first < a.terms_[i].first) {
          out.emplace_back(b.terms_[j].first, sign * num::checked_mul(b.terms_[j].second, fb));
          ++j;
        } else {
          std::int64_t c = num::checked_add(num::checked_mul(a.terms_[i].second, fa),
                                            sign * num::checked_mul(b.terms_[j].second, fb));
          if (c != 0) out.emplace_back(a.terms_[i].first, c);
          ++i;
          ++j;
        }
      }
      r.terms_ = std::move(out);
      r.normalize();
      return r;
    }
    auto& acc = detail::scratch(m);
    std::fill(acc.begin(), acc.begin() + m, 0);
    std::int64_t ea = m / a.n_, eb = m / b.n_;
    for (auto [e, c] : a.terms_) acc[e * ea] = num::checked_add(acc[e * ea], num::checked_mul(c, fa));
    for (auto [e, c] : b.terms_)
      acc[e * eb] = num::checked_add(acc[e * eb], sign * num::checked_mul(c, fb));
    r.absorb(acc);
    return r;
  }

  static CycloValue mul(const CycloValue& a, const CycloValue& b) {
    if (a.is_zero() || b.is_zero()) return CycloValue();
    if (a.n_ == 1) return b.scaled(a.terms_[0].second, a.den_);
    if (b.n_ == 1) return a.scaled(b.terms_[0].second, b.den_);
    std::int64_t m = num::lcm(a.n_, b.n_);
    auto& acc = detail::scratch(m);
    std::fill(acc.begin(), acc.begin() + m, 0);
    std::int64_t ea = m / a.n_, eb = m / b.n_;
    for (auto [x, c] : a.terms_) {
      std::int64_t base = x * ea;
      for (auto [y, d] : b.terms_) {
        std::int64_t t = base + y * eb;
        if (t >= m) t -= m;
        acc[t] = num::checked_add(acc[t], num::checked_mul(c, d));
      }
    }
    CycloValue r;
    r.n_ = m;
    r.den_ = num::checked_mul(a.den_, b.den_);
    r.absorb(acc);
    return r;
  }
};

}  // namespace tracelab
