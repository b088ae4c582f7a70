#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "tracelab/charsum.hpp"
#include "tracelab/parallel.hpp"
#include "tracelab/perm.hpp"
#include "tracelab/torus.hpp"

namespace tracelab {

/// T_w(F_q) = {t : t_{w(i)} = t_i^q}; one coordinate x_c in F_{q^l}^x per cycle c of w,
/// placed as t_{w^k(i0)} = x_c^{q^k} with i0 the smallest element of c.
class TwistedTorus {
 public:
  TwistedTorus() = default;
  TwistedTorus(std::shared_ptr<const FieldTower> tower, Perm w) : tower_(std::move(tower)), w_(std::move(w)) {
    cycles_ = w_.cycles();
    L_ = 1;
    size_ = 1;
    for (const auto& c : cycles_) {
      int l = static_cast<int>(c.size());
      L_ = static_cast<int>(num::lcm(L_, l));
      orders_.push_back(static_cast<std::int64_t>(tower_->order(l)));
      size_ = num::checked_mul(size_, orders_.back());
    }
    if (L_ > tower_->max_ext()) throw Error(ErrorKind::Config, "tower too shallow for twisted torus of " + w_.str());
  }

  const Perm& w() const { return w_; }
  const std::vector<std::vector<int>>& cycles() const { return cycles_; }
  /// Order of the coordinate group of each cycle.
  const std::vector<std::int64_t>& cycle_orders() const { return orders_; }
  int split_degree() const { return L_; }
  std::int64_t size() const { return size_; }
  const FieldTower& tower() const { return *tower_; }

  std::vector<std::int64_t> coords(std::int64_t idx) const {
    std::vector<std::int64_t> v(cycles_.size());
    for (std::size_t c = cycles_.size(); c-- > 0;) {
      v[c] = idx % orders_[c];
      idx /= orders_[c];
    }
    return v;
  }

  std::int64_t index(const std::vector<std::int64_t>& v) const {
    std::int64_t idx = 0;
    for (std::size_t c = 0; c < cycles_.size(); ++c) idx = idx * orders_[c] + num::mod(v[c], orders_[c]);
    return idx;
  }

  /// The n coordinates of the point as dlogs in level M (split_degree() divides M).
  std::vector<std::int64_t> embedded(std::int64_t idx, int M) const {
    const std::int64_t q = tower_->q();
    const std::int64_t oM = static_cast<std::int64_t>(tower_->order(M));
    auto v = coords(idx);
    std::vector<std::int64_t> t(w_.size(), 0);
    for (std::size_t c = 0; c < cycles_.size(); ++c) {
      int l = static_cast<int>(cycles_[c].size());
      std::int64_t e = num::mulmod(v[c], static_cast<std::int64_t>(tower_->index(l, M)), oM);
      for (int k = 0; k < l; ++k) {
        t[cycles_[c][k]] = e;
        e = num::mulmod(e, q, oM);
      }
    }
    return t;
  }

  /// Inverse of embedded(); throws NotFixed if the tuple is not a point of T_w.
  std::int64_t locate(const std::vector<std::int64_t>& t, int M) const {
    const std::int64_t q = tower_->q();
    const std::int64_t oM = static_cast<std::int64_t>(tower_->order(M));
    std::vector<std::int64_t> v(cycles_.size());
    for (std::size_t c = 0; c < cycles_.size(); ++c) {
      int l = static_cast<int>(cycles_[c].size());
      std::int64_t k = static_cast<std::int64_t>(tower_->index(l, M));
      std::int64_t e = num::mod(t[cycles_[c][0]], oM);
      if (e % k != 0) throw Error(ErrorKind::NotFixed, "tuple is not a point of the twisted torus");
      v[c] = e / k;
      for (int j = 1; j < l; ++j) {
        e = num::mulmod(e, q, oM);
        if (num::mod(t[cycles_[c][j]], oM) != e) throw Error(ErrorKind::NotFixed, "tuple is not Frobenius-twisted");
      }
    }
    return index(v);
  }

 private:
  std::shared_ptr<const FieldTower> tower_;
  Perm w_;
  std::vector<std::vector<int>> cycles_;
  std::vector<std::int64_t> orders_;
  int L_ = 1;
  std::int64_t size_ = 1;
};

/// Character of T_w(F_q): exponent b_c mod (q^{l_c} - 1) per cycle.
struct TwistedChar {
  std::vector<std::int64_t> exps;

  template <class V>
  V value(const TwistedTorus& tt, std::int64_t idx) const {
    auto v = tt.coords(idx);
    V r = value_traits<V>::integer(1);
    for (std::size_t c = 0; c < v.size(); ++c)
      r = value_traits<V>::times_root(r, num::mulmod(exps[c], v[c], tt.cycle_orders()[c]), tt.cycle_orders()[c]);
    return r;
  }

  friend bool operator==(const TwistedChar& a, const TwistedChar& b) { return a.exps == b.exps; }
};

inline bool fixes_char(const Perm& w, const TorusChar& chi, std::int64_t m) {
  for (int i = 0; i < w.size(); ++i)
    if (num::mod(chi[w(i)] - chi[i], m) != 0) return false;
  return true;
}

/// chi restricted to T_w: on a cycle with common exponent a, x -> chi_a(Norm x).
inline TwistedChar restrict_char(const TorusChar& chi, const TwistedTorus& tt) {
  const std::int64_t m = static_cast<std::int64_t>(tt.tower().order(1));
  if (!fixes_char(tt.w(), chi, m)) throw Error(ErrorKind::NotFixed, "character is not fixed by " + tt.w().str());
  TwistedChar r;
  for (std::size_t c = 0; c < tt.cycles().size(); ++c) {
    int l = static_cast<int>(tt.cycles()[c].size());
    std::int64_t o = tt.cycle_orders()[c];
    r.exps.push_back(num::mulmod(num::mod(chi[tt.cycles()[c][0]], m), static_cast<std::int64_t>(tt.tower().index(1, l)), o));
  }
  return r;
}

/// Exponent of zeta_{q-1} in restrict_char(chi)(t); chi must be w-fixed.
inline std::int64_t restricted_exponent(const TorusChar& chi, const TwistedTorus& tt, std::int64_t idx) {
  const std::int64_t m = static_cast<std::int64_t>(tt.tower().order(1));
  auto v = tt.coords(idx);
  std::int64_t s = 0;
  for (std::size_t c = 0; c < v.size(); ++c) s += num::mod(chi[tt.cycles()[c][0]], m) * (v[c] % m);
  return s % m;
}

struct StabilizerPair {
  std::vector<Perm> generators;  // transpositions (i j) with a_i = a_j
  std::vector<Perm> w_chi;       // group generated by the reflections
  std::vector<Perm> w_chi_prime; // full stabilizer
};

/// W_chi and W'_chi, both sorted lexicographically.
inline StabilizerPair w_chi(const TorusChar& chi, std::int64_t m) {
  const int n = static_cast<int>(chi.size());
  StabilizerPair r;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (num::mod(chi[i] - chi[j], m) == 0) r.generators.push_back(Perm::transposition(n, i, j));
  std::set<Perm> seen{Perm::identity(n)};
  std::vector<Perm> frontier{Perm::identity(n)};
  while (!frontier.empty()) {
    std::vector<Perm> next;
    for (const auto& g : frontier)
      for (const auto& s : r.generators) {
        Perm h = s * g;
        if (seen.insert(h).second) next.push_back(h);
      }
    frontier = std::move(next);
  }
  r.w_chi.assign(seen.begin(), seen.end());
  for (const auto& w : all_perms(n))
    if (fixes_char(w, chi, m)) r.w_chi_prime.push_back(w);
  return r;
}

/// (w . lambda)_{w(j)} = lambda_j.
inline std::vector<std::int64_t> act_on_weight(const Perm& w, const std::vector<std::int64_t>& lambda) {
  std::vector<std::int64_t> r(lambda.size());
  for (int j = 0; j < w.size(); ++j) r[w(j)] = lambda[j];
  return r;
}

/// eta with lambda_{eta(i)} = w . lambda_i; greedy smallest unused index. Throws NotStable.
inline Perm lift_weight_perm(const WeightData& rho, const Perm& w) {
  const int r = rho.r();
  std::vector<int> eta(r, -1);
  std::vector<bool> used(r, false);
  for (int i = 0; i < r; ++i) {
    auto target = act_on_weight(w, rho.rows[i]);
    for (int j = 0; j < r; ++j)
      if (!used[j] && rho.rows[j] == target) {
        eta[i] = j;
        used[j] = true;
        break;
      }
    if (eta[i] < 0) throw Error(ErrorKind::NotStable, "weight multiset is not stable under " + w.str());
  }
  return Perm(std::move(eta));
}

/// Every eta with lambda_{eta(i)} = w . lambda_i, lexicographic.
inline std::vector<Perm> all_lifts(const WeightData& rho, const Perm& w) {
  const int r = rho.r();
  std::vector<std::vector<std::int64_t>> targets;
  for (const auto& row : rho.rows) targets.push_back(act_on_weight(w, row));
  std::vector<Perm> out;
  std::vector<int> eta(r, -1);
  std::vector<bool> used(r, false);
  std::function<void(int)> rec = [&](int i) {
    if (i == r) {
      out.emplace_back(eta);
      return;
    }
    for (int j = 0; j < r; ++j)
      if (!used[j] && rho.rows[j] == targets[i]) {
        used[j] = true;
        eta[i] = j;
        rec(i + 1);
        used[j] = false;
      }
  };
  rec(0);
  if (out.empty()) throw Error(ErrorKind::NotStable, "weight multiset is not stable under " + w.str());
  return out;
}

/// Smallest field degree holding both T_w and the eta-twisted source points.
inline int twisted_degree(const Perm& w, const Perm& eta) {
  std::int64_t M = 1;
  for (const auto& c : w.cycles()) M = num::lcm(M, static_cast<std::int64_t>(c.size()));
  for (const auto& c : eta.cycles()) M = num::lcm(M, static_cast<std::int64_t>(c.size()));
  return static_cast<int>(M);
}

/// Tower depth needed by gamma_datum(rho) and by twisted tori of rank n.
inline int required_max_ext(const WeightData& rho) {
  int M = 1;
  for (const auto& w : all_perms(rho.n)) M = std::max(M, twisted_degree(w, lift_weight_perm(rho, w)));
  return M;
}

inline int required_max_ext(int n) {
  int M = 1;
  for (const auto& w : all_perms(n)) M = std::max(M, twisted_degree(w, Perm::identity(1)));
  return M;
}

/// Unsigned twisted sum: for t in T_w, sum over x with x_{eta(i)} = x_i^q and pr_lambda(x) = t
/// of psi(sum over eta-orbits O of Tr x_O).
template <class V>
std::vector<V> twisted_sum(const TwistedTorus& tt, const WeightData& rho, const Perm& eta, const AddChar& psi = {1, 1}) {
  rho.validate();
  const FieldTower& tower = tt.tower();
  const int M = twisted_degree(tt.w(), eta);
  if (M > tower.max_ext()) throw Error(ErrorKind::Config, "tower too shallow: need degree " + std::to_string(M));
  const std::int64_t oM = static_cast<std::int64_t>(tower.order(M));
  const std::int64_t q = tower.q();
  const std::int64_t p = tower.p();
  auto orbits = eta.cycles();
  std::vector<std::int64_t> sizes;
  std::int64_t total = 1;
  for (const auto& o : orbits) {
    sizes.push_back(static_cast<std::int64_t>(tower.order(static_cast<int>(o.size()))));
    total = num::checked_mul(total, sizes.back());
  }
  // Trace exponent of x_O = g_d^m at level d, per orbit size.
  std::vector<std::vector<int>> trace_tab(tower.max_ext() + 1);
  for (const auto& o : orbits) {
    int d = static_cast<int>(o.size());
    if (!trace_tab[d].empty()) continue;
    const auto& Ld = tower.level(d);
    trace_tab[d].resize(Ld.order());
    AddChar psid{d, tower.embed(psi.scale, 1, d)};
    for (std::uint64_t mm = 0; mm < Ld.order(); ++mm) trace_tab[d][mm] = psid.exponent(tower, Ld.exp(mm));
  }
  const int r = rho.r(), n = rho.n;
  std::vector<std::int64_t> counts(static_cast<std::size_t>(tt.size() * p), 0);
  std::vector<std::int64_t> xm(orbits.size()), xi(r), pr(n);
  for (std::int64_t it = 0; it < total; ++it) {
    std::int64_t rem = it;
    for (std::size_t o = orbits.size(); o-- > 0;) {
      xm[o] = rem % sizes[o];
      rem /= sizes[o];
    }
    int tr = 0;
    for (std::size_t o = 0; o < orbits.size(); ++o) {
      int d = static_cast<int>(orbits[o].size());
      tr += trace_tab[d][xm[o]];
      std::int64_t e = num::mulmod(xm[o], static_cast<std::int64_t>(tower.index(d, M)), oM);
      for (int k = 0; k < d; ++k) {
        xi[orbits[o][k]] = e;
        e = num::mulmod(e, q, oM);
      }
    }
    for (int j = 0; j < n; ++j) {
      std::int64_t s = 0;
      for (int i = 0; i < r; ++i) s = num::mod(s + num::mulmod(rho.rows[i][j], xi[i], oM), oM);
      pr[j] = s;
    }
    std::int64_t t = tt.locate(pr, M);
    ++counts[static_cast<std::size_t>(t * p + tr % p)];
  }
  std::vector<V> out(static_cast<std::size_t>(tt.size()));
  for (std::int64_t t = 0; t < tt.size(); ++t)
    out[t] = value_traits<V>::from_counts(std::vector<std::int64_t>(counts.begin() + t * p, counts.begin() + (t + 1) * p), p);
  return out;
}

/// phi_w = sign_W(w) sign_r(eta) (-1)^r * twisted_sum, eta the deterministic lift.
template <class V>
std::vector<V> bessel_twisted(const TwistedTorus& tt, const WeightData& rho, const AddChar& psi = {1, 1}) {
  Perm eta = lift_weight_perm(rho, tt.w());
  auto f = twisted_sum<V>(tt, rho, eta, psi);
  int s = tt.w().sign() * eta.sign() * (rho.r() % 2 == 0 ? 1 : -1);
  if (s < 0)
    for (auto& v : f) v = -v;
  return f;
}

/// The family {f_w : T_w(F_q) -> V}, w over S_n in lexicographic order (index 0 = identity).
template <class V>
struct EquivDatum {
  std::shared_ptr<const FieldTower> tower;
  int n = 0;
  std::string name;
  std::vector<Perm> perms;
  std::vector<TwistedTorus> tori;
  std::vector<std::vector<V>> f;

  std::int64_t m() const { return static_cast<std::int64_t>(tower->order(1)); }
  TorusShape shape() const { return {n, m()}; }

  /// f at the identity as a function on T(F_q).
  TorusFunction<V> identity_function() const {
    TorusFunction<V> out(shape());
    out.values = f[0];
    return out;
  }

  int index_of(const Perm& w) const { return perm_index(perms, w); }
};

template <class V>
EquivDatum<V> empty_datum(std::shared_ptr<const FieldTower> tower, int n, std::string name) {
  EquivDatum<V> d;
  d.tower = tower;
  d.n = n;
  d.name = std::move(name);
  d.perms = all_perms(n);
  for (const auto& w : d.perms) d.tori.emplace_back(tower, w);
  d.f.resize(d.perms.size());
  return d;
}

/// f_w = bessel_twisted(rho, w).
template <class V>
EquivDatum<V> gamma_datum(std::shared_ptr<const FieldTower> tower, const WeightData& rho) {
  rho.validate();
  auto d = empty_datum<V>(tower, rho.n, "gamma[" + rho.str() + "]");
  for (std::size_t i = 0; i < d.perms.size(); ++i) d.f[i] = bessel_twisted<V>(d.tori[i], rho);
  return d;
}

/// f_w = sign(w) * delta at the identity of T_w.
template <class V>
EquivDatum<V> sign_delta_datum(std::shared_ptr<const FieldTower> tower, int n) {
  auto d = empty_datum<V>(tower, n, "sign-delta");
  for (std::size_t i = 0; i < d.perms.size(); ++i) {
    d.f[i].assign(static_cast<std::size_t>(d.tori[i].size()), value_traits<V>::zero());
    d.f[i][0] = value_traits<V>::integer(d.perms[i].sign());
  }
  return d;
}

/// f_w = 1 everywhere; not central.
template <class V>
EquivDatum<V> constant_datum(std::shared_ptr<const FieldTower> tower, int n) {
  auto d = empty_datum<V>(tower, n, "constant");
  for (std::size_t i = 0; i < d.perms.size(); ++i)
    d.f[i].assign(static_cast<std::size_t>(d.tori[i].size()), value_traits<V>::integer(1));
  return d;
}

/// The S_n orbit of chi (exponents reduced mod m), sorted.
inline std::vector<TorusChar> char_orbit(const TorusChar& chi, std::int64_t m) {
  std::set<TorusChar> out;
  for (const auto& w : all_perms(static_cast<int>(chi.size()))) {
    TorusChar c(chi.size());
    for (int i = 0; i < w.size(); ++i) c[w(i)] = num::mod(chi[i], m);
    out.insert(c);
  }
  return {out.begin(), out.end()};
}

/// TM_w(mu) = sign(w) on restrictions of w-fixed members of theta, 0 elsewhere; f_w by inversion on T_w.
template <class V>
EquivDatum<V> orbit_datum(std::shared_ptr<const FieldTower> tower, const std::vector<TorusChar>& theta) {
  if (theta.empty()) throw Error(ErrorKind::NotAnOrbit, "empty orbit");
  const std::int64_t m = static_cast<std::int64_t>(tower->order(1));
  std::set<TorusChar> given;
  for (const auto& c : theta) {
    TorusChar r(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) r[i] = num::mod(c[i], m);
    given.insert(r);
  }
  auto full = char_orbit(*given.begin(), m);
  if (std::vector<TorusChar>(given.begin(), given.end()) != full)
    throw Error(ErrorKind::NotAnOrbit, "characters do not form one full S_n orbit");
  const int n = static_cast<int>(theta[0].size());
  std::string label;
  for (auto v : full[0]) label += (label.empty() ? "" : ",") + std::to_string(v);
  auto d = empty_datum<V>(tower, n, "orbit[" + label + "]");
  for (std::size_t i = 0; i < d.perms.size(); ++i) {
    const auto& tt = d.tori[i];
    d.f[i].assign(static_cast<std::size_t>(tt.size()), value_traits<V>::zero());
    for (std::int64_t t = 0; t < tt.size(); ++t) {
      std::vector<std::int64_t> counts(m, 0);
      for (const auto& chi : full)
        if (fixes_char(tt.w(), chi, m)) ++counts[(m - restricted_exponent(chi, tt, t)) % m];
      V v = value_traits<V>::from_counts(std::move(counts), m);
      d.f[i][t] = value_traits<V>::scaled(v, d.perms[i].sign(), tt.size());
    }
  }
  return d;
}

/// TM_w(chi) = sum over t in T_w of f_w(t) * restrict_char(chi)(t).
template <class V>
V twisted_mellin(const EquivDatum<V>& d, std::size_t w_idx, const TorusChar& chi) {
  const auto& tt = d.tori[w_idx];
  const std::int64_t m = d.m();
  if (!fixes_char(tt.w(), chi, m)) throw Error(ErrorKind::NotFixed, "character is not fixed by " + tt.w().str());
  std::vector<V> buckets(m, value_traits<V>::zero());
  for (std::int64_t t = 0; t < tt.size(); ++t) buckets[restricted_exponent(chi, tt, t)] += d.f[w_idx][t];
  V s = value_traits<V>::zero();
  for (std::int64_t e = 0; e < m; ++e)
    if (!value_traits<V>::is_zero(buckets[e], 0.0)) s += value_traits<V>::times_root(buckets[e], e, m);
  return s;
}

enum class CentralityMode { WChi, WChiPrime };

template <class V>
struct CentralityCell {
  TorusChar chi;
  Perm w;
  V twisted;   // TM_w(chi)
  V expected;  // sign(w) * M(f_e)(chi)
  bool pass = false;
};

template <class V>
struct CentralityReport {
  std::vector<CentralityCell<V>> cells;
  std::size_t failures = 0;
  bool passed() const { return failures == 0; }
};

/// Float tolerance for torus-scale identities.
template <class V>
double torus_tolerance(const EquivDatum<V>& d) {
  if constexpr (value_traits<V>::exact) {
    return 0.0;
  } else {
    double mx = 0.0;
    for (const auto& table : d.f)
      for (const auto& v : table) mx = std::max(mx, std::abs(value_traits<V>::to_complex(v)));
    return 1e-8 * std::pow(static_cast<double>(d.m()), d.n / 2.0) * std::max(mx, 1.0);
  }
}

/// For every chi and every w in W_chi (or W'_chi): TM_w(chi) == sign(w) M(f_e)(chi).
template <class V>
CentralityReport<V> centrality_check(const EquivDatum<V>& d, CentralityMode mode = CentralityMode::WChi,
                                     unsigned workers = 0) {
  const TorusShape sh = d.shape();
  auto spectrum = mellin(d.identity_function());
  const double tol = torus_tolerance(d);
  std::vector<std::vector<CentralityCell<V>>> per_chi(static_cast<std::size_t>(sh.size()));
  parallel_for(
      static_cast<std::size_t>(sh.size()),
      [&](std::size_t ci) {
        TorusChar chi = sh.coords(static_cast<std::int64_t>(ci));
        auto st = w_chi(chi, sh.m);
        const auto& group = mode == CentralityMode::WChi ? st.w_chi : st.w_chi_prime;
        for (const auto& w : group) {
          CentralityCell<V> cell;
          cell.chi = chi;
          cell.w = w;
          cell.twisted = twisted_mellin(d, static_cast<std::size_t>(d.index_of(w)), chi);
          cell.expected = w.sign() > 0 ? spectrum[static_cast<std::int64_t>(ci)] : -spectrum[static_cast<std::int64_t>(ci)];
          cell.pass = value_traits<V>::equal(cell.twisted, cell.expected, tol);
          per_chi[ci].push_back(std::move(cell));
        }
      },
      workers);
  CentralityReport<V> rep;
  for (auto& v : per_chi)
    for (auto& c : v) {
      if (!c.pass) ++rep.failures;
      rep.cells.push_back(std::move(c));
    }
  return rep;
}

/// f_{v w v^-1}(v . t) == f_w(t) for all v, w, t, where (v . t)_{v(i)} = t_i.
template <class V>
bool conjugation_consistent(const EquivDatum<V>& d, double tol = 0.0) {
  for (std::size_t wi = 0; wi < d.perms.size(); ++wi) {
    const auto& tt = d.tori[wi];
    const int M = tt.split_degree();
    for (const auto& v : d.perms) {
      Perm w2 = v * d.perms[wi] * v.inverse();
      std::size_t w2i = static_cast<std::size_t>(d.index_of(w2));
      const auto& tt2 = d.tori[w2i];
      for (std::int64_t t = 0; t < tt.size(); ++t) {
        auto coords = tt.embedded(t, M);
        std::vector<std::int64_t> moved(coords.size());
        for (int i = 0; i < v.size(); ++i) moved[v(i)] = coords[i];
        std::int64_t t2 = tt2.locate(moved, M);
        if (!value_traits<V>::equal(d.f[w2i][t2], d.f[wi][t], tol)) return false;
      }
    }
  }
  return true;
}

}  // namespace tracelab
