#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tracelab/green.hpp"

namespace tracelab {

/// How an ordering of distinct roots is read as a point of a twisted torus.
/// Forward: t_{w(i)} = t_i^q. Backward: the same cycle coordinates read against w^{-1}.
enum class FrobeniusConvention { Forward, Backward };

inline constexpr FrobeniusConvention kFrobeniusConvention = FrobeniusConvention::Forward;

struct Rational {
  std::int64_t num = 1;
  std::int64_t den = 1;
  friend bool operator==(const Rational& a, const Rational& b) { return a.num * b.den == b.num * a.den; }
  std::string str() const { return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den); }
};

/// Nearest rational with denominator <= max_den, if z is real and within 1e-6 of it.
inline std::optional<Rational> rationalize(Complex z, std::int64_t max_den = 720) {
  if (std::abs(z.imag()) > 1e-6) return std::nullopt;
  for (std::int64_t den = 1; den <= max_den; ++den) {
    double x = z.real() * static_cast<double>(den);
    double r = std::round(x);
    if (std::abs(x - r) < 1e-6 * static_cast<double>(den)) return Rational{static_cast<std::int64_t>(r), den};
  }
  return std::nullopt;
}

/// Frozen normalization c_w per torus type, regenerated by calibrate_normalization.
inline Rational frozen_normalization(const std::vector<int>& cycle_type) {
  static const std::vector<std::pair<std::vector<int>, Rational>> table = {
      {{1}, {1, 1}},    {{1, 1}, {1, 1}},    {{2}, {1, 1}},
      {{1, 1, 1}, {1, 1}}, {{2, 1}, {1, 1}}, {{3}, {1, 1}},
  };
  for (const auto& [t, c] : table)
    if (t == cycle_type) return c;
  throw Error(ErrorKind::RankUnsupported, "no normalization constant for this torus type");
}

/// Full induction from T(F_q): value at g is the sum of f over the torus parts of the g-stable flags.
template <class V>
ClassFunction<V> induce_full(std::shared_ptr<const MatrixSpace> space, const TorusFunction<V>& f) {
  if (f.shape.n != space->n()) throw Error(ErrorKind::Config, "torus function rank does not match");
  return ClassFunction<V>(space, [space, f](const Matrix& g, const ClassInfo&) {
    V s = value_traits<V>::zero();
    for (const auto& [k, t] : space->fixed_flags(g)) s += f[f.shape.index(t)];
    return s;
  });
}

/// (1/n!) sum over orderings t of the roots of g of f_w(t), w the Frobenius permutation of t.
template <class V>
V induce_rss(const EquivDatum<V>& d, const Matrix& g, FrobeniusConvention conv = kFrobeniusConvention) {
  MatrixSpace S(d.tower, d.n);
  ClassInfo info = S.fingerprint(g);
  if (!info.regular_semisimple()) throw Error(ErrorKind::NotRegularSemisimple, "characteristic polynomial is not squarefree");
  const FieldTower& tower = *d.tower;
  const auto roots = factor_roots(tower, info);
  int L = 1;
  for (const auto& r : roots) L = static_cast<int>(num::lcm(L, r.d));
  if (L > tower.max_ext()) throw Error(ErrorKind::Config, "tower too shallow to split the characteristic polynomial");
  const std::int64_t q = tower.q();
  const std::int64_t oL = static_cast<std::int64_t>(tower.order(L));
  std::vector<std::int64_t> all;
  for (const auto& r : roots) {
    const std::int64_t od = static_cast<std::int64_t>(tower.order(r.d));
    const std::int64_t ix = static_cast<std::int64_t>(tower.index(r.d, L));
    std::int64_t e = r.alpha;
    for (int j = 0; j < r.d; ++j) {
      all.push_back(num::mulmod(e, ix, oL));
      e = num::mulmod(e, q, od);
    }
  }
  const int n = d.n;
  V s = value_traits<V>::zero();
  for (const auto& pi : all_perms(n)) {
    std::vector<std::int64_t> t(n);
    for (int i = 0; i < n; ++i) t[i] = all[pi(i)];
    std::vector<int> img(n, -1);
    for (int i = 0; i < n; ++i) {
      std::int64_t fr = num::mulmod(t[i], q, oL);
      for (int j = 0; j < n; ++j)
        if (t[j] == fr) img[i] = j;
    }
    Perm wf(img);
    const std::size_t wi = static_cast<std::size_t>(d.index_of(wf));
    const std::int64_t idx = d.tori[wi].locate(t, L);
    if (conv == FrobeniusConvention::Forward)
      s += d.f[wi][idx];
    else
      s += d.f[static_cast<std::size_t>(d.index_of(wf.inverse()))][idx];
  }
  return value_traits<V>::scaled(s, 1, num::factorial(n));
}

/// Mixed-radix Fourier transform on T_w: out(mu) = sum_t f(t) prod_c zeta_{o_c}^{sign mu_c x_c}.
template <class V>
std::vector<V> twisted_spectrum(const TwistedTorus& tt, const std::vector<V>& f, int sign) {
  std::vector<V> a = f;
  const auto& orders = tt.cycle_orders();
  std::int64_t stride = 1;
  for (std::size_t c = orders.size(); c-- > 0;) {
    const std::int64_t m = orders[c];
    std::vector<V> out(a.size(), value_traits<V>::zero());
    const std::int64_t block = stride * m;
    for (std::int64_t hi = 0; hi < static_cast<std::int64_t>(a.size()); hi += block)
      for (std::int64_t lo = 0; lo < stride; ++lo) {
        const std::int64_t base = hi + lo;
        for (std::int64_t mu = 0; mu < m; ++mu) {
          V acc = value_traits<V>::zero();
          for (std::int64_t x = 0; x < m; ++x) {
            const V& v = a[static_cast<std::size_t>(base + x * stride)];
            if (value_traits<V>::is_zero(v, 0.0)) continue;
            acc += value_traits<V>::times_root(v, num::mod(sign * num::mulmod(mu, x, m), m), m);
          }
          out[static_cast<std::size_t>(base + mu * stride)] = std::move(acc);
        }
      }
    a = std::move(out);
    stride = block;
  }
  return a;
}

/// Per-w tables c_w * sum_mu fhat_w(mu) mu(t), rebuilt from the twisted Mellin spectrum of f_w.
template <class V>
std::vector<std::vector<V>> spectral_tables(const EquivDatum<V>& d, bool normalized = true) {
  std::vector<std::vector<V>> out(d.perms.size());
  for (std::size_t wi = 0; wi < d.perms.size(); ++wi) {
    const auto& tt = d.tori[wi];
    auto tm = twisted_spectrum(tt, d.f[wi], 1);
    auto g = twisted_spectrum(tt, tm, -1);
    Rational c = normalized ? frozen_normalization(d.perms[wi].cycle_type()) : Rational{1, 1};
    for (auto& v : g) v = value_traits<V>::scaled(v, c.num, num::checked_mul(c.den, tt.size()));
    out[wi] = std::move(g);
  }
  return out;
}

/// (1/weyl_order) sum over the listed w of sum over t in T_w matching the blocks of table_w(t) * Green weight.
template <class V>
V phi_class_sum(const EquivDatum<V>& d, const std::vector<std::vector<V>>& tables, const std::vector<std::size_t>& ws,
                const std::vector<ClassBlock>& blocks, std::int64_t weyl_order) {
  V s = value_traits<V>::zero();
  for (std::size_t wi : ws) {
    const auto& tt = d.tori[wi];
    for (std::int64_t idx = 0; idx < tt.size(); ++idx) {
      auto wt = green_weight(tt, idx, blocks);
      if (!wt) continue;
      s += value_traits<V>::scaled(tables[wi][static_cast<std::size_t>(idx)], *wt, 1);
    }
  }
  return value_traits<V>::scaled(s, 1, weyl_order);
}

inline std::vector<std::size_t> all_indices(std::size_t k) {
  std::vector<std::size_t> v(k);
  for (std::size_t i = 0; i < k; ++i) v[i] = i;
  return v;
}

/// Phi_d = (1/n!) sum_w c_w sum_mu fhat_w(mu) R_{T_w, mu}, evaluated as a class function.
template <class V>
ClassFunction<V> build_phi(const EquivDatum<V>& d) {
  if (d.n > 3) throw Error(ErrorKind::RankUnsupported, "build_phi needs n <= 3");
  auto space = std::make_shared<const MatrixSpace>(d.tower, d.n);
  auto datum = std::make_shared<const EquivDatum<V>>(d);
  auto tables = std::make_shared<const std::vector<std::vector<V>>>(spectral_tables(d));
  return ClassFunction<V>(space, [datum, tables](const Matrix&, const ClassInfo& info) {
    return phi_class_sum(*datum, *tables, all_indices(datum->perms.size()), {whole_block(*datum->tower, datum->n, info)},
                         num::factorial(datum->n));
  });
}

struct NormalizationFit {
  std::vector<int> cycle_type;
  Rational constant;
  bool determined = false;  // some rss class of this type has a nonzero unnormalized value
  bool consistent = true;   // one constant matches every rss class of this type
};

/// Solves for c_w by matching the unnormalized spectral sum with induce_rss on every rss class.
template <class V>
std::vector<NormalizationFit> calibrate_normalization(const EquivDatum<V>& d) {
  MatrixSpace S(d.tower, d.n);
  const auto tables = spectral_tables(d, false);
  const auto ws = all_indices(d.perms.size());
  std::vector<NormalizationFit> fits;
  for (const auto& w : d.perms) {
    auto ct = w.cycle_type();
    bool have = false;
    for (const auto& f : fits) have = have || f.cycle_type == ct;
    if (!have) fits.push_back({ct, {1, 1}, false, true});
  }
  struct Sample {
    std::size_t fit;
    V raw, target;
  };
  std::vector<Sample> samples;
  for (const auto& rep : S.class_representatives()) {
    if (!rep.info.regular_semisimple()) continue;
    std::vector<int> ct;
    for (const auto& b : rep.info.blocks) ct.push_back(poly::degree(b.f));
    std::sort(ct.rbegin(), ct.rend());
    std::size_t fi = 0;
    while (fits[fi].cycle_type != ct) ++fi;
    V raw = phi_class_sum(d, tables, ws, {whole_block(*d.tower, d.n, rep.info)}, num::factorial(d.n));
    samples.push_back({fi, raw, induce_rss(d, rep.g)});
  }
  const double tol = value_traits<V>::exact ? 0.0 : 1e-8;
  for (const auto& s : samples) {
    auto& fit = fits[s.fit];
    if (fit.determined || value_traits<V>::is_zero(s.raw, 1e-9)) continue;
    auto r = rationalize(value_traits<V>::to_complex(s.target) / value_traits<V>::to_complex(s.raw));
    if (!r) {
      fit.consistent = false;
      continue;
    }
    fit.constant = *r;
    fit.determined = true;
  }
  for (const auto& s : samples) {
    auto& fit = fits[s.fit];
    V scaled = value_traits<V>::scaled(s.raw, fit.constant.num, fit.constant.den);
    if (!value_traits<V>::equal(scaled, s.target, tol)) fit.consistent = false;
  }
  return fits;
}

template <class V>
struct MackeyReport {
  std::vector<int> composition;
  std::int64_t unipotent_size = 0;  // |U_P(F_q)|
  std::int64_t levi_points = 0;     // |L(F_q)|
  Rational constant{0, 1};
  bool determined = false;
  std::int64_t failures = 0;
  bool uniform() const { return determined && failures == 0; }
};

namespace detail {

inline std::vector<int> block_of(const std::vector<int>& composition) {
  std::vector<int> b;
  for (std::size_t k = 0; k < composition.size(); ++k)
    for (int i = 0; i < composition[k]; ++i) b.push_back(static_cast<int>(k));
  return b;
}

inline void check_composition(const std::vector<int>& composition, int n) {
  int s = 0;
  for (int v : composition) {
    if (v < 1) throw Error(ErrorKind::Config, "composition parts must be positive");
    s += v;
  }
  if (s != n) throw Error(ErrorKind::Config, "composition does not sum to n");
}

/// Indices of permutations preserving every block.
template <class V>
std::vector<std::size_t> levi_weyl(const EquivDatum<V>& d, const std::vector<int>& composition) {
  auto blk = block_of(composition);
  std::vector<std::size_t> out;
  for (std::size_t wi = 0; wi < d.perms.size(); ++wi) {
    bool ok = true;
    for (int i = 0; i < d.n; ++i) ok = ok && blk[d.perms[wi](i)] == blk[i];
    if (ok) out.push_back(wi);
  }
  return out;
}

}  // namespace detail

/// Phi^L at a block-diagonal l: (1/|W_L|) sum over w in W_L with blockwise conjugacy matching.
template <class V>
V phi_levi(const EquivDatum<V>& d, const std::vector<std::vector<V>>& tables, const std::vector<int>& composition,
           const Matrix& l) {
  detail::check_composition(composition, d.n);
  auto ws = detail::levi_weyl(d, composition);
  std::vector<ClassBlock> blocks;
  int off = 0;
  for (int nb : composition) {
    MatrixSpace Sb(d.tower, nb);
    Matrix lb(nb);
    for (int i = 0; i < nb; ++i)
      for (int j = 0; j < nb; ++j) lb(i, j) = l(off + i, off + j);
    ClassBlock cb;
    for (int i = 0; i < nb; ++i) cb.positions.push_back(off + i);
    cb.roots = factor_roots(*d.tower, Sb.fingerprint(lb));
    blocks.push_back(std::move(cb));
    off += nb;
  }
  return phi_class_sum(d, tables, ws, blocks, static_cast<std::int64_t>(ws.size()));
}

/// Sum over u in U_P of Phi^G(u l) against Phi^L(l) for every l in L(F_q); reports the ratio and its uniformity.
template <class V>
MackeyReport<V> mackey_check(const EquivDatum<V>& d, const std::vector<int>& composition) {
  if (d.n > 3) throw Error(ErrorKind::RankUnsupported, "mackey_check needs n <= 3");
  detail::check_composition(composition, d.n);
  auto phi = build_phi(d);
  const auto& S = phi.space();
  const auto tables = spectral_tables(d);
  auto blk = detail::block_of(composition);
  std::vector<std::pair<int, int>> upos;
  for (int i = 0; i < d.n; ++i)
    for (int j = 0; j < d.n; ++j)
      if (blk[i] < blk[j]) upos.emplace_back(i, j);
  const auto us = S.fill_positions(upos);
  // L(F_q) as products of the block groups.
  std::vector<Matrix> levi{Matrix(d.n)};
  int off = 0;
  for (int nb : composition) {
    MatrixSpace Sb(d.tower, nb);
    std::vector<Matrix> next;
    for (const auto& partial : levi)
      for (const auto& b : Sb.all_elements()) {
        Matrix m = partial;
        for (int i = 0; i < nb; ++i)
          for (int j = 0; j < nb; ++j) m(off + i, off + j) = b(i, j);
        next.push_back(std::move(m));
      }
    levi = std::move(next);
    off += nb;
  }
  MackeyReport<V> rep;
  rep.composition = composition;
  rep.unipotent_size = static_cast<std::int64_t>(us.size());
  rep.levi_points = static_cast<std::int64_t>(levi.size());
  std::vector<std::pair<V, V>> pairs;
  for (const auto& l : levi) {
    V s = value_traits<V>::zero();
    for (const auto& u : us) s += phi(S.mul(u, l));
    pairs.emplace_back(std::move(s), phi_levi(d, tables, composition, l));
  }
  for (const auto& [s, r] : pairs) {
    if (value_traits<V>::is_zero(r, 1e-9)) continue;
    auto c = rationalize(value_traits<V>::to_complex(s) / value_traits<V>::to_complex(r));
    if (!c) break;
    rep.constant = *c;
    rep.determined = true;
    break;
  }
  const double tol = value_traits<V>::exact ? 0.0 : 1e-8 * static_cast<double>(us.size());
  for (const auto& [s, r] : pairs)
    if (!value_traits<V>::equal(s, value_traits<V>::scaled(r, rep.constant.num, rep.constant.den), tol)) ++rep.failures;
  return rep;
}

struct SignCheckReport {
  std::int64_t transpositions = 0;
  std::int64_t characters = 0;
  std::int64_t failures = 0;
  bool passed() const { return transpositions > 0 && failures == 0; }
};

/// Pushes f_e and f_sigma forward along det on the last block (norm fibers on the twisted side)
/// and checks M(F_sigma) = -M(F_e) for each transposition sigma inside that block.
template <class V>
SignCheckReport deligne_sign_check(const EquivDatum<V>& d, const std::vector<int>& composition) {
  detail::check_composition(composition, d.n);
  const FieldTower& tower = *d.tower;
  const std::int64_t m = d.m();
  const int start = d.n - composition.back();
  std::vector<int> outside;
  for (int i = 0; i < start; ++i) outside.push_back(i);
  const TorusShape sh{static_cast<int>(outside.size()) + 1, m};
  auto push = [&](std::size_t wi) {
    const auto& tt = d.tori[wi];
    const int M = tt.split_degree();
    const std::int64_t ix = static_cast<std::int64_t>(tower.index(1, M));
    TorusFunction<V> F(sh);
    for (std::int64_t idx = 0; idx < tt.size(); ++idx) {
      auto t = tt.embedded(idx, M);
      std::vector<std::int64_t> key;
      for (int i : outside) key.push_back(t[i] / ix);
      std::int64_t det = 0;
      for (int i = start; i < d.n; ++i) det += t[i];
      key.push_back(num::mod(det, static_cast<std::int64_t>(tower.order(M))) / ix);
      F[sh.index(key)] += d.f[wi][static_cast<std::size_t>(idx)];
    }
    return mellin(F);
  };
  const auto base = push(0);
  const double tol = torus_tolerance(d);
  SignCheckReport rep;
  for (int i = start; i < d.n; ++i)
    for (int j = i + 1; j < d.n; ++j) {
      ++rep.transpositions;
      auto tw = push(static_cast<std::size_t>(d.index_of(Perm::transposition(d.n, i, j))));
      for (std::int64_t c = 0; c < sh.size(); ++c) {
        ++rep.characters;
        if (!value_traits<V>::equal(tw[c], -base[c], tol)) ++rep.failures;
      }
    }
  return rep;
}

}  // namespace tracelab
