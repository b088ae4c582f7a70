#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "tracelab/class_function.hpp"
#include "tracelab/weyl.hpp"

namespace tracelab {

/// Green polynomial Q_rho(mu) of GL_m over a field with Q elements, m <= 3.
/// rho is the torus type (cycle type), mu the unipotent Jordan partition; both decreasing.
inline std::int64_t green_value(const std::vector<int>& rho, const std::vector<int>& mu, std::int64_t Q) {
  int m = 0, m2 = 0;
  for (int v : rho) m += v;
  for (int v : mu) m2 += v;
  if (m != m2) throw Error(ErrorKind::Config, "Green polynomial arguments have different sizes");
  if (m < 1 || m > 3) throw Error(ErrorKind::RankUnsupported, "Green polynomials are tabulated for m <= 3");
  // For m <= 3 a partition is determined by its largest part; index 0 is (1^m), the last is (m).
  const int r = rho[0] - 1, u = mu[0] - 1;
  using num::checked_mul;
  switch (m) {
    case 1:
      return 1;
    case 2: {
      const std::int64_t t[2][2] = {{Q + 1, 1}, {1 - Q, 1}};
      return t[r][u];
    }
    default: {
      const std::int64_t Q2 = checked_mul(Q, Q), Q3 = checked_mul(Q2, Q);
      const std::int64_t t[3][3] = {{checked_mul(Q + 1, Q2 + Q + 1), 2 * Q + 1, 1},
                                    {1 - Q3, 1, 1},
                                    {checked_mul(Q - 1, Q2 - 1), 1 - Q, 1}};
      return t[r][u];
    }
  }
}

/// One primary factor of a class: degree, smallest root dlog at that level, multiplicity, Jordan partition.
struct FactorRoot {
  int d = 1;
  std::int64_t alpha = 0;
  int mult = 1;
  std::vector<int> partition;
};

/// Positions of a w-stable block of coordinates and the class data it must match.
struct ClassBlock {
  std::vector<int> positions;
  std::vector<FactorRoot> roots;
};

inline std::vector<FactorRoot> factor_roots(const FieldTower& tower, const ClassInfo& info) {
  std::vector<FactorRoot> out;
  for (const auto& b : info.blocks) {
    const int d = poly::degree(b.f);
    if (d > tower.max_ext()) throw Error(ErrorKind::Config, "tower too shallow for a degree " + std::to_string(d) + " factor");
    const auto& L = tower.level(d);
    PolyQ f;
    for (Elt c : b.f) f.push_back(tower.embed(c, 1, d));
    FactorRoot fr;
    fr.d = d;
    fr.alpha = -1;
    for (std::uint64_t m = 0; m < L.order(); ++m)
      if (poly::eval(L, f, L.exp(m)) == 0) {
        fr.alpha = static_cast<std::int64_t>(m);
        break;
      }
    if (fr.alpha < 0) throw Error(ErrorKind::Config, "irreducible factor has no root at its own degree");
    fr.partition = b.partition;
    fr.mult = 0;
    for (int v : b.partition) fr.mult += v;
    out.push_back(std::move(fr));
  }
  return out;
}

inline ClassBlock whole_block(const FieldTower& tower, int n, const ClassInfo& info) {
  ClassBlock b;
  for (int i = 0; i < n; ++i) b.positions.push_back(i);
  b.roots = factor_roots(tower, info);
  return b;
}

/// Product of Green values when the point of T_w has the eigenvalue pattern of the blocks, else nullopt.
inline std::optional<std::int64_t> green_weight(const TwistedTorus& tt, std::int64_t idx, const std::vector<ClassBlock>& blocks) {
  const FieldTower& tower = tt.tower();
  const int M = tt.split_degree();
  const std::int64_t q = tower.q();
  const std::int64_t oM = static_cast<std::int64_t>(tower.order(M));
  const auto t = tt.embedded(idx, M);
  const Perm& w = tt.w();
  std::int64_t prod = 1;
  for (const auto& blk : blocks) {
    const std::size_t k = blk.roots.size();
    std::vector<std::vector<std::int64_t>> conj(k);
    for (std::size_t f = 0; f < k; ++f) {
      const auto& fr = blk.roots[f];
      if (M % fr.d != 0) return std::nullopt;
      const std::int64_t od = static_cast<std::int64_t>(tower.order(fr.d));
      const std::int64_t ix = static_cast<std::int64_t>(tower.index(fr.d, M));
      std::int64_t e = fr.alpha;
      for (int j = 0; j < fr.d; ++j) {
        conj[f].push_back(num::mulmod(e, ix, oM));
        e = num::mulmod(e, q, od);
      }
    }
    std::vector<int> count(k, 0);
    std::vector<std::vector<int>> at_alpha(k);
    for (int i : blk.positions) {
      bool found = false;
      for (std::size_t f = 0; f < k && !found; ++f)
        for (std::size_t j = 0; j < conj[f].size(); ++j)
          if (conj[f][j] == t[i]) {
            found = true;
            ++count[f];
            if (j == 0) at_alpha[f].push_back(i);
            break;
          }
      if (!found) return std::nullopt;
    }
    for (std::size_t f = 0; f < k; ++f) {
      const auto& fr = blk.roots[f];
      if (count[f] != fr.d * fr.mult) return std::nullopt;
      // Cycle type of w^d on the positions holding alpha.
      std::vector<int> rho;
      std::vector<bool> seen(w.size(), false);
      for (int i : at_alpha[f]) {
        if (seen[i]) continue;
        int len = 0;
        for (int j = i; !seen[j];) {
          seen[j] = true;
          ++len;
          for (int s = 0; s < fr.d; ++s) j = w(j);
        }
        rho.push_back(len);
      }
      std::sort(rho.rbegin(), rho.rend());
      prod = num::checked_mul(prod, green_value(rho, fr.partition, num::ipow(q, fr.d)));
    }
  }
  return prod;
}

/// All characters of T_w, exponents in mixed radix over the cycle orders.
inline std::vector<TwistedChar> all_twisted_chars(const TwistedTorus& tt) {
  std::vector<TwistedChar> out;
  for (std::int64_t idx = 0; idx < tt.size(); ++idx) out.push_back({tt.coords(idx)});
  return out;
}

/// R_{T_w, theta} at a class: sum over t in T_w(F_q) conjugate to the semisimple part of theta(t) times Green values.
template <class V>
V dl_value(const TwistedTorus& tt, const TwistedChar& theta, const std::vector<ClassBlock>& blocks) {
  V s = value_traits<V>::zero();
  for (std::int64_t idx = 0; idx < tt.size(); ++idx) {
    auto wt = green_weight(tt, idx, blocks);
    if (!wt) continue;
    s += value_traits<V>::scaled(theta.template value<V>(tt, idx), *wt, 1);
  }
  return s;
}

/// Deligne-Lusztig virtual character of GL_n(F_q), n <= 3.
template <class V>
ClassFunction<V> dl_character(std::shared_ptr<const MatrixSpace> space, const Perm& w, const TwistedChar& theta) {
  if (space->n() > 3) throw Error(ErrorKind::RankUnsupported, "Deligne-Lusztig characters need n <= 3");
  if (w.size() != space->n()) throw Error(ErrorKind::Config, "permutation size does not match rank");
  TwistedTorus tt(space->tower_ptr(), w);
  const int n = space->n();
  auto tower = space->tower_ptr();
  return ClassFunction<V>(space, [tt, theta, n, tower](const Matrix&, const ClassInfo& info) {
    return dl_value<V>(tt, theta, {whole_block(*tower, n, info)});
  });
}

struct GreenCheckReport {
  int n = 0;
  std::int64_t q = 0;
  std::int64_t pairs = 0;
  std::int64_t failures = 0;
  bool passed() const { return failures == 0; }
};

/// Number of v in S_n with v w v^{-1} = w2 and theta2(v . t) = theta(t) on T_w.
inline std::int64_t weyl_intertwiners(const TwistedTorus& tt, const TwistedChar& theta, const TwistedTorus& tt2,
                                      const TwistedChar& theta2) {
  std::int64_t count = 0;
  const int M = tt.split_degree();
  for (const auto& v : all_perms(tt.w().size())) {
    if (!(v * tt.w() * v.inverse() == tt2.w())) continue;
    bool ok = true;
    for (std::int64_t idx = 0; idx < tt.size() && ok; ++idx) {
      auto c = tt.embedded(idx, M);
      std::vector<std::int64_t> moved(c.size());
      for (int i = 0; i < v.size(); ++i) moved[v(i)] = c[i];
      std::int64_t idx2 = tt2.locate(moved, M);
      ok = theta2.value<CycloValue>(tt2, idx2) == theta.value<CycloValue>(tt, idx);
    }
    if (ok) ++count;
  }
  return count;
}

/// Exact check of <R_{T_w,theta}, R_{T_w',theta'}> = #intertwiners over one w per cycle type and all characters.
inline GreenCheckReport green_orthogonality_check(std::shared_ptr<const FieldTower> tower, int n) {
  auto space = std::make_shared<const MatrixSpace>(tower, n);
  const auto classes = space->class_representatives();
  std::vector<TwistedTorus> reps;
  {
    std::vector<std::vector<int>> types;
    for (const auto& w : all_perms(n)) {
      auto ct = w.cycle_type();
      if (std::find(types.begin(), types.end(), ct) != types.end()) continue;
      types.push_back(ct);
      reps.emplace_back(tower, w);
    }
  }
  struct Entry {
    std::size_t torus;
    TwistedChar theta;
    std::vector<CycloValue> values;
  };
  std::vector<Entry> entries;
  std::vector<std::vector<ClassBlock>> blocks;
  for (const auto& c : classes) blocks.push_back({whole_block(*tower, n, c.info)});
  for (std::size_t r = 0; r < reps.size(); ++r)
    for (const auto& th : all_twisted_chars(reps[r])) {
      Entry e{r, th, {}};
      for (std::size_t c = 0; c < classes.size(); ++c) e.values.push_back(dl_value<CycloValue>(reps[r], th, blocks[c]));
      entries.push_back(std::move(e));
    }
  GreenCheckReport rep;
  rep.n = n;
  rep.q = space->q();
  const std::int64_t order = space->group_order();
  for (std::size_t a = 0; a < entries.size(); ++a)
    for (std::size_t b = a; b < entries.size(); ++b) {
      CycloValue ip;
      for (std::size_t c = 0; c < classes.size(); ++c)
        ip += (entries[a].values[c] * entries[b].values[c].conj()).scaled(classes[c].size, 1);
      ip = ip.scaled(1, order);
      std::int64_t expect =
          weyl_intertwiners(reps[entries[a].torus], entries[a].theta, reps[entries[b].torus], entries[b].theta);
      ++rep.pairs;
      if (!(ip == CycloValue::integer(expect))) ++rep.failures;
    }
  return rep;
}

}  // namespace tracelab
