#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tracelab/matrix.hpp"

namespace tracelab {

struct LemmaCheck {
  std::string name;
  std::int64_t cases = 0;     // base points examined
  std::int64_t failures = 0;  // base points where the claim failed
  std::int64_t fiber = 0;     // expected image size per base point (0 when it varies)
  bool applicable = true;
};

struct LemmaReport {
  int n = 0;
  std::int64_t q = 0;
  bool exhaustive = true;
  std::vector<LemmaCheck> checks;

  bool passed() const {
    for (const auto& c : checks)
      if (c.failures != 0) return false;
    return true;
  }
};

struct LemmaOptions {
  bool exhaustive = true;
  std::int64_t samples = 200;
  std::uint64_t seed = 1;
};

namespace detail {

inline std::vector<std::pair<int, int>> first_row_positions(int n) {
  std::vector<std::pair<int, int>> pos;
  for (int j = 1; j < n; ++j) pos.emplace_back(0, j);
  return pos;
}

// Rows [r0, r1) by columns [m, n) of the upper-right block.
inline std::vector<std::pair<int, int>> block_positions(int r0, int r1, int m, int n) {
  std::vector<std::pair<int, int>> pos;
  for (int i = r0; i < r1; ++i)
    for (int j = m; j < n; ++j) pos.emplace_back(i, j);
  return pos;
}

inline Matrix assemble(int n, const Matrix& xf, const Matrix& xe, const std::vector<Elt>& y) {
  const int m = xf.n;
  Matrix x(n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) x(i, j) = xf(i, j);
  for (int i = 0; i < n - m; ++i)
    for (int j = 0; j < n - m; ++j) x(m + i, m + j) = xe(i, j);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n - m; ++j) x(i, m + j) = y[static_cast<std::size_t>(i) * (n - m) + j];
  return x;
}

}  // namespace detail

/// Exhaustive (or sampled) finite checks of the mirabolic structure lemmas.
inline LemmaReport verify_structure_lemmas(std::shared_ptr<const FieldTower> tower, int n, const LemmaOptions& opt = {}) {
  MatrixSpace S(tower, n);
  const auto& F = S.F();
  const std::int64_t q = S.q();
  LemmaReport rep;
  rep.n = n;
  rep.q = q;
  rep.exhaustive = opt.exhaustive;
  std::mt19937_64 rng(opt.seed);

  std::vector<Matrix> pool;
  if (opt.exhaustive) {
    pool = S.all_elements();
  } else {
    std::uniform_int_distribution<std::uint64_t> pick(0, static_cast<std::uint64_t>(num::ipow(q, n * n)) - 1);
    while (static_cast<std::int64_t>(pool.size()) < opt.samples) {
      Matrix g = S.from_index(pick(rng));
      if (S.invertible(g)) pool.push_back(std::move(g));
    }
  }
  const auto uq = S.fill_positions(detail::first_row_positions(n));

  // (i) for x in X_n, u -> c(ux) - c(x) is a linear bijection U_Q -> A^{n-1} x {0}.
  {
    LemmaCheck c{"det-slice", 0, 0, num::ipow(q, n - 1), true};
    for (const auto& x : pool) {
      if (S.strata_index(x) != n) continue;
      ++c.cases;
      auto base = S.char_poly(x);
      // Images of the unit vectors of U_Q.
      std::vector<std::vector<Elt>> unit(n - 1);
      for (int j = 1; j < n; ++j) {
        Matrix u = S.identity();
        u(0, j) = 1;
        auto cp = S.char_poly(S.mul(u, x));
        for (int k = 0; k < n; ++k) unit[j - 1].push_back(F.sub(cp[k], base[k]));
      }
      std::set<std::vector<Elt>> images;
      bool ok = true;
      for (const auto& u : uq) {
        auto cp = S.char_poly(S.mul(u, x));
        std::vector<Elt> diff(n);
        for (int k = 0; k < n; ++k) diff[k] = F.sub(cp[k], base[k]);
        std::vector<Elt> lin(n, 0);
        for (int j = 1; j < n; ++j)
          for (int k = 0; k < n; ++k) lin[k] = F.add(lin[k], F.mul(u(0, j), unit[j - 1][k]));
        ok = ok && diff == lin && diff[n - 1] == 0;
        images.insert(diff);
      }
      if (!ok || static_cast<std::int64_t>(images.size()) != c.fiber) ++c.failures;
    }
    rep.checks.push_back(c);
  }

  // (ii) n = 2, x outside B: u -> c(ux) is a bijection U -> {(a_1, det x)}.
  {
    LemmaCheck c{"gl2-slice", 0, 0, q, n == 2};
    if (n == 2) {
      for (const auto& x : pool) {
        if (x(1, 0) == 0) continue;
        ++c.cases;
        std::set<Elt> a1;
        bool ok = true;
        auto base = S.char_poly(x);
        for (const auto& u : uq) {
          auto cp = S.char_poly(S.mul(u, x));
          ok = ok && cp[1] == base[1];
          a1.insert(cp[0]);
        }
        if (!ok || static_cast<std::int64_t>(a1.size()) != q) ++c.failures;
      }
    }
    rep.checks.push_back(c);
  }

  // Companion blocks with nonzero constant term, for each m < n.
  auto companions = [&](int m) {
    std::vector<Matrix> out;
    std::uint64_t total = static_cast<std::uint64_t>(num::ipow(q, m));
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      std::vector<Elt> a(m);
      std::uint64_t t = idx;
      for (int i = 0; i < m; ++i) {
        a[i] = t % static_cast<std::uint64_t>(q);
        t /= static_cast<std::uint64_t>(q);
      }
      if (a[m - 1] == 0) continue;
      out.push_back(S.companion(a));
    }
    return out;
  };
  auto blocks_e = [&](int k) {
    MatrixSpace E(tower, k);
    if (opt.exhaustive) return E.all_elements();
    std::vector<Matrix> out;
    std::uniform_int_distribution<std::uint64_t> pick(0, static_cast<std::uint64_t>(num::ipow(q, k * k)) - 1);
    while (static_cast<std::int64_t>(out.size()) < std::max<std::int64_t>(1, opt.samples / 10)) {
      Matrix g = E.from_index(pick(rng));
      if (E.invertible(g)) out.push_back(std::move(g));
    }
    return out;
  };
  auto all_y = [&](int m) {
    std::vector<std::vector<Elt>> out;
    const int len = m * (n - m);
    std::uint64_t total = static_cast<std::uint64_t>(num::ipow(q, len));
    if (!opt.exhaustive) total = std::min<std::uint64_t>(total, 3);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      std::vector<Elt> y(len);
      std::uint64_t t = idx;
      for (int i = 0; i < len; ++i) {
        y[i] = t % static_cast<std::uint64_t>(q);
        t /= static_cast<std::uint64_t>(q);
      }
      out.push_back(y);
    }
    return out;
  };

  // (iii) (u_1, u_{m-1}) -> u_{m-1} u_1 x u_{m-1}^{-1} is simply transitive on fixed (x_F, x_E).
  {
    LemmaCheck c{"simply-transitive", 0, 0, 0, n >= 2};
    for (int m = 1; m < n; ++m) {
      auto u1 = S.fill_positions(detail::block_positions(0, 1, m, n));
      auto um1 = S.fill_positions(detail::block_positions(0, m - 1, m, n));
      const std::int64_t expect = num::ipow(q, m * (n - m));
      auto ys = all_y(m);
      for (const auto& xf : companions(m))
        for (const auto& xe : blocks_e(n - m))
          for (const auto& y : ys) {
            Matrix x = detail::assemble(n, xf, xe, y);
            ++c.cases;
            std::set<std::vector<Elt>> seen;
            bool ok = true;
            for (const auto& a : u1)
              for (const auto& b : um1) {
                Matrix z = S.mul(S.mul(S.mul(b, a), x), S.inv(b));
                // Same diagonal blocks and lower-left zero.
                for (int i = 0; i < n && ok; ++i)
                  for (int j = 0; j < n; ++j) {
                    bool upper_right = i < m && j >= m;
                    if (!upper_right && z(i, j) != x(i, j)) {
                      ok = false;
                      break;
                    }
                  }
                std::vector<Elt> yz;
                for (int i = 0; i < m; ++i)
                  for (int j = m; j < n; ++j) yz.push_back(z(i, j));
                seen.insert(yz);
              }
            if (!ok || static_cast<std::int64_t>(seen.size()) != expect ||
                static_cast<std::int64_t>(u1.size() * um1.size()) != expect)
              ++c.failures;
          }
    }
    rep.checks.push_back(c);
  }

  // (iv) U_Q x U_{m-1} -> U_m U_{Q_{L_m}} x is a bijection.
  {
    LemmaCheck c{"mirabolic-factorization", 0, 0, 0, n >= 2};
    for (int m = 1; m < n; ++m) {
      auto um1 = S.fill_positions(detail::block_positions(0, m - 1, m, n));
      auto um = S.fill_positions(detail::block_positions(0, m, m, n));
      std::vector<std::pair<int, int>> qlm;
      for (int j = 1; j < m; ++j) qlm.emplace_back(0, j);
      auto uql = S.fill_positions(qlm);
      auto ys = all_y(m);
      for (const auto& xf : companions(m))
        for (const auto& xe : blocks_e(n - m))
          for (const auto& y : ys) {
            Matrix x = detail::assemble(n, xf, xe, y);
            ++c.cases;
            std::set<Matrix> target;
            for (const auto& a : um)
              for (const auto& b : uql) target.insert(S.mul(S.mul(a, b), x));
            std::set<Matrix> image;
            bool ok = true;
            for (const auto& uqe : uq)
              for (const auto& b : um1) {
                Matrix z = S.mul(S.mul(S.mul(b, uqe), x), S.inv(b));
                ok = ok && target.count(z) == 1;
                image.insert(z);
              }
            if (!ok || image.size() != uq.size() * um1.size() || image.size() != target.size()) ++c.failures;
          }
    }
    rep.checks.push_back(c);
  }
  return rep;
}

}  // namespace tracelab
