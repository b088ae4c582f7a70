#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "tracelab/field.hpp"
#include "tracelab/perm.hpp"
#include "tracelab/poly.hpp"

namespace tracelab {

/// n x n matrix over F_q, row-major field codes.
struct Matrix {
  int n = 0;
  std::vector<Elt> a;

  Matrix() = default;
  explicit Matrix(int size) : n(size), a(static_cast<std::size_t>(size) * size, 0) {}
  Matrix(int size, std::vector<Elt> entries) : n(size), a(std::move(entries)) {
    if (a.size() != static_cast<std::size_t>(n) * n) throw Error(ErrorKind::Config, "matrix entry count mismatch");
  }

  Elt& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  Elt operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

  friend bool operator==(const Matrix& x, const Matrix& y) { return x.n == y.n && x.a == y.a; }
  friend bool operator<(const Matrix& x, const Matrix& y) { return x.a < y.a; }

  /// "[[a,b],[c,d]]" in field codes.
  std::string str() const {
    std::string s = "[";
    for (int i = 0; i < n; ++i) {
      s += i ? ",[" : "[";
      for (int j = 0; j < n; ++j) s += (j ? "," : "") + std::to_string((*this)(i, j));
      s += "]";
    }
    return s + "]";
  }
};

/// One irreducible factor of the characteristic polynomial with its Jordan partition (decreasing).
struct PrimaryBlock {
  PolyQ f;
  std::vector<int> partition;

  friend bool operator<(const PrimaryBlock& x, const PrimaryBlock& y) {
    if (x.f.size() != y.f.size()) return x.f.size() < y.f.size();
    if (x.f != y.f) return x.f < y.f;
    return x.partition < y.partition;
  }
  friend bool operator==(const PrimaryBlock& x, const PrimaryBlock& y) { return x.f == y.f && x.partition == y.partition; }
};

/// Conjugacy-class fingerprint: sorted primary blocks plus a printable key.
struct ClassInfo {
  std::vector<PrimaryBlock> blocks;
  std::string key;

  bool regular_semisimple() const {
    for (const auto& b : blocks)
      if (b.partition.size() != 1 || b.partition[0] != 1) return false;
    return true;
  }
};

struct ClassRep {
  Matrix g;
  ClassInfo info;
  std::int64_t size = 0;
};

/// A complete flag V_i = span of the first i columns of x, in Bruhat normal form x = u * w.
struct Flag {
  Matrix x;
  Matrix x_inv;
  Perm w;
};

inline std::int64_t gl_order(std::int64_t Q, int k) {
  std::int64_t r = 1;
  std::int64_t Qk = num::ipow(Q, k);
  for (int i = 0; i < k; ++i) r = num::checked_mul(r, Qk - num::ipow(Q, i));
  return r;
}

/// GL_n(F_q) arithmetic and the structures on it.
class MatrixSpace {
 public:
  MatrixSpace(std::shared_ptr<const FieldTower> tower, int n) : tower_(std::move(tower)), n_(n) {
    if (n < 1) throw Error(ErrorKind::Config, "rank must be positive");
  }

  int n() const { return n_; }
  std::int64_t q() const { return tower_->q(); }
  const FieldLevel& F() const { return tower_->level(1); }
  const FieldTower& tower() const { return *tower_; }
  std::shared_ptr<const FieldTower> tower_ptr() const { return tower_; }

  std::int64_t group_order() const { return gl_order(q(), n_); }
  std::int64_t unipotent_order() const { return num::ipow(q(), n_ * (n_ - 1) / 2); }

  Matrix identity() const {
    Matrix m(n_);
    for (int i = 0; i < n_; ++i) m(i, i) = 1;
    return m;
  }

  Matrix diag(const std::vector<Elt>& d) const {
    Matrix m(n_);
    for (int i = 0; i < n_; ++i) m(i, i) = d[i];
    return m;
  }

  Matrix mul(const Matrix& x, const Matrix& y) const {
    const auto& F = this->F();
    Matrix r(x.n);
    for (int i = 0; i < x.n; ++i)
      for (int k = 0; k < x.n; ++k) {
        Elt v = x(i, k);
        if (v == 0) continue;
        for (int j = 0; j < x.n; ++j) r(i, j) = F.add(r(i, j), F.mul(v, y(k, j)));
      }
    return r;
  }

  Matrix add(const Matrix& x, const Matrix& y) const {
    Matrix r(x.n);
    for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = F().add(x.a[i], y.a[i]);
    return r;
  }

  Matrix scalar(const Matrix& x, Elt c) const {
    Matrix r(x.n);
    for (std::size_t i = 0; i < x.a.size(); ++i) r.a[i] = F().mul(c, x.a[i]);
    return r;
  }

  /// Gauss-Jordan inverse; throws Singular.
  Matrix inv(const Matrix& x) const {
    const auto& F = this->F();
    const int n = x.n;
    Matrix a = x, r(n);
    for (int i = 0; i < n; ++i) r(i, i) = 1;
    for (int c = 0; c < n; ++c) {
      int piv = -1;
      for (int i = c; i < n; ++i)
        if (a(i, c) != 0) {
          piv = i;
          break;
        }
      if (piv < 0) throw Error(ErrorKind::Singular, "matrix is singular");
      if (piv != c)
        for (int j = 0; j < n; ++j) {
          std::swap(a(piv, j), a(c, j));
          std::swap(r(piv, j), r(c, j));
        }
      Elt s = F.inv(a(c, c));
      for (int j = 0; j < n; ++j) {
        a(c, j) = F.mul(a(c, j), s);
        r(c, j) = F.mul(r(c, j), s);
      }
      for (int i = 0; i < n; ++i) {
        if (i == c || a(i, c) == 0) continue;
        Elt f = a(i, c);
        for (int j = 0; j < n; ++j) {
          a(i, j) = F.sub(a(i, j), F.mul(f, a(c, j)));
          r(i, j) = F.sub(r(i, j), F.mul(f, r(c, j)));
        }
      }
    }
    return r;
  }

  int rank(Matrix a) const {
    const auto& F = this->F();
    const int n = a.n;
    int row = 0;
    for (int c = 0; c < n && row < n; ++c) {
      int piv = -1;
      for (int i = row; i < n; ++i)
        if (a(i, c) != 0) {
          piv = i;
          break;
        }
      if (piv < 0) continue;
      for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(row, j));
      Elt s = F.inv(a(row, c));
      for (int i = row + 1; i < n; ++i) {
        if (a(i, c) == 0) continue;
        Elt f = F.mul(a(i, c), s);
        for (int j = 0; j < n; ++j) a(i, j) = F.sub(a(i, j), F.mul(f, a(row, j)));
      }
      ++row;
    }
    return row;
  }

  Elt det(const Matrix& x) const {
    const auto& F = this->F();
    Matrix a = x;
    const int n = x.n;
    Elt d = 1;
    for (int c = 0; c < n; ++c) {
      int piv = -1;
      for (int i = c; i < n; ++i)
        if (a(i, c) != 0) {
          piv = i;
          break;
        }
      if (piv < 0) return 0;
      if (piv != c) {
        for (int j = 0; j < n; ++j) std::swap(a(piv, j), a(c, j));
        d = F.neg(d);
      }
      d = F.mul(d, a(c, c));
      Elt s = F.inv(a(c, c));
      for (int i = c + 1; i < n; ++i) {
        if (a(i, c) == 0) continue;
        Elt f = F.mul(a(i, c), s);
        for (int j = c; j < n; ++j) a(i, j) = F.sub(a(i, j), F.mul(f, a(c, j)));
      }
    }
    return d;
  }

  bool invertible(const Matrix& x) const { return det(x) != 0; }

  Elt trace(const Matrix& x) const {
    Elt s = 0;
    for (int i = 0; i < x.n; ++i) s = F().add(s, x(i, i));
    return s;
  }

  /// h g h^{-1}.
  Matrix conjugate(const Matrix& h, const Matrix& g) const { return mul(mul(h, g), inv(h)); }

  bool upper_triangular(const Matrix& x) const {
    for (int i = 0; i < x.n; ++i)
      for (int j = 0; j < i; ++j)
        if (x(i, j) != 0) return false;
    return true;
  }

  /// Matrix from its index in base-q digits of the row-major entries.
  Matrix from_index(std::uint64_t idx) const {
    Matrix m(n_);
    const std::uint64_t Q = static_cast<std::uint64_t>(q());
    for (std::size_t i = m.a.size(); i-- > 0;) {
      m.a[i] = idx % Q;
      idx /= Q;
    }
    return m;
  }

  /// Every element of GL_n(F_q) in increasing index order.
  std::vector<Matrix> all_elements() const {
    std::vector<Matrix> out;
    std::uint64_t total = static_cast<std::uint64_t>(num::ipow(q(), n_ * n_));
    out.reserve(static_cast<std::size_t>(group_order()));
    for (std::uint64_t i = 0; i < total; ++i) {
      Matrix m = from_index(i);
      if (invertible(m)) out.push_back(std::move(m));
    }
    return out;
  }

  /// Upper unitriangular matrices in lexicographic order of their above-diagonal entries.
  std::vector<Matrix> unipotent_elements() const {
    std::vector<std::pair<int, int>> pos;
    for (int i = 0; i < n_; ++i)
      for (int j = i + 1; j < n_; ++j) pos.emplace_back(i, j);
    return fill_positions(pos);
  }

  /// Identity plus arbitrary entries at the given positions, all q^{|pos|} choices.
  std::vector<Matrix> fill_positions(const std::vector<std::pair<int, int>>& pos) const {
    std::vector<Matrix> out;
    const std::uint64_t Q = static_cast<std::uint64_t>(q());
    std::uint64_t total = static_cast<std::uint64_t>(num::ipow(q(), static_cast<int>(pos.size())));
    for (std::uint64_t idx = 0; idx < total; ++idx) {
      Matrix u = identity();
      std::uint64_t t = idx;
      for (std::size_t k = pos.size(); k-- > 0;) {
        u(pos[k].first, pos[k].second) = t % Q;
        t /= Q;
      }
      out.push_back(std::move(u));
    }
    return out;
  }

  /// Monic det(t I - g) as a polynomial (low to high), via Hessenberg reduction.
  PolyQ char_poly_monic(const Matrix& g) const {
    const auto& F = this->F();
    const int n = g.n;
    Matrix h = g;
    // Similarity reduction to upper Hessenberg form.
    for (int c = 0; c + 2 <= n; ++c) {
      int piv = -1;
      for (int i = c + 1; i < n; ++i)
        if (h(i, c) != 0) {
          piv = i;
          break;
        }
      if (piv < 0) continue;
      if (piv != c + 1) {
        for (int j = 0; j < n; ++j) std::swap(h(piv, j), h(c + 1, j));
        for (int i = 0; i < n; ++i) std::swap(h(i, piv), h(i, c + 1));
      }
      Elt s = F.inv(h(c + 1, c));
      for (int i = c + 2; i < n; ++i) {
        if (h(i, c) == 0) continue;
        Elt f = F.mul(h(i, c), s);
        // Row i -= f row (c+1); column (c+1) += f column i.
        for (int j = 0; j < n; ++j) h(i, j) = F.sub(h(i, j), F.mul(f, h(c + 1, j)));
        for (int r = 0; r < n; ++r) h(r, c + 1) = F.add(h(r, c + 1), F.mul(f, h(r, i)));
      }
    }
    // p_k = (t - h_kk) p_{k-1} - sum_{i<k} h_{ik} (prod_{j=i+1..k} h_{j,j-1}) p_{i-1}.
    std::vector<PolyQ> p(n + 1);
    p[0] = {1};
    for (int k = 1; k <= n; ++k) {
      PolyQ cur = poly::mul(F, PolyQ{F.neg(h(k - 1, k - 1)), 1}, p[k - 1]);
      Elt prod = 1;
      for (int i = k - 1; i >= 1; --i) {
        prod = F.mul(prod, h(i, i - 1));
        Elt c = F.mul(prod, h(i - 1, k - 1));
        if (c == 0) continue;
        cur = poly::sub(F, cur, poly::mul(F, PolyQ{c}, p[i - 1]));
      }
      p[k] = std::move(cur);
    }
    return p[n];
  }

  /// (a_1, ..., a_n) with det(t I - g) = t^n + a_1 t^{n-1} + ... + a_n; a_n = (-1)^n det g.
  std::vector<Elt> char_poly(const Matrix& g) const {
    if (!invertible(g)) throw Error(ErrorKind::Singular, "char_poly needs an invertible matrix");
    PolyQ c = char_poly_monic(g);
    c.resize(g.n + 1, 0);
    std::vector<Elt> a(g.n);
    for (int i = 1; i <= g.n; ++i) a[i - 1] = c[g.n - i];
    return a;
  }

  /// Companion block with ones on the subdiagonal and last column (-a_m, ..., -a_1).
  Matrix companion(const std::vector<Elt>& a) const {
    const int m = static_cast<int>(a.size());
    Matrix c(m);
    for (int i = 1; i < m; ++i) c(i, i - 1) = 1;
    for (int i = 0; i < m; ++i) c(i, m - 1) = F().neg(a[m - 1 - i]);
    return c;
  }

  /// Companion block of a monic polynomial given low to high.
  Matrix companion_of(const PolyQ& f) const {
    const int m = poly::degree(f);
    std::vector<Elt> a(m);
    for (int i = 1; i <= m; ++i) a[i - 1] = f[m - i];
    return companion(a);
  }

  Matrix eval_poly(const PolyQ& f, const Matrix& g) const {
    Matrix r(g.n);
    for (std::size_t i = f.size(); i-- > 0;) {
      r = mul(r, g);
      for (int d = 0; d < g.n; ++d) r(d, d) = F().add(r(d, d), f[i]);
    }
    return r;
  }

  /// Dimension of span{e1, g e1, g^2 e1, ...}.
  int strata_index(const Matrix& g) const { return static_cast<int>(krylov_basis(g).size()); }

  /// (q_elt, normal_form): q_elt fixes e1, normal_form = q_elt g q_elt^{-1} is block upper triangular
  /// with the companion block of the Krylov minimal polynomial in the top-left m x m corner.
  std::pair<Matrix, Matrix> mirabolic_normalize(const Matrix& g, int m) const {
    auto basis = krylov_basis(g);
    if (static_cast<int>(basis.size()) != m)
      throw Error(ErrorKind::StrataMismatch, "strata index is " + std::to_string(basis.size()) + ", not " + std::to_string(m));
    // Complete with the smallest standard basis vectors that keep independence.
    for (int j = 0; j < n_ && static_cast<int>(basis.size()) < n_; ++j) {
      std::vector<Elt> e(n_, 0);
      e[j] = 1;
      auto trial = basis;
      trial.push_back(e);
      if (rank(columns(trial)) == static_cast<int>(trial.size())) basis = std::move(trial);
    }
    Matrix P = columns(basis);
    Matrix q_elt = inv(P);
    return {q_elt, mul(mul(q_elt, g), P)};
  }

  /// Matrix whose first columns are the given vectors (zero-padded).
  Matrix columns(const std::vector<std::vector<Elt>>& cols) const {
    Matrix m(n_);
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (int i = 0; i < n_; ++i) m(i, static_cast<int>(j)) = cols[j][i];
    return m;
  }

  std::vector<Elt> apply(const Matrix& g, const std::vector<Elt>& v) const {
    std::vector<Elt> r(n_, 0);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) r[i] = F().add(r[i], F().mul(g(i, j), v[j]));
    return r;
  }

  /// All complete flags, one per Bruhat cell point: x = u w with u_{ab} free iff a < b and w^{-1}(a) > w^{-1}(b).
  const std::vector<Flag>& flags() const {
    std::call_once(flags_once_, [this] {
      for (const auto& w : all_perms(n_)) {
        Perm wi = w.inverse();
        std::vector<std::pair<int, int>> pos;
        for (int a = 0; a < n_; ++a)
          for (int b = a + 1; b < n_; ++b)
            if (wi(a) > wi(b)) pos.emplace_back(a, b);
        Matrix pw(n_);
        for (int j = 0; j < n_; ++j) pw(w(j), j) = 1;
        for (const auto& u : fill_positions(pos)) {
          Matrix x = mul(u, pw);
          flags_.push_back({x, inv(x), w});
        }
      }
    });
    return flags_;
  }

  /// Flags stable under g, with the induced scalars on successive quotients as dlogs.
  std::vector<std::pair<std::size_t, std::vector<std::int64_t>>> fixed_flags(const Matrix& g) const {
    std::vector<std::pair<std::size_t, std::vector<std::int64_t>>> out;
    const auto& fl = flags();
    for (std::size_t k = 0; k < fl.size(); ++k) {
      Matrix b = mul(mul(fl[k].x_inv, g), fl[k].x);
      if (!upper_triangular(b)) continue;
      std::vector<std::int64_t> t(n_);
      for (int i = 0; i < n_; ++i) t[i] = static_cast<std::int64_t>(F().dlog(b(i, i)));
      out.emplace_back(k, std::move(t));
    }
    return out;
  }

  /// Class fingerprint from the characteristic polynomial and the ranks of f(g)^j.
  ClassInfo fingerprint(const Matrix& g) const {
    ClassInfo info;
    for (const auto& [f, mult] : poly::factor(F(), char_poly_monic(g))) {
      const int d = poly::degree(f);
      Matrix h = eval_poly(f, g);
      Matrix hp = identity();
      std::vector<int> ranks{n_};
      for (int j = 1; j <= mult; ++j) {
        hp = mul(hp, h);
        ranks.push_back(rank(hp));
        if (ranks.back() == n_ - d * mult) break;
      }
      // Number of parts of size >= j is (r_{j-1} - r_j) / d.
      std::vector<int> at_least;
      for (std::size_t j = 1; j < ranks.size(); ++j) at_least.push_back((ranks[j - 1] - ranks[j]) / d);
      std::vector<int> partition;
      for (std::size_t j = 0; j < at_least.size(); ++j) {
        int exact = at_least[j] - (j + 1 < at_least.size() ? at_least[j + 1] : 0);
        for (int c = 0; c < exact; ++c) partition.push_back(static_cast<int>(j + 1));
      }
      std::sort(partition.rbegin(), partition.rend());
      info.blocks.push_back({f, partition});
    }
    std::sort(info.blocks.begin(), info.blocks.end());
    info.key = class_key(info.blocks);
    return info;
  }

  static std::string class_key(const std::vector<PrimaryBlock>& blocks) {
    std::string s;
    for (const auto& b : blocks) {
      s += "{";
      for (std::size_t i = 0; i < b.f.size(); ++i) s += (i ? "," : "") + std::to_string(b.f[i]);
      s += "|";
      for (std::size_t i = 0; i < b.partition.size(); ++i) s += (i ? "," : "") + std::to_string(b.partition[i]);
      s += "}";
    }
    return s;
  }

  /// |C_G(g)| for a class with the given primary blocks.
  std::int64_t centralizer_order(const ClassInfo& info) const {
    std::int64_t r = 1;
    for (const auto& b : info.blocks) {
      std::int64_t Q = num::ipow(q(), poly::degree(b.f));
      std::map<int, int> mult;
      for (int part : b.partition) ++mult[part];
      // sum of squares of the conjugate partition
      std::int64_t conj_sq = 0;
      int largest = b.partition.empty() ? 0 : b.partition[0];
      for (int j = 1; j <= largest; ++j) {
        std::int64_t c = 0;
        for (int part : b.partition) c += part >= j;
        conj_sq += c * c;
      }
      std::int64_t mult_sq = 0;
      for (auto [part, k] : mult) mult_sq += static_cast<std::int64_t>(k) * k;
      r = num::checked_mul(r, num::ipow(Q, static_cast<int>(conj_sq - mult_sq)));
      for (auto [part, k] : mult) r = num::checked_mul(r, gl_order(Q, k));
    }
    return r;
  }

  /// One representative per conjugacy class: block diagonal companion(f^part) blocks, sorted by key.
  std::vector<ClassRep> class_representatives() const {
    auto irr = poly::monic_irreducibles(F(), n_, true);
    std::vector<PolyQ> flat;
    for (int d = 1; d <= n_; ++d)
      for (const auto& f : irr[d]) flat.push_back(f);
    std::vector<ClassRep> out;
    std::vector<PrimaryBlock> chosen;
    auto partitions = [](int m) {
      std::vector<std::vector<int>> res;
      std::vector<int> cur;
      auto rec = [&](auto&& self, int rem, int maxp) -> void {
        if (rem == 0) {
          res.push_back(cur);
          return;
        }
        for (int p = std::min(rem, maxp); p >= 1; --p) {
          cur.push_back(p);
          self(self, rem - p, p);
          cur.pop_back();
        }
      };
      rec(rec, m, m);
      return res;
    };
    auto rec = [&](auto&& self, std::size_t idx, int rem) -> void {
      if (rem == 0) {
        ClassRep rep;
        rep.info.blocks = chosen;
        std::sort(rep.info.blocks.begin(), rep.info.blocks.end());
        rep.info.key = class_key(rep.info.blocks);
        rep.g = Matrix(n_);
        int off = 0;
        for (const auto& b : rep.info.blocks)
          for (int part : b.partition) {
            Matrix c = companion_of(poly::pow(F(), b.f, part));
            for (int i = 0; i < c.n; ++i)
              for (int j = 0; j < c.n; ++j) rep.g(off + i, off + j) = c(i, j);
            off += c.n;
          }
        rep.size = group_order() / centralizer_order(rep.info);
        out.push_back(std::move(rep));
        return;
      }
      if (idx == flat.size()) return;
      self(self, idx + 1, rem);
      const int d = poly::degree(flat[idx]);
      for (int m = 1; m * d <= rem; ++m)
        for (const auto& part : partitions(m)) {
          chosen.push_back({flat[idx], part});
          self(self, idx + 1, rem - m * d);
          chosen.pop_back();
        }
    };
    rec(rec, 0, n_);
    std::sort(out.begin(), out.end(), [](const ClassRep& x, const ClassRep& y) { return x.info.key < y.info.key; });
    return out;
  }

 private:
  std::shared_ptr<const FieldTower> tower_;
  int n_;
  mutable std::once_flag flags_once_;
  mutable std::vector<Flag> flags_;

  std::vector<std::vector<Elt>> krylov_basis(const Matrix& g) const {
    std::vector<std::vector<Elt>> basis;
    std::vector<Elt> v(n_, 0);
    v[0] = 1;
    while (static_cast<int>(basis.size()) < n_) {
      auto trial = basis;
      trial.push_back(v);
      if (rank(columns(trial)) < static_cast<int>(trial.size())) break;
      basis = std::move(trial);
      v = apply(g, v);
    }
    return basis;
  }
};

}  // namespace tracelab
