#pragma once

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "tracelab/charsum.hpp"
#include "tracelab/field.hpp"
#include "tracelab/value.hpp"

namespace tracelab {

/// Row-major indexing of (Z/m)^n; used for both points (dlog vectors) and characters (exponent vectors).
struct TorusShape {
  int n = 1;
  std::int64_t m = 1;

  std::int64_t size() const { return num::ipow(m, n); }

  std::int64_t index(const std::vector<std::int64_t>& v) const {
    std::int64_t idx = 0;
    for (int i = 0; i < n; ++i) idx = idx * m + num::mod(v[i], m);
    return idx;
  }

  std::vector<std::int64_t> coords(std::int64_t idx) const {
    std::vector<std::int64_t> v(n);
    for (int i = n - 1; i >= 0; --i) {
      v[i] = idx % m;
      idx /= m;
    }
    return v;
  }

  /// Pairing <a, t> mod m: the exponent of zeta_m in chi_a(t).
  std::int64_t pair(std::int64_t a_idx, std::int64_t t_idx) const {
    std::int64_t s = 0;
    for (int i = 0; i < n; ++i) {
      s += (a_idx % m) * (t_idx % m);
      a_idx /= m;
      t_idx /= m;
    }
    return s % m;
  }
};

using TorusPoint = std::vector<std::int64_t>;
using TorusChar = std::vector<std::int64_t>;

/// Multiset of cocharacters lambda_1..lambda_r of the rank-n torus.
struct WeightData {
  int n = 0;
  std::vector<std::vector<std::int64_t>> rows;

  int r() const { return static_cast<int>(rows.size()); }

  void validate() const {
    for (const auto& row : rows) {
      if (static_cast<int>(row.size()) != n) throw Error(ErrorKind::Config, "weight row has wrong length");
      bool nonzero = false;
      for (auto v : row) nonzero = nonzero || v != 0;
      if (!nonzero) throw Error(ErrorKind::ZeroWeightRow, "weight rows must be nonzero");
    }
  }

  /// "1,0;0,1" or a path to a file with one comma-separated row per line.
  static WeightData parse(const std::string& spec) {
    std::vector<std::string> lines;
    std::ifstream in(spec);
    if (in) {
      std::string line;
      while (std::getline(in, line))
        if (line.find_first_not_of(" \t\r") != std::string::npos && line[line.find_first_not_of(" \t")] != '#')
          lines.push_back(line);
    } else {
      std::stringstream ss(spec);
      std::string part;
      while (std::getline(ss, part, ';'))
        if (!part.empty()) lines.push_back(part);
    }
    WeightData w;
    for (const auto& line : lines) {
      std::vector<std::int64_t> row;
      std::stringstream ls(line);
      std::string tok;
      while (std::getline(ls, tok, ',')) {
        try {
          row.push_back(std::stoll(tok));
        } catch (const std::exception&) {
          throw Error(ErrorKind::Config, "bad weight entry '" + tok + "'");
        }
      }
      w.rows.push_back(std::move(row));
    }
    if (w.rows.empty()) throw Error(ErrorKind::Config, "empty weight data");
    w.n = static_cast<int>(w.rows[0].size());
    w.validate();
    return w;
  }

  static WeightData standard(int n) {
    WeightData w{n, {}};
    for (int i = 0; i < n; ++i) {
      std::vector<std::int64_t> row(n, 0);
      row[i] = 1;
      w.rows.push_back(row);
    }
    return w;
  }

  /// e_i + e_j for i <= j.
  static WeightData sym2(int n) {
    WeightData w{n, {}};
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        std::vector<std::int64_t> row(n, 0);
        row[i] += 1;
        row[j] += 1;
        w.rows.push_back(row);
      }
    return w;
  }

  /// e_i + (1, ..., 1).
  static WeightData det_twisted(int n) {
    WeightData w = standard(n);
    for (auto& row : w.rows)
      for (auto& v : row) v += 1;
    return w;
  }

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i) s += ";";
      for (std::size_t j = 0; j < rows[i].size(); ++j) s += (j ? "," : "") + std::to_string(rows[i][j]);
    }
    return s;
  }
};

/// Dense table over T(F_q) (or over its character group), row-major in dlog exponents.
template <class V>
struct TorusFunction {
  TorusShape shape;
  std::vector<V> values;

  TorusFunction() = default;
  explicit TorusFunction(TorusShape s) : shape(s), values(static_cast<std::size_t>(s.size()), value_traits<V>::zero()) {}

  V& operator[](std::int64_t i) { return values[static_cast<std::size_t>(i)]; }
  const V& operator[](std::int64_t i) const { return values[static_cast<std::size_t>(i)]; }
  V& at(const TorusPoint& t) { return values[static_cast<std::size_t>(shape.index(t))]; }
  const V& at(const TorusPoint& t) const { return values[static_cast<std::size_t>(shape.index(t))]; }
  std::int64_t size() const { return shape.size(); }

  static TorusFunction delta(TorusShape s) {
    TorusFunction f(s);
    f[0] = value_traits<V>::integer(1);
    return f;
  }
  static TorusFunction constant(TorusShape s, const V& v) {
    TorusFunction f(s);
    for (auto& x : f.values) x = v;
    return f;
  }
};

template <class V>
using TorusSpectrum = TorusFunction<V>;

inline TorusShape torus_shape(const FieldTower& t, int n) { return {n, static_cast<std::int64_t>(t.order(1))}; }

/// phi(t) = (-1)^r * sum over x in (F_q^x)^r with pr_lambda(x) = t of psi(sum x_i).
template <class V>
TorusFunction<V> bessel_function(const FieldTower& tower, const WeightData& rho, const AddChar& psi = {1, 1}) {
  rho.validate();
  const auto& L = tower.level(1);
  TorusShape shape = torus_shape(tower, rho.n);
  const std::int64_t m = shape.m, p = tower.p();
  const int r = rho.r();
  std::vector<std::int64_t> counts(static_cast<std::size_t>(shape.size() * p), 0);
  std::vector<std::int64_t> x(r, 0);
  const std::int64_t total = num::ipow(m, r);
  for (std::int64_t it = 0; it < total; ++it) {
    std::int64_t rem = it;
    for (int i = r - 1; i >= 0; --i) {
      x[i] = rem % m;
      rem /= m;
    }
    std::int64_t t_idx = 0;
    for (int j = 0; j < rho.n; ++j) {
      std::int64_t s = 0;
      for (int i = 0; i < r; ++i) s += rho.rows[i][j] * x[i];
      t_idx = t_idx * m + num::mod(s, m);
    }
    Elt sum = 0;
    for (int i = 0; i < r; ++i) sum = L.add(sum, L.exp(static_cast<std::uint64_t>(x[i])));
    ++counts[static_cast<std::size_t>(t_idx * p + psi.exponent(tower, sum))];
  }
  TorusFunction<V> f(shape);
  for (std::int64_t t = 0; t < shape.size(); ++t) {
    std::vector<std::int64_t> c(counts.begin() + t * p, counts.begin() + (t + 1) * p);
    if (r % 2 == 1)
      for (auto& v : c) v = -v;
    f[t] = value_traits<V>::from_counts(std::move(c), p);
  }
  return f;
}

namespace detail {

// One finite Fourier pass per axis: out(c) = sum_s in(s) * zeta_m^{sign * c * s}.
template <class V>
std::vector<V> axis_transform(std::vector<V> a, const TorusShape& shape, int sign) {
  const std::int64_t m = shape.m;
  std::int64_t stride = 1;
  for (int axis = shape.n - 1; axis >= 0; --axis) {
    std::vector<V> out(a.size(), value_traits<V>::zero());
    for (std::int64_t base = 0; base < static_cast<std::int64_t>(a.size()); ++base) {
      if ((base / stride) % m != 0) continue;
      for (std::int64_t c = 0; c < m; ++c) {
        V acc = value_traits<V>::zero();
        for (std::int64_t s = 0; s < m; ++s) {
          const V& v = a[static_cast<std::size_t>(base + s * stride)];
          if (value_traits<V>::is_zero(v, 0.0)) continue;
          acc += value_traits<V>::times_root(v, sign * c * s, m);
        }
        out[static_cast<std::size_t>(base + c * stride)] = std::move(acc);
      }
    }
    a = std::move(out);
    stride *= m;
  }
  return a;
}

}  // namespace detail

/// M(f)(chi) = sum_t f(t) chi(t).
template <class V>
TorusSpectrum<V> mellin(const TorusFunction<V>& f) {
  TorusSpectrum<V> out(f.shape);
  out.values = detail::axis_transform(f.values, f.shape, 1);
  return out;
}

/// f(t) = (q-1)^{-n} sum_chi M(chi) chi(t)^{-1}.
template <class V>
TorusFunction<V> mellin_inverse(const TorusSpectrum<V>& spec) {
  TorusFunction<V> out(spec.shape);
  out.values = detail::axis_transform(spec.values, spec.shape, -1);
  const std::int64_t size = spec.shape.size();
  for (auto& v : out.values) v = value_traits<V>::scaled(v, 1, size);
  return out;
}

/// (f * g)(t) = sum_s f(s) g(t s^{-1}).
template <class V>
TorusFunction<V> convolve(const TorusFunction<V>& f, const TorusFunction<V>& g) {
  const TorusShape& sh = f.shape;
  TorusFunction<V> out(sh);
  for (std::int64_t s = 0; s < sh.size(); ++s) {
    if (value_traits<V>::is_zero(f[s], 0.0)) continue;
    auto sv = sh.coords(s);
    for (std::int64_t u = 0; u < sh.size(); ++u) {
      // t = s * u.
      auto uv = sh.coords(u);
      for (int i = 0; i < sh.n; ++i) uv[i] += sv[i];
      out[sh.index(uv)] += f[s] * g[u];
    }
  }
  return out;
}

/// Exponent of chi^{<lambda>} = chi o lambda as a character of F_q^x.
inline std::int64_t pullback_exponent(const std::vector<std::int64_t>& lambda, const TorusChar& chi, std::int64_t m) {
  std::int64_t s = 0;
  for (std::size_t j = 0; j < lambda.size(); ++j) s += lambda[j] * chi[j];
  return num::mod(s, m);
}

/// Product over rows of -g(chi o lambda_i, psi).
template <class V>
V gauss_product(const GaussTable<V>& gauss, const WeightData& rho, const TorusChar& chi) {
  rho.validate();
  const std::int64_t m = static_cast<std::int64_t>(gauss.tower().order(1));
  V prod = value_traits<V>::integer(1);
  for (const auto& row : rho.rows)
    prod = prod * (-gauss.get(1, static_cast<std::uint64_t>(pullback_exponent(row, chi, m))));
  return prod;
}

}  // namespace tracelab
