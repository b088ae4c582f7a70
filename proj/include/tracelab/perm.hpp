#pragma once

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "tracelab/error.hpp"

namespace tracelab {

/// Permutation of {0..n-1}; img[i] is the image of i.
struct Perm {
  std::vector<int> img;

  Perm() = default;
  explicit Perm(std::vector<int> images) : img(std::move(images)) {}

  static Perm identity(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return Perm(std::move(v));
  }

  /// Transposition of a and b (0-based).
  static Perm transposition(int n, int a, int b) {
    Perm p = identity(n);
    std::swap(p.img[a], p.img[b]);
    return p;
  }

  int size() const { return static_cast<int>(img.size()); }
  int operator()(int i) const { return img[i]; }
  bool is_identity() const {
    for (int i = 0; i < size(); ++i)
      if (img[i] != i) return false;
    return true;
  }

  /// (this * o)(i) = this(o(i)).
  Perm operator*(const Perm& o) const {
    std::vector<int> r(size());
    for (int i = 0; i < size(); ++i) r[i] = img[o.img[i]];
    return Perm(std::move(r));
  }

  Perm inverse() const {
    std::vector<int> r(size());
    for (int i = 0; i < size(); ++i) r[img[i]] = i;
    return Perm(std::move(r));
  }

  /// Cycles i -> w(i) -> ..., each starting at its smallest element, ordered by that element.
  std::vector<std::vector<int>> cycles() const {
    std::vector<std::vector<int>> out;
    std::vector<bool> seen(size(), false);
    for (int i = 0; i < size(); ++i) {
      if (seen[i]) continue;
      std::vector<int> c;
      for (int j = i; !seen[j]; j = img[j]) {
        seen[j] = true;
        c.push_back(j);
      }
      out.push_back(std::move(c));
    }
    return out;
  }

  /// Cycle lengths in decreasing order.
  std::vector<int> cycle_type() const {
    std::vector<int> t;
    for (const auto& c : cycles()) t.push_back(static_cast<int>(c.size()));
    std::sort(t.rbegin(), t.rend());
    return t;
  }

  int sign() const {
    int s = 1;
    for (const auto& c : cycles())
      if (c.size() % 2 == 0) s = -s;
    return s;
  }

  friend bool operator==(const Perm& a, const Perm& b) { return a.img == b.img; }
  friend bool operator<(const Perm& a, const Perm& b) { return a.img < b.img; }

  /// Cycle notation with 1-based labels, e.g. "(1 2)(3)"; identity prints as "e".
  std::string str() const {
    if (is_identity()) return "e";
    std::string s;
    for (const auto& c : cycles()) {
      if (c.size() == 1) continue;
      s += "(";
      for (std::size_t k = 0; k < c.size(); ++k) s += (k ? " " : "") + std::to_string(c[k] + 1);
      s += ")";
    }
    return s;
  }
};

/// All of S_n in lexicographic order of image vectors; index 0 is the identity.
inline std::vector<Perm> all_perms(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  std::vector<Perm> out;
  do {
    out.emplace_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

inline int perm_index(const std::vector<Perm>& perms, const Perm& w) {
  auto it = std::lower_bound(perms.begin(), perms.end(), w);
  if (it == perms.end() || !(*it == w)) throw Error(ErrorKind::Config, "permutation not in list");
  return static_cast<int>(it - perms.begin());
}

}  // namespace tracelab
