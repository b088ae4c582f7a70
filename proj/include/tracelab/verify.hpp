#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tracelab/induce.hpp"
#include "tracelab/version.hpp"

namespace tracelab {

enum class Variant { Borel, Mirabolic };
enum class NumericMode { Exact, Float };
enum class DatumKind { Gamma, Orbit, Constant, SignDelta };

inline std::string to_string(Variant v) { return v == Variant::Borel ? "borel" : "mirabolic"; }
inline std::string to_string(NumericMode m) { return m == NumericMode::Exact ? "exact" : "float"; }
inline std::string to_string(DatumKind k) {
  switch (k) {
    case DatumKind::Gamma: return "gamma";
    case DatumKind::Orbit: return "orbit";
    case DatumKind::Constant: return "constant";
    case DatumKind::SignDelta: return "sign-delta";
  }
  return "?";
}

inline DatumKind parse_datum_kind(const std::string& s) {
  if (s == "gamma") return DatumKind::Gamma;
  if (s == "orbit") return DatumKind::Orbit;
  if (s == "constant") return DatumKind::Constant;
  if (s == "sign-delta") return DatumKind::SignDelta;
  throw Error(ErrorKind::Config, "unknown datum '" + s + "'");
}

struct VerifyConfig {
  int n = 2;
  std::int64_t q = 3;
  DatumKind datum = DatumKind::Gamma;
  std::string weights;  // gamma only; empty means the standard weights
  std::string orbit;    // orbit only; one member "a,b,c"
  Variant variant = Variant::Borel;
  NumericMode mode = NumericMode::Exact;
  bool bypass_centrality = false;  // negative controls only
  std::int64_t max_cosets = 0;     // 0 enumerates every coset
  std::uint64_t seed = 1;
  std::int64_t budget = 20'000'000;  // cap on Phi evaluations
  unsigned workers = 0;
};

struct CosetRecord {
  std::string fingerprint;     // class key of the representative
  std::string representative;  // matrix entries
  std::string exact;           // exact coset sum, empty in float mode
  Complex value;
  bool nonzero = false;
};

struct VerifyReport {
  VerifyConfig config;
  std::string datum_name;
  bool central = true;
  bool prime_divides_order = false;  // p | n!
  std::vector<CosetRecord> records;
  std::int64_t cosets = 0;
  std::int64_t failures = 0;
  double max_abs = 0.0;
  double tolerance = 0.0;
  double elapsed_ms = 0.0;
  std::string version = kVersion;

  int exit_code() const { return failures == 0 ? 0 : 1; }

  std::string statement() const {
    std::ostringstream s;
    s << cosets << " " << (config.variant == Variant::Borel ? "U" : "U_Q") << "-coset sums checked, " << failures
      << " nonzero; "
      << (failures == 0 ? "consistent with vanishing off " : "inconsistent with vanishing off ")
      << (config.variant == Variant::Borel ? "B" : "Q");
    return s.str();
  }
};

inline int tower_depth(int n, const WeightData* rho) {
  int D = std::max(n, required_max_ext(n));
  if (rho) D = std::max(D, required_max_ext(*rho));
  return D;
}

inline TorusChar parse_char(const std::string& s) {
  TorusChar out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stoll(tok));
    } catch (const std::exception&) {
      throw Error(ErrorKind::Config, "bad character entry '" + tok + "'");
    }
  }
  return out;
}

template <class V>
EquivDatum<V> make_datum(const VerifyConfig& cfg) {
  auto [p, e] = num::split_prime_power(cfg.q);
  switch (cfg.datum) {
    case DatumKind::Gamma: {
      WeightData rho = cfg.weights.empty() ? WeightData::standard(cfg.n) : WeightData::parse(cfg.weights);
      if (rho.n != cfg.n) throw Error(ErrorKind::Config, "weight rows do not have length n");
      return gamma_datum<V>(make_tower(p, e, tower_depth(cfg.n, &rho)), rho);
    }
    case DatumKind::Orbit: {
      auto tower = make_tower(p, e, tower_depth(cfg.n, nullptr));
      auto chi = parse_char(cfg.orbit);
      if (static_cast<int>(chi.size()) != cfg.n) throw Error(ErrorKind::Config, "orbit character needs n entries");
      return orbit_datum<V>(tower, char_orbit(chi, static_cast<std::int64_t>(tower->order(1))));
    }
    case DatumKind::Constant:
      return constant_datum<V>(make_tower(p, e, tower_depth(cfg.n, nullptr)), cfg.n);
    case DatumKind::SignDelta:
      return sign_delta_datum<V>(make_tower(p, e, tower_depth(cfg.n, nullptr)), cfg.n);
  }
  throw Error(ErrorKind::Config, "unknown datum");
}

namespace detail {

/// Reduced row echelon basis with pivot columns, for rows over level 1.
struct Echelon {
  std::vector<std::vector<Elt>> rows;
  std::vector<int> pivots;
};

inline Echelon echelon(const FieldLevel& F, std::vector<std::vector<Elt>> rows) {
  Echelon e;
  if (rows.empty()) return e;
  const int n = static_cast<int>(rows[0].size());
  std::size_t r = 0;
  for (int c = 0; c < n && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[r]);
    Elt s = F.inv(rows[r][c]);
    for (auto& v : rows[r]) v = F.mul(v, s);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      Elt f = rows[i][c];
      for (int j = 0; j < n; ++j) rows[i][j] = F.sub(rows[i][j], F.mul(f, rows[r][j]));
    }
    e.pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  e.rows = std::move(rows);
  return e;
}

/// Nonzero vectors of length n with zeros at the given columns.
inline std::vector<std::vector<Elt>> free_vectors(int n, std::int64_t q, const std::vector<int>& zero_cols) {
  std::vector<int> free;
  for (int c = 0; c < n; ++c)
    if (std::find(zero_cols.begin(), zero_cols.end(), c) == zero_cols.end()) free.push_back(c);
  std::vector<std::vector<Elt>> out;
  const std::int64_t total = num::ipow(q, static_cast<int>(free.size()));
  for (std::int64_t idx = 1; idx < total; ++idx) {
    std::vector<Elt> v(n, 0);
    std::int64_t t = idx;
    for (std::size_t k = free.size(); k-- > 0;) {
      v[free[k]] = static_cast<Elt>(t % q);
      t /= q;
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace detail

/// One canonical representative per left U-coset of GL_n: rows built bottom-up, each with zeros
/// at the pivot columns of the echelon basis of the rows below it.
inline std::vector<Matrix> borel_coset_representatives(const MatrixSpace& S) {
  const int n = S.n();
  std::vector<Matrix> out;
  std::vector<std::vector<Elt>> rows(n);
  auto rec = [&](auto&& self, int i) -> void {
    if (i < 0) {
      Matrix m(n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m(r, c) = rows[r][c];
      out.push_back(std::move(m));
      return;
    }
    auto below = detail::echelon(S.F(), std::vector<std::vector<Elt>>(rows.begin() + i + 1, rows.end()));
    for (auto& v : detail::free_vectors(n, S.q(), below.pivots)) {
      rows[i] = std::move(v);
      self(self, i - 1);
    }
  };
  rec(rec, n - 1);
  return out;
}

/// One representative per left U_Q-coset: rows 2..n any independent rows, row 1 reduced modulo their span.
inline std::vector<Matrix> mirabolic_coset_representatives(const MatrixSpace& S) {
  const int n = S.n();
  std::vector<Matrix> out;
  std::vector<std::vector<Elt>> rows(n);
  auto rec = [&](auto&& self, int i) -> void {
    auto below = detail::echelon(S.F(), std::vector<std::vector<Elt>>(rows.begin() + i + 1, rows.end()));
    if (i == 0) {
      for (auto& v : detail::free_vectors(n, S.q(), below.pivots)) {
        Matrix m(n);
        for (int c = 0; c < n; ++c) m(0, c) = v[c];
        for (int r = 1; r < n; ++r)
          for (int c = 0; c < n; ++c) m(r, c) = rows[r][c];
        out.push_back(std::move(m));
      }
      return;
    }
    // Rows below row 1 range over all independent choices.
    const std::int64_t total = num::ipow(S.q(), n);
    for (std::int64_t idx = 1; idx < total; ++idx) {
      std::vector<Elt> v(n);
      std::int64_t t = idx;
      for (int c = n; c-- > 0;) {
        v[c] = static_cast<Elt>(t % S.q());
        t /= S.q();
      }
      auto trial = std::vector<std::vector<Elt>>(rows.begin() + i + 1, rows.end());
      trial.push_back(v);
      if (detail::echelon(S.F(), trial).rows.size() != trial.size()) continue;
      rows[i] = std::move(v);
      self(self, i - 1);
    }
  };
  rec(rec, n - 1);
  return out;
}

namespace detail {

inline bool in_mirabolic(const Matrix& x) {
  for (int i = 1; i < x.n; ++i)
    if (x(i, 0) != 0) return false;
  return true;
}

template <class V>
VerifyReport run_coset_sweep(const VerifyConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  if (cfg.n < 1 || cfg.n > 3) throw Error(ErrorKind::RankUnsupported, "the verifier supports 1 <= n <= 3");
  auto d = make_datum<V>(cfg);
  VerifyReport rep;
  rep.config = cfg;
  rep.datum_name = d.name;
  rep.prime_divides_order = num::factorial(cfg.n) % d.tower->p() == 0;
  rep.central = centrality_check(d, CentralityMode::WChiPrime, cfg.workers).passed();
  if (!rep.central && !cfg.bypass_centrality)
    throw Error(ErrorKind::NotCentral, "datum " + d.name + " fails the centrality precondition");
  auto phi = build_phi(d);
  const MatrixSpace& S = phi.space();

  std::vector<Matrix> us;
  std::vector<Matrix> reps;
  if (cfg.variant == Variant::Borel) {
    us = S.unipotent_elements();
    for (auto& x : borel_coset_representatives(S))
      if (!S.upper_triangular(x)) reps.push_back(std::move(x));
  } else {
    std::vector<std::pair<int, int>> pos;
    for (int j = 1; j < cfg.n; ++j) pos.emplace_back(0, j);
    us = S.fill_positions(pos);
    for (auto& x : mirabolic_coset_representatives(S))
      if (!in_mirabolic(x)) reps.push_back(std::move(x));
  }
  if (cfg.max_cosets > 0 && static_cast<std::int64_t>(reps.size()) > cfg.max_cosets) {
    std::mt19937_64 rng(cfg.seed);
    std::shuffle(reps.begin(), reps.end(), rng);
    reps.resize(static_cast<std::size_t>(cfg.max_cosets));
  }
  const std::int64_t work = num::checked_mul(static_cast<std::int64_t>(reps.size()), static_cast<std::int64_t>(us.size()));
  if (work > cfg.budget)
    throw Error(ErrorKind::BudgetExceeded, "sweep needs " + std::to_string(work) + " evaluations, budget " +
                                               std::to_string(cfg.budget));

  std::vector<CosetRecord> records(reps.size());
  std::vector<double> max_phi(reps.size(), 0.0);
  parallel_for(
      reps.size(),
      [&](std::size_t i) {
        const Matrix& x = reps[i];
        V s = value_traits<V>::zero();
        for (const auto& u : us) {
          V v = phi(S.mul(u, x));
          max_phi[i] = std::max(max_phi[i], std::abs(value_traits<V>::to_complex(v)));
          s += v;
        }
        CosetRecord& r = records[i];
        r.fingerprint = S.fingerprint(x).key;
        r.representative = x.str();
        r.value = value_traits<V>::to_complex(s);
        if constexpr (value_traits<V>::exact) {
          r.exact = value_traits<V>::str(s);
          r.nonzero = !s.is_zero();
        }
      },
      cfg.workers);
  double mphi = 0.0;
  for (double v : max_phi) mphi = std::max(mphi, v);
  rep.tolerance = value_traits<V>::exact ? 0.0 : 1e-8 * static_cast<double>(us.size()) * std::max(mphi, 1.0);
  for (auto& r : records) {
    if (!value_traits<V>::exact) r.nonzero = std::abs(r.value) > rep.tolerance;
    rep.max_abs = std::max(rep.max_abs, std::abs(r.value));
    if (r.nonzero) ++rep.failures;
  }
  std::sort(records.begin(), records.end(), [](const CosetRecord& a, const CosetRecord& b) {
    return a.fingerprint != b.fingerprint ? a.fingerprint < b.fingerprint : a.representative < b.representative;
  });
  rep.records = std::move(records);
  rep.cosets = static_cast<std::int64_t>(rep.records.size());
  rep.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace detail

/// Checks sum over u in U(F_q) of Phi(u x) = 0 on every U-coset outside B.
inline VerifyReport verify_vanishing(VerifyConfig cfg) {
  cfg.variant = Variant::Borel;
  return cfg.mode == NumericMode::Exact ? detail::run_coset_sweep<CycloValue>(cfg) : detail::run_coset_sweep<Complex>(cfg);
}

/// Same with U_Q (identity plus first row) and the domain outside Q (Krylov dimension of e_1 at least 2).
inline VerifyReport verify_mirabolic(VerifyConfig cfg) {
  cfg.variant = Variant::Mirabolic;
  return cfg.mode == NumericMode::Exact ? detail::run_coset_sweep<CycloValue>(cfg) : detail::run_coset_sweep<Complex>(cfg);
}

inline VerifyReport verify(const VerifyConfig& cfg) {
  return cfg.variant == Variant::Borel ? verify_vanishing(cfg) : verify_mirabolic(cfg);
}

struct SupportProbe {
  std::int64_t points = 0;   // diagonal t in T(F_q)
  std::int64_t nonzero = 0;  // t with a nonzero U-coset sum
};

/// U-coset sums at diagonal elements, where vanishing is not expected.
inline SupportProbe support_probe(const VerifyConfig& cfg) {
  auto d = make_datum<CycloValue>(cfg);
  auto phi = build_phi(d);
  const MatrixSpace& S = phi.space();
  const auto us = S.unipotent_elements();
  const auto& F = S.F();
  SupportProbe out;
  TorusShape sh{cfg.n, static_cast<std::int64_t>(F.order())};
  for (std::int64_t idx = 0; idx < sh.size(); ++idx) {
    std::vector<Elt> diag;
    for (auto e : sh.coords(idx)) diag.push_back(F.exp(static_cast<std::uint64_t>(e)));
    Matrix t = S.diag(diag);
    CycloValue s;
    for (const auto& u : us) s += phi(S.mul(u, t));
    ++out.points;
    if (!s.is_zero()) ++out.nonzero;
  }
  return out;
}

inline nlohmann::json to_json(const VerifyReport& r, bool with_records = true) {
  nlohmann::json j;
  j["n"] = r.config.n;
  j["q"] = r.config.q;
  j["variant"] = to_string(r.config.variant);
  j["mode"] = to_string(r.config.mode);
  j["cosets"] = r.cosets;
  j["max_abs"] = r.max_abs;
  j["failures"] = r.failures;
  j["elapsed_ms"] = r.elapsed_ms;
  j["version"] = r.version;
  j["datum"] = r.datum_name;
  j["central"] = r.central;
  j["centrality_bypassed"] = r.config.bypass_centrality;
  j["prime_divides_weyl_order"] = r.prime_divides_order;
  j["tolerance"] = r.tolerance;
  j["statement"] = r.statement();
  if (with_records) {
    auto& recs = j["records"] = nlohmann::json::array();
    for (const auto& c : r.records) {
      nlohmann::json e;
      e["fingerprint"] = c.fingerprint;
      e["representative"] = c.representative;
      if (!c.exact.empty()) e["exact"] = c.exact;
      e["re"] = c.value.real();
      e["im"] = c.value.imag();
      e["nonzero"] = c.nonzero;
      recs.push_back(std::move(e));
    }
  }
  return j;
}

inline std::string to_csv(const VerifyReport& r) {
  std::ostringstream s;
  s << "fingerprint,representative,exact,re,im,nonzero\n";
  auto quote = [](const std::string& v) { return "\"" + v + "\""; };
  s.precision(17);
  for (const auto& c : r.records)
    s << quote(c.fingerprint) << "," << quote(c.representative) << "," << quote(c.exact) << "," << c.value.real() << ","
      << c.value.imag() << "," << (c.nonzero ? 1 : 0) << "\n";
  return s.str();
}

}  // namespace tracelab
