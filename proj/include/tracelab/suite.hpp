#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tracelab/lemmas.hpp"
#include "tracelab/verify.hpp"

namespace tracelab {

struct CheckResult {
  std::string name;
  nlohmann::json params;
  bool passed = false;
  bool gating = true;
  nlohmann::json detail;
  double elapsed_ms = 0.0;

  CheckResult() = default;
  CheckResult(std::string n, nlohmann::json p) : name(std::move(n)), params(std::move(p)) {}

  nlohmann::json to_json() const {
    return {{"name", name}, {"params", params},   {"passed", passed},
            {"gating", gating}, {"detail", detail}, {"elapsed_ms", elapsed_ms}};
  }
};

/// "standard", "sym2", "det-twisted" or explicit rows "1,0;0,1".
inline WeightData resolve_weights(const std::string& spec, int n) {
  if (spec.empty() || spec == "standard") return WeightData::standard(n);
  if (spec == "sym2") return WeightData::sym2(n);
  if (spec == "det-twisted") return WeightData::det_twisted(n);
  WeightData w = WeightData::parse(spec);
  if (w.n != n) throw Error(ErrorKind::Config, "weight rows do not have length n");
  return w;
}

inline std::shared_ptr<const FieldTower> tower_for(std::int64_t q, int depth) {
  auto [p, e] = num::split_prime_power(q);
  return make_tower(p, e, depth);
}

namespace checks {

inline CheckResult artin_schreier(std::int64_t q) {
  CheckResult r{"artin-schreier", {{"q", q}}};
  auto t = tower_for(q, 1);
  CycloValue s = artin_schreier_sum<CycloValue>(*t);
  r.passed = s.is_zero();
  r.detail = {{"sum", s.str()}};
  return r;
}

/// |g(chi)|^2 = q for nontrivial chi, and Hasse-Davenport for every chi up to max_degree.
inline CheckResult gauss(std::int64_t q, int max_degree) {
  CheckResult r{"gauss", {{"q", q}, {"max_degree", max_degree}}};
  auto t = tower_for(q, std::max(1, max_degree));
  std::int64_t norm_fail = 0, hd_fail = 0, chars = 0;
  for (std::uint64_t k = 0; k < t->order(1); ++k) {
    ++chars;
    CycloValue g = gauss_sum<CycloValue>(*t, MultChar{1, k}, AddChar{1, 1});
    if (k != 0 && !(g * g.conj() == CycloValue::integer(q))) ++norm_fail;
    for (int d = 2; d <= max_degree; ++d)
      if (!hasse_davenport_check(*t, k, d)) ++hd_fail;
  }
  r.passed = norm_fail == 0 && hd_fail == 0;
  r.detail = {{"characters", chars}, {"norm_failures", norm_fail}, {"hasse_davenport_failures", hd_fail}};
  return r;
}

inline CheckResult mellin_bessel(int n, std::int64_t q, const std::string& weights) {
  CheckResult r{"mellin-bessel", {{"n", n}, {"q", q}, {"weights", weights}}};
  auto t = tower_for(q, 1);
  WeightData rho = resolve_weights(weights, n);
  auto spec = mellin(bessel_function<CycloValue>(*t, rho));
  GaussTable<CycloValue> gt(t);
  std::int64_t fail = 0;
  for (std::int64_t c = 0; c < spec.size(); ++c)
    if (!(spec[c] == gauss_product(gt, rho, spec.shape.coords(c)))) ++fail;
  r.passed = fail == 0;
  r.detail = {{"characters", spec.size()}, {"failures", fail}};
  return r;
}

inline CheckResult centrality(int n, std::int64_t q, const std::string& weights) {
  CheckResult r{"centrality", {{"n", n}, {"q", q}, {"weights", weights}}};
  WeightData rho = resolve_weights(weights, n);
  auto d = gamma_datum<CycloValue>(tower_for(q, tower_depth(n, &rho)), rho);
  auto rep = centrality_check(d, CentralityMode::WChiPrime);
  bool conj = conjugation_consistent(d);
  r.passed = rep.passed() && conj;
  r.detail = {{"cells", rep.cells.size()}, {"failures", rep.failures}, {"conjugation_consistent", conj}};
  return r;
}

/// sign(eta) * twisted_sum(eta) agrees pointwise for every lift eta of every w.
inline CheckResult lift_independence(std::int64_t q, const std::string& weights, int n) {
  CheckResult r{"lift-independence", {{"n", n}, {"q", q}, {"weights", weights}}};
  WeightData rho = resolve_weights(weights, n);
  int depth = n;
  for (const auto& w : all_perms(n))
    for (const auto& eta : all_lifts(rho, w)) depth = std::max(depth, twisted_degree(w, eta));
  auto t = tower_for(q, depth);
  std::int64_t lifts = 0, fail = 0;
  for (const auto& w : all_perms(n)) {
    TwistedTorus tt(t, w);
    std::vector<CycloValue> ref;
    for (const auto& eta : all_lifts(rho, w)) {
      ++lifts;
      auto f = twisted_sum<CycloValue>(tt, rho, eta);
      if (eta.sign() < 0)
        for (auto& v : f) v = -v;
      if (ref.empty()) {
        ref = std::move(f);
        continue;
      }
      for (std::size_t i = 0; i < f.size(); ++i)
        if (!(f[i] == ref[i])) ++fail;
    }
  }
  r.passed = fail == 0 && lifts > static_cast<std::int64_t>(num::factorial(n));
  r.detail = {{"lifts", lifts}, {"pointwise_failures", fail}, {"tower_depth", depth}};
  return r;
}

inline CheckResult lemmas(int n, std::int64_t q) {
  CheckResult r{"lemmas", {{"n", n}, {"q", q}}};
  auto rep = verify_structure_lemmas(tower_for(q, 1), n);
  r.passed = rep.passed();
  for (const auto& c : rep.checks)
    r.detail[c.name] = {{"cases", c.cases}, {"failures", c.failures}, {"applicable", c.applicable}};
  r.detail["uq_size"] = num::ipow(q, n - 1);
  return r;
}

inline CheckResult rss_consistency(int n, std::int64_t q, const std::string& weights) {
  CheckResult r{"rss-consistency", {{"n", n}, {"q", q}, {"weights", weights}}};
  WeightData rho = resolve_weights(weights, n);
  auto d = gamma_datum<CycloValue>(tower_for(q, tower_depth(n, &rho)), rho);
  auto phi = build_phi(d);
  std::int64_t classes = 0, fail = 0;
  for (const auto& rep : phi.space().class_representatives()) {
    if (!rep.info.regular_semisimple()) continue;
    ++classes;
    if (!(phi.at(rep) == induce_rss(d, rep.g))) ++fail;
  }
  r.passed = fail == 0;
  r.detail = {{"rss_classes", classes}, {"failures", fail}};
  return r;
}

/// Phi for the standard weights equals (-1)^{n^2} psi(tr g) on every class.
inline CheckResult closed_form(int n, std::int64_t q) {
  CheckResult r{"closed-form", {{"n", n}, {"q", q}}};
  auto rho = WeightData::standard(n);
  auto t = tower_for(q, tower_depth(n, &rho));
  auto phi = build_phi(gamma_datum<CycloValue>(t, rho));
  std::int64_t classes = 0, fail = 0;
  const int sign = (n * n) % 2 == 0 ? 1 : -1;
  for (const auto& rep : phi.space().class_representatives()) {
    ++classes;
    CycloValue expect = add_char_value<CycloValue>(*t, AddChar{}, phi.space().trace(rep.g)).scaled(sign, 1);
    if (!(phi.at(rep) == expect)) ++fail;
  }
  r.passed = fail == 0;
  r.detail = {{"classes", classes}, {"failures", fail}, {"sign", sign}};
  return r;
}

inline CheckResult vanishing(const VerifyConfig& cfg, bool gating = true) {
  CheckResult r{cfg.variant == Variant::Borel ? "vanishing" : "mirabolic",
                {{"n", cfg.n},
                 {"q", cfg.q},
                 {"datum", to_string(cfg.datum)},
                 {"weights", cfg.weights},
                 {"orbit", cfg.orbit},
                 {"mode", to_string(cfg.mode)}}};
  r.gating = gating;
  auto rep = verify(cfg);
  r.passed = rep.failures == 0 && rep.cosets > 0;
  r.detail = to_json(rep, false);
  return r;
}

inline CheckResult mackey(int n, std::int64_t q, const std::vector<int>& composition) {
  CheckResult r{"mackey", {{"n", n}, {"q", q}, {"composition", composition}}};
  auto rho = WeightData::standard(n);
  auto d = gamma_datum<CycloValue>(tower_for(q, tower_depth(n, &rho)), rho);
  auto rep = mackey_check(d, composition);
  r.passed = rep.uniform();
  r.detail = {{"constant", rep.constant.str()},     {"unipotent_size", rep.unipotent_size},
              {"levi_points", rep.levi_points},     {"failures", rep.failures},
              {"determined", rep.determined}};
  return r;
}

/// The constant datum must fail centrality, and the bypassed sweep must find a nonzero coset sum.
inline CheckResult negative_control(int n, std::int64_t q) {
  CheckResult r{"negative-control", {{"n", n}, {"q", q}}};
  VerifyConfig cfg;
  cfg.n = n;
  cfg.q = q;
  cfg.datum = DatumKind::Constant;
  bool refused = false;
  try {
    verify(cfg);
  } catch (const Error& e) {
    refused = e.kind() == ErrorKind::NotCentral;
  }
  cfg.bypass_centrality = true;
  auto rep = verify(cfg);
  r.passed = refused && rep.failures > 0;
  r.detail = {{"refused", refused}, {"bypassed_nonzero_cosets", rep.failures}, {"cosets", rep.cosets}};
  return r;
}

inline CheckResult green_orthogonality(int n, std::int64_t q) {
  CheckResult r{"green-orthogonality", {{"n", n}, {"q", q}}};
  auto rep = green_orthogonality_check(tower_for(q, std::max(n, required_max_ext(n))), n);
  r.passed = rep.passed();
  r.detail = {{"pairs", rep.pairs}, {"failures", rep.failures}};
  return r;
}

inline CheckResult deligne_sign(int n, std::int64_t q, const std::string& weights) {
  CheckResult r{"deligne-sign", {{"n", n}, {"q", q}, {"weights", weights}}};
  WeightData rho = resolve_weights(weights, n);
  auto d = gamma_datum<CycloValue>(tower_for(q, tower_depth(n, &rho)), rho);
  auto rep = deligne_sign_check(d, {n});
  r.passed = rep.passed();
  r.detail = {{"transpositions", rep.transpositions}, {"characters", rep.characters}, {"failures", rep.failures}};
  return r;
}

}  // namespace checks

namespace detail {

template <class T>
T param(const nlohmann::json& j, const char* key, T fallback) {
  return j.contains(key) ? j.at(key).get<T>() : fallback;
}

}  // namespace detail

inline const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names = {
      "artin-schreier", "gauss",           "mellin-bessel", "centrality", "lift-independence",
      "lemmas",         "rss-consistency", "closed-form",   "vanishing",  "mirabolic",
      "mackey",         "negative-control", "green-orthogonality", "deligne-sign"};
  return names;
}

inline std::string check_name(const nlohmann::json& spec) {
  if (!spec.is_object() || !spec.contains("name") || !spec.at("name").is_string())
    throw Error(ErrorKind::Config, "check entry needs a name");
  std::string name = spec.at("name").get<std::string>();
  const auto& k = known_checks();
  if (std::find(k.begin(), k.end(), name) == k.end()) throw Error(ErrorKind::Config, "unknown check '" + name + "'");
  return name;
}

/// Runs one check described by a JSON object with a "name" and its parameters.
/// Errors inside a known check become a failed result; unknown names throw ConfigError.
inline CheckResult run_check(const nlohmann::json& spec) {
  using detail::param;
  const std::string name = check_name(spec);
  const int n = param<int>(spec, "n", 2);
  const std::int64_t q = param<std::int64_t>(spec, "q", 3);
  const std::string weights = param<std::string>(spec, "weights", "standard");
  const auto t0 = std::chrono::steady_clock::now();
  CheckResult r;
  try {
    if (name == "artin-schreier") {
      r = checks::artin_schreier(q);
    } else if (name == "gauss") {
      r = checks::gauss(q, param<int>(spec, "max_degree", 3));
    } else if (name == "mellin-bessel") {
      r = checks::mellin_bessel(n, q, weights);
    } else if (name == "centrality") {
      r = checks::centrality(n, q, weights);
    } else if (name == "lift-independence") {
      r = checks::lift_independence(q, param<std::string>(spec, "weights", "1,0;1,0;0,1;0,1"), n);
    } else if (name == "lemmas") {
      r = checks::lemmas(n, q);
    } else if (name == "rss-consistency") {
      r = checks::rss_consistency(n, q, weights);
    } else if (name == "closed-form") {
      r = checks::closed_form(n, q);
    } else if (name == "vanishing" || name == "mirabolic") {
      VerifyConfig cfg;
      cfg.n = n;
      cfg.q = q;
      cfg.variant = name == "vanishing" ? Variant::Borel : Variant::Mirabolic;
      cfg.datum = parse_datum_kind(param<std::string>(spec, "datum", "gamma"));
      cfg.weights = weights == "standard" ? "" : resolve_weights(weights, n).str();
      cfg.orbit = param<std::string>(spec, "orbit", "");
      cfg.mode = param<std::string>(spec, "mode", "exact") == "float" ? NumericMode::Float : NumericMode::Exact;
      r = checks::vanishing(cfg, param<bool>(spec, "gating", true));
    } else if (name == "mackey") {
      r = checks::mackey(n, q, param<std::vector<int>>(spec, "composition", std::vector<int>(n, 1)));
    } else if (name == "negative-control") {
      r = checks::negative_control(n, q);
    } else if (name == "green-orthogonality") {
      r = checks::green_orthogonality(n, q);
    } else if (name == "deligne-sign") {
      r = checks::deligne_sign(n, q, weights);
    }
  } catch (const Error& e) {
    r.name = name;
    r.params = spec;
    r.passed = false;
    r.detail = {{"error", to_string(e.kind())}, {"message", e.what()}};
  }
  if (spec.contains("gating")) r.gating = spec.at("gating").get<bool>();
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

struct SuiteReport {
  std::vector<CheckResult> results;
  bool passed() const {
    for (const auto& r : results)
      if (r.gating && !r.passed) return false;
    return true;
  }
  nlohmann::json summary() const {
    nlohmann::json j;
    j["version"] = kVersion;
    j["passed"] = passed();
    auto& list = j["checks"] = nlohmann::json::array();
    for (const auto& r : results)
      list.push_back({{"name", r.name}, {"passed", r.passed}, {"gating", r.gating}, {"elapsed_ms", r.elapsed_ms}});
    return j;
  }
};

/// Every check once at (n, q) = (2, 3).
inline nlohmann::json default_suite_config() {
  return {{"checks",
           {{{"name", "artin-schreier"}, {"q", 3}},
            {{"name", "gauss"}, {"q", 3}, {"max_degree", 3}},
            {{"name", "mellin-bessel"}, {"n", 2}, {"q", 3}},
            {{"name", "centrality"}, {"n", 2}, {"q", 3}},
            {{"name", "lift-independence"}, {"n", 2}, {"q", 3}},
            {{"name", "lemmas"}, {"n", 2}, {"q", 3}},
            {{"name", "rss-consistency"}, {"n", 2}, {"q", 3}},
            {{"name", "closed-form"}, {"n", 2}, {"q", 3}},
            {{"name", "vanishing"}, {"n", 2}, {"q", 3}},
            {{"name", "mirabolic"}, {"n", 2}, {"q", 3}},
            {{"name", "mackey"}, {"n", 2}, {"q", 3}, {"composition", {1, 1}}},
            {{"name", "negative-control"}, {"n", 2}, {"q", 3}},
            {{"name", "green-orthogonality"}, {"n", 2}, {"q", 3}},
            {{"name", "deligne-sign"}, {"n", 2}, {"q", 3}}}}};
}

/// Runs {"checks": [...]}; writes one JSON per check and summary.json when out_dir is set.
inline SuiteReport run_suite(const nlohmann::json& config, const std::string& out_dir = "") {
  if (!config.is_object() || !config.contains("checks") || !config.at("checks").is_array())
    throw Error(ErrorKind::Config, "suite config needs a \"checks\" array");
  SuiteReport rep;
  // Names are validated before anything runs.
  for (const auto& c : config.at("checks")) check_name(c);
  for (const auto& c : config.at("checks")) rep.results.push_back(run_check(c));
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    for (std::size_t i = 0; i < rep.results.size(); ++i) {
      std::ofstream f(out_dir + "/" + std::to_string(i + 1) + "-" + rep.results[i].name + ".json");
      if (!f) throw Error(ErrorKind::Config, "cannot write to " + out_dir);
      f << rep.results[i].to_json().dump(2) << "\n";
    }
    std::ofstream s(out_dir + "/summary.json");
    if (!s) throw Error(ErrorKind::Config, "cannot write to " + out_dir);
    s << rep.summary().dump(2) << "\n";
  }
  return rep;
}

inline SuiteReport run_suite_file(const std::string& path, const std::string& out_dir = "") {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Config, "cannot read suite config " + path);
  nlohmann::json cfg;
  try {
    in >> cfg;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Config, std::string("bad suite config: ") + e.what());
  }
  return run_suite(cfg, out_dir);
}

}  // namespace tracelab
