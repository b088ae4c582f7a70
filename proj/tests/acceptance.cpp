// Runs the twelve acceptance criteria and prints one PASS/FAIL line per criterion.
// Exit status is nonzero iff a gating criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "tracelab/suite.hpp"

using namespace tracelab;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::function<std::vector<CheckResult>()> run;
};

std::vector<CheckResult> c1_artin_schreier() {
  std::vector<CheckResult> out;
  for (std::int64_t q : {2, 3, 4, 5, 7, 8, 9}) out.push_back(checks::artin_schreier(q));
  return out;
}

std::vector<CheckResult> c2_gauss() {
  std::vector<CheckResult> out;
  // Norm for every q <= 9; Hasse-Davenport to degree 3 where q <= 7.
  for (std::int64_t q : {2, 3, 4, 5, 7, 8, 9}) out.push_back(checks::gauss(q, q <= 7 ? 3 : 1));
  return out;
}

std::vector<CheckResult> c3_mellin_bessel() {
  std::vector<CheckResult> out;
  for (std::int64_t q : {3, 5})
    for (int n : {1, 2, 3})
      for (const char* w : {"standard", "sym2", "det-twisted"}) out.push_back(checks::mellin_bessel(n, q, w));
  return out;
}

std::vector<CheckResult> c4_centrality() {
  std::vector<CheckResult> out;
  for (std::int64_t q : {3, 5})
    for (int n : {2, 3})
      for (const char* w : {"standard", "sym2", "det-twisted"}) out.push_back(checks::centrality(n, q, w));
  return out;
}

std::vector<CheckResult> c5_lift_independence() {
  std::vector<CheckResult> out;
  for (std::int64_t q : {3, 5}) out.push_back(checks::lift_independence(q, "1,0;1,0;0,1;0,1", 2));
  return out;
}

std::vector<CheckResult> c6_lemmas() {
  std::vector<CheckResult> out;
  for (auto [n, q] : std::vector<std::pair<int, std::int64_t>>{{2, 3}, {2, 5}, {3, 2}, {3, 3}})
    out.push_back(checks::lemmas(n, q));
  return out;
}

std::vector<CheckResult> c7_rss() {
  std::vector<CheckResult> out;
  for (int n : {2, 3})
    for (std::int64_t q : {2, 3, 4, 5}) out.push_back(checks::rss_consistency(n, q, "standard"));
  return out;
}

std::vector<CheckResult> c8_closed_form() {
  std::vector<CheckResult> out;
  for (std::int64_t q : {2, 3, 5}) out.push_back(checks::closed_form(2, q));
  for (std::int64_t q : {2, 3}) out.push_back(checks::closed_form(3, q));
  return out;
}

VerifyConfig borel(int n, std::int64_t q, std::string weights = "") {
  VerifyConfig c;
  c.n = n;
  c.q = q;
  c.weights = std::move(weights);
  return c;
}

std::vector<CheckResult> c9_vanishing() {
  std::vector<CheckResult> out;
  for (auto [n, q] : std::vector<std::pair<int, std::int64_t>>{{2, 3}, {2, 5}, {2, 7}, {3, 2}, {3, 3}})
    out.push_back(checks::vanishing(borel(n, q)));
  for (std::int64_t q : {3, 5}) out.push_back(checks::vanishing(borel(2, q, WeightData::sym2(2).str())));
  for (const char* orbit : {"0,0", "0,1"}) {
    VerifyConfig c = borel(2, 5);
    c.datum = DatumKind::Orbit;
    c.orbit = orbit;
    out.push_back(checks::vanishing(c, false));
  }
  return out;
}

std::vector<CheckResult> c10_mirabolic() {
  std::vector<CheckResult> out;
  for (std::int64_t q : {2, 3}) {
    VerifyConfig c = borel(3, q);
    c.variant = Variant::Mirabolic;
    out.push_back(checks::vanishing(c));
  }
  return out;
}

std::vector<CheckResult> c11_mackey() {
  return {checks::mackey(2, 3, {1, 1}), checks::mackey(3, 2, {2, 1})};
}

std::vector<CheckResult> c12_negative_control() { return {checks::negative_control(2, 3)}; }

// Known checks raise typed errors; the criterion records them as failures.
std::vector<CheckResult> guarded(const std::function<std::vector<CheckResult>()>& f, const std::string& title) {
  try {
    return f();
  } catch (const Error& e) {
    CheckResult r(title, nlohmann::json::object());
    r.detail = {{"error", to_string(e.kind())}, {"message", e.what()}};
    return {r};
  }
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "Artin-Schreier sum vanishes", c1_artin_schreier},
      {2, "Gauss sum norm and Hasse-Davenport", c2_gauss},
      {3, "Mellin transform of Bessel data equals Gauss product", c3_mellin_bessel},
      {4, "centrality of gamma data (W'_chi)", c4_centrality},
      {5, "lift independence with repeated rows", c5_lift_independence},
      {6, "structural lemmas, exhaustive", c6_lemmas},
      {7, "Phi agrees with direct induction on rss classes", c7_rss},
      {8, "closed form (-1)^{n^2} psi(tr)", c8_closed_form},
      {9, "vanishing of U-coset sums off B", c9_vanishing},
      {10, "vanishing of U_Q-coset sums off Q", c10_mirabolic},
      {11, "Mackey constant uniform over Levi points", c11_mackey},
      {12, "negative control", c12_negative_control},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    auto results = guarded(c.run, c.title);
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    int gating_fail = 0, advisory_fail = 0, gating = 0;
    for (const auto& r : results) {
      if (r.gating) ++gating;
      if (!r.passed) ++(r.gating ? gating_fail : advisory_fail);
    }
    const bool ok = gating_fail == 0;
    if (!ok) ++failed;
    std::printf("%s criterion %2d: %s [%d/%d gating checks passed", ok ? "PASS" : "FAIL", c.id, c.title.c_str(),
                gating - gating_fail, gating);
    if (results.size() > static_cast<std::size_t>(gating))
      std::printf(", %d/%d exploratory passed", static_cast<int>(results.size()) - gating - advisory_fail,
                  static_cast<int>(results.size()) - gating);
    std::printf(", %.0f ms]\n", ms);
    for (const auto& r : results)
      if (!r.passed)
        std::printf("    %s %s %s: %s\n", r.gating ? "failed" : "exploratory", r.name.c_str(), r.params.dump().c_str(),
                    r.detail.dump().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
