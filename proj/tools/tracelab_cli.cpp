#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tracelab/suite.hpp"

using namespace tracelab;

namespace {

std::string show(const CycloValue& v) {
  std::ostringstream s;
  s.precision(12);
  Complex c = v.to_complex();
  s << v.str() << "  ~  " << c.real() << (c.imag() < 0 ? " - " : " + ") << std::abs(c.imag()) << "i";
  return s.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::Config, "cannot write " + path);
  f << text;
}

/// "a,b;c,d" or "a,b,c,d" as field elements in their integer encoding.
Matrix parse_matrix(const std::string& s, int n, const FieldLevel& F) {
  std::vector<Elt> vals;
  std::string tok;
  for (char c : s + ",") {
    if (c == ',' || c == ';' || c == ' ') {
      if (!tok.empty()) {
        long long v = 0;
        try {
          v = std::stoll(tok);
        } catch (const std::exception&) {
          throw Error(ErrorKind::Config, "bad matrix entry '" + tok + "'");
        }
        if (v < 0 || static_cast<std::uint64_t>(v) >= F.size())
          throw Error(ErrorKind::Config, "matrix entry out of range: " + tok);
        vals.push_back(static_cast<Elt>(v));
        tok.clear();
      }
    } else {
      tok += c;
    }
  }
  return Matrix(n, vals);
}

struct DatumOptions {
  int n = 2;
  std::int64_t q = 3;
  std::string weights;
  std::string orbit;

  VerifyConfig config() const {
    VerifyConfig c;
    c.n = n;
    c.q = q;
    if (!weights.empty()) c.weights = resolve_weights(weights, n).str();
    if (!orbit.empty()) {
      c.datum = DatumKind::Orbit;
      c.orbit = orbit;
    }
    return c;
  }
};

void add_nq(CLI::App* app, DatumOptions& o) {
  app->add_option("--n", o.n, "rank")->required();
  app->add_option("--q", o.q, "field size (prime power)")->required();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tracelab: finite trace checks for Bessel data and their induction to GL_n"};
  app.require_subcommand(1);
  int status = 0;

  // field
  int fp = 3, fe = 1, fD = 2;
  auto* field = app.add_subcommand("field", "describe the tower F_{p^e} subset ... F_{p^{e D}}");
  field->add_option("--p", fp, "characteristic")->required();
  field->add_option("--e", fe, "base degree over F_p");
  field->add_option("--max-ext", fD, "largest extension degree");
  field->callback([&] {
    auto t = make_tower(fp, fe, fD);
    for (int d = 1; d <= t->max_ext(); ++d) {
      const auto& L = t->level(d);
      std::cout << "level " << d << ": size " << L.size() << ", modulus";
      for (int c : L.modulus()) std::cout << " " << c;
      std::cout << " (low to high), generator " << L.generator() << "\n";
    }
  });

  // gauss
  std::int64_t gq = 3;
  std::uint64_t gchi = 1;
  Elt gpsi = 1;
  auto* gauss = app.add_subcommand("gauss", "Gauss sum g(chi_K, psi)");
  gauss->add_option("--q", gq, "field size")->required();
  gauss->add_option("--chi", gchi, "exponent K of chi(g^m) = zeta^{K m}")->required();
  gauss->add_option("--psi", gpsi, "scale a of psi(x) = zeta_p^{Tr(a x)}");
  gauss->callback([&] {
    auto t = tower_for(gq, 1);
    std::cout << show(gauss_sum<CycloValue>(*t, MultChar{1, gchi}, AddChar{1, gpsi})) << "\n";
  });

  // kloosterman
  std::int64_t kq = 3;
  Elt ka = 1;
  int klevel = 1;
  auto* kloo = app.add_subcommand("kloosterman", "Kloosterman sum of psi(x + a/x)");
  kloo->add_option("--q", kq, "field size")->required();
  kloo->add_option("--a", ka, "parameter a (integer encoding)")->required();
  kloo->add_option("--level", klevel, "sum over F_{q^level}");
  kloo->callback([&] {
    auto t = tower_for(kq, klevel);
    std::cout << show(kloosterman<CycloValue>(*t, ka, klevel)) << "\n";
  });

  // bessel
  DatumOptions bo;
  auto* bessel = app.add_subcommand("bessel", "Bessel function of a weight multiset, as CSV over T(F_q)");
  add_nq(bessel, bo);
  bessel->add_option("--weights", bo.weights, "rows \"1,0;0,1\", a preset, or a file")->required();
  bessel->callback([&] {
    auto t = tower_for(bo.q, 1);
    auto f = bessel_function<CycloValue>(*t, resolve_weights(bo.weights, bo.n));
    std::cout << "dlogs,exact,re,im\n";
    for (std::int64_t i = 0; i < f.size(); ++i) {
      auto c = f.shape.coords(i);
      std::string key;
      for (auto v : c) key += (key.empty() ? "" : " ") + std::to_string(v);
      Complex z = f[i].to_complex();
      std::cout << "\"" << key << "\",\"" << f[i].str() << "\"," << z.real() << "," << z.imag() << "\n";
    }
  });

  // central-check
  DatumOptions co;
  std::string cmode = "wchiprime", cout_path;
  auto* central = app.add_subcommand("central-check", "centrality of the gamma datum");
  add_nq(central, co);
  central->add_option("--weights", co.weights, "rows, preset, or file");
  central->add_option("--mode", cmode, "wchi or wchiprime")->check(CLI::IsMember({"wchi", "wchiprime"}));
  central->add_option("--out", cout_path, "report JSON path");
  central->callback([&] {
    WeightData rho = resolve_weights(co.weights, co.n);
    auto d = gamma_datum<CycloValue>(tower_for(co.q, tower_depth(co.n, &rho)), rho);
    auto rep = centrality_check(d, cmode == "wchi" ? CentralityMode::WChi : CentralityMode::WChiPrime);
    nlohmann::json j{{"n", co.n},           {"q", co.q},          {"weights", rho.str()}, {"mode", cmode},
                     {"cells", rep.cells.size()}, {"failures", rep.failures}, {"passed", rep.passed()},
                     {"version", kVersion}};
    write_text(cout_path, j.dump(2) + "\n");
    status = rep.passed() ? 0 : 1;
  });

  // lemmas
  DatumOptions lo;
  bool lexhaustive = false;
  std::int64_t lsamples = 0;
  std::uint64_t lseed = 1;
  auto* lem = app.add_subcommand("lemmas", "structural lemma checks on GL_n(F_q)");
  add_nq(lem, lo);
  auto* ex = lem->add_flag("--exhaustive", lexhaustive, "enumerate everything (default)");
  lem->add_option("--samples", lsamples, "sample this many elements instead")->excludes(ex);
  lem->add_option("--seed", lseed, "sampling seed");
  lem->callback([&] {
    LemmaOptions opt;
    opt.exhaustive = lsamples == 0;
    opt.samples = lsamples;
    opt.seed = lseed;
    auto rep = verify_structure_lemmas(tower_for(lo.q, 1), lo.n, opt);
    for (const auto& c : rep.checks)
      std::cout << c.name << ": " << (c.applicable ? "" : "(not applicable) ") << c.cases << " cases, " << c.failures
                << " failures\n";
    std::cout << (rep.passed() ? "PASS" : "FAIL") << "\n";
    status = rep.passed() ? 0 : 1;
  });

  // induce
  DatumOptions io;
  std::string iat;
  bool itable = false;
  auto* ind = app.add_subcommand("induce", "Phi on GL_n(F_q) built from the datum");
  add_nq(ind, io);
  ind->add_option("--weights", io.weights, "rows, preset, or file (gamma datum)");
  ind->add_option("--orbit", io.orbit, "one member \"a,b\" of a character orbit (orbit datum)");
  auto* at = ind->add_option("--at", iat, "matrix entries, row-major");
  ind->add_flag("--table", itable, "CSV over class representatives")->excludes(at);
  ind->callback([&] {
    auto d = make_datum<CycloValue>(io.config());
    auto phi = build_phi(d);
    if (!iat.empty()) {
      Matrix g = parse_matrix(iat, io.n, phi.space().F());
      if (!phi.space().invertible(g)) throw Error(ErrorKind::Singular, "matrix is singular");
      std::cout << show(phi(g)) << "\n";
      return;
    }
    std::cout << "fingerprint,size,exact,re,im\n";
    for (const auto& rep : phi.space().class_representatives()) {
      CycloValue v = phi.at(rep);
      Complex z = v.to_complex();
      std::cout << "\"" << rep.info.key << "\"," << rep.size << ",\"" << v.str() << "\"," << z.real() << "," << z.imag()
                << "\n";
    }
  });

  // verify
  DatumOptions vo;
  bool vmirabolic = false, vfast = false, vexact = false, vbypass = false;
  std::string vout, vcsv;
  std::int64_t vmax = 0;
  unsigned vworkers = 0;
  auto* ver = app.add_subcommand("verify", "U-coset sum vanishing off B (or U_Q off Q)");
  add_nq(ver, vo);
  ver->add_option("--weights", vo.weights, "rows, preset, or file (gamma datum)");
  ver->add_option("--orbit", vo.orbit, "one member of a character orbit (orbit datum)");
  ver->add_flag("--mirabolic", vmirabolic, "use U_Q and Q");
  auto* fexact = ver->add_flag("--exact", vexact, "exact cyclotomic arithmetic (default)");
  ver->add_flag("--fast", vfast, "floating point with tolerance")->excludes(fexact);
  ver->add_flag("--bypass-centrality", vbypass, "run even if the datum is not central");
  ver->add_option("--max-cosets", vmax, "sample this many cosets");
  ver->add_option("--workers", vworkers, "worker threads (0 = all cores)");
  ver->add_option("--out", vout, "report JSON path");
  ver->add_option("--csv", vcsv, "per-coset CSV path");
  ver->callback([&] {
    VerifyConfig cfg = vo.config();
    cfg.variant = vmirabolic ? Variant::Mirabolic : Variant::Borel;
    cfg.mode = vfast ? NumericMode::Float : NumericMode::Exact;
    cfg.bypass_centrality = vbypass;
    cfg.max_cosets = vmax;
    cfg.workers = vworkers;
    auto rep = verify(cfg);
    if (!vout.empty()) write_text(vout, to_json(rep).dump(2) + "\n");
    if (!vcsv.empty()) write_text(vcsv, to_csv(rep));
    std::cout << rep.statement() << " (" << rep.datum_name << ", n=" << rep.config.n << ", q=" << rep.config.q
              << ", max_abs=" << rep.max_abs << ")\n";
    status = rep.exit_code();
  });

  // suite
  std::string sconfig, sout;
  auto* suite = app.add_subcommand("suite", "run a check suite from a JSON config");
  suite->add_option("--config", sconfig, "suite config JSON (default: every check at n=2, q=3)");
  suite->add_option("--out", sout, "directory for per-check JSON and summary.json");
  suite->callback([&] {
    auto rep = sconfig.empty() ? run_suite(default_suite_config(), sout) : run_suite_file(sconfig, sout);
    for (const auto& r : rep.results)
      std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " " << r.params.dump() << (r.gating ? "" : " [non-gating]")
                << "\n";
    status = rep.passed() ? 0 : 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return status;
}
