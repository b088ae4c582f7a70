// Walks the pipeline at GL_2(F_3): characters, Bessel data, Phi, and the coset sweep.

#include <iostream>

#include "tracelab/tracelab.hpp"

using namespace tracelab;

int main() {
  auto tower = make_tower(3, 1, 2);
  std::cout << "F_3 generator " << tower->level(1).generator() << ", F_9 generator " << tower->level(2).generator()
            << "\n";

  auto g = gauss_sum<CycloValue>(*tower, MultChar{1, 1}, AddChar{1, 1});
  std::cout << "g(chi_1, psi) = " << g.str() << ", |g|^2 = " << (g * g.conj()).str() << "\n";

  auto rho = WeightData::standard(2);
  auto datum = gamma_datum<CycloValue>(tower, rho);
  auto central = centrality_check(datum, CentralityMode::WChiPrime);
  std::cout << datum.name << ": " << central.cells.size() << " centrality cells, " << central.failures << " failures\n";

  auto phi = build_phi(datum);
  for (const auto& rep : phi.space().class_representatives())
    std::cout << "  Phi on class " << rep.info.key << " (size " << rep.size << ") = " << phi.at(rep).str() << "\n";

  VerifyConfig cfg;
  cfg.n = 2;
  cfg.q = 3;
  auto report = verify(cfg);
  std::cout << report.statement() << "\n";
  return report.exit_code();
}
