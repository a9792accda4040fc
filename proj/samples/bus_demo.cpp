// Two qubits on a Heisenberg chain: effective couplings for an odd and an even
// chain, and the entanglement they end up with.

#include <cstdio>

#include "spinbus/spinbus.hpp"

using namespace spinbus;

int main() {
  const double j = 0.01;

  // Odd chain: the chain behaves as one extra spin-1/2.
  const CentralSpin cs(SystemSpec::chain(9));
  std::printf("N=9 chain, doublet gap %.6f\n", cs.gap());
  for (const auto& s : sign_map(cs)) std::printf("  site %d  <sigma_z> = %+.6f  (%c)\n", s.site, s.moment, s.label);
  const auto ja = cs.coupling(1, j), jb = cs.coupling(9, j);
  std::printf("  J*_A = %.6e, J*_B = %.6e, lambda = %.4f\n", ja.value, jb.value, jb.value / ja.value);

  const ThreeSpinModel m = three_spin_model(jb.value / ja.value);
  std::printf("  three-spin model %s, C_AB = %.6f\n", m.ordering().c_str(), pair_concurrences(m).ab);

  // Even chain: qubits couple to each other through virtual excitations.
  const SystemSpec even = SystemSpec::chain(8).attach("A", 1, j).attach("B", 8, j);
  const EvenChain ec(even);
  const auto ex = ec.rkky_exact(1, 8, j, j);
  const auto ap = ec.rkky_approx(1, 8, j, j);
  const auto gp = coupling_from_gap(even);
  std::printf("N=8 chain, gap %.6f\n", ec.gap());
  std::printf("  RKKY exact %.6e  approx %.6e  from splitting %.6e (%s)\n", ex.value, ap.value, gp.value,
              to_string(gp.character));

  const GroundManifold g = ground_manifold(even);
  std::printf("  C_AB in the full ground state = %.6f\n", concurrence(reduced_density(g.ground(), 8, 9)));
  return 0;
}
