#pragma once

// Qubit - central spin - qubit model H = J*_A (S_A.S_C + lambda S_B.S_C), in
// units of |J*_A|. Sites are ordered A, C, B (global indices 0, 1, 2).

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "spinbus/measures.hpp"
#include "spinbus/model.hpp"
#include "spinbus/spectra.hpp"
#include "spinbus/state.hpp"

namespace spinbus {

inline constexpr int kSiteA = 0;
inline constexpr int kSiteC = 1;
inline constexpr int kSiteB = 2;

struct Multiplet {
  double energy = 0.0;
  int twice_spin = 1;  // 1 doublet, 3 quadruplet
  int multiplicity = 2;
};

struct ThreeSpinModel {
  double lambda = 1.0;
  int sign_a = 1;
  std::array<double, 8> spectrum{};
  std::vector<Multiplet> multiplets;  // ascending in energy
  RealState ground{3};                // lowest S_z = +1/2 state
  RealState ground_partner{3};        // S^- ground, normalized

  // "D-D-Q", "D-Q-D" or "Q-D-D".
  std::string ordering() const {
    std::string s;
    for (const auto& m : multiplets) {
      if (!s.empty()) s += '-';
      s += m.twice_spin == 3 ? 'Q' : 'D';
    }
    return s;
  }

  bool quadruplet_ground() const { return multiplets.front().twice_spin == 3; }
};

inline ThreeSpinModel three_spin_model(double lambda, int sign_a = 1) {
  if (!std::isfinite(lambda)) throw InvalidArgument("three-spin model: lambda must be finite");
  if (sign_a != 1 && sign_a != -1) throw InvalidArgument("three-spin model: sign_a must be +1 or -1");
  const std::array<Bond, 2> bonds{Bond{kSiteA, kSiteC, 1.0 * sign_a}, Bond{kSiteB, kSiteC, lambda * sign_a}};

  ThreeSpinModel m;
  m.lambda = lambda;
  m.sign_a = sign_a;
  std::vector<double> all;
  std::array<Eigenpairs, 4> sectors;
  for (int nd = 0; nd <= 3; ++nd) {
    sectors[static_cast<std::size_t>(nd)] = dense_spectrum(assemble(std::make_shared<const SectorBasis>(3, nd), bonds));
    for (Eigen::Index k = 0; k < sectors[static_cast<std::size_t>(nd)].values.size(); ++k)
      all.push_back(sectors[static_cast<std::size_t>(nd)].values[k]);
  }
  std::sort(all.begin(), all.end());
  std::copy(all.begin(), all.end(), m.spectrum.begin());

  // The fully polarized sector holds the quadruplet alone; the S_z = +1/2
  // sector holds it again plus both doublets.
  const double quad = sectors[0].values[0];
  std::vector<double> half(sectors[1].values.data(), sectors[1].values.data() + 3);
  const auto drop = std::min_element(half.begin(), half.end(),
                                     [&](double a, double b) { return std::abs(a - quad) < std::abs(b - quad); });
  half.erase(drop);
  m.multiplets = {{quad, 3, 4}, {half[0], 1, 2}, {half[1], 1, 2}};
  std::stable_sort(m.multiplets.begin(), m.multiplets.end(),
                   [](const Multiplet& a, const Multiplet& b) { return a.energy < b.energy; });

  auto basis = std::make_shared<const SectorBasis>(3, 1);
  const Eigen::VectorXd g = sectors[1].vectors.col(0);
  m.ground = RealState(basis, std::vector<double>(g.data(), g.data() + 3));
  m.ground_partner = apply_total_lowering(m.ground).normalized();
  return m;
}

struct PairConcurrences {
  double ab = 0.0;
  double ac = 0.0;
  double bc = 0.0;
};

enum class DoubletState { pure, mixture };

// Pairwise concurrences in the ground doublet: the S_z = +1/2 member, or the
// equal mixture of both members.
inline PairConcurrences pair_concurrences(const ThreeSpinModel& m, DoubletState which = DoubletState::pure) {
  if (which == DoubletState::pure)
    return {concurrence(reduced_density(m.ground, kSiteA, kSiteB)),
            concurrence(reduced_density(m.ground, kSiteA, kSiteC)),
            concurrence(reduced_density(m.ground, kSiteB, kSiteC))};
  const std::array<RealState, 2> mix{m.ground, m.ground_partner};
  const std::span<const RealState> s(mix);
  return {concurrence(reduced_density(s, kSiteA, kSiteB)), concurrence(reduced_density(s, kSiteA, kSiteC)),
          concurrence(reduced_density(s, kSiteB, kSiteC))};
}

}  // namespace spinbus
