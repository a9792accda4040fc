#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "spinbus/three_spin.hpp"

using namespace spinbus;

namespace {

// Oracle: sites A=0, C=1, B=2.
Eigen::MatrixXd oracle_h(double lambda, int sign_a) {
  return oracle::hamiltonian(3, {{0, 1, 1.0 * sign_a}, {2, 1, lambda * sign_a}});
}

}  // namespace

TEST(ThreeSpin, SpectrumMatchesOracle) {
  for (double l : {-1000.0, -2.0, -1.0, -0.5, 0.0, 0.3, 1.0, 2.0})
    for (int s : {1, -1}) {
      const ThreeSpinModel m = three_spin_model(l, s);
      const auto ref = oracle::diagonalize(oracle_h(l, s)).values;
      for (int k = 0; k < 8; ++k) EXPECT_NEAR(m.spectrum[static_cast<std::size_t>(k)], ref[k], 1e-10 * std::max(1.0, std::abs(l)));
    }
}

TEST(ThreeSpin, MultipletEnergies) {
  // Q = (1 + lambda)/4, D = -(1 + lambda)/4 -+ sqrt(1 - lambda + lambda^2)/2
  for (double l : {-2.0, -0.5, 0.5, 1.0, 2.0}) {
    const ThreeSpinModel m = three_spin_model(l);
    double q = 0.0;
    std::vector<double> d;
    for (const auto& mu : m.multiplets) {
      if (mu.twice_spin == 3)
        q = mu.energy;
      else
        d.push_back(mu.energy);
    }
    const double r = std::sqrt(1.0 - l + l * l) / 2.0;
    EXPECT_NEAR(q, (1.0 + l) / 4.0, 1e-12);
    ASSERT_EQ(d.size(), 2u);
    EXPECT_NEAR(d[0], -(1.0 + l) / 4.0 - r, 1e-12);
    EXPECT_NEAR(d[1], -(1.0 + l) / 4.0 + r, 1e-12);
  }
}

TEST(ThreeSpin, SymmetricPointDoublet) {
  const ThreeSpinModel m = three_spin_model(1.0);
  EXPECT_EQ(m.ordering(), "D-D-Q");
  RealState doublet = ket("001");
  doublet.accumulate(ket("010"), -2.0);
  doublet.accumulate(ket("100"));
  EXPECT_NEAR(std::abs(inner(m.ground, doublet.normalized())), 1.0, 1e-13);
  const PairConcurrences c = pair_concurrences(m);
  EXPECT_NEAR(c.ab, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(c.ac, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(c.bc, 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(oracle::concurrence(oracle::partial_trace(oracle::embed(m.ground), 0, 2)), 1.0 / 3.0, 1e-10);
}

TEST(ThreeSpin, Orderings) {
  for (double l : {0.5, 1.0, 2.0}) EXPECT_EQ(three_spin_model(l).ordering(), "D-D-Q");
  for (double l : {-0.5, -1.0, -2.0}) EXPECT_EQ(three_spin_model(l).ordering(), "D-Q-D");
  for (double l : {0.5, 1.0, 2.0}) EXPECT_TRUE(three_spin_model(l, -1).quadruplet_ground());
  EXPECT_FALSE(three_spin_model(1.0).quadruplet_ground());
}

TEST(ThreeSpin, LimitsOfLambda) {
  EXPECT_NEAR(pair_concurrences(three_spin_model(0.0)).ab, 0.0, 1e-12);
  EXPECT_NEAR(pair_concurrences(three_spin_model(-1.0)).ab, 1.0 / 3.0, 1e-10);
  EXPECT_NEAR(pair_concurrences(three_spin_model(-1e3)).ab, 2.0 / 3.0, 2e-3);
  EXPECT_LT(pair_concurrences(three_spin_model(1e3)).ab, 1e-2);
}

TEST(ThreeSpin, MixtureBoundedByPure) {
  // Both members share one concurrence, so convexity caps the mixture by it.
  for (double l : {-3.0, 0.5, 1.0, 4.0}) {
    const ThreeSpinModel m = three_spin_model(l);
    const double pure = pair_concurrences(m).ab;
    EXPECT_NEAR(concurrence(reduced_density(m.ground_partner, kSiteA, kSiteB)), pure, 1e-12);
    EXPECT_LE(pair_concurrences(m, DoubletState::mixture).ab, pure + 1e-12);
  }
}

TEST(ThreeSpin, SuperpositionIndependence) {
  const ThreeSpinModel m = three_spin_model(1.0);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 12; ++t) {
    ComplexState psi = m.ground.as<std::complex<double>>();
    psi.scale({nd(rng), nd(rng)});
    psi.accumulate(m.ground_partner.as<std::complex<double>>(), {nd(rng), nd(rng)});
    EXPECT_NEAR(concurrence(reduced_density(psi.normalized(), kSiteA, kSiteB)), 1.0 / 3.0, 1e-10);
  }
}

TEST(ThreeSpin, Errors) {
  EXPECT_THROW(three_spin_model(std::nan("")), InvalidArgument);
  EXPECT_THROW(three_spin_model(1.0, 2), InvalidArgument);
}
