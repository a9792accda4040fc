#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "spinbus/measures.hpp"
#include "spinbus/spectra.hpp"

using namespace spinbus;
using C = std::complex<double>;

namespace {

// Random normalized complex state spread over every sector of m sites.
ComplexState random_state(int m, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  ComplexState s(m);
  for (int d = 0; d <= m; ++d) {
    auto b = std::make_shared<const SectorBasis>(m, d);
    std::vector<C> amps(b->size());
    for (auto& a : amps) a = C(nd(rng), nd(rng));
    s.accumulate(b, amps);
  }
  return s.normalized();
}

}  // namespace

TEST(Measures, ReducedDensityMatchesPartialTrace) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 5; ++t) {
    const ComplexState s = random_state(6, rng);
    const auto v = oracle::embed(s);
    for (int a = 0; a < 6; ++a)
      for (int b = a + 1; b < 6; ++b) {
        const TwoSiteDensity d = reduced_density(s, b, a);
        EXPECT_LT((d.rho - oracle::partial_trace(v, a, b)).cwiseAbs().maxCoeff(), 1e-13);
        EXPECT_NO_THROW(d.validate());
      }
  }
}

TEST(Measures, ConcurrenceMatchesWootters) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    const ComplexState s = random_state(4, rng);
    const TwoSiteDensity d = reduced_density(s, 0, 1);
    EXPECT_NEAR(concurrence(d), oracle::concurrence(d.rho), 1e-9);
  }
  // pure two-qubit states: C = 2|ad - bc|
  for (int t = 0; t < 20; ++t) {
    const ComplexState s = random_state(2, rng);
    const C uu = s.amplitude(0b00), ud = s.amplitude(0b10), du = s.amplitude(0b01), dd = s.amplitude(0b11);
    EXPECT_NEAR(concurrence(reduced_density(s, 0, 1)), 2.0 * std::abs(uu * dd - ud * du), 1e-10);
  }
}

TEST(Measures, BellAndProductStates) {
  RealState singlet = ket("01");
  singlet.accumulate(ket("10"), -1.0);
  singlet = singlet.normalized();
  EXPECT_NEAR(concurrence(reduced_density(singlet, 0, 1)), 1.0, 1e-12);
  EXPECT_NEAR(trace_distance(reduced_density(singlet, 0, 1).rho, singlet_projector()), 0.0, 1e-12);
  EXPECT_NEAR(spin_correlation(singlet, 0, 1, Axis::x), -1.0, 1e-12);
  EXPECT_NEAR(spin_correlation(singlet, 0, 1, Axis::y), -1.0, 1e-12);
  EXPECT_NEAR(spin_correlation(singlet, 0, 1, Axis::z), -1.0, 1e-12);
  EXPECT_NEAR(concurrence(reduced_density(ket("0110"), 1, 2)), 0.0, 1e-12);
  EXPECT_NEAR(total_spin_squared(singlet), 0.0, 1e-12);
  EXPECT_NEAR(total_spin_squared(ket("000")), 3.75, 1e-12);
}

TEST(Measures, LocalMomentAndCorrelationMatchOracle) {
  const SystemSpec spec = SystemSpec::chain(7);
  const GroundManifold g = ground_manifold(spec);
  const RealState psi = g.ground();
  const auto v = oracle::embed(psi);
  for (int i = 0; i < 7; ++i) {
    EXPECT_NEAR(local_moment(psi, i), oracle::expectation(v, oracle::on_site(oracle::sz(), i, 7)), 1e-12);
    for (int j = i + 1; j < 7; ++j)
      for (auto [ax, p] : {std::pair{Axis::x, oracle::sx()}, {Axis::y, oracle::sy()}, {Axis::z, oracle::sz()}})
        EXPECT_NEAR(spin_correlation(psi, i, j, ax),
                    oracle::expectation(v, oracle::on_site(p, i, 7) * oracle::on_site(p, j, 7)), 1e-12);
  }
}

TEST(Measures, PauliActionMatchesOracle) {
  std::mt19937_64 rng(13);
  const ComplexState s = random_state(5, rng);
  const auto v = oracle::embed(s);
  for (int site = 0; site < 5; ++site)
    for (auto [ax, p] : {std::pair{Axis::x, oracle::sx()}, {Axis::y, oracle::sy()}, {Axis::z, oracle::sz()}}) {
      const auto w = oracle::embed(apply_pauli(s, site, ax));
      EXPECT_LT((w - oracle::on_site(p, site, 5) * v).cwiseAbs().maxCoeff(), 1e-14);
    }
}

TEST(Measures, ConcurrenceMapSymmetric) {
  const GroundManifold g = ground_manifold(SystemSpec::chain(6));
  const ConcurrenceMap m = concurrence_map(g.ground(), all_sites(6));
  EXPECT_LT((m.values - m.values.transpose()).cwiseAbs().maxCoeff(), 0.0 + 1e-300);
  EXPECT_EQ(m.values.diagonal().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_GT(m.at(0, 1), 0.5);  // end pair of an open even chain is strongly bound
}

TEST(Measures, MixtureIsAverage) {
  const GroundManifold g = ground_manifold(SystemSpec::chain(5));
  std::vector<RealState> both{g.ground(0), g.ground(1)};
  const TwoSiteDensity mix = reduced_density(std::span<const RealState>(both), 0, 2);
  const Matrix4c avg = 0.5 * (reduced_density(both[0], 0, 2).rho + reduced_density(both[1], 0, 2).rho);
  EXPECT_LT((mix.rho - avg).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Measures, Errors) {
  const RealState s = ket("010");
  EXPECT_THROW(reduced_density(s, 1, 1), InvalidArgument);
  EXPECT_THROW(reduced_density(s, 0, 3), InvalidArgument);
  EXPECT_THROW(local_moment(s, -1), InvalidArgument);
  RealState bad = ket("010");
  bad.scale(2.0);
  EXPECT_THROW(local_moment(bad, 0), InvalidArgument);
  TwoSiteDensity d;
  d.rho(0, 0) = 1.5;
  d.rho(1, 1) = -0.5;
  EXPECT_THROW(d.validate(), InvalidArgument);
  EXPECT_THROW(concurrence(d), InvalidArgument);
}
