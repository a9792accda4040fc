#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "spinbus/model.hpp"
#include "spinbus/spectra.hpp"

using namespace spinbus;

namespace {

// Restriction of a full-space oracle matrix to one engine sector.
Eigen::MatrixXd restrict(const Eigen::MatrixXd& full, const SectorBasis& b) {
  const auto n = static_cast<Eigen::Index>(b.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) out(r, c) = full(b[static_cast<std::size_t>(r)].bits, b[static_cast<std::size_t>(c)].bits);
  return out;
}

}  // namespace

TEST(Model, ChainMatchesOracleInEverySector) {
  for (bool ring : {false, true})
    for (int n : {2, 3, 4, 5, 7}) {
      const SystemSpec spec = SystemSpec::chain(n, ring ? Boundary::ring : Boundary::open);
      const Eigen::MatrixXd full = oracle::hamiltonian(n, oracle::chain(n, ring));
      for (int d = 0; d <= n; ++d) {
        const SparseOperator h = build_chain(spec, d);
        EXPECT_LT((h.to_dense() - restrict(full, h.sector())).cwiseAbs().maxCoeff(), 1e-14) << n << " " << d;
      }
    }
}

TEST(Model, FullSystemMatchesOracle) {
  const SystemSpec spec = SystemSpec::chain(5, Boundary::ring).attach("A", 2, 0.3).attach("B", 5, 0.7);
  const Eigen::MatrixXd full = oracle::hamiltonian(7, oracle::system(5, true, {{2, 0.3}, {5, 0.7}}));
  for (int d = 0; d <= 7; ++d) {
    const SparseOperator h = build_full(spec, d);
    EXPECT_LT((h.to_dense() - restrict(full, h.sector())).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Model, NonuniformBonds) {
  SystemSpec spec = SystemSpec::chain(4);
  spec.j_chain = {1.0, 0.5, 2.0};
  auto bonds = oracle::chain(4, false);
  bonds[1].j = 0.5;
  bonds[2].j = 2.0;
  const Eigen::MatrixXd full = oracle::hamiltonian(4, bonds);
  const SparseOperator h = build_chain(spec, 2);
  EXPECT_LT((h.to_dense() - restrict(full, h.sector())).cwiseAbs().maxCoeff(), 1e-14);
  spec.j_chain = {1.0};
  EXPECT_THROW(spec.validate(), InvalidArgument);
}

TEST(Model, RingOfTwoDoublesTheBond) {
  const auto open = build_chain(SystemSpec::chain(2), 1).to_dense();
  const auto ring = build_chain(SystemSpec::chain(2, Boundary::ring), 1).to_dense();
  EXPECT_LT((ring - 2.0 * open).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Model, TwoSiteSectorValues) {
  const auto h = build_chain(SystemSpec::chain(2), 1).to_dense();
  EXPECT_DOUBLE_EQ(h(0, 0), -0.25);
  EXPECT_DOUBLE_EQ(h(0, 1), 0.5);
  const auto hu = build_chain(SystemSpec::chain(2), 0).to_dense();
  EXPECT_DOUBLE_EQ(hu(0, 0), 0.25);
}

TEST(Model, TotalSpinSquaredMatchesOracle) {
  const Eigen::MatrixXd full = oracle::total_s2(5);
  for (int d = 0; d <= 5; ++d) {
    const auto s2 = build_total_spin_squared(std::make_shared<const SectorBasis>(5, d));
    EXPECT_LT((s2.to_dense() - restrict(full, s2.sector())).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(Model, ThreadedProductEqualsSerial) {
  const SparseOperator h = build_chain(SystemSpec::chain(16), 8);
  ASSERT_GE(h.dim(), 4096u);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  std::vector<double> x(h.dim());
  for (auto& v : x) v = nd(rng);
  const auto y1 = h.matvec(x, 1);
  const auto y4 = h.matvec(x, 4);
  EXPECT_EQ(y1, y4);
}

TEST(Model, ValidationErrors) {
  EXPECT_THROW(SystemSpec::chain(0).validate(), InvalidArgument);
  EXPECT_THROW(SystemSpec::chain(4).attach("A", 5, 0.01).validate(), InvalidArgument);
  EXPECT_THROW(SystemSpec::chain(4).attach("A", 0, 0.01).validate(), InvalidArgument);
  EXPECT_THROW(SystemSpec::chain(4).attach("A", 1, -0.01).validate(), InvalidArgument);
  EXPECT_THROW(SystemSpec::chain(4).attach("A", 1, 0.01).attach("A", 2, 0.01).validate(), InvalidArgument);
  EXPECT_NO_THROW(SystemSpec::chain(4).attach("A", 1, 0.0).validate());
}

TEST(Model, ChainOnlyDropsQubits) {
  const SystemSpec s = SystemSpec::chain(4).attach("A", 1, 0.1);
  EXPECT_EQ(s.chain_only().n_sites(), 4);
  EXPECT_EQ(build_system(s.chain_only(), 2).dim(), 6u);
  EXPECT_EQ(build_system(s, 2).dim(), 10u);
}
