#include <gtest/gtest.h>

#include <bit>
#include <random>

#include "spinbus/basis.hpp"
#include "spinbus/model.hpp"

using namespace spinbus;

TEST(Basis, SizesAreBinomial) {
  for (int n = 0; n <= 14; ++n)
    for (int d = 0; d <= n; ++d) EXPECT_EQ(SectorBasis(n, d).size(), binomial(n, d)) << n << "," << d;
  EXPECT_EQ(binomial(24, 12), 2704156u);
}

TEST(Basis, WordsAreSortedWithFixedPopcount) {
  const SectorBasis b(10, 4);
  for (std::size_t k = 0; k < b.size(); ++k) {
    EXPECT_EQ(b[k].popcount(), 4);
    EXPECT_LT(b[k].bits, 1u << 10);
    if (k) EXPECT_LT(b[k - 1].bits, b[k].bits);
  }
}

TEST(Basis, RankRoundTripEverySector) {
  for (int n = 1; n <= 12; ++n)
    for (int d = 0; d <= n; ++d) {
      const SectorBasis b(n, d);
      for (std::size_t k = 0; k < b.size(); ++k) ASSERT_EQ(rank_of(b, b[k]), k);
    }
}

TEST(Basis, SzAndConvention) {
  const SectorBasis b(3, 1);
  EXPECT_DOUBLE_EQ(b.sz(), 0.5);
  EXPECT_TRUE(b[0].down(0));   // word 0b001: site 0 down
  EXPECT_FALSE(b[0].down(1));
  EXPECT_EQ(SectorBasis(4, 0)[0].bits, 0u);
}

TEST(Basis, RankRejectsForeignStates) {
  const SectorBasis b(6, 2);
  EXPECT_THROW(rank_of(b, BasisState{0b111}), InvalidArgument);
  EXPECT_THROW(rank_of(b, BasisState{0b1000001}), InvalidArgument);
}

TEST(Basis, RangeErrors) {
  EXPECT_THROW(SectorBasis(25, 1), InvalidArgument);
  EXPECT_THROW(SectorBasis(4, 5), InvalidArgument);
  EXPECT_THROW(SectorBasis(4, -1), InvalidArgument);
}

TEST(Basis, SiteCapIsCapacityError) {
  EXPECT_THROW(SystemSpec::chain(23).attach("A", 1, 0.01).attach("B", 2, 0.01).validate(), CapacityError);
  EXPECT_NO_THROW(SystemSpec::chain(22).attach("A", 1, 0.01).attach("B", 2, 0.01).validate());
}

TEST(Basis, RandomWordsFindThemselves) {
  std::mt19937 rng(7);
  const SectorBasis b(20, 10);
  std::uniform_int_distribution<std::size_t> pick(0, b.size() - 1);
  for (int t = 0; t < 1000; ++t) {
    const std::size_t k = pick(rng);
    ASSERT_EQ(*b.find(b[k].bits), k);
  }
  EXPECT_FALSE(b.find(0b1).has_value());
}
