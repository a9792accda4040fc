#include <gtest/gtest.h>

#include "spinbus/acceptance.hpp"

using namespace spinbus;
using namespace spinbus::acceptance;

TEST(Acceptance, RkkySignsPassOnRealProfile) {
  const RkkyProfile p = rkky_profile(SystemSpec::chain(10), 1, 0.01);
  EXPECT_EQ(rkky_signs(p).status, Status::pass);
}

TEST(Acceptance, RkkySignsCatchSabotagedApprox) {
  RkkyProfile p = rkky_profile(SystemSpec::chain(10), 1, 0.01);
  for (auto& a : p.approx) a = -a;
  const CriterionResult r = rkky_signs(p);
  EXPECT_EQ(r.status, Status::fail);
  EXPECT_NE(r.measured.find("9 approx disagreements"), std::string::npos) << r.measured;
}

TEST(Acceptance, RkkySignsCatchSabotagedExact) {
  RkkyProfile p = rkky_profile(SystemSpec::chain(10), 1, 0.01);
  for (auto& a : p.exact) a = -a;
  EXPECT_EQ(rkky_signs(p).status, Status::fail);
}

TEST(Acceptance, MomentAlternation) {
  EXPECT_EQ(moment_alternation({0.6, -0.2, 0.6}).status, Status::pass);
  EXPECT_EQ(moment_alternation({0.6, 0.2, 0.2}).status, Status::fail);
  EXPECT_EQ(moment_alternation({0.6, -0.2, 0.5}).status, Status::fail);
  EXPECT_EQ(moment_alternation({}).status, Status::skipped);
}

TEST(Acceptance, ParityDetectsWrongDegeneracy) {
  ParityRow good = parity_row(5, Boundary::open);
  EXPECT_EQ(parity({good}).status, Status::pass);
  ParityRow bad = good;
  bad.degeneracy = 1;
  EXPECT_EQ(parity({good, bad}).status, Status::fail);
}

TEST(Acceptance, CrossMethodTolerance) {
  EXPECT_EQ(cross_method({{4, 1.0, 1.05}}).status, Status::pass);
  EXPECT_EQ(cross_method({{4, 1.0, 1.2}}).status, Status::fail);
  EXPECT_EQ(cross_method({{4, 1.0, -1.0}}).status, Status::fail);
}

TEST(Acceptance, ScalingBounds) {
  ScalingRow r;
  r.n_chain = 10;
  r.gap = r.gap_bound();
  r.jstar = r.jstar_estimate();
  EXPECT_EQ(gap_scaling({r}).status, Status::pass);
  r.jstar = 0.05 * r.jstar_estimate();
  EXPECT_EQ(gap_scaling({r}).status, Status::fail);
}

TEST(Acceptance, CapSkipsLargeChecks) {
  AcceptanceOptions o;
  o.max_n = 6;
  const auto results = run_acceptance(o);
  ASSERT_EQ(results.size(), 13u);
  for (std::size_t k = 0; k < results.size(); ++k) EXPECT_EQ(results[k].id, static_cast<int>(k + 1));
  for (int id : {3, 6, 7, 8, 10}) EXPECT_EQ(results[static_cast<std::size_t>(id - 1)].status, Status::skipped) << id;
  for (int id : {1, 2, 4, 5, 13}) EXPECT_EQ(results[static_cast<std::size_t>(id - 1)].status, Status::pass) << id;
}

TEST(Acceptance, LineFormat) {
  CriterionResult r;
  r.id = 3;
  r.title = "x";
  r.measured = "1";
  r.expected = "1";
  r.tolerance = "0";
  EXPECT_EQ(format_line(r), "[PASS] 3. x | measured: 1 | expected: 1 | tol: 0");
}
