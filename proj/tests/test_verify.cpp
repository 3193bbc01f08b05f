#include "crossnorm/errors.hpp"
#include "crossnorm/random.hpp"
#include "crossnorm/verify.hpp"

#include <gtest/gtest.h>

using namespace crossnorm;

TEST(Verify, KnowsAllPropertyIds) {
  EXPECT_EQ(property_ids().size(), 10u);
  EXPECT_THROW(run_suite({"E5"}, 1, 0), InvalidInputError);
  EXPECT_THROW(run_suite({"E1"}, 0, 0), InvalidInputError);
}

TEST(Verify, LocalUnitarySeed42) {
  const auto r = run_suite({"E2"}, 100, 42);
  ASSERT_EQ(r.size(), 1u);
  EXPECT_EQ(r[0].failures, 0);
  EXPECT_GE(r[0].worst_margin, 0.0);
}

TEST(Verify, MixturesAndLudersPass) {
  for (const auto& r : run_suite({"E4", "Prop8"}, 20, 3)) EXPECT_TRUE(r.passed()) << r.id;
}

TEST(Verify, RepeatableBitForBit) {
  const std::vector<std::string> ids{"E0", "E3-pushforward", "Cor5-consistency"};
  const auto a = run_suite(ids, 10, 5), b = run_suite(ids, 10, 5);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(report_to_json(a[k]).dump(), report_to_json(b[k]).dump());
}

TEST(Verify, SingleTrialReproducesFromSubSeed) {
  const auto r = run_suite({"Prop4-tightness"}, 5, 8);
  const std::uint64_t stream = derive_seed(8, 7);
  double worst = 1e300;
  for (int t = 0; t < 5; ++t) worst = std::min(worst, run_trial("Prop4-tightness", derive_seed(stream, t), {}));
  EXPECT_EQ(worst, r[0].worst_margin);
}

TEST(Verify, ReportJsonFields) {
  const auto j = report_to_json(run_suite({"Prop17-gap"}, 3, 0)[0]);
  for (const char* key : {"property", "trials", "failures", "worst_margin", "seed", "failed_seeds", "passed"})
    EXPECT_TRUE(j.contains(key)) << key;
}
