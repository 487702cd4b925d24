#include <gtest/gtest.h>

#include "oracles.hpp"
#include "revolve/cost.hpp"

using namespace revolve;

TEST(Beta, MatchesPascalTriangle) {
  const auto c = oracle::pascal(60);
  for (int s = 0; s <= 30; ++s) {
    for (int t = 0; t <= 30; ++t) {
      EXPECT_EQ(beta(s, t), static_cast<step_t>(c[s + t][t])) << s << "," << t;
    }
  }
}

TEST(Beta, SmallValues) {
  EXPECT_EQ(beta(3, 2), 10);
  EXPECT_EQ(beta(0, 7), 1);
  EXPECT_EQ(beta(7, 0), 1);
}

TEST(Beta, OverflowAndDomain) {
  EXPECT_THROW(beta(60, 60), OverflowError);
  EXPECT_THROW(beta(-1, 2), ConfigError);
  EXPECT_EQ(beta(33, 33), static_cast<step_t>(oracle::pascal(66)[66][33]));
}

TEST(RepetitionNumber, SmallestCovering) {
  const auto c = oracle::pascal(220);
  for (int l = 1; l <= 200; ++l) {
    for (int s = 1; s <= 10; ++s) {
      int r = 0;
      while (c[s + r][r] < static_cast<std::uint64_t>(l)) {
        ++r;
      }
      EXPECT_EQ(repetition_number(l, s), r);
    }
  }
}

TEST(MinAdvances, Examples) {
  EXPECT_EQ(min_advances(10, 3), 15);
  EXPECT_EQ(min_advances(1, 1), 0);
  EXPECT_EQ(min_advances(3, 3), 2);
  EXPECT_EQ(min_advances(10, 9), 9);
  EXPECT_EQ(min_advances(10, 50), 9);
  // one slot: restart from the initial state before every adjoint step
  for (step_t l = 1; l <= 60; ++l) {
    EXPECT_EQ(min_advances(l, 1), l * (l - 1) / 2);
  }
}

TEST(MinAdvances, MatchesRecurrence) {
  const oracle::CostTable dp(150, 12);
  for (int l = 1; l <= 150; ++l) {
    for (int s = 1; s <= 12; ++s) {
      ASSERT_EQ(min_advances(l, s), dp(l, s)) << l << "," << s;
    }
  }
}

TEST(MinAdvances, MatchesIterativeCount) {
  for (step_t l = 1; l <= 3000; l += 7) {
    for (step_t s = 1; s <= 40; ++s) {
      ASSERT_EQ(min_advances(l, s), oracle::numforw(l, s)) << l << "," << s;
    }
  }
}

TEST(MinAdvances, NonincreasingInSnaps) {
  for (step_t l = 1; l <= 300; ++l) {
    for (step_t s = 1; s < 30; ++s) {
      EXPECT_GE(min_advances(l, s), min_advances(l, s + 1));
    }
  }
}

TEST(MinAdvances, RejectsBadInput) {
  EXPECT_THROW(min_advances(0, 1), ConfigError);
  EXPECT_THROW(min_advances(5, 0), ConfigError);
}

TEST(OptimalDp, AgreesWithClosedForm) {
  for (step_t l = 1; l <= 120; ++l) {
    for (step_t s = 1; s <= 10; ++s) {
      ASSERT_EQ(optimal_dp(l, s), min_advances(l, s));
    }
  }
  EXPECT_EQ(optimal_dp(1, 4), 0);
  EXPECT_EQ(optimal_dp(500, 16), min_advances(500, 16));
  // slot counts beyond steps - 1 are clamped before the size check
  EXPECT_EQ(optimal_dp(10, 1000), 9);
  EXPECT_EQ(optimal_dp(17, 1000), 16);
}

TEST(OptimalDp, RefusesLargeInstances) {
  EXPECT_THROW(optimal_dp(kDpMaxSteps + 1, 3), ConfigError);
  EXPECT_THROW(optimal_dp(400, kDpMaxSnaps + 1), ConfigError);
}

TEST(OptimalSplit, IsLeftmostMinimiser) {
  const oracle::CostTable dp(150, 12);
  for (int l = 2; l <= 150; ++l) {
    for (int s = 1; s <= 12; ++s) {
      ASSERT_EQ(optimal_split(l, s), dp.leftmost_split(l, s)) << l << "," << s;
    }
  }
  EXPECT_THROW(optimal_split(1, 3), ConfigError);
}

TEST(Adjust, Examples) {
  EXPECT_EQ(adjust(1), 1);
  EXPECT_EQ(adjust(2), 1);
  EXPECT_EQ(adjust(500), oracle::brute_adjust(500));
  EXPECT_THROW(adjust(0), ConfigError);
}

TEST(Adjust, MatchesBruteScan) {
  for (step_t l = 1; l <= 2000; ++l) {
    ASSERT_EQ(adjust(l), oracle::brute_adjust(l)) << l;
  }
}
