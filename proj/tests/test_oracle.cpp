#include <gtest/gtest.h>

#include <map>
#include <random>

#include <fmt/format.h>

#include "corpus.hpp"
#include "fixtures.hpp"
#include "pcb/engine.hpp"
#include "pcb/oracle.hpp"

using namespace pcb;

namespace {

CanonicalQuery canon(const Dataset& d, const char* text) { return canonicalize(parse_query(text, d.space())); }

}  // namespace

TEST(ResponseTypes, Enumeration) {
  const auto types = enumerate_response_types(ProblemSpace(2, 3));
  ASSERT_EQ(types.size(), 9u);
  EXPECT_EQ(types[0].assignment, (std::vector<int>{0, 0}));
  EXPECT_EQ(types[1].assignment, (std::vector<int>{0, 1}));
  EXPECT_EQ(types[3].assignment, (std::vector<int>{1, 0}));
  EXPECT_EQ(types[8].assignment, (std::vector<int>{2, 2}));
  EXPECT_EQ(enumerate_response_types(ProblemSpace(3, 3)).size(), 27u);
}

TEST(Oracle, TreatmentExample) {
  const Dataset d = pcb::testing::treatment_data();
  const ResponseTypeOracle oracle(d);
  EXPECT_TRUE(oracle.exact());
  EXPECT_EQ(oracle.variables(), 81u);
  const Interval tight = oracle.bounds(canon(d, "P(y3_x1, y1_x2, y2_x3)"));
  EXPECT_TRUE(Interval(0.0, 89.0 / 900).contains(tight, 1e-12));
  // Frozen from the exact solve: 57/900 and 89/900.
  EXPECT_NEAR(tight.lo(), 57.0 / 900, 1e-15);
  EXPECT_NEAR(tight.hi(), 89.0 / 900, 1e-15);
}

TEST(Oracle, ExactObservational) {
  const Dataset d = pcb::testing::treatment_data();
  EXPECT_EQ(tight_bounds(d, canon(d, "P(x1, y3)")), Interval(7.0 / 900, 7.0 / 900));
  EXPECT_EQ(tight_bounds(d, canon(d, "P(y3_x1, x1)")), Interval(7.0 / 900, 7.0 / 900));
  EXPECT_EQ(tight_bounds(d, canon(d, "P(y3_x1, y2_x1)")), Interval(0.0, 0.0));
}

TEST(Oracle, PerfectCause) {
  const Dataset d = dataset_from_counts(CountTable::from_rows({{5, 0}, {0, 5}}),
                                        CountTable::from_rows({{3, 0}, {0, 2}}), ProblemSpace(2, 2));
  EXPECT_EQ(tight_bounds(d, canonicalize(causation_query(CausationKind::PNS))), Interval(1.0, 1.0));
}

TEST(Oracle, ExperimentalPointsReproduced) {
  for (const Dataset& d : {pcb::testing::treatment_data(), pcb::testing::institute_data(), pcb::testing::vaccine_data()}) {
    const ResponseTypeOracle oracle(d);
    for (int j = 0; j < d.treatments(); ++j) {
      for (int i = 0; i < d.outcomes(); ++i) {
        const Interval iv = oracle.bounds(canonicalize(make_joint({{j, i}})));
        EXPECT_DOUBLE_EQ(iv.lo(), d.exp(j, i));
        EXPECT_DOUBLE_EQ(iv.hi(), d.exp(j, i));
      }
    }
  }
}

TEST(Oracle, WorkedExamplesFeasible) {
  EXPECT_TRUE(feasible(pcb::testing::treatment_data()));
  EXPECT_TRUE(feasible(pcb::testing::institute_data()));
  EXPECT_TRUE(feasible(pcb::testing::vaccine_data()));
}

TEST(Oracle, InconsistentDataInfeasible) {
  const Dataset bad = dataset_from_probabilities(ProbabilityTable::from_rows({{0.5, 0.5}, {0.5, 0.5}}),
                                                 ProbabilityTable::from_rows({{0.6, 0.0}, {0.0, 0.4}}),
                                                 ProblemSpace(2, 2));
  EXPECT_FALSE(bad.validation().ok());
  EXPECT_FALSE(feasible(bad));
  try {
    tight_bounds(bad, canonicalize(make_joint({{0, 0}})));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Infeasible);
  }
}

TEST(Oracle, PairwiseValidityImpliesFeasibility) {
  // Random probability datasets (not built from response types): whenever the
  // pairwise relation holds the joint LP is solvable, so no witness of the
  // reverse gap exists in this family.
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<int> cell(0, 12);
  int valid = 0;
  int invalid = 0;
  for (int trial = 0; trial < 3000 && valid < 200; ++trial) {
    const int m = 2 + trial % 2;
    const int n = 2 + (trial / 2) % 2;
    CountTable exp(m, n), obs(m, n);
    for (int j = 0; j < m; ++j) {
      int row = 0;
      for (int i = 0; i < n; ++i) row += exp(j, i) = cell(rng);
      if (row == 0) exp(j, 0) = 1;
      for (int i = 0; i < n; ++i) obs(j, i) = cell(rng);
    }
    obs(0, 0) += 1;
    const Dataset d = dataset_from_counts(exp, obs, ProblemSpace(m, n));
    if (d.validation().ok()) {
      ++valid;
      EXPECT_TRUE(feasible(d));
    } else {
      ++invalid;
    }
  }
  EXPECT_GT(valid, 20);
  EXPECT_GT(invalid, 0);
}

TEST(Oracle, RationalisedProbabilities) {
  const Dataset d = dataset_from_probabilities(ProbabilityTable::from_rows({{0.3, 0.7}, {0.6, 0.4}}),
                                               ProbabilityTable::from_rows({{0.2, 0.3}, {0.25, 0.25}}),
                                               ProblemSpace(2, 2));
  const RationalData r = rational_data(d);
  EXPECT_EQ(r.experimental[0][0], mpq_class(3, 10));
  EXPECT_EQ(r.joint[1][0], mpq_class(1, 4));
  EXPECT_TRUE(feasible(d));
}

TEST(Oracle, Budget) {
  OracleOptions options;
  options.maxVariables = 80;
  try {
    ResponseTypeOracle(pcb::testing::treatment_data(), options);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BudgetExceeded);
  }
  // 4 treatments x 3 outcomes = 324 variables: solved in floating point.
  std::mt19937_64 rng(43);
  const Dataset big = pcb::testing::random_dataset(rng, 4, 3);
  const ResponseTypeOracle oracle(big);
  EXPECT_FALSE(oracle.exact());
  const CanonicalQuery q = canonicalize(make_joint({{0, 1}, {2, 0}}, Evidence{3, 2}));
  EXPECT_TRUE(bound(big, q).interval.contains(oracle.bounds(q), 1e-9));
}

TEST(Oracle, ConditionalDividesByEvidence) {
  const Dataset d = pcb::testing::institute_data();
  const Interval joint = tight_bounds(d, canon(d, "P(y1_x3, x2, y2)"));
  const Interval cond = tight_bounds(d, canon(d, "P(y1_x3 | x2, y2)"));
  EXPECT_NEAR(cond.lo(), joint.lo() / (118.0 / 1200), 1e-12);
  EXPECT_NEAR(cond.hi(), std::min(1.0, joint.hi() / (118.0 / 1200)), 1e-12);
}

TEST(Oracle, LpDump) {
  const Dataset d = pcb::testing::vaccine_data();
  const ResponseTypeOracle oracle(d);
  const LinearProgram lp = oracle.program(canon(d, "P(y3_x1, y4_x2)"));
  EXPECT_EQ(lp.variables.size(), 32u);
  EXPECT_EQ(lp.constraints.size(), 2u * 2 * 4 + 1);
  EXPECT_EQ(lp.objective.size(), 2u);
  const std::string text = write_lp(lp);
  EXPECT_NE(text.find("variables 32"), std::string::npos);
  EXPECT_NE(text.find("exp(x2,y4): "), std::string::npos);
  EXPECT_NE(text.find("= 91/150"), std::string::npos);
  EXPECT_NE(text.find("total: "), std::string::npos);
}

TEST(Oracle, WorkedQueriesContained) {
  const Dataset t = pcb::testing::treatment_data();
  for (const char* q : {"P(y1_x2, y2_x3, x1)", "P(y3_x1, y1_x2, y1)", "P(y1_x1, y2)", "P(y2_x3, x1)"}) {
    const CanonicalQuery c = canon(t, q);
    EXPECT_TRUE(bound(t, c).interval.contains(tight_bounds(t, c), 1e-9)) << q;
  }
  std::mt19937_64 rng(47);
  for (int n = 0; n < 50; ++n) {
    const Dataset d = pcb::testing::random_dataset(rng, 2, 2);
    const ResponseTypeOracle oracle(d);
    for (int j = 0; j < 2; ++j) {
      for (int i = 0; i < 2; ++i) {
        // observed outcome differing from the term; other-treatment evidence is tight at m = 2
        const CanonicalQuery t2 = canonicalize(make_joint({{j, i}}, Evidence{std::nullopt, 1 - i}));
        EXPECT_TRUE(bound(d, t2).interval.contains(oracle.bounds(t2), 1e-9));
        const CanonicalQuery t3 = canonicalize(make_joint({{j, i}}, Evidence{1 - j, std::nullopt}));
        const Interval e3 = bound(d, t3).interval, o3 = oracle.bounds(t3);
        EXPECT_NEAR(e3.lo(), o3.lo(), 1e-9);
        EXPECT_NEAR(e3.hi(), o3.hi(), 1e-9);
      }
    }
  }
}

TEST(Oracle, SlackByTheoremMeasured) {
  // Measured, not asserted: average engine-minus-LP width per theorem.
  std::map<std::string, std::pair<double, int>> slack;
  for (const auto& entry : pcb::testing::corpus(100, 53)) {
    const ResponseTypeOracle oracle(entry.dataset);
    for (const Query& q : entry.queries) {
      const CanonicalQuery c = canonicalize(q);
      const BoundResult r = bound(entry.dataset, c);
      const Interval tight = oracle.bounds(c);
      auto& s = slack[to_string(r.trace->theorem)];
      s.first += r.interval.width() - tight.width();
      s.second += 1;
    }
  }
  for (const auto& [name, s] : slack) {
    std::printf("slack %-5s %4d queries, mean width excess %.6f\n", name.c_str(), s.second, s.first / s.second);
    EXPECT_GE(s.first / s.second, -1e-9);
  }
}
