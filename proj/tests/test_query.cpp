#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "corpus.hpp"
#include "pcb/query.hpp"

using namespace pcb;

namespace {

const ProblemSpace kSpace(3, 3);
const ProblemSpace kInstitute(4, 2);

CounterfactualTerm term(int x, int y) { return {x - 1, y - 1}; }  // 1-based helpers

}  // namespace

TEST(Parse, ThreeTerms) {
  const Query q = parse_query("P(y3_x1, y1_x2, y2_x3)", kSpace);
  ASSERT_EQ(q.terms.size(), 3u);
  EXPECT_EQ(q.terms[0], term(1, 3));
  EXPECT_EQ(q.terms[1], term(2, 1));
  EXPECT_EQ(q.terms[2], term(3, 2));
  EXPECT_TRUE(q.evidence.empty());
  EXPECT_FALSE(q.conditional);
}

TEST(Parse, Conditional) {
  const Query q = parse_query("P(y1_x3 | x2, y2)", kInstitute);
  ASSERT_EQ(q.terms.size(), 1u);
  EXPECT_EQ(q.terms[0], term(3, 1));
  EXPECT_EQ(q.evidence.treatment, 1);
  EXPECT_EQ(q.evidence.outcome, 1);
  EXPECT_TRUE(q.conditional);
}

TEST(Parse, SingleTermAndWhitespace) {
  const Query q = parse_query("  P ( y1 _ x1 )  ", kSpace);
  ASSERT_EQ(q.terms.size(), 1u);
  EXPECT_EQ(q.terms[0], term(1, 1));
}

TEST(Parse, JointEvidence) {
  const Query q = parse_query("P(y1_x2, y2_x3, x1, y3)", kSpace);
  EXPECT_EQ(q.evidence.treatment, 0);
  EXPECT_EQ(q.evidence.outcome, 2);
  EXPECT_FALSE(q.conditional);
}

TEST(Parse, SyntaxErrorsCarryPosition) {
  auto position = [](const char* text) -> std::size_t {
    try {
      parse_query(text, kSpace);
    } catch (const SyntaxError& e) {
      return e.position();
    }
    return static_cast<std::size_t>(-1);
  };
  EXPECT_EQ(position("Q(y1_x1)"), 0u);
  EXPECT_EQ(position("P(y1_x1"), 7u);
  EXPECT_EQ(position("P(y1_z1)"), 5u);
  EXPECT_EQ(position("P(y_x1)"), 3u);
  EXPECT_EQ(position("P(y1_x1) extra"), 9u);
  EXPECT_EQ(position(""), 0u);
  EXPECT_EQ(position("P()"), 2u);
}

TEST(Parse, IndexOutOfRange) {
  for (const char* text : {"P(y4_x1)", "P(y1_x4)", "P(y0_x1)", "P(y1_x1, x9)"}) {
    try {
      parse_query(text, kSpace);
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::IndexOutOfRange) << text;
    }
  }
}

TEST(Parse, Unsupported) {
  for (const char* text : {"P(y1_x1, x2, x3)", "P(y1_x1, y1, y2)", "P(y1_x1, x2 | y2)", "P(y1_x1 | y2_x2)"}) {
    try {
      parse_query(text, kSpace);
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::UnsupportedQuery) << text;
    }
  }
}

TEST(Canonical, AbsorbsMatchingTerm) {
  const CanonicalQuery c = canonicalize(make_joint({term(1, 3)}, Evidence{0, std::nullopt}));
  EXPECT_EQ(c.kind, QueryKind::ExactObservational);
  EXPECT_TRUE(c.terms.empty());
  EXPECT_EQ(c.evidence.treatment, 0);
  EXPECT_EQ(c.evidence.outcome, 2);
}

TEST(Canonical, ConflictingTermsAreZero) {
  EXPECT_EQ(canonicalize(make_joint({term(1, 2), term(1, 3)})).kind, QueryKind::Zero);
}

TEST(Canonical, ConflictWithEvidenceIsZero) {
  EXPECT_EQ(canonicalize(make_joint({term(1, 3), term(2, 1)}, Evidence{1, 1})).kind, QueryKind::Zero);
}

TEST(Canonical, AbsorbKeepsOtherTerms) {
  const CanonicalQuery c = canonicalize(make_joint({term(2, 1), term(1, 3)}, Evidence{1, 0}));
  EXPECT_EQ(c.kind, QueryKind::Standard);
  ASSERT_EQ(c.terms.size(), 1u);
  EXPECT_EQ(c.terms[0], term(1, 3));
  EXPECT_EQ(c.evidence.treatment, 1);
  EXPECT_EQ(c.evidence.outcome, 0);
}

TEST(Canonical, DedupesAndSorts) {
  const CanonicalQuery c = canonicalize(make_joint({term(3, 2), term(1, 3), term(3, 2)}));
  ASSERT_EQ(c.terms.size(), 2u);
  EXPECT_EQ(c.terms[0], term(1, 3));
  EXPECT_EQ(c.terms[1], term(3, 2));
}

TEST(Canonical, ConditionalNeedsEvidence) {
  Query q = make_joint({term(1, 1)});
  q.conditional = true;
  EXPECT_THROW(canonicalize(q), Error);
}

TEST(Canonical, ConditioningKeepsOriginalEvidence) {
  const CanonicalQuery c = canonicalize(parse_query("P(y1_x3 | x2, y2)", kInstitute));
  ASSERT_TRUE(c.conditioning.has_value());
  EXPECT_EQ(c.conditioning->treatment, 1);
  EXPECT_EQ(c.conditioning->outcome, 1);
}

TEST(Format, Examples) {
  EXPECT_EQ(format_query(make_joint({term(1, 3), term(2, 1), term(3, 2)})), "P(y3_x1, y1_x2, y2_x3)");
  EXPECT_EQ(format_query(parse_query("P(y1_x3|x2,y2)", kInstitute)), "P(y1_x3 | x2, y2)");
  EXPECT_EQ(format_query(make_joint({term(1, 1)})), "P(y1_x1)");
  EXPECT_EQ(format_query(canonicalize(make_joint({term(1, 2), term(1, 3)}))), "0");
}

TEST(Properties, RoundTripIdempotentOrderInsensitive) {
  std::mt19937_64 rng(5);
  for (int n = 0; n < 500; ++n) {
    const Dataset d = pcb::testing::random_small_dataset(rng);
    const Query q = pcb::testing::random_query(rng, d.space(), n % 4, n % 3 == 0);
    const CanonicalQuery c = canonicalize(q);
    EXPECT_EQ(canonicalize(parse_query(format_query(q), d.space())), c);

    Query again = make_joint(c.terms, c.evidence);
    EXPECT_EQ(canonicalize(again).terms, c.terms);

    Query shuffled = q;
    std::shuffle(shuffled.terms.begin(), shuffled.terms.end(), rng);
    EXPECT_EQ(canonicalize(shuffled), c);

    if (c.kind == QueryKind::Standard) {
      for (std::size_t t = 1; t < c.terms.size(); ++t) EXPECT_LT(c.terms[t - 1].treatment, c.terms[t].treatment);
      if (c.evidence.treatment) {
        for (const auto& t : c.terms) EXPECT_NE(t.treatment, *c.evidence.treatment);
      }
    }
  }
}
