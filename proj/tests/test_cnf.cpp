#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "qgs/cnf.hpp"
#include "qgs/error.hpp"
#include "support.hpp"

using namespace qgs;
using qgs::testing::read_data;

namespace {

ErrorKind error_kind(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::InvalidArgument;
}

std::size_t parse_error_line(std::string_view text) {
  try {
    parse_dimacs(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  ADD_FAILURE() << "expected ParseError for:\n" << text;
  return 9999;
}

// Brute force, independent of PackedCnf and the DPLL counter.
std::uint64_t brute_count(const Cnf& cnf) {
  std::uint64_t total = 0;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << cnf.num_vars()); ++x) {
    bool all = true;
    for (const auto& clause : cnf.clauses()) {
      bool any = false;
      for (auto lit : clause) any |= (((x >> (lit.var() - 1)) & 1U) == 1U) == (lit.value() > 0);
      all &= any;
    }
    total += all;
  }
  return total;
}

}  // namespace

TEST(Literal, Basics) {
  const Literal a(-3);
  EXPECT_EQ(a.var(), 3);
  EXPECT_EQ(a.bit(), 2u);
  EXPECT_FALSE(a.is_positive());
  EXPECT_EQ((~a).value(), 3);
  EXPECT_EQ(error_kind([] { Literal(0); }), ErrorKind::InvalidArgument);
}

TEST(ClauseTest, RejectsMalformed) {
  EXPECT_THROW(Clause({}), Error);
  EXPECT_THROW((Clause{1, 1}), Error);
  EXPECT_THROW((Clause{2, -2}), Error);
  EXPECT_EQ((Clause{1, -2}).size(), 2u);
}

TEST(CnfTest, RejectsOutOfRangeVariable) {
  EXPECT_THROW(Cnf(2, {Clause{3}}), Error);
}

TEST(Dimacs, ParsesCommentsAndMultilineClauses) {
  const auto cnf = parse_dimacs("c hello\np cnf 3 2\n1 -2\nc inside a clause\n 3 0\n-1 0\n");
  EXPECT_EQ(cnf, Cnf(3, {Clause{1, -2, 3}, Clause{-1}}));
}

TEST(Dimacs, StopsAtPercentMarker) {
  const auto cnf = parse_dimacs("p cnf 2 1\n1 2 0\n%\n0\n");
  EXPECT_EQ(cnf.num_clauses(), 1u);
}

TEST(Dimacs, NormalizesDuplicateLiterals) {
  EXPECT_EQ(parse_dimacs("p cnf 2 1\n1 1 2 0\n"), Cnf(2, {Clause{1, 2}}));
}

TEST(Dimacs, EmptyFormula) {
  const auto cnf = parse_dimacs("p cnf 4 0\n");
  EXPECT_EQ(cnf.num_vars(), 4u);
  EXPECT_EQ(cnf.num_clauses(), 0u);
}

TEST(Dimacs, ErrorsReportLine) {
  EXPECT_EQ(parse_error_line("1 2 0\n"), 1u);                          // no header
  EXPECT_EQ(parse_error_line("p cnf 2 1\n1 -1 0\n"), 2u);              // tautology
  EXPECT_EQ(parse_error_line("p cnf 2 1\n3 0\n"), 2u);                 // out of range
  EXPECT_EQ(parse_error_line("p cnf 2 2\n1 0\n"), 0u);                 // too few clauses
  EXPECT_EQ(parse_error_line("p cnf 2 1\n1 0\n2 0\n"), 3u);            // too many clauses
  EXPECT_EQ(parse_error_line("p cnf 2 1\n1 x 0\n"), 2u);               // bad token
  EXPECT_EQ(parse_error_line("p cnf 2 1\np cnf 2 1\n1 0\n"), 2u);      // second header
  EXPECT_EQ(parse_error_line("p dnf 2 1\n1 0\n"), 1u);                 // wrong format
  EXPECT_EQ(parse_error_line("p cnf 2 2\n1 0\n0\n"), 3u);              // empty clause
  EXPECT_NE(parse_error_line("p cnf 2 1\n1 2\n"), 9999u);              // unterminated
}

TEST(Dimacs, EmitExact) {
  const Cnf cnf(3, {Clause{1, -2}, Clause{3}});
  EXPECT_EQ(emit_dimacs(cnf), "p cnf 3 2\n1 -2 0\n3 0\n");
}

TEST(Dimacs, RoundTripRandom) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto cnf = qgs::testing::random_cnf(rng, 1 + rng() % 30, rng() % 40, 5);
    EXPECT_EQ(parse_dimacs(emit_dimacs(cnf)), cnf);
  }
}

TEST(Evaluate, CarExamples) {
  const auto cnf = parse_dimacs(read_data("car_minimal.dimacs"));
  Assignment a(10);
  for (int v : {1, 2, 3, 5, 6, 7}) a.set(v, true);  // car body engine gas gear manual
  EXPECT_TRUE(evaluate(cnf, a));
  a.set(2, false);  // no body
  EXPECT_FALSE(evaluate(cnf, a));
  a.set(2, true);
  a.set(8, true);  // manual and automatic together
  EXPECT_FALSE(evaluate(cnf, a));
  a.set(8, false);
  a.set(10, true);  // keyless entry without power locks
  EXPECT_FALSE(evaluate(cnf, a));
  a.set(9, true);
  EXPECT_TRUE(evaluate(cnf, a));
}

TEST(Evaluate, LengthMismatch) {
  const Cnf cnf(3, {Clause{1}});
  EXPECT_EQ(error_kind([&] { evaluate(cnf, Assignment(2)); }), ErrorKind::LengthMismatch);
}

TEST(Evaluate, EmptyFormulaIsTrue) {
  EXPECT_TRUE(evaluate(Cnf(3, {}), Assignment(3)));
}

TEST(Evaluate, MatchesClauseDefinitionExhaustively) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    const auto cnf = qgs::testing::random_cnf(rng, n, rng() % 10, 4);
    const PackedCnf packed(cnf);
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
      const auto a = Assignment::from_index(n, x);
      ASSERT_EQ(a.index(), x);
      bool expected = true;
      for (const auto& clause : cnf.clauses())
        expected &= std::any_of(clause.begin(), clause.end(),
                                [&](Literal l) { return a.value_of(l.var()) == l.is_positive(); });
      ASSERT_EQ(evaluate(cnf, a), expected);
      ASSERT_EQ(packed.satisfied_by(x), expected);
    }
  }
}

TEST(Enumerate, CarModels) {
  const auto cnf = parse_dimacs(read_data("car_minimal.dimacs"));
  const auto models = enumerate_models(cnf);
  ASSERT_EQ(models.size(), 18u);
  const auto indices = enumerate_model_indices(cnf);
  EXPECT_TRUE(std::is_sorted(indices.begin(), indices.end()));
  for (std::size_t i = 0; i < models.size(); ++i) {
    EXPECT_TRUE(evaluate(cnf, models[i]));
    EXPECT_EQ(models[i].index(), indices[i]);
  }
}

TEST(Enumerate, TooManyVariables) {
  const Cnf cnf(25, {Clause{1}});
  EXPECT_EQ(error_kind([&] { enumerate_model_indices(cnf); }), ErrorKind::TooManyVariables);
}

TEST(Count, Examples) {
  EXPECT_EQ(count_models(parse_dimacs(read_data("car_minimal.dimacs"))), 18);
  EXPECT_EQ(count_models(parse_dimacs(read_data("unsat.dimacs"))), 0);
  EXPECT_EQ(count_models(Cnf(10, {})), 1024);
  EXPECT_EQ(count_models(Cnf(100, {})), BigInt(1) << 100);
  EXPECT_EQ(count_models(Cnf(100, {Clause{1, 2}})), (BigInt(3) << 98));
}

TEST(Count, DisjointPairsAtFortyVariables) {
  std::vector<Clause> clauses;
  for (int i = 1; i <= 40; i += 2) clauses.push_back(Clause{i, i + 1});
  EXPECT_EQ(count_models(Cnf(40, clauses)), BigInt(3486784401ULL));
}

TEST(Count, MatchesBruteForceOnRandom3Cnf) {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + rng() % 14;
    const std::size_t m = rng() % (5 * n);
    const auto cnf = qgs::testing::random_3cnf(rng, n, m);
    ASSERT_EQ(count_models(cnf), BigInt(brute_count(cnf))) << emit_dimacs(cnf);
    ASSERT_EQ(count_models(cnf), BigInt(enumerate_model_indices(cnf).size()));
  }
}

TEST(Count, MixedLengthsMatchBruteForce) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng() % 12;
    const auto cnf = qgs::testing::random_cnf(rng, n, rng() % 20, 4);
    ASSERT_EQ(count_models(cnf), BigInt(brute_count(cnf))) << emit_dimacs(cnf);
  }
}

TEST(Count, InvariantUnderClauseReordering) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto cnf = qgs::testing::random_3cnf(rng, 20, 60);
    std::vector<Clause> shuffled(cnf.clauses().begin(), cnf.clauses().end());
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(count_models(cnf), count_models(Cnf(20, shuffled)));
  }
}

TEST(Count, BudgetExhaustionIsTimeout) {
  std::mt19937_64 rng(8);
  const auto cnf = qgs::testing::random_3cnf(rng, 60, 150);
  CountOptions tiny;
  tiny.node_budget = 10;
  EXPECT_EQ(error_kind([&] { count_models(cnf, tiny); }), ErrorKind::Timeout);
}
