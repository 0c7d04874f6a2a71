#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "support.hpp"
#include "rdfhunter/metrics.hpp"

using namespace rdfhunter;
using namespace testing_support;

namespace {
CrowdAnswer ans(const std::string& s, std::optional<std::string> o) {
  return {db(s), country(), o ? std::optional<Term>(db(*o)) : std::nullopt};
}
GoldStandard gold_of(const std::set<CrowdAnswer>& answers) {
  GoldStandard g;
  for (const auto& a : answers) g.add(a.subject, a.predicate, a.object);
  return g;
}
}  // namespace

TEST(Metrics, PrecisionRecallExamples) {
  std::set<CrowdAnswer> a{ans("A", "x"), ans("B", "y")};
  EXPECT_DOUBLE_EQ(*precision(a, gold_of(a)), 1.0);
  EXPECT_DOUBLE_EQ(*recall(a, gold_of(a)), 1.0);

  GoldStandard g = gold_of({ans("A", "x"), ans("C", "z")});
  EXPECT_DOUBLE_EQ(*precision(a, g), 0.5);
  EXPECT_DOUBLE_EQ(*recall({ans("A", "x")}, g), 0.5);
  EXPECT_FALSE(precision({}, g).has_value());
  EXPECT_DOUBLE_EQ(*recall({}, g), 0.0);
  EXPECT_FALSE(recall(a, GoldStandard{}).has_value());
}

TEST(Metrics, NoValueAnswersCount) {
  GoldStandard g = gold_of({ans("Monaco", std::nullopt), ans("Madrid", "Spain")});
  std::set<CrowdAnswer> crowd{ans("Monaco", std::nullopt), ans("Madrid", "Spain")};
  EXPECT_DOUBLE_EQ(*precision(crowd, g), 1.0);
  std::set<CrowdAnswer> wrong{ans("Monaco", "France")};
  EXPECT_DOUBLE_EQ(*precision(wrong, g), 0.0);
}

TEST(Metrics, FMeasure) {
  EXPECT_DOUBLE_EQ(f_measure(1, 1), 1.0);
  EXPECT_NEAR(f_measure(0.5, 1), 2.0 / 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(f_measure(0, 0), 0.0);
}

TEST(MetricsProperty, FMeasureIdentities) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> unit(0, 1);
  for (int i = 0; i < 10000; ++i) {
    double p = unit(rng), r = unit(rng);
    ASSERT_EQ(f_measure(p, r), f_measure(r, p));
    ASSERT_LE(f_measure(p, r), std::max(p, r) + 1e-15);
    ASSERT_NEAR(f_measure(p, p), p, 1e-12);
  }
}

TEST(Metrics, GoldFileRoundTrip) {
  GoldStandard g = load_gold(data_file("table1_gold.jsonl"));
  EXPECT_EQ(g.size(), 9u);
  EXPECT_EQ(g.answers().size(), 9u);
  ASSERT_NE(g.find(db("Monaco"), country()), nullptr);
  EXPECT_TRUE(g.find(db("Monaco"), country())->contains(std::nullopt));
  std::stringstream s;
  write_gold(s, g);
  EXPECT_EQ(read_gold(s).answers(), g.answers());
  std::stringstream bad("[\"<http://x/a>\",\"<http://x/p>\"]\n");
  EXPECT_THROW(read_gold(bad), ParseError);
}

TEST(Metrics, CrowdAnswersFromFoldedQuads) {
  std::vector<FoldedAnswer> folded;
  folded.push_back({{}, {"q1", KbSet::Plus, "Spain", std::nullopt, 1.0, 3}, {db("Madrid"), country(), db("Spain"), 1.0}});
  folded.push_back({{}, {"q2", KbSet::Minus, std::nullopt, std::nullopt, 0.7, 3}, {db("Monaco"), country(), std::nullopt, 0.7}});
  folded.push_back({{}, {"q3", KbSet::Tilde, std::nullopt, std::nullopt, 0.9, 3}, {db("X"), country(), std::nullopt, 0.9}});
  auto crowd = crowd_answers(folded);
  EXPECT_EQ(crowd, (std::set<CrowdAnswer>{ans("Madrid", "Spain"), ans("Monaco", std::nullopt)}));
}
