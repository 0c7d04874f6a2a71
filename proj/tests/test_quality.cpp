#include <gtest/gtest.h>

#include <random>
#include <thread>

#include "support.hpp"
#include "rdfhunter/quality.hpp"

using namespace rdfhunter;
using namespace testing_support;

namespace {
const Dataset& figure2() {
  static const Dataset d = load_ntriples(data_file("figure2.nt"));
  return d;
}
const Dataset& figure2_ext() {
  static const Dataset d = load_ntriples(data_file("figure2_ext.nt"));
  return d;
}
}  // namespace

TEST(Quality, Multiplicity) {
  EXPECT_EQ(multiplicity(figure2(), db("The_Interpreter"), producer()), 3u);
  EXPECT_EQ(multiplicity(figure2(), db("Tower_Heist"), producer()), 0u);
  EXPECT_EQ(multiplicity(figure2(), db("The_Interpreter"), iri("http://x/unknown")), 0u);
}

TEST(Quality, AggregatedMultiplicity) {
  EXPECT_EQ(aggregated_multiplicity(figure2(), movie_class(), producer(), Aggregation::Median), 3u);
  EXPECT_EQ(aggregated_multiplicity(figure2_ext(), film_class(), producer(), Aggregation::Median), 5u);
  EXPECT_EQ(aggregated_multiplicity(figure2(), iri("http://x/NoSuchClass"), producer(), Aggregation::Median), 0u);
}

TEST(Quality, AggregateCeiling) {
  const std::vector<std::size_t> v{1, 1, 4};
  EXPECT_EQ(aggregate_ceiling(v, Aggregation::Median), 1u);
  EXPECT_EQ(aggregate_ceiling(v, Aggregation::Mean), 2u);
  EXPECT_EQ(aggregate_ceiling(v, Aggregation::Max), 4u);
  const std::vector<std::size_t> even{3, 2};
  EXPECT_EQ(aggregate_ceiling(even, Aggregation::Median), 3u);
  const std::vector<std::size_t> mean{1, 2};
  EXPECT_EQ(aggregate_ceiling(mean, Aggregation::Mean), 2u);
  EXPECT_EQ(aggregate_ceiling({}, Aggregation::Median), 0u);
}

TEST(Quality, AggregatedMultiplicityOnSyntheticClass) {
  Dataset d;
  const Term cls = ex("C");
  const std::pair<const char*, int> subjects[] = {{"a", 1}, {"b", 1}, {"c", 4}};
  for (auto [s, k] : subjects) {
    d.insert({ex(s), rdf_type(), cls});
    for (int i = 0; i < k; ++i) d.insert({ex(s), ex("p"), ex(std::string(s) + std::to_string(i))});
  }
  EXPECT_EQ(aggregated_multiplicity(d, cls, ex("p"), Aggregation::Median), 1u);
  EXPECT_EQ(aggregated_multiplicity(d, cls, ex("p"), Aggregation::Mean), 2u);
}

TEST(Quality, CompletenessD) {
  EXPECT_DOUBLE_EQ(completeness_d(figure2_ext(), db("The_Interpreter"), producer(), Aggregation::Median), 0.6);
  EXPECT_DOUBLE_EQ(completeness_d(figure2(), db("Legal_Eagles"), producer(), Aggregation::Median), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(completeness_d(figure2(), db("Tim_Bevan"), producer(), Aggregation::Median), 1.0);
  EXPECT_DOUBLE_EQ(completeness_d(figure2(), db("Tower_Heist"), iri("http://x/unknown"), Aggregation::Median), 1.0);
}

TEST(Quality, CompletenessKb) {
  CrowdKB kb;
  EXPECT_DOUBLE_EQ(completeness_kb(kb, figure2_ext(), db("Tower_Heist"), producer(), Aggregation::Median, {}), 0.0);
  kb.insert(KbSet::Plus, {db("Tower_Heist"), producer(), db("Brian_Grazer"), 0.9});
  EXPECT_DOUBLE_EQ(completeness_kb(kb, figure2_ext(), db("Tower_Heist"), producer(), Aggregation::Median, {}), 0.2);
  EXPECT_DOUBLE_EQ(completeness_kb(kb, figure2(), db("Tower_Heist"), producer(), Aggregation::Median, {}), 1.0 / 3.0);
}

TEST(Quality, ReportRowsAreConsistent) {
  QualityModel model(figure2());
  CompletenessReport r = model.report(db("Legal_Eagles"), producer());
  EXPECT_EQ(r.m_d, 2u);
  EXPECT_EQ(r.am_best, 3u);
  EXPECT_DOUBLE_EQ(r.comp_d, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.comp_kb_plus, 0.0);
}

TEST(Quality, MemoToleratesConcurrentReaders) {
  QualityModel model(figure2_ext());
  std::vector<std::thread> pool;
  std::vector<std::size_t> seen(8);
  for (std::size_t i = 0; i < seen.size(); ++i) {
    pool.emplace_back([&, i] { seen[i] = model.best_aggregated_multiplicity(db("The_Interpreter"), producer()); });
  }
  for (auto& t : pool) t.join();
  for (auto v : seen) EXPECT_EQ(v, 5u);
}

TEST(QualityProperty, InvariantsOnRandomGraphs) {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 40; ++round) {
    Dataset d = random_graph(rng, 150, 5);
    for (Aggregation fn : {Aggregation::Median, Aggregation::Mean, Aggregation::Max}) {
      QualityModel model(d, fn);
      for (const auto& cls : d.classes()) {
        for (int p = 0; p < 5; ++p) {
          const Term pred = ex("p" + std::to_string(p));
          std::size_t am = model.aggregated_multiplicity(cls, pred);
          bool any = false;
          for (const auto& s : d.instances_of(cls)) any = any || model.multiplicity(s, pred) > 0;
          ASSERT_EQ(am > 0, any);
          for (const auto& s : d.instances_of(cls)) {
            double c = model.completeness_d(s, pred);
            ASSERT_GE(c, 0.0);
            CompletenessReport r = model.report(s, pred);
            ASSERT_EQ(r.comp_d == 1.0, r.am_best == 0 || r.m_d == r.am_best);
          }
        }
      }
    }
  }
}

TEST(QualityProperty, SingleInstanceClassIsComplete) {
  for (Aggregation fn : {Aggregation::Median, Aggregation::Mean, Aggregation::Max}) {
    for (int k = 1; k <= 6; ++k) {
      Dataset d;
      d.insert({ex("s"), rdf_type(), ex("Only")});
      for (int i = 0; i < k; ++i) d.insert({ex("s"), ex("p"), ex("o" + std::to_string(i))});
      EXPECT_EQ(aggregated_multiplicity(d, ex("Only"), ex("p"), fn), static_cast<std::size_t>(k));
      EXPECT_DOUBLE_EQ(completeness_d(d, ex("s"), ex("p"), fn), 1.0);
    }
  }
}

TEST(QualityProperty, AddingAValueNeverLowersMultiplicity) {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 20; ++round) {
    Dataset d = random_graph(rng, 80, 3);
    for (const auto& t : std::vector<Triple>(d.triples())) {
      std::size_t before = multiplicity(d, t.subject, t.predicate);
      d.insert({t.subject, t.predicate, ex("fresh" + std::to_string(round))});
      ASSERT_GE(multiplicity(d, t.subject, t.predicate), before);
    }
  }
}

TEST(QualityProperty, SubjectRicherThanItsClassExceedsOne) {
  Dataset d;
  for (const char* s : {"a", "b", "c"}) d.insert({ex(s), rdf_type(), ex("C")});
  d.insert({ex("a"), ex("p"), ex("1")});
  d.insert({ex("b"), ex("p"), ex("1")});
  for (int i = 0; i < 4; ++i) d.insert({ex("c"), ex("p"), ex("x" + std::to_string(i))});
  EXPECT_DOUBLE_EQ(completeness_d(d, ex("c"), ex("p"), Aggregation::Median), 4.0);
}
