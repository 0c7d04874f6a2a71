#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "rdfhunter/executor.hpp"

using namespace rdfhunter;
using namespace testing_support;

namespace {

const Dataset& figure2() {
  static const Dataset d = load_ntriples(data_file("figure2.nt"));
  return d;
}

CrowdKB figure3_kb() { return load_kb(data_file("figure3_kb.jsonl")); }

ExecutionConfig worked_example() {
  ExecutionConfig cfg;
  cfg.tau = 0.60;
  cfg.alpha = 0.5;
  return cfg;
}

std::vector<std::size_t> ordinals(const SubQuery& sq) {
  std::vector<std::size_t> out;
  for (const auto& t : sq.patterns) out.push_back(t.ordinal);
  return out;
}

TriplePattern tp(PatternTerm s, PatternTerm p, PatternTerm o, std::size_t ord) {
  return {std::move(s), std::move(p), std::move(o), ord};
}

}  // namespace

TEST(Evaluate, SinglePatternOnMovieGraph) {
  std::vector<TriplePattern> ps = {tp(Variable{"m"}, rdf_type(), movie_class(), 1)};
  EXPECT_EQ(evaluate_bgp(figure2(), ps).size(), 4u);
  std::vector<TriplePattern> none = {tp(Variable{"m"}, rdf_type(), iri("http://x/Nothing"), 1)};
  EXPECT_TRUE(evaluate_bgp(figure2(), none).empty());
}

TEST(Evaluate, RepeatedVariableInOnePattern) {
  Dataset d = parse_ntriples("<http://x/a> <http://x/p> <http://x/a> .\n<http://x/a> <http://x/p> <http://x/b> .\n");
  std::vector<TriplePattern> ps = {tp(Variable{"x"}, iri("http://x/p"), Variable{"x"}, 1)};
  EXPECT_EQ(evaluate_bgp(d, ps).size(), 1u);
}

TEST(EvaluateProperty, StarMatchesBruteForce) {
  std::mt19937_64 rng(8);
  for (int round = 0; round < 50; ++round) {
    Dataset d = random_graph(rng, 50, 3);
    BGPQuery q = random_query(rng, d, 2);
    q.select_all = true;
    q.projected.clear();
    q.distinct = false;
    SolutionSet got = evaluate_bgp(d, q.patterns);
    ASSERT_EQ(rows_of(got, q), brute_force_answers(d, q));
  }
}

TEST(Selectivity, Values) {
  Decomposition dec = decompose(load_query(data_file("figure3.rq")));
  EXPECT_DOUBLE_EQ(selectivity(dec.data[0], figure2()), 0.2);
  SubQuery empty{{tp(Variable{"m"}, rdf_type(), iri("http://x/Nothing"), 1)}, Variable{"m"}, SubQueryKind::Data};
  EXPECT_DOUBLE_EQ(selectivity(empty, figure2()), 1.0);
}

TEST(BuildPlan, MovieProducerQuery) {
  auto plan = build_plan(decompose(load_query(data_file("figure3.rq"))), figure2());
  ASSERT_EQ(plan.size(), 2u);
  EXPECT_EQ(plan[0].kind, SubQueryKind::Data);
  EXPECT_EQ(ordinals(plan[0]), (std::vector<std::size_t>{1, 3, 4}));
  EXPECT_EQ(plan[1].kind, SubQueryKind::Crowd);
}

TEST(BuildPlan, DisconnectedDataStarsMoreSelectiveFirst) {
  BGPQuery q = parse_query(
      "SELECT * WHERE { ?a a <http://schema.org/Movie> . ?b <http://dbpedia.org/property/producer> "
      "<http://dbpedia.org/resource/Tim_Bevan> }");
  auto plan = build_plan(decompose(q), figure2());
  ASSERT_EQ(plan.size(), 2u);
  EXPECT_EQ(ordinals(plan[0]), (std::vector<std::size_t>{2}));
  EXPECT_EQ(ordinals(plan[1]), (std::vector<std::size_t>{1}));
}

TEST(BuildPlan, EqualSelectivityPrefersEarlierStar) {
  BGPQuery q = parse_query("SELECT * WHERE { ?a <http://x/p> <http://x/o> . ?b <http://x/q> <http://x/o> }");
  auto plan = build_plan(decompose(q), figure2());
  EXPECT_EQ(ordinals(plan[0]), (std::vector<std::size_t>{1}));
}

TEST(BuildPlan, UnconnectedCrowdStarGoesLast) {
  BGPQuery q = parse_query(
      "SELECT * WHERE { ?m a <http://schema.org/Movie> . ?x <http://x/p> ?y . "
      "?m <http://dbpedia.org/property/producer> ?p }");
  auto plan = build_plan(decompose(q), figure2());
  ASSERT_EQ(plan.size(), 3u);
  EXPECT_EQ(ordinals(plan[0]), (std::vector<std::size_t>{1}));
  EXPECT_EQ(ordinals(plan[1]), (std::vector<std::size_t>{3}));
  EXPECT_EQ(ordinals(plan[2]), (std::vector<std::size_t>{2}));
}

TEST(BuildPlan, EmptyDecomposition) { EXPECT_TRUE(build_plan({}, figure2()).empty()); }

TEST(BuildPlanProperty, PermutationAndConnectivity) {
  std::mt19937_64 rng(31);
  for (int round = 0; round < 400; ++round) {
    Dataset d = random_graph(rng, 60, 3);
    BGPQuery q = random_query(rng, d, 5);
    Decomposition dec = decompose(q);
    auto plan = build_plan(dec, d);
    ASSERT_EQ(plan.size(), dec.data.size() + dec.crowd.size());
    std::vector<std::size_t> seen;
    for (const auto& sq : plan) {
      for (const auto& t : sq.patterns) seen.push_back(t.ordinal);
    }
    std::sort(seen.begin(), seen.end());
    for (std::size_t i = 0; i < seen.size(); ++i) ASSERT_EQ(seen[i], i + 1);

    for (std::size_t i = 1; i < plan.size(); ++i) {
      std::vector<Variable> placed;
      for (std::size_t k = 0; k < i; ++k) {
        for (auto& v : plan[k].variables()) placed.push_back(v);
      }
      bool any_connects = false;
      for (std::size_t k = i; k < plan.size(); ++k) any_connects = any_connects || plan[k].shares_variable_with(placed);
      if (any_connects) ASSERT_TRUE(plan[i].shares_variable_with(placed)) << "position " << i;
    }
  }
}

TEST(CrowdProbability, WorkedValues) {
  EXPECT_NEAR(crowd_probability(0.33, 0.15, 0.0, 0.5), 0.41, 1e-12);
  EXPECT_NEAR(crowd_probability(2.0 / 3.0, 1.0, 0.0, 0.5), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(crowd_probability(0.0, 1.0, 0.97, 0.5), 0.515, 1e-12);
  EXPECT_LT(crowd_probability(1.5, 0.0, 1.0, 1.0), 0.0);
}

TEST(CrowdProbabilityProperty, InUnitIntervalWhenGateAdmits) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> unit(0, 1);
  for (int i = 0; i < 10000; ++i) {
    double comp = unit(rng) * 0.999999, dis = unit(rng), unc = unit(rng), alpha = unit(rng);
    double p = crowd_probability(comp, dis, unc, alpha);
    ASSERT_GE(p, 0.0);
    ASSERT_LE(p, 1.0);
  }
}

TEST(Instantiate, Cases) {
  SubQuery sq{{tp(Variable{"movie"}, producer(), Variable{"p"}, 2)}, Variable{"movie"}, SubQueryKind::Crowd};
  SolutionSet omega = evaluate_bgp(figure2(), std::vector<TriplePattern>{tp(Variable{"movie"}, rdf_type(), movie_class(), 1)});
  auto inst = instantiate(sq, omega);
  ASSERT_EQ(inst.size(), 4u);
  EXPECT_EQ(inst[0].patterns[0].subject, PatternTerm(db("Tower_Heist")));

  auto unrelated = instantiate(sq, SolutionSet::identity());
  ASSERT_EQ(unrelated.size(), 1u);
  EXPECT_EQ(unrelated[0].patterns, sq.patterns);

  EXPECT_TRUE(instantiate(sq, SolutionSet({"movie"})).empty());
}

TEST(Execute, MovieScenarioTrace) {
  CrowdKB kb = figure3_kb();
  SilentGateway gw;
  ExecutionResult r = execute(load_query(data_file("figure3.rq")), figure2(), kb, worked_example(), gw);
  ASSERT_EQ(r.trace.size(), 4u);
  EXPECT_EQ(r.trace[0].subject, db("Tower_Heist"));
  EXPECT_NEAR(r.trace[0].comp_kb, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(r.trace[0].disagreement, 0.15, 1e-12);
  EXPECT_NEAR(r.trace[0].probability, 0.5 * (2.0 / 3.0) + 0.5 * 0.15, 1e-9);
  EXPECT_EQ(r.trace[0].decision, GateDecision::BelowThreshold);
  EXPECT_EQ(r.trace[1].subject, db("The_Interpreter"));
  EXPECT_EQ(r.trace[1].decision, GateDecision::Complete);
  EXPECT_EQ(r.trace[2].subject, db("Legal_Eagles"));
  EXPECT_NEAR(r.trace[2].probability, 2.0 / 3.0, 1e-9);
  EXPECT_EQ(r.trace[2].decision, GateDecision::Crowdsourced);
  EXPECT_EQ(r.trace[3].subject, db("Non-Stop_(film)"));
  EXPECT_NEAR(r.trace[3].probability, 0.515, 1e-9);
  EXPECT_EQ(r.trace[3].decision, GateDecision::BelowThreshold);

  ASSERT_EQ(gw.batches().size(), 1u);
  ASSERT_EQ(gw.batches()[0].size(), 1u);
  ASSERT_EQ(gw.batches()[0][0].questions.size(), 1u);
  EXPECT_EQ(gw.batches()[0][0].questions[0].subject, db("Legal_Eagles"));
  EXPECT_EQ(r.answers.size(), 6u);
  ASSERT_EQ(r.unanswered.size(), 1u);
  EXPECT_FALSE(r.complete());
}

TEST(Execute, CrowdOffGivesMachineAnswers) {
  CrowdKB kb = figure3_kb();
  SilentGateway gw;
  ExecutionConfig cfg = worked_example();
  cfg.crowd_enabled = false;
  cfg.join_kb = false;
  ExecutionResult r = execute(load_query(data_file("figure3.rq")), figure2(), kb, cfg, gw);
  EXPECT_EQ(r.answers.size(), 5u);
  EXPECT_TRUE(gw.batches().empty());
  EXPECT_EQ(r.trace[2].decision, GateDecision::CrowdDisabled);
  EXPECT_TRUE(r.complete());
}

TEST(Execute, CrowdAnswersJoinIntoResult) {
  CrowdKB kb = figure3_kb();
  SimCrowdConfig sim;
  Dataset oracle = figure2();
  oracle.insert({db("Legal_Eagles"), producer(), db("Sheldon_Kahn")});
  oracle.insert({db("Legal_Eagles"), producer(), db("Joe_Medjuck")});
  sim.oracle = std::make_shared<const Dataset>(oracle);
  SimulatedGateway gw(sim);
  ExecutionResult r = execute(load_query(data_file("figure3.rq")), figure2(), kb, worked_example(), gw);
  ASSERT_EQ(r.folded.size(), 1u);
  EXPECT_EQ(r.folded[0].answer.target, KbSet::Plus);
  // The crowd named a producer; it joins in when it is new to the data set.
  EXPECT_GE(r.answers.size(), 6u);
  EXPECT_TRUE(r.complete());
  EXPECT_EQ(r.responses, 3u);
}

TEST(Execute, DuplicatePairsAreAskedOnce) {
  Dataset d = parse_ntriples(
      "<http://x/a> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://x/C> .\n"
      "<http://x/b> <http://www.w3.org/1999/02/22-rdf-syntax-ns#type> <http://x/C> .\n"
      "<http://x/b> <http://x/p> <http://x/v> .\n");
  // Both bindings of ?x instantiate the crowd pattern on the same (a, p) pair.
  BGPQuery q = parse_query("SELECT * WHERE { ?x a <http://x/C> . <http://x/a> <http://x/p> ?x }");
  CrowdKB kb;
  SilentGateway gw;
  ExecutionResult r = execute(q, d, kb, {}, gw);
  ASSERT_EQ(gw.batches().size(), 1u);
  std::size_t asked = 0;
  for (const auto& t : gw.batches()[0]) asked += t.questions.size();
  EXPECT_EQ(asked, 1u);
  EXPECT_EQ(r.trace.size(), 1u);
}

TEST(Execute, UnboundSubjectCrowdPatternIsEvaluatedWithoutAsking) {
  BGPQuery q = parse_query("SELECT ?m ?p WHERE { ?m <http://dbpedia.org/property/producer> ?p }");
  CrowdKB kb = figure3_kb();
  SilentGateway gw;
  ExecutionResult r = execute(q, figure2(), kb, {}, gw);
  EXPECT_TRUE(gw.batches().empty());
  EXPECT_EQ(r.answers.size(), 6u);  // 5 from D plus Brian_Grazer from KB+
}

TEST(Execute, SubjectRicherThanClassIsNeverAsked) {
  Dataset d;
  for (const char* s : {"a", "b", "c"}) d.insert({ex(s), rdf_type(), ex("C")});
  d.insert({ex("a"), ex("p"), ex("1")});
  d.insert({ex("b"), ex("p"), ex("1")});
  for (int i = 0; i < 4; ++i) d.insert({ex("c"), ex("p"), ex("x" + std::to_string(i))});
  BGPQuery q = parse_query("SELECT * WHERE { <http://example.org/c> <http://example.org/p> ?o }");
  CrowdKB kb;
  SilentGateway gw;
  ExecutionConfig cfg;
  cfg.tau = 0.0;
  ExecutionResult r = execute(q, d, kb, cfg, gw);
  ASSERT_EQ(r.trace.size(), 1u);
  EXPECT_EQ(r.trace[0].decision, GateDecision::Complete);
  EXPECT_TRUE(gw.batches().empty());
}

TEST(Execute, ConfigValidation) {
  ExecutionConfig cfg;
  cfg.tau = 1.5;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.tau = 0.5;
  cfg.alpha = -0.1;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(ExecuteProperty, GateSafety) {
  // No question is ever emitted for a pair whose completeness reaches 1.
  std::mt19937_64 rng(13);
  for (int round = 0; round < 150; ++round) {
    Dataset d = random_graph(rng, 120, 4);
    BGPQuery q = random_query(rng, d, 4);
    CrowdKB kb;
    SilentGateway gw;
    ExecutionConfig cfg;
    cfg.tau = 0.0;
    ExecutionResult r = execute(q, d, kb, cfg, gw);
    std::set<std::pair<Term, Term>> asked;
    for (const auto& batch : gw.batches()) {
      for (const auto& t : batch) {
        for (const auto& qn : t.questions) asked.emplace(qn.subject, qn.predicate);
      }
    }
    for (const auto& g : r.trace) {
      bool complete = g.comp_d + g.comp_kb >= 1.0;
      ASSERT_EQ(complete, g.decision == GateDecision::Complete);
      if (complete) ASSERT_FALSE(asked.contains({g.subject, g.predicate}));
      if (!complete) {
        ASSERT_GE(g.probability, 0.0);
        ASSERT_LE(g.probability, 1.0);
      }
    }
  }
}

TEST(ExecuteProperty, MachineEquivalenceWithCrowdOff) {
  std::mt19937_64 rng(77);
  for (int round = 0; round < 100; ++round) {
    Dataset d = random_graph(rng, 150, 5);
    BGPQuery q = random_query(rng, d, 4);
    CrowdKB kb;
    SilentGateway gw;
    ExecutionConfig cfg;
    cfg.crowd_enabled = false;
    ExecutionResult r = execute(q, d, kb, cfg, gw);
    ASSERT_EQ(rows_of(r.answers, q), brute_force_answers(d, q)) << to_sparql(q);
  }
}

TEST(ExecuteProperty, AddingKbPlusQuadsNeverShrinksAnswers) {
  std::mt19937_64 rng(19);
  for (int round = 0; round < 100; ++round) {
    Dataset d = random_graph(rng, 120, 4);
    BGPQuery q = random_query(rng, d, 4);
    q.distinct = true;
    ExecutionConfig cfg;
    cfg.crowd_enabled = false;
    CrowdKB kb;
    SilentGateway gw;
    auto before = rows_of(execute(q, d, kb, cfg, gw).answers, q);
    std::uniform_int_distribution<std::size_t> pick(0, d.size() - 1);
    for (int i = 0; i < 5; ++i) {
      const Triple& t = d.triples()[pick(rng)];
      kb.insert(KbSet::Plus, {t.subject, t.predicate, ex("crowd" + std::to_string(i)), 0.9});
    }
    auto after = rows_of(execute(q, d, kb, cfg, gw).answers, q);
    for (const auto& row : before) ASSERT_TRUE(std::binary_search(after.begin(), after.end(), row));
  }
}
