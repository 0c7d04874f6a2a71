#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "rdfhunter/crowd_kb.hpp"
#include "rdfhunter/dataset.hpp"
#include "rdfhunter/decomposer.hpp"
#include "rdfhunter/gateway.hpp"
#include "rdfhunter/microtask.hpp"
#include "rdfhunter/quality.hpp"
#include "rdfhunter/query.hpp"
#include "rdfhunter/solution.hpp"

namespace rdfhunter {

struct ExecutionConfig {
  double tau = 0.02;
  double alpha = 0.5;
  Aggregation aggregation = Aggregation::Median;
  KbSelection gate_sets{};     // KB sets counted by the completeness gate
  bool crowd_enabled = true;   // false: gate decisions are traced, nothing is asked
  bool join_kb = true;         // false: KB+ answers are not joined into the result
  std::size_t questions_per_task = kDefaultQuestionsPerTask;
  Timeout timeout;

  void validate() const;
};

enum class GateDecision : std::uint8_t {
  Complete,        // comp_d + comp_kb >= 1
  BelowThreshold,  // P <= tau
  Crowdsourced,
  CrowdDisabled,   // would have been crowdsourced
};

std::string_view to_string(GateDecision d);

struct GateRecord {
  Term subject;
  Term predicate;
  double comp_d = 0.0;
  double comp_kb = 0.0;
  double disagreement = 1.0;
  double uncertainty = 0.0;
  double probability = 0.0;
  GateDecision decision = GateDecision::Complete;
};

struct FoldedAnswer {
  Question question;
  AggregatedAnswer answer;
  CrowdQuad quad;
};

struct ExecutionResult {
  SolutionSet answers;
  std::vector<GateRecord> trace;
  std::vector<SubQuery> plan;
  std::vector<Microtask> tasks;
  std::size_t batches = 0;
  std::vector<FoldedAnswer> folded;
  std::vector<Question> unanswered;
  std::size_t responses = 0;  // judgments behind the folded answers

  bool complete() const noexcept { return unanswered.empty(); }
};

/// Standard BGP semantics. The schema is the patterns' variables.
SolutionSet evaluate_bgp(const Dataset& d, std::span<const TriplePattern> patterns);

/// 1 / (1 + |[[sq]]_D|).
double selectivity(const SubQuery& sq, const Dataset& d);

/// Left-linear plan: the most selective data star first, then alternately a
/// crowd star and the most selective data star sharing a variable with the
/// plan so far. When nothing connects, the earliest remaining data star (or
/// crowd star when no data star is left) starts a new component.
std::vector<SubQuery> build_plan(const Decomposition& dec, const Dataset& d);

/// alpha (1 - comp) + (1 - alpha) min(dis, 1 - unc). Not clamped.
double crowd_probability(double comp, double dis, double unc, double alpha);

struct Instantiation {
  SolutionMapping binding;  // restricted to the shared variables
  std::vector<TriplePattern> patterns;
};

/// One bound copy of sq per distinct binding of the variables sq shares with
/// omega. No shared variables gives sq unchanged.
std::vector<Instantiation> instantiate(const SubQuery& sq, const SolutionSet& omega);

/// Hybrid evaluation of q over d and the crowd. Answers the crowd returns
/// are folded into kb.
ExecutionResult execute(const BGPQuery& q, const Dataset& d, CrowdKB& kb, const ExecutionConfig& cfg,
                        CrowdGateway& gateway);

}  // namespace rdfhunter
