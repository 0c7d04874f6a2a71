#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rdfhunter/crowd_kb.hpp"
#include "rdfhunter/dataset.hpp"
#include "rdfhunter/query.hpp"

namespace rdfhunter {

/// An existence question plus its follow-up value question, rendered with
/// human-readable labels.
struct Question {
  std::string id;
  Term subject;
  Term predicate;
  std::string existence_text;  // "Does {subject} have a {predicate}?"
  std::string value_text;      // "What is the {predicate} of {subject}?"
  std::string subject_label;
  std::string predicate_label;

  bool operator==(const Question&) const = default;
};

/// Stable id derived from the (subject, predicate) pair.
std::string question_id_for(const Term& s, const Term& p);

Question make_question(const Dataset& d, const Term& s, const Term& p);

enum class TaskStatus : std::uint8_t { Pending, Collecting, Resolved };
std::string_view to_string(TaskStatus s);

inline constexpr std::size_t kDefaultQuestionsPerTask = 4;
inline constexpr std::size_t kDefaultJudgmentQuota = 3;

struct Microtask {
  std::string id;
  std::vector<Question> questions;  // 1..4 by default
  TaskStatus status = TaskStatus::Pending;
};

/// A triple pattern instantiation (s, p, ?o) queued for the crowd.
struct CrowdRequest {
  Term subject;
  Term predicate;
  Variable object;
};

/// One question per request, packed greedily in input order.
std::vector<Microtask> build_tasks(std::span<const CrowdRequest> requests, const Dataset& d,
                                   std::size_t max_per_task = kDefaultQuestionsPerTask);

enum class Verdict : std::uint8_t { Yes, No, NotSure };
std::string_view to_string(Verdict v);
Verdict parse_verdict(std::string_view s);

struct Judgment {
  std::string question_id;
  Verdict verdict = Verdict::NotSure;
  std::optional<std::string> value;  // required iff verdict == Yes
  double confidence = 1.0;           // [0, 1]
  int familiarity = 1;               // 1..7

  /// Throws std::invalid_argument describing the first violated constraint.
  void validate() const;
};

class AggregationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AggregatedAnswer {
  std::string question_id;
  KbSet target = KbSet::Tilde;
  std::optional<std::string> value;  // free text of the winning yes-answer
  std::optional<Term> object;        // pre-resolved object (replayed answers)
  double m = 0.0;
  std::size_t judgment_count = 0;
};

/// (raw - 1) / 6, so 1 maps to 0 and 7 to 1.
double normalized_familiarity(int raw);

/// Average of mean confidence and mean normalized familiarity.
double membership_degree(double mean_confidence, double mean_normalized_familiarity);

/// Majority verdict (Yes -> KB+, No -> KB-, Not sure -> KB~); exact two-way
/// ties prefer yes over no over not sure, a three-way tie is an error. m is
/// computed over the majority judgments only. For yes, the value is the most
/// frequent one among the yes judgments (ties: smallest string).
AggregatedAnswer aggregate_judgments(std::span<const Judgment> judgments,
                                     std::size_t quota = kDefaultJudgmentQuota);

/// Stores the answer as a quad and returns it. Yes-values resolve to a node
/// of `d` by label or local name, otherwise they become literals.
CrowdQuad fold_into_kb(const AggregatedAnswer& answer, const Question& question, const Dataset& d, CrowdKB& kb);

}  // namespace rdfhunter
