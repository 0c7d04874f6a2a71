#include "rdfhunter/microtask.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <map>

namespace rdfhunter {

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

std::string question_id_for(const Term& s, const Term& p) {
  return "q-" + hex64(fnv1a64(to_ntriples(s) + ' ' + to_ntriples(p)));
}

Question make_question(const Dataset& d, const Term& s, const Term& p) {
  Question q;
  q.id = question_id_for(s, p);
  q.subject = s;
  q.predicate = p;
  q.subject_label = d.label_of(s);
  q.predicate_label = d.label_of(p);
  q.existence_text = "Does " + q.subject_label + " have a " + q.predicate_label + "?";
  q.value_text = "What is the " + q.predicate_label + " of " + q.subject_label + "?";
  return q;
}

std::string_view to_string(TaskStatus s) {
  switch (s) {
    case TaskStatus::Pending: return "pending";
    case TaskStatus::Collecting: return "collecting";
    case TaskStatus::Resolved: return "resolved";
  }
  return "?";
}

std::vector<Microtask> build_tasks(std::span<const CrowdRequest> requests, const Dataset& d,
                                   std::size_t max_per_task) {
  if (max_per_task == 0) throw std::invalid_argument("max_per_task must be at least 1");
  std::vector<Microtask> tasks;
  for (const auto& r : requests) {
    if (tasks.empty() || tasks.back().questions.size() == max_per_task) tasks.emplace_back();
    tasks.back().questions.push_back(make_question(d, r.subject, r.predicate));
  }
  for (auto& t : tasks) {
    std::string ids;
    for (const auto& q : t.questions) ids += q.id;
    t.id = "t-" + hex64(fnv1a64(ids));
  }
  return tasks;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::NotSure: return "not_sure";
  }
  return "?";
}

Verdict parse_verdict(std::string_view s) {
  if (s == "yes") return Verdict::Yes;
  if (s == "no") return Verdict::No;
  if (s == "not_sure") return Verdict::NotSure;
  throw std::invalid_argument("verdict must be yes, no, or not_sure");
}

void Judgment::validate() const {
  if (question_id.empty()) throw std::invalid_argument("judgment needs a question_id");
  if (verdict == Verdict::Yes && (!value || value->empty())) {
    throw std::invalid_argument("a yes verdict needs a non-empty value");
  }
  if (!(confidence >= 0.0 && confidence <= 1.0)) throw std::invalid_argument("confidence must lie in [0,1]");
  if (familiarity < 1 || familiarity > 7) throw std::invalid_argument("familiarity must be an integer in 1..7");
}

double normalized_familiarity(int raw) { return (static_cast<double>(raw) - 1.0) / 6.0; }

double membership_degree(double mean_confidence, double mean_normalized_familiarity) {
  return (mean_confidence + mean_normalized_familiarity) / 2.0;
}

AggregatedAnswer aggregate_judgments(std::span<const Judgment> judgments, std::size_t quota) {
  if (judgments.size() < quota) {
    throw AggregationError("need at least " + std::to_string(quota) + " judgments, got " +
                           std::to_string(judgments.size()));
  }
  if (judgments.empty()) throw AggregationError("no judgments to aggregate");
  const std::string& qid = judgments.front().question_id;
  std::array<std::size_t, 3> counts{};
  for (const auto& j : judgments) {
    j.validate();
    if (j.question_id != qid) throw AggregationError("judgments refer to different questions");
    ++counts[static_cast<std::size_t>(j.verdict)];
  }
  if (counts[0] == counts[1] && counts[1] == counts[2]) {
    throw AggregationError("three-way verdict tie for question " + qid);
  }
  // Enum order is the tie-break order: yes, no, not sure.
  const auto winner = static_cast<Verdict>(std::max_element(counts.begin(), counts.end()) - counts.begin());

  AggregatedAnswer out;
  out.question_id = qid;
  out.judgment_count = judgments.size();
  out.target = winner == Verdict::Yes ? KbSet::Plus : winner == Verdict::No ? KbSet::Minus : KbSet::Tilde;

  double conf = 0.0;
  double fam = 0.0;
  std::map<std::string, std::size_t> values;
  for (const auto& j : judgments) {
    if (j.verdict != winner) continue;
    conf += j.confidence;
    fam += normalized_familiarity(j.familiarity);
    if (winner == Verdict::Yes) ++values[*j.value];
  }
  const auto n = static_cast<double>(counts[static_cast<std::size_t>(winner)]);
  out.m = membership_degree(conf / n, fam / n);

  if (winner == Verdict::Yes) {
    // std::map iterates in string order, so max_element keeps the smallest on ties.
    auto best = std::max_element(values.begin(), values.end(),
                                 [](const auto& a, const auto& b) { return a.second < b.second; });
    out.value = best->first;
  }
  return out;
}

CrowdQuad fold_into_kb(const AggregatedAnswer& answer, const Question& question, const Dataset& d, CrowdKB& kb) {
  CrowdQuad quad{question.subject, question.predicate, std::nullopt, answer.m};
  if (answer.target == KbSet::Plus) {
    if (answer.object) {
      quad.object = answer.object;
    } else if (answer.value) {
      quad.object = d.resolve_label(*answer.value).value_or(Term::literal(*answer.value));
    } else {
      throw ShapeError("a yes answer needs a value");
    }
  } else if (answer.target == KbSet::Tilde) {
    quad.object = answer.object;
  }
  kb.insert(answer.target, quad);
  return quad;
}

}  // namespace rdfhunter
