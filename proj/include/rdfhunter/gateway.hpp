#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rdfhunter/microtask.hpp"

namespace rdfhunter {

struct CollectedAnswer {
  Question question;
  AggregatedAnswer answer;
};

using Timeout = std::optional<std::chrono::milliseconds>;  // nullopt waits forever

/// Transport between the executor and a crowd.
class CrowdGateway {
 public:
  virtual ~CrowdGateway() = default;

  /// Hands tasks to the crowd; returns their ids.
  virtual std::vector<std::string> submit(std::span<const Microtask> tasks) = 0;

  /// Blocks until every question of the given tasks has an aggregated answer
  /// that met the judgment quota, or until the timeout expires. Returns what
  /// is available; missing questions are unanswered.
  virtual std::vector<CollectedAnswer> collect(std::span<const std::string> task_ids, Timeout timeout) = 0;
};

/// A crowd that never answers. Keeps the submitted batches for inspection.
class SilentGateway : public CrowdGateway {
 public:
  std::vector<std::string> submit(std::span<const Microtask> tasks) override;
  std::vector<CollectedAnswer> collect(std::span<const std::string> task_ids, Timeout timeout) override;

  const std::vector<std::vector<Microtask>>& batches() const noexcept { return batches_; }

 private:
  std::vector<std::vector<Microtask>> batches_;
};

struct ConfidenceLaw {
  double mean = 0.93;
  double spread = 0.07;  // standard deviation; draws are clamped to [0, 1]
};

struct SimCrowdConfig {
  std::shared_ptr<const Dataset> oracle;  // the gold graph
  double error_rate = 0.0;
  double not_sure_rate = 0.0;
  ConfidenceLaw confidence;
  std::array<double, 7> familiarity_weights{1, 1, 1, 1, 1, 1, 1};  // for scores 1..7
  std::uint64_t seed = 0;
  std::size_t judgments_per_question = kDefaultJudgmentQuota;

  void validate() const;
};

/// Judgments number `first_draw` .. `first_draw + count - 1` for q. Each draw
/// depends only on (seed, question id, draw index), and every draw consumes
/// the same random numbers whatever the rates are, so a judgment that is
/// wrong at error rate e stays wrong at any higher rate.
std::vector<Judgment> sim_judgments(const SimCrowdConfig& cfg, const Question& q, std::size_t first_draw,
                                    std::size_t count);

/// judgments_per_question judgments for q.
std::vector<Judgment> sim_answer(const SimCrowdConfig& cfg, const Question& q);

/// A simulated workforce answering from an oracle graph.
class SimulatedGateway : public CrowdGateway {
 public:
  explicit SimulatedGateway(SimCrowdConfig cfg);

  std::vector<std::string> submit(std::span<const Microtask> tasks) override;
  std::vector<CollectedAnswer> collect(std::span<const std::string> task_ids, Timeout timeout) override;

  std::size_t judgments_drawn() const noexcept { return judgments_drawn_; }

 private:
  SimCrowdConfig cfg_;
  std::map<std::string, Microtask> tasks_;
  std::size_t judgments_drawn_ = 0;
};

/// One recorded aggregated answer.
struct ReplayRecord {
  Term subject;
  Term predicate;
  KbSet target = KbSet::Tilde;
  std::optional<Term> object;
  double m = 0.0;

  bool operator==(const ReplayRecord&) const = default;
};

/// Line records ["<s>", "<p>", "plus|minus|tilde", "<o>" | "_:o", "m"].
std::vector<ReplayRecord> read_replay(std::istream& in);
std::vector<ReplayRecord> load_replay(const std::filesystem::path& path);
void write_replay(std::ostream& out, std::span<const ReplayRecord> records);

/// Recorded answers for the questions whose (subject, predicate) has a
/// record; the others stay unanswered. When a pair was recorded more than
/// once the last record wins.
std::vector<CollectedAnswer> replay_collect(std::span<const ReplayRecord> records,
                                            std::span<const Question> questions,
                                            std::size_t quota = kDefaultJudgmentQuota);

class ReplayGateway : public CrowdGateway {
 public:
  explicit ReplayGateway(std::vector<ReplayRecord> records, std::size_t quota = kDefaultJudgmentQuota)
      : records_(std::move(records)), quota_(quota) {}

  std::vector<std::string> submit(std::span<const Microtask> tasks) override;
  std::vector<CollectedAnswer> collect(std::span<const std::string> task_ids, Timeout timeout) override;

 private:
  std::vector<ReplayRecord> records_;
  std::size_t quota_;
  std::map<std::string, Microtask> tasks_;
};

}  // namespace rdfhunter
