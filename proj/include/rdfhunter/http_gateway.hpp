#pragma once

#include <condition_variable>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "rdfhunter/gateway.hpp"

namespace httplib {
class Server;
}

namespace rdfhunter {

/// Live gateway for human workers.
///
///   GET  /tasks/next  -> {"task_id", "questions": [{"question_id", "existence_text", "value_text", ...}]}
///                        or 204 when nothing is open
///   POST /judgments   <- {"question_id", "verdict": "yes"|"no"|"not_sure", "value"?,
///                         "confidence"? (default 1.0), "familiarity": 1..7}
///   GET  /status      -> {"pending", "collecting", "resolved"}
///
/// Judgments from concurrent workers are serialized by one mutex. A question
/// is aggregated as soon as it holds `quota` judgments; a three-way verdict
/// tie leaves it open for more.
class HttpGateway : public CrowdGateway {
 public:
  struct Options {
    std::string host = "127.0.0.1";
    int port = 0;  // 0 picks a free port
    std::size_t quota = kDefaultJudgmentQuota;
    std::optional<std::filesystem::path> ui_dir;  // static files served under /
  };

  struct Status {
    std::size_t pending = 0;
    std::size_t collecting = 0;
    std::size_t resolved = 0;
  };

  explicit HttpGateway(Options opts);
  ~HttpGateway() override;
  HttpGateway(const HttpGateway&) = delete;
  HttpGateway& operator=(const HttpGateway&) = delete;

  /// Binds and starts the listener thread; returns the bound port. Throws
  /// std::runtime_error when the address cannot be bound.
  int start();
  void stop();
  int port() const noexcept { return port_; }

  std::vector<std::string> submit(std::span<const Microtask> tasks) override;
  std::vector<CollectedAnswer> collect(std::span<const std::string> task_ids, Timeout timeout) override;

  /// The open task served least often so far (earliest submitted on ties).
  std::optional<Microtask> next_task();

  /// Throws std::invalid_argument for malformed judgments and
  /// std::out_of_range for unknown question ids.
  void post_judgment(const Judgment& j);

  Status status() const;

 private:
  struct QuestionState {
    Question question;
    std::string task_id;
    std::vector<Judgment> judgments;
    std::optional<AggregatedAnswer> answer;
  };
  struct TaskState {
    Microtask task;
    std::size_t served = 0;
    std::size_t order = 0;
  };

  TaskStatus status_of(const TaskState& t) const;
  void install_routes();

  Options opts_;
  std::unique_ptr<httplib::Server> server_;
  std::thread listener_;
  int port_ = 0;

  mutable std::mutex mu_;
  std::condition_variable resolved_cv_;
  std::map<std::string, TaskState> tasks_;
  std::map<std::string, QuestionState> questions_;
  std::size_t next_order_ = 0;
};

/// Parses the POST /judgments body. Throws std::invalid_argument with the
/// reason on malformed input.
Judgment parse_judgment_json(std::string_view body);

}  // namespace rdfhunter
