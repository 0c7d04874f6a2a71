#include "rdfhunter/http_gateway.hpp"

#include <stdexcept>

#include <httplib.h>
#include <json.hpp>

namespace rdfhunter {

using nlohmann::json;

Judgment parse_judgment_json(std::string_view body) {
  json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw std::invalid_argument("body must be a JSON object");
  Judgment j;
  auto qid = doc.find("question_id");
  if (qid == doc.end() || !qid->is_string()) throw std::invalid_argument("question_id must be a string");
  j.question_id = qid->get<std::string>();
  auto verdict = doc.find("verdict");
  if (verdict == doc.end() || !verdict->is_string()) throw std::invalid_argument("verdict must be a string");
  j.verdict = parse_verdict(verdict->get<std::string>());
  if (auto v = doc.find("value"); v != doc.end() && !v->is_null()) {
    if (!v->is_string()) throw std::invalid_argument("value must be a string");
    j.value = v->get<std::string>();
  }
  if (auto c = doc.find("confidence"); c != doc.end() && !c->is_null()) {
    if (!c->is_number()) throw std::invalid_argument("confidence must be a number");
    j.confidence = c->get<double>();
  }
  auto fam = doc.find("familiarity");
  if (fam == doc.end() || !fam->is_number_integer()) throw std::invalid_argument("familiarity must be an integer");
  j.familiarity = fam->get<int>();
  j.validate();
  return j;
}

HttpGateway::HttpGateway(Options opts) : opts_(std::move(opts)), server_(std::make_unique<httplib::Server>()) {
  if (opts_.quota == 0) throw std::invalid_argument("judgment quota must be positive");
  // httplib's default sets SO_REUSEPORT, which lets a second server share a
  // busy port silently.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  install_routes();
}

HttpGateway::~HttpGateway() { stop(); }

void HttpGateway::install_routes() {
  server_->set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers", "Content-Type"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  server_->Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  server_->Get("/tasks/next", [this](const httplib::Request&, httplib::Response& res) {
    auto task = next_task();
    if (!task) {
      res.status = 204;
      return;
    }
    json qs = json::array();
    for (const auto& q : task->questions) {
      qs.push_back({{"question_id", q.id},
                    {"existence_text", q.existence_text},
                    {"value_text", q.value_text},
                    {"subject_label", q.subject_label},
                    {"predicate_label", q.predicate_label}});
    }
    res.set_content(json{{"task_id", task->id}, {"questions", qs}}.dump(), "application/json");
  });

  server_->Post("/judgments", [this](const httplib::Request& req, httplib::Response& res) {
    auto reject = [&](int code, const std::string& reason) {
      res.status = code;
      res.set_content(json{{"error", reason}}.dump(), "application/json");
    };
    try {
      post_judgment(parse_judgment_json(req.body));
      res.status = 202;
      res.set_content(R"({"accepted":true})", "application/json");
    } catch (const std::out_of_range& e) {
      reject(404, e.what());
    } catch (const std::invalid_argument& e) {
      reject(400, e.what());
    } catch (const std::logic_error& e) {
      reject(409, e.what());
    }
  });

  server_->Get("/status", [this](const httplib::Request&, httplib::Response& res) {
    Status s = status();
    res.set_content(json{{"pending", s.pending}, {"collecting", s.collecting}, {"resolved", s.resolved}}.dump(),
                    "application/json");
  });

  if (opts_.ui_dir && !server_->set_mount_point("/", opts_.ui_dir->string())) {
    throw std::runtime_error("cannot serve UI directory " + opts_.ui_dir->string());
  }
}

int HttpGateway::start() {
  if (listener_.joinable()) return port_;
  if (opts_.port == 0) {
    port_ = server_->bind_to_any_port(opts_.host);
    if (port_ < 0) throw std::runtime_error("cannot bind " + opts_.host);
  } else {
    if (!server_->bind_to_port(opts_.host, opts_.port)) {
      throw std::runtime_error("cannot bind " + opts_.host + ":" + std::to_string(opts_.port));
    }
    port_ = opts_.port;
  }
  listener_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void HttpGateway::stop() {
  if (!listener_.joinable()) return;
  server_->stop();
  listener_.join();
}

TaskStatus HttpGateway::status_of(const TaskState& t) const {
  bool any = false;
  bool all = true;
  for (const auto& q : t.task.questions) {
    const QuestionState& qs = questions_.at(q.id);
    any = any || !qs.judgments.empty();
    all = all && qs.answer.has_value();
  }
  if (all) return TaskStatus::Resolved;
  return any ? TaskStatus::Collecting : TaskStatus::Pending;
}

std::vector<std::string> HttpGateway::submit(std::span<const Microtask> tasks) {
  std::vector<std::string> ids;
  std::lock_guard lock(mu_);
  for (const auto& t : tasks) {
    ids.push_back(t.id);
    if (tasks_.contains(t.id)) continue;
    tasks_[t.id] = TaskState{t, 0, next_order_++};
    for (const auto& q : t.questions) questions_.try_emplace(q.id, QuestionState{q, t.id, {}, std::nullopt});
  }
  return ids;
}

std::vector<CollectedAnswer> HttpGateway::collect(std::span<const std::string> task_ids, Timeout timeout) {
  std::unique_lock lock(mu_);
  auto done = [&] {
    for (const auto& id : task_ids) {
      auto it = tasks_.find(id);
      if (it != tasks_.end() && status_of(it->second) != TaskStatus::Resolved) return false;
    }
    return true;
  };
  if (timeout) {
    resolved_cv_.wait_for(lock, *timeout, done);
  } else {
    resolved_cv_.wait(lock, done);
  }
  std::vector<CollectedAnswer> out;
  for (const auto& id : task_ids) {
    auto it = tasks_.find(id);
    if (it == tasks_.end()) continue;
    for (const auto& q : it->second.task.questions) {
      const QuestionState& qs = questions_.at(q.id);
      if (qs.answer) out.push_back(CollectedAnswer{qs.question, *qs.answer});
    }
  }
  return out;
}

std::optional<Microtask> HttpGateway::next_task() {
  std::lock_guard lock(mu_);
  TaskState* best = nullptr;
  for (auto& [id, t] : tasks_) {
    if (status_of(t) == TaskStatus::Resolved) continue;
    if (best == nullptr || t.served < best->served || (t.served == best->served && t.order < best->order)) {
      best = &t;
    }
  }
  if (best == nullptr) return std::nullopt;
  ++best->served;
  Microtask copy = best->task;
  copy.status = status_of(*best);
  return copy;
}

void HttpGateway::post_judgment(const Judgment& j) {
  j.validate();
  {
    std::lock_guard lock(mu_);
    auto it = questions_.find(j.question_id);
    if (it == questions_.end()) throw std::out_of_range("unknown question_id " + j.question_id);
    QuestionState& qs = it->second;
    if (qs.answer) throw std::logic_error("question " + j.question_id + " is already resolved");
    qs.judgments.push_back(j);
    if (qs.judgments.size() >= opts_.quota) {
      try {
        qs.answer = aggregate_judgments(qs.judgments, opts_.quota);
      } catch (const AggregationError&) {
        // Three-way tie: wait for another judgment.
      }
    }
  }
  resolved_cv_.notify_all();
}

HttpGateway::Status HttpGateway::status() const {
  std::lock_guard lock(mu_);
  Status s;
  for (const auto& [id, t] : tasks_) {
    switch (status_of(t)) {
      case TaskStatus::Pending:
        ++s.pending;
        break;
      case TaskStatus::Collecting:
        ++s.collecting;
        break;
      case TaskStatus::Resolved:
        ++s.resolved;
        break;
    }
  }
  return s;
}

}  // namespace rdfhunter
