#include "rdfhunter/gateway.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>

#include <json.hpp>

namespace rdfhunter {

namespace {

constexpr std::string_view kExistentialToken = "_:o";
constexpr std::size_t kMaxTieBreakDraws = 64;

std::string label_or_literal(const Dataset& d, const Term& t) { return d.label_of(t); }

}  // namespace

std::vector<std::string> SilentGateway::submit(std::span<const Microtask> tasks) {
  batches_.emplace_back(tasks.begin(), tasks.end());
  std::vector<std::string> ids;
  for (const auto& t : tasks) ids.push_back(t.id);
  return ids;
}

std::vector<CollectedAnswer> SilentGateway::collect(std::span<const std::string>, Timeout) { return {}; }

void SimCrowdConfig::validate() const {
  if (!oracle) throw std::invalid_argument("simulated crowd needs an oracle data set");
  if (!(error_rate >= 0.0 && error_rate <= 1.0)) throw std::invalid_argument("error_rate must lie in [0,1]");
  if (!(not_sure_rate >= 0.0 && not_sure_rate <= 1.0)) {
    throw std::invalid_argument("not_sure_rate must lie in [0,1]");
  }
  if (error_rate + not_sure_rate > 1.0 + 1e-12) {
    throw std::invalid_argument("error_rate + not_sure_rate must not exceed 1");
  }
  if (!(confidence.mean >= 0.0 && confidence.mean <= 1.0) || !(confidence.spread >= 0.0)) {
    throw std::invalid_argument("confidence law needs mean in [0,1] and non-negative spread");
  }
  double total = 0.0;
  for (double w : familiarity_weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("familiarity weights must be non-negative");
    total += w;
  }
  if (total <= 0.0) throw std::invalid_argument("familiarity weights must not all be zero");
  if (judgments_per_question == 0) throw std::invalid_argument("judgments_per_question must be positive");
}

std::vector<Judgment> sim_judgments(const SimCrowdConfig& cfg, const Question& q, std::size_t first_draw,
                                    std::size_t count) {
  cfg.validate();
  const Dataset& oracle = *cfg.oracle;
  const std::vector<Term>& gold = oracle.objects(q.subject, q.predicate);

  // Other objects of the same predicate serve as plausible wrong answers.
  std::vector<Term> distractors;
  for (const auto& t : oracle.match(std::nullopt, q.predicate, std::nullopt)) {
    if (std::find(gold.begin(), gold.end(), t.object) == gold.end() &&
        std::find(distractors.begin(), distractors.end(), t.object) == distractors.end()) {
      distractors.push_back(t.object);
    }
  }

  const std::uint64_t qhash = fnv1a64(q.id);
  std::vector<Judgment> out;
  out.reserve(count);
  for (std::size_t draw = first_draw; draw < first_draw + count; ++draw) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(qhash), static_cast<std::uint32_t>(qhash >> 32),
                      static_cast<std::uint32_t>(draw), static_cast<std::uint32_t>(draw >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> conf_law(cfg.confidence.mean, cfg.confidence.spread > 0 ? cfg.confidence.spread : 1.0);
    std::discrete_distribution<int> fam_law(cfg.familiarity_weights.begin(), cfg.familiarity_weights.end());

    // Fixed consumption order keeps draws coupled across configurations.
    const double u_kind = unit(rng);
    const double u_wrong = unit(rng);
    const double u_gold = unit(rng);
    const double u_distractor = unit(rng);
    const double conf_draw = conf_law(rng);
    const int fam_draw = fam_law(rng) + 1;

    Judgment j;
    j.question_id = q.id;
    j.confidence = cfg.confidence.spread > 0 ? std::clamp(conf_draw, 0.0, 1.0) : cfg.confidence.mean;
    j.familiarity = fam_draw;

    auto pick = [](const std::vector<Term>& v, double u) -> const Term& {
      return v[std::min(v.size() - 1, static_cast<std::size_t>(u * static_cast<double>(v.size())))];
    };
    auto wrong_value = [&]() {
      if (!distractors.empty()) return label_or_literal(oracle, pick(distractors, u_distractor));
      return "Unknown " + q.predicate_label;
    };

    if (u_kind < cfg.not_sure_rate) {
      j.verdict = Verdict::NotSure;
    } else if (u_kind < cfg.not_sure_rate + cfg.error_rate) {
      if (!gold.empty() && u_wrong < 0.5) {
        j.verdict = Verdict::No;
      } else {
        j.verdict = Verdict::Yes;
        j.value = wrong_value();
      }
    } else if (!gold.empty()) {
      j.verdict = Verdict::Yes;
      j.value = label_or_literal(oracle, pick(gold, u_gold));
    } else {
      j.verdict = Verdict::No;
    }
    out.push_back(std::move(j));
  }
  return out;
}

std::vector<Judgment> sim_answer(const SimCrowdConfig& cfg, const Question& q) {
  return sim_judgments(cfg, q, 0, cfg.judgments_per_question);
}

SimulatedGateway::SimulatedGateway(SimCrowdConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

std::vector<std::string> SimulatedGateway::submit(std::span<const Microtask> tasks) {
  std::vector<std::string> ids;
  for (const auto& t : tasks) {
    tasks_[t.id] = t;
    ids.push_back(t.id);
  }
  return ids;
}

std::vector<CollectedAnswer> SimulatedGateway::collect(std::span<const std::string> task_ids, Timeout) {
  std::vector<CollectedAnswer> out;
  for (const auto& id : task_ids) {
    auto it = tasks_.find(id);
    if (it == tasks_.end()) continue;
    for (const auto& q : it->second.questions) {
      std::vector<Judgment> js = sim_answer(cfg_, q);
      // A three-way tie keeps the question open; ask one more worker.
      while (true) {
        try {
          out.push_back(CollectedAnswer{q, aggregate_judgments(js, cfg_.judgments_per_question)});
          break;
        } catch (const AggregationError&) {
          if (js.size() >= cfg_.judgments_per_question + kMaxTieBreakDraws) break;
          auto more = sim_judgments(cfg_, q, js.size(), 1);
          js.push_back(std::move(more.front()));
        }
      }
      judgments_drawn_ += js.size();
    }
    it->second.status = TaskStatus::Resolved;
  }
  return out;
}

std::vector<ReplayRecord> read_replay(std::istream& in) {
  std::vector<ReplayRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto bad = [&](const std::string& what) {
      return ParseError("replay line " + std::to_string(line_no) + ": " + what, line_no);
    };
    nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_array() || rec.size() != 5) throw bad("expected a 5-field record");
    for (const auto& f : rec) {
      if (!f.is_string()) throw bad("fields must be strings");
    }
    try {
      ReplayRecord r{parse_term(rec[0].get<std::string>()), parse_term(rec[1].get<std::string>()),
                     parse_kb_set(rec[2].get<std::string>()), std::nullopt,
                     parse_double(rec[4].get<std::string>())};
      const auto obj = rec[3].get<std::string>();
      if (obj != kExistentialToken) r.object = parse_term(obj);
      if (r.target == KbSet::Plus && !r.object) throw std::invalid_argument("plus record needs an object");
      if (!(r.m >= 0.0 && r.m <= 1.0)) throw std::invalid_argument("m must lie in [0,1]");
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw bad(e.what());
    }
  }
  return out;
}

std::vector<ReplayRecord> load_replay(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_replay(in);
}

void write_replay(std::ostream& out, std::span<const ReplayRecord> records) {
  for (const auto& r : records) {
    nlohmann::json rec = nlohmann::json::array(
        {to_ntriples(r.subject), to_ntriples(r.predicate), to_string(r.target),
         r.object ? to_ntriples(*r.object) : std::string(kExistentialToken), format_double(r.m)});
    out << rec.dump() << '\n';
  }
}

std::vector<CollectedAnswer> replay_collect(std::span<const ReplayRecord> records,
                                            std::span<const Question> questions, std::size_t quota) {
  std::map<std::pair<Term, Term>, const ReplayRecord*> by_key;
  for (const auto& r : records) by_key[{r.subject, r.predicate}] = &r;
  std::vector<CollectedAnswer> out;
  for (const auto& q : questions) {
    auto it = by_key.find({q.subject, q.predicate});
    if (it == by_key.end()) continue;
    const ReplayRecord& r = *it->second;
    AggregatedAnswer a;
    a.question_id = q.id;
    a.target = r.target;
    a.object = r.object;
    a.m = r.m;
    a.judgment_count = quota;
    out.push_back(CollectedAnswer{q, std::move(a)});
  }
  return out;
}

std::vector<std::string> ReplayGateway::submit(std::span<const Microtask> tasks) {
  std::vector<std::string> ids;
  for (const auto& t : tasks) {
    tasks_[t.id] = t;
    ids.push_back(t.id);
  }
  return ids;
}

std::vector<CollectedAnswer> ReplayGateway::collect(std::span<const std::string> task_ids, Timeout) {
  std::vector<Question> questions;
  for (const auto& id : task_ids) {
    if (auto it = tasks_.find(id); it != tasks_.end()) {
      questions.insert(questions.end(), it->second.questions.begin(), it->second.questions.end());
    }
  }
  return replay_collect(records_, questions, quota_);
}

}  // namespace rdfhunter
