#include "rdfhunter/app.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "rdfhunter/http_gateway.hpp"

namespace rdfhunter {

using nlohmann::json;

namespace {

std::string fmt(double v) { return format_double(v); }

json scores_json(const std::optional<Scores>& s) {
  json j = json::object();
  if (!s) return j;
  auto put = [&](const char* key, const std::optional<double>& v) { j[key] = v ? json(*v) : json(nullptr); };
  put("precision", s->precision);
  put("recall", s->recall);
  put("f", s->f);
  return j;
}

std::string na(const std::optional<double>& v) { return v ? fmt(*v) : "n/a"; }

std::pair<std::string, int> split_bind(const std::string& bind) {
  auto colon = bind.rfind(':');
  if (colon == std::string::npos) throw std::invalid_argument("--bind expects host:port");
  std::string host = bind.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(bind.substr(colon + 1));
  } catch (const std::exception&) {
    throw std::invalid_argument("--bind expects host:port");
  }
  if (port < 0 || port > 65535) throw std::invalid_argument("--bind port out of range");
  return {host.empty() ? "127.0.0.1" : host, port};
}

struct Inputs {
  Dataset data;
  BGPQuery query;
  CrowdKB kb;
  std::optional<GoldStandard> gold;
};

Inputs load_inputs(const RunOptions& opts) {
  Inputs in{load_ntriples(opts.data), load_query(opts.query), {}, std::nullopt};
  if (opts.kb_in) in.kb = load_kb(*opts.kb_in);
  if (opts.gold) in.gold = load_gold(*opts.gold);
  return in;
}

int finish(const RunOptions& opts, Inputs& in, CrowdGateway& gateway, const ExecutionConfig& cfg, std::ostream& out) {
  RunReport report = run_query(in.query, in.data, in.kb, cfg, gateway, in.gold ? &*in.gold : nullptr);
  print_report(out, report, opts.format);
  if (opts.record) {
    std::ofstream rec(*opts.record, std::ios::binary);
    if (!rec) throw std::runtime_error("cannot write " + opts.record->string());
    write_replay(rec, to_replay_records(report.folded));
  }
  if (opts.kb_out) save_kb(in.kb, *opts.kb_out);
  return report.unanswered.empty() ? kExitOk : kExitIncomplete;
}

}  // namespace

std::string_view to_string(CrowdMode m) {
  switch (m) {
    case CrowdMode::Off:
      return "off";
    case CrowdMode::Sim:
      return "sim";
    case CrowdMode::Replay:
      return "replay";
    case CrowdMode::Http:
      return "http";
  }
  return "?";
}

CrowdMode parse_crowd_mode(std::string_view s) {
  if (s == "off") return CrowdMode::Off;
  if (s == "sim") return CrowdMode::Sim;
  if (s == "replay") return CrowdMode::Replay;
  if (s == "http") return CrowdMode::Http;
  throw std::invalid_argument("unknown crowd mode '" + std::string(s) + "'");
}

OutputFormat parse_output_format(std::string_view s) {
  if (s == "text") return OutputFormat::Text;
  if (s == "jsonl") return OutputFormat::Jsonl;
  throw std::invalid_argument("unknown output format '" + std::string(s) + "'");
}

RunReport run_query(const BGPQuery& q, const Dataset& d, CrowdKB& kb, const ExecutionConfig& cfg,
                    CrowdGateway& gateway, const GoldStandard* gold) {
  ExecutionResult r = execute(q, d, kb, cfg, gateway);
  RunReport report;
  report.answers = std::move(r.answers);
  for (const auto& v : q.output_variables()) report.variables.push_back(v.name);
  for (const auto& t : r.tasks) report.crowdsourced_count += t.questions.size();
  report.task_count = r.tasks.size();
  report.response_count = r.responses;
  report.gate_trace = std::move(r.trace);
  report.unanswered = std::move(r.unanswered);
  report.folded = std::move(r.folded);
  if (gold) report.metrics = score(crowd_answers(report.folded), *gold);
  return report;
}

void print_report(std::ostream& out, const RunReport& report, OutputFormat format) {
  if (format == OutputFormat::Jsonl) {
    for (const auto& mu : report.answers) {
      json b = json::object();
      for (const auto& v : report.variables) {
        const Term* t = mu.get(v);
        b[v] = t ? json(to_ntriples(*t)) : json(nullptr);
      }
      out << json{{"type", "answer"}, {"bindings", b}}.dump() << '\n';
    }
    for (const auto& g : report.gate_trace) {
      out << json{{"type", "gate"},
                  {"subject", to_ntriples(g.subject)},
                  {"predicate", to_ntriples(g.predicate)},
                  {"comp_d", g.comp_d},
                  {"comp_kb", g.comp_kb},
                  {"D", g.disagreement},
                  {"U", g.uncertainty},
                  {"P", g.probability},
                  {"decision", to_string(g.decision)}}
                 .dump()
          << '\n';
    }
    for (const auto& q : report.unanswered) {
      out << json{{"type", "unanswered"}, {"question_id", q.id}, {"text", q.existence_text}}.dump() << '\n';
    }
    json summary{{"type", "summary"},
                 {"answers", report.answers.size()},
                 {"crowdsourced", report.crowdsourced_count},
                 {"tasks", report.task_count},
                 {"responses", report.response_count},
                 {"complete", report.unanswered.empty()}};
    if (report.metrics) summary["metrics"] = scores_json(report.metrics);
    out << summary.dump() << '\n';
    return;
  }

  for (std::size_t i = 0; i < report.variables.size(); ++i) out << (i ? "\t" : "") << '?' << report.variables[i];
  out << '\n';
  for (const auto& mu : report.answers) {
    for (std::size_t i = 0; i < report.variables.size(); ++i) {
      const Term* t = mu.get(report.variables[i]);
      out << (i ? "\t" : "") << (t ? to_ntriples(*t) : "");
    }
    out << '\n';
  }
  for (const auto& g : report.gate_trace) {
    out << "# gate " << to_ntriples(g.subject) << ' ' << to_ntriples(g.predicate) << " comp_d=" << fmt(g.comp_d)
        << " comp_kb=" << fmt(g.comp_kb) << " D=" << fmt(g.disagreement) << " U=" << fmt(g.uncertainty)
        << " P=" << fmt(g.probability) << ' ' << to_string(g.decision) << '\n';
  }
  for (const auto& q : report.unanswered) out << "# unanswered " << q.id << ' ' << q.existence_text << '\n';
  out << "# answers " << report.answers.size() << " crowdsourced " << report.crowdsourced_count << " tasks "
      << report.task_count << " responses " << report.response_count << '\n';
  if (report.metrics) {
    out << "# precision " << na(report.metrics->precision) << " recall " << na(report.metrics->recall) << " f "
        << na(report.metrics->f) << '\n';
  }
}

std::vector<ReplayRecord> to_replay_records(std::span<const FoldedAnswer> folded) {
  std::vector<ReplayRecord> out;
  for (const auto& f : folded) {
    out.push_back(ReplayRecord{f.quad.subject, f.quad.predicate, f.answer.target, f.quad.object, f.quad.m});
  }
  return out;
}

std::optional<Term> resolve_term_arg(const Dataset& d, std::string_view text, bool as_class) {
  if (text.empty()) return std::nullopt;
  if (text.front() == '<') return parse_term(text);
  if (text.find("://") != std::string_view::npos) return Term::iri(std::string(text));
  std::vector<Term> candidates;
  if (as_class) {
    candidates = d.classes();
  } else {
    for (const auto& t : d.triples()) {
      if (std::find(candidates.begin(), candidates.end(), t.predicate) == candidates.end()) {
        candidates.push_back(t.predicate);
      }
    }
  }
  std::optional<Term> best;
  for (const auto& c : candidates) {
    if (local_name(c.value) == text && (!best || c < *best)) best = c;
  }
  return best;
}

void profile(const Dataset& d, const CrowdKB* kb, const ProfileOptions& opts, std::ostream& out) {
  QualityModel model(d, opts.aggregation);
  const Term rdf_type = Term::iri(std::string(vocab::kRdfType));

  std::vector<Term> classes;
  if (opts.cls) {
    auto c = resolve_term_arg(d, *opts.cls, true);
    if (!c) throw std::invalid_argument("unknown class '" + *opts.cls + "'");
    classes.push_back(*c);
  } else {
    classes = d.classes();
  }
  std::optional<Term> predicate;
  if (opts.predicate) {
    predicate = resolve_term_arg(d, *opts.predicate, false);
    // An absent predicate still profiles: every subject is then complete.
    if (!predicate) predicate = Term::iri(*opts.predicate);
  }

  std::vector<Term> subjects;
  for (const auto& c : classes) {
    for (const auto& s : d.instances_of(c)) {
      if (std::find(subjects.begin(), subjects.end(), s) == subjects.end()) subjects.push_back(s);
    }
  }
  auto predicates_for = [&](const Term& s) {
    if (predicate) return std::vector<Term>{*predicate};
    std::vector<Term> ps;
    for (auto& p : d.predicates_of(s)) {
      if (p != rdf_type) ps.push_back(std::move(p));
    }
    return ps;
  };

  for (const auto& c : classes) {
    std::vector<Term> ps;
    for (const auto& s : d.instances_of(c)) {
      for (auto& p : predicates_for(s)) {
        if (std::find(ps.begin(), ps.end(), p) == ps.end()) ps.push_back(std::move(p));
      }
    }
    for (const auto& p : ps) {
      out << "# class " << to_ntriples(c) << " predicate " << to_ntriples(p) << " am "
          << model.aggregated_multiplicity(c, p) << '\n';
    }
  }
  out << "subject\tpredicate\tm_d\tam_best\tcomp_d\tcomp_kb_plus\n";
  for (const auto& s : subjects) {
    for (const auto& p : predicates_for(s)) {
      CompletenessReport r = model.report(s, p, kb);
      out << to_ntriples(r.subject) << '\t' << to_ntriples(r.predicate) << '\t' << r.m_d << '\t' << r.am_best << '\t'
          << fmt(r.comp_d) << '\t' << fmt(r.comp_kb_plus) << '\n';
    }
  }
}

int cmd_profile(const std::filesystem::path& data, const std::optional<std::filesystem::path>& kb_in,
                const ProfileOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    Dataset d = load_ntriples(data);
    std::optional<CrowdKB> kb;
    if (kb_in) kb = load_kb(*kb_in);
    profile(d, kb ? &*kb : nullptr, opts, out);
    return kExitOk;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    if (opts.crowd == CrowdMode::Http) return cmd_serve(opts, out, err);
    Inputs in = load_inputs(opts);
    ExecutionConfig cfg = opts.exec;
    switch (opts.crowd) {
      case CrowdMode::Off: {
        cfg.crowd_enabled = false;
        cfg.join_kb = false;
        SilentGateway gateway;
        return finish(opts, in, gateway, cfg, out);
      }
      case CrowdMode::Sim: {
        if (!opts.oracle) throw std::invalid_argument("--crowd sim needs --oracle");
        SimCrowdConfig sim;
        sim.oracle = std::make_shared<const Dataset>(load_ntriples(*opts.oracle));
        sim.error_rate = opts.error_rate;
        sim.not_sure_rate = opts.not_sure_rate;
        sim.seed = opts.seed;
        sim.judgments_per_question = opts.judgments;
        SimulatedGateway gateway(std::move(sim));
        return finish(opts, in, gateway, cfg, out);
      }
      case CrowdMode::Replay: {
        if (!opts.replay) throw std::invalid_argument("--crowd replay needs --replay");
        ReplayGateway gateway(load_replay(*opts.replay), opts.judgments);
        return finish(opts, in, gateway, cfg, out);
      }
      case CrowdMode::Http:
        break;
    }
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

int cmd_serve(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    Inputs in = load_inputs(opts);
    auto [host, port] = split_bind(opts.bind);
    HttpGateway gateway(HttpGateway::Options{host, port, opts.judgments, opts.ui_dir});
    int bound = gateway.start();
    err << "listening on http://" << host << ':' << bound << '\n';
    ExecutionConfig cfg = opts.exec;
    if (!cfg.timeout) cfg.timeout = std::chrono::minutes(10);
    int code = finish(opts, in, gateway, cfg, out);
    gateway.stop();
    return code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace rdfhunter
