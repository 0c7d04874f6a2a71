#include <iostream>

#include <CLI11.hpp>

#include "rdfhunter/app.hpp"

namespace {

using namespace rdfhunter;

void add_run_flags(CLI::App* cmd, RunOptions& o, std::string& agg, std::string& crowd, std::string& format,
                   std::string& kb_sets, double& timeout_s) {
  cmd->add_option("data", o.data, "N-Triples data file")->required()->check(CLI::ExistingFile);
  cmd->add_option("query", o.query, "SPARQL query file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--tau", o.exec.tau, "crowdsourcing threshold")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--alpha", o.exec.alpha, "weight of completeness vs. crowd knowledge")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--agg", agg, "class aggregate: median, mean, max")->capture_default_str();
  cmd->add_option("--kb-sets", kb_sets, "KB sets counted by the completeness gate")->capture_default_str();
  cmd->add_option("--crowd", crowd, "off, sim, replay, http")->capture_default_str();
  cmd->add_option("--judgments", o.judgments, "judgments per question")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--questions-per-task", o.exec.questions_per_task, "questions per microtask")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "simulated crowd seed")->capture_default_str();
  cmd->add_option("--timeout", timeout_s, "seconds to wait for crowd answers");
  cmd->add_option("--oracle", o.oracle, "gold graph answering for --crowd sim")->check(CLI::ExistingFile);
  cmd->add_option("--error-rate", o.error_rate, "simulated wrong-answer rate")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--not-sure-rate", o.not_sure_rate, "simulated not-sure rate")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--replay", o.replay, "recorded answers for --crowd replay")->check(CLI::ExistingFile);
  cmd->add_option("--record", o.record, "write collected answers as a replay file");
  cmd->add_option("--gold", o.gold, "gold standard for precision/recall")->check(CLI::ExistingFile);
  cmd->add_option("--kb-in", o.kb_in, "crowd KB to start from")->check(CLI::ExistingFile);
  cmd->add_option("--kb-out", o.kb_out, "save the crowd KB after the run");
  cmd->add_option("--bind", o.bind, "host:port for --crowd http")->capture_default_str();
  cmd->add_option("--ui-dir", o.ui_dir, "static worker UI to serve")->check(CLI::ExistingDirectory);
  cmd->add_option("--format", format, "text or jsonl")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid SPARQL evaluation with crowd-completed answers"};
  app.require_subcommand(1);

  ProfileOptions profile_opts;
  std::filesystem::path profile_data;
  std::optional<std::filesystem::path> profile_kb;
  std::string profile_agg = "median";
  auto* prof = app.add_subcommand("profile", "completeness profile of a data set");
  prof->add_option("data", profile_data, "N-Triples data file")->required();
  prof->add_option("--class", profile_opts.cls, "class IRI or local name");
  prof->add_option("--predicate", profile_opts.predicate, "predicate IRI or local name");
  prof->add_option("--agg", profile_agg, "median, mean, max")->capture_default_str();
  prof->add_option("--kb-in", profile_kb, "crowd KB for comp_kb_plus")->check(CLI::ExistingFile);

  RunOptions run_opts;
  std::string agg = "median", crowd = "off", format = "text", kb_sets = "plus";
  double timeout_s = -1;
  auto* run = app.add_subcommand("run", "evaluate a query, asking the crowd where data is incomplete");
  add_run_flags(run, run_opts, agg, crowd, format, kb_sets, timeout_s);

  RunOptions serve_opts;
  std::string s_agg = "median", s_crowd = "http", s_format = "text", s_kb_sets = "plus";
  double s_timeout = -1;
  auto* serve = app.add_subcommand("serve", "evaluate a query with answers from the worker UI");
  add_run_flags(serve, serve_opts, s_agg, s_crowd, s_format, s_kb_sets, s_timeout);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  auto finish_opts = [](RunOptions& o, const std::string& a, const std::string& c, const std::string& f,
                        const std::string& sets, double t) {
    o.exec.aggregation = parse_aggregation(a);
    o.crowd = parse_crowd_mode(c);
    o.format = parse_output_format(f);
    o.exec.gate_sets = KbSelection::parse(sets);
    if (t >= 0) o.exec.timeout = std::chrono::milliseconds(static_cast<long long>(t * 1000.0));
  };

  try {
    if (*prof) {
      profile_opts.aggregation = parse_aggregation(profile_agg);
      return cmd_profile(profile_data, profile_kb, profile_opts, std::cout, std::cerr);
    }
    if (*run) {
      finish_opts(run_opts, agg, crowd, format, kb_sets, timeout_s);
      return cmd_run(run_opts, std::cout, std::cerr);
    }
    finish_opts(serve_opts, s_agg, s_crowd, s_format, s_kb_sets, s_timeout);
    return cmd_serve(serve_opts, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
}
