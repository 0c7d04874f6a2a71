#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rdfhunter/executor.hpp"
#include "rdfhunter/gateway.hpp"
#include "rdfhunter/metrics.hpp"

namespace rdfhunter {

enum class OutputFormat : std::uint8_t { Text, Jsonl };
enum class CrowdMode : std::uint8_t { Off, Sim, Replay, Http };

std::string_view to_string(CrowdMode m);
CrowdMode parse_crowd_mode(std::string_view s);
OutputFormat parse_output_format(std::string_view s);

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitIncomplete = 2;

struct RunReport {
  SolutionSet answers;
  std::vector<std::string> variables;  // output column order
  std::size_t crowdsourced_count = 0;  // distinct (s, p) sent to the crowd
  std::size_t task_count = 0;
  std::size_t response_count = 0;
  std::vector<GateRecord> gate_trace;
  std::optional<Scores> metrics;
  std::vector<Question> unanswered;
  std::vector<FoldedAnswer> folded;
};

RunReport run_query(const BGPQuery& q, const Dataset& d, CrowdKB& kb, const ExecutionConfig& cfg,
                    CrowdGateway& gateway, const GoldStandard* gold = nullptr);

void print_report(std::ostream& out, const RunReport& report, OutputFormat format);

/// Replay records for every folded answer, for --record.
std::vector<ReplayRecord> to_replay_records(std::span<const FoldedAnswer> folded);

struct ProfileOptions {
  std::optional<std::string> cls;        // IRI, <IRI>, or local name
  std::optional<std::string> predicate;  // same
  Aggregation aggregation = Aggregation::Median;
};

/// "# class <C> predicate <P> am N" lines, then a tab-separated table
/// subject, predicate, m_d, am_best, comp_d, comp_kb_plus.
void profile(const Dataset& d, const CrowdKB* kb, const ProfileOptions& opts, std::ostream& out);

/// Resolves a command-line class or predicate name against d.
std::optional<Term> resolve_term_arg(const Dataset& d, std::string_view text, bool as_class);

struct RunOptions {
  std::filesystem::path data;
  std::filesystem::path query;
  ExecutionConfig exec;
  CrowdMode crowd = CrowdMode::Off;
  OutputFormat format = OutputFormat::Text;

  std::optional<std::filesystem::path> oracle;
  double error_rate = 0.0;
  double not_sure_rate = 0.0;
  std::uint64_t seed = 0;
  std::size_t judgments = kDefaultJudgmentQuota;

  std::optional<std::filesystem::path> replay;
  std::optional<std::filesystem::path> record;
  std::optional<std::filesystem::path> gold;
  std::optional<std::filesystem::path> kb_in;
  std::optional<std::filesystem::path> kb_out;

  std::string bind = "127.0.0.1:8080";
  std::optional<std::filesystem::path> ui_dir;
};

/// Each returns a process exit code and reports errors on `err`.
int cmd_profile(const std::filesystem::path& data, const std::optional<std::filesystem::path>& kb_in,
                const ProfileOptions& opts, std::ostream& out, std::ostream& err);
int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err);
int cmd_serve(const RunOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace rdfhunter
