#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <utility>

#include "rdfhunter/executor.hpp"
#include "rdfhunter/term.hpp"

namespace rdfhunter {

/// (s, p, o), or (s, p, none) for "has no value".
struct CrowdAnswer {
  Term subject;
  Term predicate;
  std::optional<Term> object;

  auto operator<=>(const CrowdAnswer&) const = default;
  bool operator==(const CrowdAnswer&) const = default;
};

/// Reference answers per (subject, predicate). An empty optional in the
/// object set marks "no value exists".
class GoldStandard {
 public:
  void add(const Term& s, const Term& p, std::optional<Term> o);

  /// All gold answers, one per (s, p, o) entry.
  std::set<CrowdAnswer> answers() const;
  const std::set<std::optional<Term>>* find(const Term& s, const Term& p) const;
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

 private:
  std::map<std::pair<Term, Term>, std::set<std::optional<Term>>> entries_;
};

/// Line records ["<s>", "<p>", "<o>" | "NONE"].
GoldStandard read_gold(std::istream& in);
GoldStandard load_gold(const std::filesystem::path& path);
void write_gold(std::ostream& out, const GoldStandard& gold);

/// Crowd answers carried by folded KB+ (with object) and KB- (no value) quads.
std::set<CrowdAnswer> crowd_answers(std::span<const FoldedAnswer> folded);

/// Undefined (nullopt) for an empty crowd set.
std::optional<double> precision(const std::set<CrowdAnswer>& crowd, const GoldStandard& gold);
/// Undefined (nullopt) for an empty gold standard.
std::optional<double> recall(const std::set<CrowdAnswer>& crowd, const GoldStandard& gold);
/// 2PR / (P + R); 0 when P + R = 0.
double f_measure(double p, double r);

struct Scores {
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f;
};

/// F is defined when both P and R are.
Scores score(const std::set<CrowdAnswer>& crowd, const GoldStandard& gold);

}  // namespace rdfhunter
