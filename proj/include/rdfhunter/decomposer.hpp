#pragma once

#include <span>
#include <vector>

#include "rdfhunter/query.hpp"

namespace rdfhunter {

enum class SubQueryKind : std::uint8_t { Data, Crowd };

/// A star: patterns sharing one subject position value (the anchor).
struct SubQuery {
  std::vector<TriplePattern> patterns;
  PatternTerm anchor;
  SubQueryKind kind = SubQueryKind::Data;

  std::size_t first_ordinal() const;
  std::vector<Variable> variables() const;
  bool shares_variable_with(std::span<const Variable> vars) const;

  bool operator==(const SubQuery&) const = default;
};

struct Partition {
  std::vector<TriplePattern> data;   // S_D
  std::vector<TriplePattern> crowd;  // S_CROWD
};

struct Decomposition {
  std::vector<SubQuery> data;
  std::vector<SubQuery> crowd;
};

/// True for patterns a person can be asked about: constant predicate and
/// variable object. Variable predicates stay machine-side since no question
/// can be phrased without one.
bool is_crowd_pattern(const TriplePattern& t);

Partition partition(std::span<const TriplePattern> patterns);
inline Partition partition(const BGPQuery& q) { return partition(q.patterns); }

/// Groups by subject position value; groups come out ordered by their
/// smallest pattern ordinal, patterns inside a group keep source order.
std::vector<SubQuery> group_stars(std::span<const TriplePattern> patterns, SubQueryKind kind);

Decomposition decompose(const BGPQuery& q);

}  // namespace rdfhunter
