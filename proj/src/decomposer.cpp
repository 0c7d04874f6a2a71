#include "rdfhunter/decomposer.hpp"

#include <algorithm>

namespace rdfhunter {

std::size_t SubQuery::first_ordinal() const {
  std::size_t best = patterns.empty() ? 0 : patterns.front().ordinal;
  for (const auto& p : patterns) best = std::min(best, p.ordinal);
  return best;
}

std::vector<Variable> SubQuery::variables() const {
  std::vector<Variable> out;
  for (const auto& p : patterns) {
    for (auto& v : p.variables()) {
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(std::move(v));
    }
  }
  return out;
}

bool SubQuery::shares_variable_with(std::span<const Variable> vars) const {
  for (const auto& v : variables()) {
    if (std::find(vars.begin(), vars.end(), v) != vars.end()) return true;
  }
  return false;
}

bool is_crowd_pattern(const TriplePattern& t) { return !is_variable(t.predicate) && is_variable(t.object); }

Partition partition(std::span<const TriplePattern> patterns) {
  Partition out;
  for (const auto& t : patterns) (is_crowd_pattern(t) ? out.crowd : out.data).push_back(t);
  return out;
}

std::vector<SubQuery> group_stars(std::span<const TriplePattern> patterns, SubQueryKind kind) {
  std::vector<const TriplePattern*> ordered;
  for (const auto& t : patterns) ordered.push_back(&t);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const TriplePattern* a, const TriplePattern* b) { return a->ordinal < b->ordinal; });

  std::vector<SubQuery> out;
  for (const TriplePattern* t : ordered) {
    auto it = std::find_if(out.begin(), out.end(), [&](const SubQuery& sq) { return sq.anchor == t->subject; });
    if (it == out.end()) {
      out.push_back(SubQuery{{*t}, t->subject, kind});
    } else {
      it->patterns.push_back(*t);
    }
  }
  return out;
}

Decomposition decompose(const BGPQuery& q) {
  Partition parts = partition(q);
  return Decomposition{group_stars(parts.data, SubQueryKind::Data), group_stars(parts.crowd, SubQueryKind::Crowd)};
}

}  // namespace rdfhunter
