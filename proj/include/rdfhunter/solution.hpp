#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "rdfhunter/term.hpp"

namespace rdfhunter {

/// Variable name (without '?') to bound term.
struct SolutionMapping {
  std::map<std::string, Term> bindings;

  const Term* get(const std::string& var) const;
  /// Agree on every shared variable.
  bool compatible(const SolutionMapping& other) const;

  auto operator<=>(const SolutionMapping&) const = default;
  bool operator==(const SolutionMapping&) const = default;
};

/// Mappings over a fixed schema; every mapping binds exactly the schema
/// variables. Insertion order is kept. Results of BGP evaluation and joins
/// are duplicate-free; projection may introduce duplicates (bag semantics)
/// until distinct() is applied.
class SolutionSet {
 public:
  SolutionSet() = default;
  explicit SolutionSet(std::set<std::string> schema) : schema_(std::move(schema)) {}

  /// The join identity: empty schema, one empty mapping.
  static SolutionSet identity();

  const std::set<std::string>& schema() const noexcept { return schema_; }
  const std::vector<SolutionMapping>& mappings() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }
  auto begin() const noexcept { return rows_.begin(); }
  auto end() const noexcept { return rows_.end(); }

  /// Throws std::invalid_argument if m does not bind exactly the schema.
  void add(SolutionMapping m);

  /// Mappings sorted, for order-insensitive comparison.
  std::vector<SolutionMapping> sorted() const;

 private:
  std::set<std::string> schema_;
  std::vector<SolutionMapping> rows_;
};

/// All unions of compatible pairs; a Cartesian product for disjoint schemas.
SolutionSet join(const SolutionSet& a, const SolutionSet& b);

/// Restricts every mapping to `vars` (which must be in the schema). Keeps
/// duplicates.
SolutionSet project(const SolutionSet& s, const std::vector<std::string>& vars);

SolutionSet distinct(const SolutionSet& s);

}  // namespace rdfhunter
