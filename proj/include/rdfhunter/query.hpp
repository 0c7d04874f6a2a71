#pragma once

#include <compare>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "rdfhunter/term.hpp"

namespace rdfhunter {

struct Variable {
  std::string name;  // without the leading '?'

  auto operator<=>(const Variable&) const = default;
  bool operator==(const Variable&) const = default;
};

using PatternTerm = std::variant<Variable, Term>;

inline bool is_variable(const PatternTerm& t) { return std::holds_alternative<Variable>(t); }
inline const Variable* as_variable(const PatternTerm& t) { return std::get_if<Variable>(&t); }
inline const Term* as_term(const PatternTerm& t) { return std::get_if<Term>(&t); }

/// "?name" for variables, N-Triples syntax for constants.
std::string to_string(const PatternTerm& t);

struct TriplePattern {
  PatternTerm subject;
  PatternTerm predicate;
  PatternTerm object;
  std::size_t ordinal = 0;  // 1-based position in the query text

  /// Distinct variables in subject, predicate, object order.
  std::vector<Variable> variables() const;

  bool operator==(const TriplePattern&) const = default;
};

/// SELECT [DISTINCT] over one basic graph pattern.
struct BGPQuery {
  std::vector<std::pair<std::string, std::string>> prefixes;  // declaration order
  bool select_all = false;
  bool distinct = false;
  std::vector<Variable> projected;
  std::vector<TriplePattern> patterns;

  /// Distinct variables in order of first appearance.
  std::vector<Variable> variables() const;
  /// The projection, or every variable for SELECT *.
  std::vector<Variable> output_variables() const;

  bool operator==(const BGPQuery&) const = default;
};

/// Parses PREFIX declarations, SELECT [DISTINCT] (vars | *), and a WHERE
/// block holding one basic graph pattern. Supports `a`, IRIs, prefixed
/// names, plain/language/typed literals, numbers, and the `;` and `,`
/// abbreviations. Throws ParseError with line and column.
BGPQuery parse_query(std::string_view text);

BGPQuery load_query(const std::filesystem::path& path);

/// Canonical printer: declared prefixes, then patterns with full IRIs, one
/// per line. parse_query(to_sparql(q)) == q for parser-produced q.
std::string to_sparql(const BGPQuery& q);

}  // namespace rdfhunter
