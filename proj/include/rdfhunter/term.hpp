#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rdfhunter {

namespace vocab {
inline constexpr std::string_view kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view kRdfsLabel = "http://www.w3.org/2000/01/rdf-schema#label";
inline constexpr std::string_view kXsdInteger = "http://www.w3.org/2001/XMLSchema#integer";
inline constexpr std::string_view kXsdDecimal = "http://www.w3.org/2001/XMLSchema#decimal";
}  // namespace vocab

/// Raised for malformed N-Triples, SPARQL, or line-record input.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
      : std::runtime_error(what), line_(line), column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

enum class TermKind : std::uint8_t { Iri, Literal, Blank };

/// An RDF term. For literals `annotation` holds the language tag ("@en") or
/// datatype ("^^<iri>") exactly as written; it is empty for plain literals.
struct Term {
  TermKind kind = TermKind::Iri;
  std::string value;
  std::string annotation;

  static Term iri(std::string v);
  static Term literal(std::string lexical, std::string annotation = {});
  static Term blank(std::string id);

  bool is_iri() const noexcept { return kind == TermKind::Iri; }
  bool is_literal() const noexcept { return kind == TermKind::Literal; }
  bool is_blank() const noexcept { return kind == TermKind::Blank; }

  auto operator<=>(const Term&) const = default;
  bool operator==(const Term&) const = default;
};

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  auto operator<=>(const Triple&) const = default;
  bool operator==(const Triple&) const = default;
};

/// N-Triples rendering: <iri>, "lexical"@lang, "lexical"^^<dt>, _:id.
std::string to_ntriples(const Term& t);
std::string to_ntriples(const Triple& t);

/// Parses exactly one N-Triples term (no surrounding whitespace allowed).
Term parse_term(std::string_view text);

/// Text after the last '#' or '/', or the whole IRI when neither occurs.
std::string_view local_name(std::string_view iri);

/// Percent-decodes and replaces '_' with ' '.
std::string humanize_local_name(std::string_view local);

std::uint64_t fnv1a64(std::string_view bytes);

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept;
};

}  // namespace rdfhunter
