#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "rdfhunter/term.hpp"

namespace rdfhunter {

/// In-memory RDF graph with set semantics.
///
/// Triples keep their first-insertion order, which makes every lookup
/// deterministic. Besides the (subject, predicate) index the store keeps a
/// dedicated rdf:type index since completeness estimation asks for class
/// membership on every gate decision. Once loaded a Dataset is only read,
/// so concurrent readers need no locking.
class Dataset {
 public:
  /// Returns false when the triple was already present.
  bool insert(const Triple& t);

  std::size_t size() const noexcept { return triples_.size(); }
  bool empty() const noexcept { return triples_.empty(); }
  const std::vector<Triple>& triples() const noexcept { return triples_; }
  bool contains(const Triple& t) const { return set_.contains(t); }

  /// All triples agreeing with every non-empty position.
  std::vector<Triple> match(const std::optional<Term>& s, const std::optional<Term>& p,
                            const std::optional<Term>& o) const;

  /// Objects of (s, p, ·) in insertion order.
  const std::vector<Term>& objects(const Term& s, const Term& p) const;

  /// Predicates used with subject s, in first-use order.
  std::vector<Term> predicates_of(const Term& s) const;

  /// {C | (s, rdf:type, C)} in insertion order.
  const std::vector<Term>& classes_of(const Term& s) const;

  /// {s | (s, rdf:type, C)} in insertion order.
  const std::vector<Term>& instances_of(const Term& cls) const;

  /// Every class that has at least one instance.
  std::vector<Term> classes() const;

  /// rdfs:label if present, else the humanized IRI local name; literals give
  /// their lexical form and blank nodes their id.
  std::string label_of(const Term& t) const;

  /// Maps free text typed by a person back onto a node of the graph: an exact
  /// rdfs:label match first, then an exact local-name match (raw or
  /// humanized). Ambiguous matches resolve to the smallest IRI.
  std::optional<Term> resolve_label(std::string_view text) const;

 private:
  using ObjectsByPredicate = std::unordered_map<Term, std::vector<Term>, TermHash>;

  void index_name(const Term& t);

  std::vector<Triple> triples_;
  std::unordered_set<Triple, TripleHash> set_;
  std::unordered_map<Term, ObjectsByPredicate, TermHash> sp_index_;
  std::unordered_map<Term, std::vector<Term>, TermHash> subject_predicates_;
  std::unordered_map<Term, std::vector<std::size_t>, TermHash> by_subject_;
  std::unordered_map<Term, std::vector<std::size_t>, TermHash> by_predicate_;
  std::unordered_map<Term, std::vector<std::size_t>, TermHash> by_object_;
  std::unordered_map<Term, std::vector<Term>, TermHash> type_index_;
  std::unordered_map<Term, std::vector<Term>, TermHash> instance_index_;
  std::vector<Term> class_order_;
  std::unordered_map<Term, std::string, TermHash> labels_;
  std::unordered_map<std::string, std::vector<Term>> by_label_;
  std::unordered_map<std::string, std::vector<Term>> by_local_name_;
  std::unordered_set<Term, TermHash> named_;
};

/// Parses N-Triples text. Throws ParseError carrying the 1-based line number.
Dataset parse_ntriples(std::string_view text);

/// Reads and parses an N-Triples file; throws std::runtime_error on I/O failure.
Dataset load_ntriples(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace rdfhunter
