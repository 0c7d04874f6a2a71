#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rdfhunter/dataset.hpp"
#include "rdfhunter/query.hpp"
#include "rdfhunter/solution.hpp"

namespace testing_support {

using namespace rdfhunter;

inline std::filesystem::path data_file(const std::string& name) {
  return std::filesystem::path(RDFHUNTER_DATA_DIR) / name;
}

inline Term db(const std::string& local) { return Term::iri("http://dbpedia.org/resource/" + local); }
inline Term iri(const std::string& v) { return Term::iri(v); }
inline Term rdf_type() { return Term::iri(std::string(vocab::kRdfType)); }

inline const Term& producer() {
  static const Term t = Term::iri("http://dbpedia.org/property/producer");
  return t;
}
inline const Term& movie_class() {
  static const Term t = Term::iri("http://schema.org/Movie");
  return t;
}
inline const Term& film_class() {
  static const Term t = Term::iri("http://dbpedia.org/ontology/Film");
  return t;
}
inline const Term& country() {
  static const Term t = Term::iri("http://dbpedia.org/ontology/country");
  return t;
}

inline Term ex(const std::string& local) { return Term::iri("http://example.org/" + local); }

/// Random graph with up to `max_triples` triples over a small vocabulary:
/// entities e0.., predicates p0..p4, classes C0..C(classes-1), a few literals.
inline Dataset random_graph(std::mt19937_64& rng, std::size_t max_triples = 200, std::size_t max_classes = 6) {
  std::uniform_int_distribution<std::size_t> n_triples(1, max_triples);
  std::uniform_int_distribution<std::size_t> n_classes(1, max_classes);
  const std::size_t target = n_triples(rng);
  const std::size_t classes = n_classes(rng);
  const std::size_t entities = std::max<std::size_t>(4, target / 5);
  std::uniform_int_distribution<std::size_t> ent(0, entities - 1), cls(0, classes - 1), pred(0, 4), lit(0, 3);
  std::uniform_real_distribution<double> unit(0, 1);
  Dataset d;
  for (std::size_t i = 0; i < target * 3 && d.size() < target; ++i) {
    Term s = ex("e" + std::to_string(ent(rng)));
    double u = unit(rng);
    if (u < 0.25) {
      d.insert({s, rdf_type(), ex("C" + std::to_string(cls(rng)))});
    } else if (u < 0.35) {
      d.insert({s, ex("p" + std::to_string(pred(rng))), Term::literal("v" + std::to_string(lit(rng)))});
    } else {
      d.insert({s, ex("p" + std::to_string(pred(rng))), ex("e" + std::to_string(ent(rng)))});
    }
  }
  return d;
}

/// Random BGP of 1..max_patterns patterns drawn around existing triples so
/// that joins usually have matches.
inline BGPQuery random_query(std::mt19937_64& rng, const Dataset& d, std::size_t max_patterns = 5) {
  std::uniform_int_distribution<std::size_t> n_pat(1, max_patterns), var(0, 3), pick(0, d.size() - 1);
  std::uniform_real_distribution<double> unit(0, 1);
  BGPQuery q;
  const std::size_t n = n_pat(rng);
  for (std::size_t i = 0; i < n; ++i) {
    const Triple& t = d.triples()[pick(rng)];
    auto maybe_var = [&](const Term& c, double p_var) -> PatternTerm {
      if (unit(rng) < p_var) return Variable{"v" + std::to_string(var(rng))};
      return c;
    };
    TriplePattern tp{maybe_var(t.subject, 0.8), maybe_var(t.predicate, 0.1), maybe_var(t.object, 0.6), i + 1};
    q.patterns.push_back(std::move(tp));
  }
  auto vars = q.variables();
  if (vars.empty() || unit(rng) < 0.3) {
    q.select_all = true;
  } else {
    for (const auto& v : vars) {
      if (unit(rng) < 0.6) q.projected.push_back(v);
    }
    if (q.projected.empty()) q.projected.push_back(vars.front());
  }
  q.distinct = unit(rng) < 0.5;
  return q;
}

/// Nested loops over the raw triple list, one level per pattern, checking
/// each candidate against the partial assignment. No indexes involved.
/// Gives up (nullopt) after `budget` candidate checks.
inline std::optional<std::vector<std::map<std::string, Term>>> brute_force_bgp(
    const Dataset& d, const std::vector<TriplePattern>& patterns, std::size_t budget = SIZE_MAX) {
  std::vector<std::map<std::string, Term>> out;
  std::size_t steps = 0;
  std::map<std::string, Term> cur;
  auto unify = [](std::map<std::string, Term>& m, const PatternTerm& pt, const Term& v) {
    if (const Term* c = as_term(pt)) return *c == v;
    const std::string& name = as_variable(pt)->name;
    auto it = m.find(name);
    if (it == m.end()) {
      m.emplace(name, v);
      return true;
    }
    return it->second == v;
  };
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == patterns.size()) {
      out.push_back(cur);
      return;
    }
    for (const Triple& t : d.triples()) {
      if (++steps > budget) return;
      auto saved = cur;
      if (unify(cur, patterns[i].subject, t.subject) && unify(cur, patterns[i].predicate, t.predicate) &&
          unify(cur, patterns[i].object, t.object)) {
        rec(i + 1);
      }
      cur = std::move(saved);
    }
  };
  rec(0);
  if (steps > budget) return std::nullopt;
  // Distinct triples per pattern can still give the same assignment only if
  // two patterns are identical after binding; a BGP answer is a set.
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Projected answers of q as a sorted multiset, computed by brute force.
using Rows = std::vector<std::vector<std::optional<Term>>>;

inline std::optional<Rows> try_brute_force_answers(const Dataset& d, const BGPQuery& q, std::size_t budget) {
  auto solutions = brute_force_bgp(d, q.patterns, budget);
  if (!solutions) return std::nullopt;
  Rows rows;
  for (const auto& m : *solutions) {
    std::vector<std::optional<Term>> row;
    for (const auto& v : q.output_variables()) {
      auto it = m.find(v.name);
      row.push_back(it == m.end() ? std::nullopt : std::optional<Term>(it->second));
    }
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end());
  if (q.distinct) rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return rows;
}

inline Rows brute_force_answers(const Dataset& d, const BGPQuery& q) {
  return *try_brute_force_answers(d, q, SIZE_MAX);
}

inline std::vector<std::vector<std::optional<Term>>> rows_of(const SolutionSet& s, const BGPQuery& q) {
  std::vector<std::vector<std::optional<Term>>> rows;
  for (const auto& mu : s) {
    std::vector<std::optional<Term>> row;
    for (const auto& v : q.output_variables()) {
      const Term* t = mu.get(v.name);
      row.push_back(t ? std::optional<Term>(*t) : std::nullopt);
    }
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

}  // namespace testing_support
