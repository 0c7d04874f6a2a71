#include "rdfhunter/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ntriples_lexer.hpp"

namespace rdfhunter {

namespace {

const std::vector<Term>& empty_terms() {
  static const std::vector<Term> kEmpty;
  return kEmpty;
}

template <typename Map, typename Key>
const std::vector<std::size_t>* find_list(const Map& m, const Key& k) {
  auto it = m.find(k);
  return it == m.end() ? nullptr : &it->second;
}

}  // namespace

bool Dataset::insert(const Triple& t) {
  if (!t.predicate.is_iri()) throw std::invalid_argument("predicate must be an IRI");
  if (t.subject.is_literal()) throw std::invalid_argument("subject must be an IRI or blank node");
  if (!set_.insert(t).second) return false;

  const std::size_t idx = triples_.size();
  triples_.push_back(t);
  by_subject_[t.subject].push_back(idx);
  by_predicate_[t.predicate].push_back(idx);
  by_object_[t.object].push_back(idx);

  auto& objs = sp_index_[t.subject][t.predicate];
  if (objs.empty()) subject_predicates_[t.subject].push_back(t.predicate);
  objs.push_back(t.object);

  if (t.predicate.value == vocab::kRdfType) {
    type_index_[t.subject].push_back(t.object);
    auto& inst = instance_index_[t.object];
    if (inst.empty()) class_order_.push_back(t.object);
    inst.push_back(t.subject);
  } else if (t.predicate.value == vocab::kRdfsLabel && t.object.is_literal()) {
    labels_.try_emplace(t.subject, t.object.value);
    by_label_[t.object.value].push_back(t.subject);
  }
  index_name(t.subject);
  index_name(t.object);
  return true;
}

void Dataset::index_name(const Term& t) {
  if (!t.is_iri() || !named_.insert(t).second) return;
  std::string_view local = local_name(t.value);
  by_local_name_[std::string(local)].push_back(t);
  std::string human = humanize_local_name(local);
  if (human != local) by_local_name_[human].push_back(t);
}

std::vector<Triple> Dataset::match(const std::optional<Term>& s, const std::optional<Term>& p,
                                   const std::optional<Term>& o) const {
  std::vector<Triple> out;
  if (!s && !p && !o) {
    out = triples_;
    return out;
  }
  if (s && p && o) {
    if (contains(Triple{*s, *p, *o})) out.push_back(Triple{*s, *p, *o});
    return out;
  }

  const std::vector<std::size_t>* best = nullptr;
  auto consider = [&](const std::vector<std::size_t>* list) {
    if (list == nullptr) return false;
    if (best == nullptr || list->size() < best->size()) best = list;
    return true;
  };
  if (s && !consider(find_list(by_subject_, *s))) return out;
  if (p && !consider(find_list(by_predicate_, *p))) return out;
  if (o && !consider(find_list(by_object_, *o))) return out;

  for (std::size_t idx : *best) {
    const Triple& t = triples_[idx];
    if (s && t.subject != *s) continue;
    if (p && t.predicate != *p) continue;
    if (o && t.object != *o) continue;
    out.push_back(t);
  }
  return out;
}

const std::vector<Term>& Dataset::objects(const Term& s, const Term& p) const {
  auto it = sp_index_.find(s);
  if (it == sp_index_.end()) return empty_terms();
  auto jt = it->second.find(p);
  return jt == it->second.end() ? empty_terms() : jt->second;
}

std::vector<Term> Dataset::predicates_of(const Term& s) const {
  auto it = subject_predicates_.find(s);
  return it == subject_predicates_.end() ? std::vector<Term>{} : it->second;
}

const std::vector<Term>& Dataset::classes_of(const Term& s) const {
  auto it = type_index_.find(s);
  return it == type_index_.end() ? empty_terms() : it->second;
}

const std::vector<Term>& Dataset::instances_of(const Term& cls) const {
  auto it = instance_index_.find(cls);
  return it == instance_index_.end() ? empty_terms() : it->second;
}

std::vector<Term> Dataset::classes() const { return class_order_; }

std::string Dataset::label_of(const Term& t) const {
  switch (t.kind) {
    case TermKind::Literal:
    case TermKind::Blank:
      return t.value;
    case TermKind::Iri:
      break;
  }
  if (auto it = labels_.find(t); it != labels_.end()) return it->second;
  return humanize_local_name(local_name(t.value));
}

std::optional<Term> Dataset::resolve_label(std::string_view text) const {
  auto pick = [](const std::vector<Term>& candidates) {
    return *std::min_element(candidates.begin(), candidates.end());
  };
  const std::string key(text);
  if (auto it = by_label_.find(key); it != by_label_.end()) return pick(it->second);
  if (auto it = by_local_name_.find(key); it != by_local_name_.end()) return pick(it->second);
  return std::nullopt;
}

Dataset parse_ntriples(std::string_view text) {
  Dataset d;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;

    detail::NTriplesCursor cur(line, line_no);
    cur.skip_ws();
    if (cur.at_end() || cur.peek() == '#') {
      if (end == text.size()) break;
      continue;
    }
    Term s = cur.term();
    if (s.is_literal()) cur.fail("subject cannot be a literal");
    cur.skip_ws();
    Term p = cur.iri();
    cur.skip_ws();
    Term o = cur.term();
    cur.skip_ws();
    if (cur.peek() != '.') cur.fail("expected '.' at end of triple");
    cur.advance();
    cur.skip_ws();
    if (!cur.at_end() && cur.peek() != '#') cur.fail("unexpected content after '.'");
    d.insert(Triple{std::move(s), std::move(p), std::move(o)});
    if (end == text.size()) break;
  }
  return d;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw std::runtime_error("error reading " + path.string());
  return ss.str();
}

Dataset load_ntriples(const std::filesystem::path& path) { return parse_ntriples(read_text_file(path)); }

}  // namespace rdfhunter
