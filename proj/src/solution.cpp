#include "rdfhunter/solution.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace rdfhunter {

namespace {

struct KeyHash {
  std::size_t operator()(const std::vector<Term>& key) const noexcept {
    std::size_t h = 0;
    TermHash th;
    for (const auto& t : key) h = h * 1000003u ^ th(t);
    return h;
  }
};

std::vector<Term> key_of(const SolutionMapping& m, const std::vector<std::string>& vars) {
  std::vector<Term> key;
  key.reserve(vars.size());
  for (const auto& v : vars) key.push_back(m.bindings.at(v));
  return key;
}

}  // namespace

const Term* SolutionMapping::get(const std::string& var) const {
  auto it = bindings.find(var);
  return it == bindings.end() ? nullptr : &it->second;
}

bool SolutionMapping::compatible(const SolutionMapping& other) const {
  for (const auto& [var, term] : bindings) {
    if (const Term* t = other.get(var); t != nullptr && *t != term) return false;
  }
  return true;
}

SolutionSet SolutionSet::identity() {
  SolutionSet s;
  s.rows_.emplace_back();
  return s;
}

void SolutionSet::add(SolutionMapping m) {
  bool ok = m.bindings.size() == schema_.size();
  if (ok) {
    for (const auto& [var, _] : m.bindings) {
      if (!schema_.contains(var)) {
        ok = false;
        break;
      }
    }
  }
  if (!ok) throw std::invalid_argument("solution mapping does not match the solution set schema");
  rows_.push_back(std::move(m));
}

std::vector<SolutionMapping> SolutionSet::sorted() const {
  std::vector<SolutionMapping> out = rows_;
  std::sort(out.begin(), out.end());
  return out;
}

SolutionSet join(const SolutionSet& a, const SolutionSet& b) {
  std::vector<std::string> shared;
  std::set_intersection(a.schema().begin(), a.schema().end(), b.schema().begin(), b.schema().end(),
                        std::back_inserter(shared));
  std::set<std::string> schema = a.schema();
  schema.insert(b.schema().begin(), b.schema().end());
  SolutionSet out(std::move(schema));

  auto merge = [&](const SolutionMapping& x, const SolutionMapping& y) {
    SolutionMapping m = x;
    m.bindings.insert(y.bindings.begin(), y.bindings.end());
    out.add(std::move(m));
  };

  if (shared.empty()) {
    for (const auto& x : a) {
      for (const auto& y : b) merge(x, y);
    }
    return out;
  }

  std::unordered_map<std::vector<Term>, std::vector<const SolutionMapping*>, KeyHash> table;
  for (const auto& y : b) table[key_of(y, shared)].push_back(&y);
  for (const auto& x : a) {
    auto it = table.find(key_of(x, shared));
    if (it == table.end()) continue;
    for (const SolutionMapping* y : it->second) merge(x, *y);
  }
  return out;
}

SolutionSet project(const SolutionSet& s, const std::vector<std::string>& vars) {
  for (const auto& v : vars) {
    if (!s.schema().contains(v)) throw std::invalid_argument("cannot project unknown variable ?" + v);
  }
  SolutionSet out(std::set<std::string>(vars.begin(), vars.end()));
  for (const auto& m : s) {
    SolutionMapping p;
    for (const auto& v : vars) p.bindings.emplace(v, m.bindings.at(v));
    out.add(std::move(p));
  }
  return out;
}

SolutionSet distinct(const SolutionSet& s) {
  SolutionSet out(s.schema());
  std::set<SolutionMapping> seen;
  for (const auto& m : s) {
    if (seen.insert(m).second) out.add(m);
  }
  return out;
}

}  // namespace rdfhunter
