#include "rdfhunter/executor.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace rdfhunter {

namespace {

using Matcher = std::function<std::vector<Triple>(const std::optional<Term>&, const std::optional<Term>&,
                                                  const std::optional<Term>&)>;

std::optional<Term> resolve(const PatternTerm& pt, const SolutionMapping& mu) {
  if (const Term* t = as_term(pt)) return *t;
  if (const Term* b = mu.get(as_variable(pt)->name)) return *b;
  return std::nullopt;
}

PatternTerm substitute(const PatternTerm& pt, const SolutionMapping& mu) {
  if (auto t = resolve(pt, mu)) return *t;
  return pt;
}

TriplePattern substitute(const TriplePattern& t, const SolutionMapping& mu) {
  return {substitute(t.subject, mu), substitute(t.predicate, mu), substitute(t.object, mu), t.ordinal};
}

bool bind(SolutionMapping& mu, const PatternTerm& pt, const Term& value) {
  const Variable* v = as_variable(pt);
  if (v == nullptr) return true;
  auto [it, inserted] = mu.bindings.try_emplace(v->name, value);
  return inserted || it->second == value;
}

std::size_t bound_positions(const TriplePattern& t, const SolutionMapping& mu) {
  return resolve(t.subject, mu).has_value() + resolve(t.predicate, mu).has_value() +
         resolve(t.object, mu).has_value();
}

void search(std::vector<const TriplePattern*>& todo, SolutionMapping& mu, const Matcher& match,
            SolutionSet& out) {
  if (todo.empty()) {
    out.add(mu);
    return;
  }
  // Most bound pattern next; earlier patterns win ties.
  auto best = todo.begin();
  std::size_t best_bound = bound_positions(**best, mu);
  for (auto it = std::next(todo.begin()); it != todo.end(); ++it) {
    std::size_t b = bound_positions(**it, mu);
    if (b > best_bound) {
      best = it;
      best_bound = b;
    }
  }
  const TriplePattern* t = *best;
  todo.erase(best);
  for (const Triple& triple : match(resolve(t->subject, mu), resolve(t->predicate, mu), resolve(t->object, mu))) {
    SolutionMapping next = mu;
    if (bind(next, t->subject, triple.subject) && bind(next, t->predicate, triple.predicate) &&
        bind(next, t->object, triple.object)) {
      search(todo, next, match, out);
    }
  }
  todo.insert(todo.begin(), t);
  // Restore original order so later siblings see the same tie-breaking.
  std::sort(todo.begin(), todo.end(),
            [](const TriplePattern* a, const TriplePattern* b) { return a->ordinal < b->ordinal; });
}

std::set<std::string> variable_names(std::span<const TriplePattern> patterns) {
  std::set<std::string> names;
  for (const auto& t : patterns) {
    for (const auto& v : t.variables()) names.insert(v.name);
  }
  return names;
}

SolutionSet evaluate_with(std::span<const TriplePattern> patterns, const Matcher& match) {
  SolutionSet out(variable_names(patterns));
  std::vector<const TriplePattern*> todo;
  for (const auto& t : patterns) todo.push_back(&t);
  std::sort(todo.begin(), todo.end(),
            [](const TriplePattern* a, const TriplePattern* b) { return a->ordinal < b->ordinal; });
  SolutionMapping mu;
  search(todo, mu, match, out);
  return out;
}

Matcher data_matcher(const Dataset& d) {
  return [&d](const std::optional<Term>& s, const std::optional<Term>& p, const std::optional<Term>& o) {
    return d.match(s, p, o);
  };
}

// D plus the constant-object KB+ quads.
Matcher hybrid_matcher(const Dataset& d, const CrowdKB& kb) {
  return [&d, &kb](const std::optional<Term>& s, const std::optional<Term>& p, const std::optional<Term>& o) {
    std::vector<Triple> out = d.match(s, p, o);
    std::vector<CrowdQuad> quads = (s && p) ? kb.find(KbSet::Plus, *s, *p) : kb.quads(KbSet::Plus);
    for (const auto& q : quads) {
      if (!q.object) continue;
      if ((s && q.subject != *s) || (p && q.predicate != *p) || (o && *q.object != *o)) continue;
      Triple t{q.subject, q.predicate, *q.object};
      if (!d.contains(t)) out.push_back(std::move(t));
    }
    return out;
  };
}

std::set<std::string> shared_variables(const SubQuery& sq, const SolutionSet& omega) {
  std::set<std::string> shared;
  for (const auto& v : sq.variables()) {
    if (omega.schema().contains(v.name)) shared.insert(v.name);
  }
  return shared;
}

// Union over instantiations of binding ⊕ [[bound patterns]].
SolutionSet evaluate_instantiations(const SubQuery& sq, const SolutionSet& omega, const Matcher& match) {
  std::set<std::string> schema = shared_variables(sq, omega);
  for (const auto& v : sq.variables()) schema.insert(v.name);
  SolutionSet out(schema);
  for (const auto& inst : instantiate(sq, omega)) {
    for (const auto& mu : evaluate_with(inst.patterns, match)) {
      SolutionMapping row = inst.binding;
      row.bindings.insert(mu.bindings.begin(), mu.bindings.end());
      out.add(std::move(row));
    }
  }
  return out;
}

std::vector<Variable> union_variables(std::span<const SubQuery> placed) {
  std::vector<Variable> vars;
  for (const auto& sq : placed) {
    for (auto& v : sq.variables()) {
      if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(std::move(v));
    }
  }
  return vars;
}

}  // namespace

void ExecutionConfig::validate() const {
  if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("tau must lie in [0,1]");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0,1]");
  if (questions_per_task == 0) throw std::invalid_argument("questions per task must be positive");
}

std::string_view to_string(GateDecision d) {
  switch (d) {
    case GateDecision::Complete:
      return "complete";
    case GateDecision::BelowThreshold:
      return "below_threshold";
    case GateDecision::Crowdsourced:
      return "crowdsourced";
    case GateDecision::CrowdDisabled:
      return "crowd_disabled";
  }
  return "?";
}

SolutionSet evaluate_bgp(const Dataset& d, std::span<const TriplePattern> patterns) {
  return evaluate_with(patterns, data_matcher(d));
}

double selectivity(const SubQuery& sq, const Dataset& d) {
  return 1.0 / (1.0 + static_cast<double>(evaluate_bgp(d, sq.patterns).size()));
}

std::vector<SubQuery> build_plan(const Decomposition& dec, const Dataset& d) {
  struct Pending {
    const SubQuery* sq;
    double score;
  };
  std::vector<Pending> data;
  for (const auto& sq : dec.data) data.push_back({&sq, selectivity(sq, d)});
  std::vector<const SubQuery*> crowd;
  for (const auto& sq : dec.crowd) crowd.push_back(&sq);
  auto by_ordinal = [](const SubQuery* a, const SubQuery* b) { return a->first_ordinal() < b->first_ordinal(); };
  std::sort(crowd.begin(), crowd.end(), by_ordinal);
  std::sort(data.begin(), data.end(), [&](const Pending& a, const Pending& b) { return by_ordinal(a.sq, b.sq); });

  std::vector<SubQuery> plan;
  // Highest score, then smallest ordinal (data is kept in ordinal order).
  auto take_best_data = [&](bool must_share) {
    auto vars = union_variables(plan);
    auto best = data.end();
    for (auto it = data.begin(); it != data.end(); ++it) {
      if (must_share && !it->sq->shares_variable_with(vars)) continue;
      if (best == data.end() || it->score > best->score) best = it;
    }
    if (best == data.end()) return false;
    plan.push_back(*best->sq);
    data.erase(best);
    return true;
  };
  auto take_crowd = [&]() {
    auto vars = union_variables(plan);
    auto it = std::find_if(crowd.begin(), crowd.end(), [&](const SubQuery* sq) { return sq->shares_variable_with(vars); });
    if (it == crowd.end()) return false;
    plan.push_back(**it);
    crowd.erase(it);
    return true;
  };

  if (!take_best_data(false) && !crowd.empty()) {
    plan.push_back(*crowd.front());
    crowd.erase(crowd.begin());
  }
  while (!data.empty() || !crowd.empty()) {
    bool progressed = take_crowd();
    progressed = take_best_data(true) || progressed;
    if (progressed) continue;
    if (!data.empty()) {
      plan.push_back(*data.front().sq);
      data.erase(data.begin());
    } else {
      plan.push_back(*crowd.front());
      crowd.erase(crowd.begin());
    }
  }
  return plan;
}

double crowd_probability(double comp, double dis, double unc, double alpha) {
  return alpha * (1.0 - comp) + (1.0 - alpha) * std::min(dis, 1.0 - unc);
}

std::vector<Instantiation> instantiate(const SubQuery& sq, const SolutionSet& omega) {
  std::set<std::string> shared = shared_variables(sq, omega);
  if (shared.empty()) return {Instantiation{{}, sq.patterns}};
  SolutionSet bindings = distinct(project(omega, {shared.begin(), shared.end()}));
  std::vector<Instantiation> out;
  for (const auto& mu : bindings) {
    Instantiation inst{mu, {}};
    for (const auto& t : sq.patterns) inst.patterns.push_back(substitute(t, mu));
    out.push_back(std::move(inst));
  }
  return out;
}

ExecutionResult execute(const BGPQuery& q, const Dataset& d, CrowdKB& kb, const ExecutionConfig& cfg,
                        CrowdGateway& gateway) {
  cfg.validate();
  ExecutionResult result;
  QualityModel model(d, cfg.aggregation);
  result.plan = build_plan(decompose(q), d);

  std::set<std::pair<Term, Term>> gated;
  SolutionSet omega = SolutionSet::identity();
  for (const SubQuery& sq : result.plan) {
    if (sq.kind == SubQueryKind::Data) {
      omega = join(omega, evaluate_instantiations(sq, omega, data_matcher(d)));
      continue;
    }

    std::vector<CrowdRequest> requests;
    for (const auto& inst : instantiate(sq, omega)) {
      for (const auto& t : inst.patterns) {
        const Term* s = as_term(t.subject);
        const Term* p = as_term(t.predicate);
        if (s == nullptr || p == nullptr) continue;  // unbound subject: nothing to ask about
        if (!gated.emplace(*s, *p).second) continue;

        GateRecord rec{*s, *p};
        rec.comp_d = model.completeness_d(*s, *p);
        rec.comp_kb = model.completeness_kb(kb, *s, *p, cfg.gate_sets);
        rec.disagreement = disagreement(kb, *s, *p);
        rec.uncertainty = uncertainty(kb, *s, *p);
        const double comp = rec.comp_d + rec.comp_kb;
        rec.probability = crowd_probability(comp, rec.disagreement, rec.uncertainty, cfg.alpha);
        if (comp >= 1.0) {
          rec.decision = GateDecision::Complete;
        } else if (rec.probability <= cfg.tau) {
          rec.decision = GateDecision::BelowThreshold;
        } else if (!cfg.crowd_enabled) {
          rec.decision = GateDecision::CrowdDisabled;
        } else {
          rec.decision = GateDecision::Crowdsourced;
          const Variable* o = as_variable(sq.patterns.front().object);
          for (const auto& orig : sq.patterns) {
            if (orig.ordinal == t.ordinal) o = as_variable(orig.object);
          }
          requests.push_back(CrowdRequest{*s, *p, o ? *o : Variable{}});
        }
        result.trace.push_back(std::move(rec));
      }
    }

    if (!requests.empty()) {
      std::vector<Microtask> tasks = build_tasks(requests, d, cfg.questions_per_task);
      std::vector<std::string> ids = gateway.submit(tasks);
      ++result.batches;
      std::vector<CollectedAnswer> answers = gateway.collect(ids, cfg.timeout);
      std::set<std::string> answered;
      for (const auto& a : answers) {
        CrowdQuad quad = fold_into_kb(a.answer, a.question, d, kb);
        answered.insert(a.question.id);
        result.responses += a.answer.judgment_count;
        result.folded.push_back(FoldedAnswer{a.question, a.answer, std::move(quad)});
      }
      for (auto& task : tasks) {
        for (const auto& question : task.questions) {
          if (!answered.contains(question.id)) result.unanswered.push_back(question);
        }
        task.status = TaskStatus::Resolved;
      }
      result.tasks.insert(result.tasks.end(), tasks.begin(), tasks.end());
    }

    const Matcher match = cfg.join_kb ? hybrid_matcher(d, kb) : data_matcher(d);
    omega = join(omega, evaluate_instantiations(sq, omega, match));
  }

  std::vector<std::string> out_vars;
  for (const auto& v : q.output_variables()) out_vars.push_back(v.name);
  if (result.plan.empty()) {
    result.answers = project(SolutionSet::identity(), {});
  } else {
    result.answers = project(omega, out_vars);
  }
  if (q.distinct) result.answers = distinct(result.answers);
  return result;
}

}  // namespace rdfhunter
