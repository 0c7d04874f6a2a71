#include "rdfhunter/quality.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace rdfhunter {

std::string_view to_string(Aggregation a) {
  switch (a) {
    case Aggregation::Median: return "median";
    case Aggregation::Mean: return "mean";
    case Aggregation::Max: return "max";
  }
  return "?";
}

Aggregation parse_aggregation(std::string_view s) {
  if (s == "median") return Aggregation::Median;
  if (s == "mean") return Aggregation::Mean;
  if (s == "max") return Aggregation::Max;
  throw std::invalid_argument("unknown aggregation '" + std::string(s) + "'");
}

std::size_t aggregate_ceiling(std::span<const std::size_t> values, Aggregation fn) {
  if (values.empty()) return 0;
  const std::size_t n = values.size();
  switch (fn) {
    case Aggregation::Max:
      return *std::max_element(values.begin(), values.end());
    case Aggregation::Mean: {
      const std::size_t sum = std::accumulate(values.begin(), values.end(), std::size_t{0});
      return (sum + n - 1) / n;
    }
    case Aggregation::Median: {
      std::vector<std::size_t> sorted(values.begin(), values.end());
      std::sort(sorted.begin(), sorted.end());
      if (n % 2 == 1) return sorted[n / 2];
      // ceil((a + b) / 2)
      return (sorted[n / 2 - 1] + sorted[n / 2] + 1) / 2;
    }
  }
  return 0;
}

std::size_t QualityModel::multiplicity(const Term& s, const Term& p) const { return d_.objects(s, p).size(); }

std::size_t QualityModel::aggregated_multiplicity(const Term& cls, const Term& p) const {
  auto key = std::make_pair(cls, p);
  {
    std::lock_guard lock(mu_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }
  std::vector<std::size_t> counts;
  for (const Term& s : d_.instances_of(cls)) {
    if (std::size_t m = multiplicity(s, p); m > 0) counts.push_back(m);
  }
  const std::size_t am = aggregate_ceiling(counts, fn_);
  std::lock_guard lock(mu_);
  memo_.emplace(std::move(key), am);
  return am;
}

std::size_t QualityModel::best_aggregated_multiplicity(const Term& s, const Term& p) const {
  std::size_t best = 0;
  for (const Term& cls : d_.classes_of(s)) best = std::max(best, aggregated_multiplicity(cls, p));
  return best;
}

double QualityModel::completeness_d(const Term& s, const Term& p) const {
  const std::size_t am = best_aggregated_multiplicity(s, p);
  if (am == 0) return 1.0;
  return static_cast<double>(multiplicity(s, p)) / static_cast<double>(am);
}

double QualityModel::completeness_kb(const CrowdKB& kb, const Term& s, const Term& p, KbSelection sets) const {
  if (!sets.any()) throw std::invalid_argument("completeness_kb needs at least one KB set");
  const std::size_t am = best_aggregated_multiplicity(s, p);
  if (am == 0) return 1.0;
  return static_cast<double>(kb_multiplicity(kb, s, p, sets)) / static_cast<double>(am);
}

CompletenessReport QualityModel::report(const Term& s, const Term& p, const CrowdKB* kb) const {
  CompletenessReport r{s, p, multiplicity(s, p), best_aggregated_multiplicity(s, p), 1.0, 0.0};
  r.comp_d = completeness_d(s, p);
  if (kb != nullptr) {
    r.comp_kb_plus = completeness_kb(*kb, s, p, KbSelection{});
  } else {
    r.comp_kb_plus = r.am_best == 0 ? 1.0 : 0.0;
  }
  return r;
}

std::size_t multiplicity(const Dataset& d, const Term& s, const Term& p) { return d.objects(s, p).size(); }

std::size_t aggregated_multiplicity(const Dataset& d, const Term& cls, const Term& p, Aggregation fn) {
  return QualityModel(d, fn).aggregated_multiplicity(cls, p);
}

double completeness_d(const Dataset& d, const Term& s, const Term& p, Aggregation fn) {
  return QualityModel(d, fn).completeness_d(s, p);
}

double completeness_kb(const CrowdKB& kb, const Dataset& d, const Term& s, const Term& p, Aggregation fn,
                       KbSelection sets) {
  return QualityModel(d, fn).completeness_kb(kb, s, p, sets);
}

}  // namespace rdfhunter
