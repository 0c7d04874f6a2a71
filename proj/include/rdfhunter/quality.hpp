#pragma once

#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <string_view>
#include <utility>

#include "rdfhunter/crowd_kb.hpp"
#include "rdfhunter/dataset.hpp"

namespace rdfhunter {

enum class Aggregation : std::uint8_t { Median, Mean, Max };

std::string_view to_string(Aggregation a);
Aggregation parse_aggregation(std::string_view s);

/// Ceiling of the aggregate of a non-empty multiset of positive counts.
/// Returns 0 for an empty multiset.
std::size_t aggregate_ceiling(std::span<const std::size_t> values, Aggregation fn);

/// One row of a completeness profile.
struct CompletenessReport {
  Term subject;
  Term predicate;
  std::size_t m_d = 0;
  std::size_t am_best = 0;
  double comp_d = 1.0;
  double comp_kb_plus = 0.0;
};

/// Completeness estimates over one Dataset.
///
/// Class aggregates are memoized per (class, predicate) for the lifetime of
/// the model; the memo is filled under a lock and filling is idempotent, so
/// one model can serve concurrent readers. The Dataset must outlive the
/// model and must not change while the model is in use.
class QualityModel {
 public:
  explicit QualityModel(const Dataset& d, Aggregation fn = Aggregation::Median) : d_(d), fn_(fn) {}

  const Dataset& dataset() const noexcept { return d_; }
  Aggregation aggregation() const noexcept { return fn_; }

  /// |{o | (s, p, o) in D}|
  std::size_t multiplicity(const Term& s, const Term& p) const;

  /// Ceiling of the aggregate over instances of `cls` having at least one
  /// p-value. Instances without p-values are left out; 0 if none remain.
  std::size_t aggregated_multiplicity(const Term& cls, const Term& p) const;

  /// Max aggregated multiplicity over the classes of s (0 for untyped s).
  std::size_t best_aggregated_multiplicity(const Term& s, const Term& p) const;

  /// multiplicity / best aggregate, or 1 when the best aggregate is 0. May
  /// exceed 1 for subjects richer than their class.
  double completeness_d(const Term& s, const Term& p) const;

  /// Same ratio with the numerator counted in the crowd KB over `sets`.
  double completeness_kb(const CrowdKB& kb, const Term& s, const Term& p, KbSelection sets) const;

  CompletenessReport report(const Term& s, const Term& p, const CrowdKB* kb = nullptr) const;

 private:
  const Dataset& d_;
  Aggregation fn_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<Term, Term>, std::size_t> memo_;
};

std::size_t multiplicity(const Dataset& d, const Term& s, const Term& p);
std::size_t aggregated_multiplicity(const Dataset& d, const Term& cls, const Term& p, Aggregation fn);
double completeness_d(const Dataset& d, const Term& s, const Term& p, Aggregation fn);
double completeness_kb(const CrowdKB& kb, const Dataset& d, const Term& s, const Term& p, Aggregation fn,
                       KbSelection sets);

}  // namespace rdfhunter
