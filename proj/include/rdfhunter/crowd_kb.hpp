#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string_view>
#include <tuple>
#include <vector>

#include "rdfhunter/term.hpp"

namespace rdfhunter {

/// KB+ holds facts the crowd asserted, KB- facts it denied, KB~ facts it
/// could not judge.
enum class KbSet : std::uint8_t { Plus, Minus, Tilde };

std::string_view to_string(KbSet s);
KbSet parse_kb_set(std::string_view s);

/// Which of the three fuzzy sets a KB query should look at.
struct KbSelection {
  bool plus = true;
  bool minus = false;
  bool tilde = false;

  bool includes(KbSet s) const noexcept;
  bool any() const noexcept { return plus || minus || tilde; }
  static KbSelection all() { return {true, true, true}; }
  /// Comma-separated list of "plus", "minus", "tilde".
  static KbSelection parse(std::string_view text);
};

/// (s, p, o, m). An empty object stands for the existential "some value".
struct CrowdQuad {
  Term subject;
  Term predicate;
  std::optional<Term> object;
  double m = 0.0;

  bool operator==(const CrowdQuad&) const = default;
};

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Fuzzy crowd knowledge (KB+, KB-, KB~).
///
/// Each (s, p, o) key is stored at most once per set and a re-insert replaces
/// its membership degree. Reads take a shared lock and writes an exclusive
/// one, so planners may read while the aggregation path writes.
class CrowdKB {
 public:
  CrowdKB() = default;
  CrowdKB(const CrowdKB& other);
  CrowdKB& operator=(const CrowdKB& other);

  /// Throws ShapeError when the object shape does not fit the set (KB+ needs
  /// a constant, KB- an existential) or m lies outside [0, 1].
  void insert(KbSet set, const CrowdQuad& quad);

  /// Quads of `set` for (s, p), ordered by object.
  std::vector<CrowdQuad> find(KbSet set, const Term& s, const Term& p) const;

  /// Every quad of `set`, ordered by (s, p, o).
  std::vector<CrowdQuad> quads(KbSet set) const;

  std::size_t size(KbSet set) const;
  bool empty() const;

  bool operator==(const CrowdKB& other) const;

 private:
  // nullopt sorts before every constant object.
  using Key = std::tuple<Term, Term, std::optional<Term>>;
  using Store = std::map<Key, double>;

  const Store& store(KbSet set) const { return sets_[static_cast<int>(set)]; }

  mutable std::shared_mutex mu_;
  Store sets_[3];
};

/// Number of distinct objects recorded for (s, p) across the selected sets.
std::size_t kb_multiplicity(const CrowdKB& kb, const Term& s, const Term& p, KbSelection sets);

/// 1 - |avg m over KB+ - avg m over KB-| for (s, p); empty averages are 0.
double disagreement(const CrowdKB& kb, const Term& s, const Term& p);

/// Average m over KB~ for (s, p); 0 when the crowd left no such quad.
double uncertainty(const CrowdKB& kb, const Term& s, const Term& p);

void write_kb(const CrowdKB& kb, std::ostream& out);
CrowdKB read_kb(std::istream& in);
void save_kb(const CrowdKB& kb, const std::filesystem::path& path);
CrowdKB load_kb(const std::filesystem::path& path);

inline constexpr int kKbFormatVersion = 1;

/// Shortest decimal string that reads back to the same double.
std::string format_double(double v);
double parse_double(std::string_view s);

}  // namespace rdfhunter
