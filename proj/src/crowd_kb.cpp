#include "rdfhunter/crowd_kb.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <mutex>
#include <ostream>
#include <set>
#include <string>

#include <json.hpp>

namespace rdfhunter {

namespace {

constexpr std::string_view kExistentialToken = "_:o";
constexpr std::string_view kFormatName = "rdfhunter-kb";

double average(const std::vector<CrowdQuad>& quads) {
  if (quads.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& q : quads) sum += q.m;
  return sum / static_cast<double>(quads.size());
}

}  // namespace

std::string_view to_string(KbSet s) {
  switch (s) {
    case KbSet::Plus: return "plus";
    case KbSet::Minus: return "minus";
    case KbSet::Tilde: return "tilde";
  }
  return "?";
}

KbSet parse_kb_set(std::string_view s) {
  if (s == "plus") return KbSet::Plus;
  if (s == "minus") return KbSet::Minus;
  if (s == "tilde") return KbSet::Tilde;
  throw std::invalid_argument("unknown KB set '" + std::string(s) + "'");
}

bool KbSelection::includes(KbSet s) const noexcept {
  switch (s) {
    case KbSet::Plus: return plus;
    case KbSet::Minus: return minus;
    case KbSet::Tilde: return tilde;
  }
  return false;
}

KbSelection KbSelection::parse(std::string_view text) {
  KbSelection sel{false, false, false};
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(',', start);
    if (end == std::string_view::npos) end = text.size();
    switch (parse_kb_set(text.substr(start, end - start))) {
      case KbSet::Plus: sel.plus = true; break;
      case KbSet::Minus: sel.minus = true; break;
      case KbSet::Tilde: sel.tilde = true; break;
    }
    start = end + 1;
  }
  return sel;
}

CrowdKB::CrowdKB(const CrowdKB& other) {
  std::shared_lock lock(other.mu_);
  for (int i = 0; i < 3; ++i) sets_[i] = other.sets_[i];
}

CrowdKB& CrowdKB::operator=(const CrowdKB& other) {
  if (this == &other) return *this;
  std::unique_lock lock(mu_, std::defer_lock);
  std::shared_lock other_lock(other.mu_, std::defer_lock);
  std::lock(lock, other_lock);
  for (int i = 0; i < 3; ++i) sets_[i] = other.sets_[i];
  return *this;
}

void CrowdKB::insert(KbSet set, const CrowdQuad& quad) {
  if (!(quad.m >= 0.0 && quad.m <= 1.0)) {
    throw ShapeError("membership degree must lie in [0,1], got " + format_double(quad.m));
  }
  if (!quad.predicate.is_iri()) throw ShapeError("quad predicate must be an IRI");
  if (set == KbSet::Plus && !quad.object) throw ShapeError("KB+ quads need a constant object");
  if (set == KbSet::Minus && quad.object) throw ShapeError("KB- quads need an existential object");
  std::unique_lock lock(mu_);
  sets_[static_cast<int>(set)][Key{quad.subject, quad.predicate, quad.object}] = quad.m;
}

std::vector<CrowdQuad> CrowdKB::find(KbSet set, const Term& s, const Term& p) const {
  std::shared_lock lock(mu_);
  const Store& st = store(set);
  std::vector<CrowdQuad> out;
  for (auto it = st.lower_bound(Key{s, p, std::nullopt}); it != st.end(); ++it) {
    const auto& [ks, kp, ko] = it->first;
    if (ks != s || kp != p) break;
    out.push_back(CrowdQuad{ks, kp, ko, it->second});
  }
  return out;
}

std::vector<CrowdQuad> CrowdKB::quads(KbSet set) const {
  std::shared_lock lock(mu_);
  std::vector<CrowdQuad> out;
  for (const auto& [key, m] : store(set)) {
    const auto& [s, p, o] = key;
    out.push_back(CrowdQuad{s, p, o, m});
  }
  return out;
}

std::size_t CrowdKB::size(KbSet set) const {
  std::shared_lock lock(mu_);
  return store(set).size();
}

bool CrowdKB::empty() const {
  std::shared_lock lock(mu_);
  return sets_[0].empty() && sets_[1].empty() && sets_[2].empty();
}

bool CrowdKB::operator==(const CrowdKB& other) const {
  if (this == &other) return true;
  std::shared_lock lock(mu_, std::defer_lock);
  std::shared_lock other_lock(other.mu_, std::defer_lock);
  std::lock(lock, other_lock);
  for (int i = 0; i < 3; ++i) {
    if (sets_[i] != other.sets_[i]) return false;
  }
  return true;
}

std::size_t kb_multiplicity(const CrowdKB& kb, const Term& s, const Term& p, KbSelection sets) {
  std::set<std::optional<Term>> objects;
  for (KbSet set : {KbSet::Plus, KbSet::Minus, KbSet::Tilde}) {
    if (!sets.includes(set)) continue;
    for (auto& q : kb.find(set, s, p)) objects.insert(std::move(q.object));
  }
  return objects.size();
}

double disagreement(const CrowdKB& kb, const Term& s, const Term& p) {
  const double plus = average(kb.find(KbSet::Plus, s, p));
  const double minus = average(kb.find(KbSet::Minus, s, p));
  return 1.0 - std::fabs(plus - minus);
}

double uncertainty(const CrowdKB& kb, const Term& s, const Term& p) {
  return average(kb.find(KbSet::Tilde, s, p));
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::runtime_error("cannot format number");
  return std::string(buf, ptr);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  }
  return v;
}

void write_kb(const CrowdKB& kb, std::ostream& out) {
  out << nlohmann::json{{"format", kFormatName}, {"version", kKbFormatVersion}}.dump() << '\n';
  for (KbSet set : {KbSet::Plus, KbSet::Minus, KbSet::Tilde}) {
    for (const auto& q : kb.quads(set)) {
      nlohmann::json rec = nlohmann::json::array(
          {to_string(set), to_ntriples(q.subject), to_ntriples(q.predicate),
           q.object ? to_ntriples(*q.object) : std::string(kExistentialToken), format_double(q.m)});
      out << rec.dump() << '\n';
    }
  }
}

CrowdKB read_kb(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto bad = [&](const std::string& what) -> ParseError {
    return ParseError("KB line " + std::to_string(line_no) + ": " + what, line_no);
  };

  if (!std::getline(in, line)) throw ParseError("KB file is empty (missing header)", 1);
  ++line_no;
  nlohmann::json header = nlohmann::json::parse(line, nullptr, false);
  if (header.is_discarded() || !header.is_object() || header.value("format", "") != kFormatName) {
    throw bad("missing KB header");
  }
  if (header.value("version", -1) != kKbFormatVersion) {
    throw bad("unsupported KB format version " + header.value("version", nlohmann::json(-1)).dump());
  }

  CrowdKB kb;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_array() || rec.size() != 5) throw bad("expected a 5-field record");
    for (const auto& f : rec) {
      if (!f.is_string()) throw bad("fields must be strings");
    }
    try {
      KbSet set = parse_kb_set(rec[0].get<std::string>());
      CrowdQuad q{parse_term(rec[1].get<std::string>()), parse_term(rec[2].get<std::string>()),
                  std::nullopt, parse_double(rec[4].get<std::string>())};
      const auto obj = rec[3].get<std::string>();
      if (obj != kExistentialToken) q.object = parse_term(obj);
      kb.insert(set, q);
    } catch (const std::exception& e) {
      throw bad(e.what());
    }
  }
  return kb;
}

void save_kb(const CrowdKB& kb, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_kb(kb, out);
  out.flush();
  if (!out) throw std::runtime_error("error writing " + path.string());
}

CrowdKB load_kb(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_kb(in);
}

}  // namespace rdfhunter
