#include "rdfhunter/metrics.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

namespace rdfhunter {

namespace {
constexpr std::string_view kNone = "NONE";

std::size_t hits(const std::set<CrowdAnswer>& crowd, const GoldStandard& gold) {
  return static_cast<std::size_t>(std::count_if(crowd.begin(), crowd.end(), [&](const CrowdAnswer& a) {
    const auto* objs = gold.find(a.subject, a.predicate);
    return objs != nullptr && objs->contains(a.object);
  }));
}
}  // namespace

void GoldStandard::add(const Term& s, const Term& p, std::optional<Term> o) {
  entries_[{s, p}].insert(std::move(o));
}

std::set<CrowdAnswer> GoldStandard::answers() const {
  std::set<CrowdAnswer> out;
  for (const auto& [key, objs] : entries_) {
    for (const auto& o : objs) out.insert(CrowdAnswer{key.first, key.second, o});
  }
  return out;
}

const std::set<std::optional<Term>>* GoldStandard::find(const Term& s, const Term& p) const {
  auto it = entries_.find({s, p});
  return it == entries_.end() ? nullptr : &it->second;
}

GoldStandard read_gold(std::istream& in) {
  GoldStandard gold;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto bad = [&](const std::string& what) {
      return ParseError("gold line " + std::to_string(line_no) + ": " + what, line_no);
    };
    nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_array() || rec.size() != 3) throw bad("expected a 3-field record");
    for (const auto& f : rec) {
      if (!f.is_string()) throw bad("fields must be strings");
    }
    try {
      const auto obj = rec[2].get<std::string>();
      std::optional<Term> o;
      if (obj != kNone) o = parse_term(obj);
      gold.add(parse_term(rec[0].get<std::string>()), parse_term(rec[1].get<std::string>()), std::move(o));
    } catch (const ParseError& e) {
      throw bad(e.what());
    }
  }
  return gold;
}

GoldStandard load_gold(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_gold(in);
}

void write_gold(std::ostream& out, const GoldStandard& gold) {
  for (const auto& a : gold.answers()) {
    nlohmann::json rec = nlohmann::json::array(
        {to_ntriples(a.subject), to_ntriples(a.predicate), a.object ? to_ntriples(*a.object) : std::string(kNone)});
    out << rec.dump() << '\n';
  }
}

std::set<CrowdAnswer> crowd_answers(std::span<const FoldedAnswer> folded) {
  std::set<CrowdAnswer> out;
  for (const auto& f : folded) {
    if (f.answer.target == KbSet::Plus && f.quad.object) {
      out.insert(CrowdAnswer{f.quad.subject, f.quad.predicate, f.quad.object});
    } else if (f.answer.target == KbSet::Minus) {
      out.insert(CrowdAnswer{f.quad.subject, f.quad.predicate, std::nullopt});
    }
  }
  return out;
}

std::optional<double> precision(const std::set<CrowdAnswer>& crowd, const GoldStandard& gold) {
  if (crowd.empty()) return std::nullopt;
  return static_cast<double>(hits(crowd, gold)) / static_cast<double>(crowd.size());
}

std::optional<double> recall(const std::set<CrowdAnswer>& crowd, const GoldStandard& gold) {
  const std::size_t total = gold.answers().size();
  if (total == 0) return std::nullopt;
  return static_cast<double>(hits(crowd, gold)) / static_cast<double>(total);
}

double f_measure(double p, double r) {
  if (p + r <= 0.0) return 0.0;
  return 2.0 * p * r / (p + r);
}

Scores score(const std::set<CrowdAnswer>& crowd, const GoldStandard& gold) {
  Scores s{precision(crowd, gold), recall(crowd, gold), std::nullopt};
  if (s.precision && s.recall) s.f = f_measure(*s.precision, *s.recall);
  return s;
}

}  // namespace rdfhunter
