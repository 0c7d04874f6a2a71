#include "rdfhunter/query.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>

#include "rdfhunter/dataset.hpp"
#include "ntriples_lexer.hpp"

namespace rdfhunter {

namespace {

enum class Tok { Iri, PName, Var, String, LangTag, Caret, Number, Word, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

bool is_name_char(unsigned char c) { return std::isalnum(c) || c == '_' || c == '-' || c >= 0x80; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t{Tok::End, {}, line_, col()};
      if (pos_ >= text_.size()) {
        out.push_back(t);
        return out;
      }
      char c = text_[pos_];
      if (c == '<') {
        t.kind = Tok::Iri;
        t.text = read_iri();
      } else if (c == '?' || c == '$') {
        ++pos_;
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                                       text_[pos_] == '_' || static_cast<unsigned char>(text_[pos_]) >= 0x80)) {
          ++pos_;
        }
        if (pos_ == start) fail("empty variable name", t);
        t.kind = Tok::Var;
        t.text = std::string(text_.substr(start, pos_ - start));
      } else if (c == '"' || c == '\'') {
        t.kind = Tok::String;
        t.text = read_string(c, t);
      } else if (c == '@') {
        ++pos_;
        std::size_t start = pos_;
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '-')) {
          ++pos_;
        }
        if (pos_ == start) fail("empty language tag", t);
        t.kind = Tok::LangTag;
        t.text = "@" + std::string(text_.substr(start, pos_ - start));
      } else if (c == '^') {
        if (pos_ + 1 >= text_.size() || text_[pos_ + 1] != '^') fail("expected '^^'", t);
        pos_ += 2;
        t.kind = Tok::Caret;
      } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                 ((c == '+' || c == '-') && pos_ + 1 < text_.size() &&
                  std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
        t.kind = Tok::Number;
        t.text = read_number();
      } else if (c == '{' || c == '}' || c == '.' || c == ';' || c == ',' || c == '*') {
        ++pos_;
        t.kind = Tok::Punct;
        t.text = std::string(1, c);
      } else if (is_name_char(static_cast<unsigned char>(c)) || c == ':') {
        std::size_t start = pos_;
        while (pos_ < text_.size()) {
          unsigned char d = static_cast<unsigned char>(text_[pos_]);
          if (d == '\\' && pos_ + 1 < text_.size()) {
            pos_ += 2;
          } else if (is_name_char(d) || d == ':' || d == '.' || d == '%') {
            ++pos_;
          } else {
            break;
          }
        }
        while (pos_ > start && text_[pos_ - 1] == '.') --pos_;
        std::string word(text_.substr(start, pos_ - start));
        t.kind = word.find(':') != std::string::npos ? Tok::PName : Tok::Word;
        t.text = std::move(word);
      } else {
        fail(std::string("unexpected character '") + c + "'", t);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  std::size_t col() const { return pos_ - line_start_ + 1; }

  [[noreturn]] void fail(const std::string& what, const Token& at) const {
    throw ParseError("line " + std::to_string(at.line) + ", column " + std::to_string(at.column) + ": " + what,
                     at.line, at.column);
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++pos_;
        ++line_;
        line_start_ = pos_;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string read_iri() {
    std::size_t end = text_.find('>', pos_);
    std::size_t nl = text_.find('\n', pos_);
    if (end == std::string_view::npos || (nl != std::string_view::npos && nl < end)) {
      fail("unterminated IRI", Token{Tok::Iri, {}, line_, col()});
    }
    detail::NTriplesCursor cur(text_.substr(pos_, end - pos_ + 1), line_);
    Token at{Tok::Iri, {}, line_, col()};
    try {
      Term iri = cur.iri();
      pos_ = end + 1;
      return iri.value;
    } catch (const ParseError& e) {
      fail(std::string("bad IRI: ") + e.what(), at);
    }
  }

  std::string read_string(char quote, const Token& at) {
    ++pos_;
    std::string out;
    while (true) {
      if (pos_ >= text_.size() || text_[pos_] == '\n') fail("unterminated string", at);
      char c = text_[pos_++];
      if (c == quote) return out;
      if (c != '\\') {
        out += c;
        continue;
      }
      if (pos_ >= text_.size()) fail("dangling escape", at);
      char e = text_[pos_++];
      switch (e) {
        case 't': out += '\t'; break;
        case 'b': out += '\b'; break;
        case 'n': out += '\n'; break;
        case 'r': out += '\r'; break;
        case 'f': out += '\f'; break;
        case '"': out += '"'; break;
        case '\'': out += '\''; break;
        case '\\': out += '\\'; break;
        case 'u':
        case 'U': {
          std::size_t digits = e == 'u' ? 4 : 8;
          if (pos_ + digits > text_.size()) fail("truncated unicode escape", at);
          char32_t cp = 0;
          for (std::size_t i = 0; i < digits; ++i) {
            char h = text_[pos_ + i];
            int v = std::isdigit(static_cast<unsigned char>(h)) ? h - '0'
                    : (h >= 'a' && h <= 'f')                    ? h - 'a' + 10
                    : (h >= 'A' && h <= 'F')                    ? h - 'A' + 10
                                                                : -1;
            if (v < 0) fail("bad unicode escape", at);
            cp = cp * 16 + static_cast<char32_t>(v);
          }
          pos_ += digits;
          detail::append_utf8(out, cp);
          break;
        }
        default: fail(std::string("unknown escape \\") + e, at);
      }
    }
  }

  std::string read_number() {
    std::size_t start = pos_;
    if (text_[pos_] == '+' || text_[pos_] == '-') ++pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ + 1 < text_.size() && text_[pos_] == '.' && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t line_start_ = 0;
};

bool keyword_is(const Token& t, std::string_view kw) {
  if (t.kind != Tok::Word || t.text.size() != kw.size()) return false;
  for (std::size_t i = 0; i < kw.size(); ++i) {
    if (std::toupper(static_cast<unsigned char>(t.text[i])) != kw[i]) return false;
  }
  return true;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  BGPQuery run() {
    BGPQuery q;
    while (keyword_is(peek(), "PREFIX")) {
      next();
      const Token& pn = next();
      if (pn.kind != Tok::PName || pn.text.back() != ':' || pn.text.find(':') != pn.text.size() - 1) {
        fail("expected a prefix name ending in ':'", pn);
      }
      const Token& iri = next();
      if (iri.kind != Tok::Iri) fail("expected an IRI after the prefix name", iri);
      std::string name = pn.text.substr(0, pn.text.size() - 1);
      auto it = std::find_if(q.prefixes.begin(), q.prefixes.end(), [&](const auto& p) { return p.first == name; });
      if (it != q.prefixes.end()) {
        it->second = iri.text;
      } else {
        q.prefixes.emplace_back(std::move(name), iri.text);
      }
    }
    prefixes_ = &q.prefixes;

    if (!keyword_is(peek(), "SELECT")) fail("expected SELECT", peek());
    next();
    if (keyword_is(peek(), "DISTINCT")) {
      next();
      q.distinct = true;
    }
    std::vector<Token> projected_tokens;
    if (is_punct(peek(), "*")) {
      next();
      q.select_all = true;
    } else {
      while (peek().kind == Tok::Var) {
        projected_tokens.push_back(peek());
        q.projected.push_back(Variable{next().text});
      }
      if (q.projected.empty()) fail("expected '*' or at least one variable after SELECT", peek());
    }
    if (keyword_is(peek(), "WHERE")) next();
    expect_punct("{");
    while (!is_punct(peek(), "}")) {
      PatternTerm subject = subject_term();
      predicate_object_list(q, subject);
      if (is_punct(peek(), ".")) {
        next();
        continue;
      }
      if (!is_punct(peek(), "}")) fail("expected '.' or '}'", peek());
    }
    next();
    if (peek().kind != Tok::End) fail("unexpected content after the query", peek());

    auto used = q.variables();
    for (std::size_t i = 0; i < q.projected.size(); ++i) {
      if (std::find(used.begin(), used.end(), q.projected[i]) == used.end()) {
        fail("projected variable ?" + q.projected[i].name + " does not occur in the WHERE clause",
             projected_tokens[i]);
      }
    }
    return q;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (t.kind != Tok::End) ++pos_;
    return t;
  }
  static bool is_punct(const Token& t, std::string_view p) { return t.kind == Tok::Punct && t.text == p; }

  [[noreturn]] void fail(const std::string& what, const Token& at) const {
    std::string near = at.kind == Tok::End ? "end of input" : "'" + at.text + "'";
    throw ParseError("line " + std::to_string(at.line) + ", column " + std::to_string(at.column) + ": " + what +
                         " (near " + near + ")",
                     at.line, at.column);
  }

  void expect_punct(std::string_view p) {
    if (!is_punct(peek(), p)) fail("expected '" + std::string(p) + "'", peek());
    next();
  }

  Term expand(const Token& t) {
    auto colon = t.text.find(':');
    std::string prefix = t.text.substr(0, colon);
    auto it = std::find_if(prefixes_->begin(), prefixes_->end(), [&](const auto& p) { return p.first == prefix; });
    if (it == prefixes_->end()) fail("unknown prefix '" + prefix + ":'", t);
    std::string local = t.text.substr(colon + 1);
    std::string unescaped;
    for (std::size_t i = 0; i < local.size(); ++i) {
      if (local[i] == '\\' && i + 1 < local.size()) {
        unescaped += local[++i];
      } else {
        unescaped += local[i];
      }
    }
    return Term::iri(it->second + unescaped);
  }

  std::optional<Term> iri_like(const Token& t) {
    if (t.kind == Tok::Iri) return Term::iri(t.text);
    if (t.kind == Tok::PName) return expand(t);
    return std::nullopt;
  }

  PatternTerm subject_term() {
    const Token& t = next();
    if (t.kind == Tok::Var) return Variable{t.text};
    if (auto iri = iri_like(t)) return *iri;
    fail("expected a variable or IRI in subject position", t);
  }

  PatternTerm verb() {
    const Token& t = next();
    if (t.kind == Tok::Var) return Variable{t.text};
    if (t.kind == Tok::Word && t.text == "a") return Term::iri(std::string(vocab::kRdfType));
    if (auto iri = iri_like(t)) return *iri;
    fail("expected a variable, IRI, or 'a' in predicate position", t);
  }

  PatternTerm object_term() {
    const Token& t = next();
    if (t.kind == Tok::Var) return Variable{t.text};
    if (auto iri = iri_like(t)) return *iri;
    if (t.kind == Tok::String) {
      if (peek().kind == Tok::LangTag) return Term::literal(t.text, next().text);
      if (peek().kind == Tok::Caret) {
        next();
        const Token& dt = next();
        auto dt_iri = iri_like(dt);
        if (!dt_iri) fail("expected a datatype IRI after '^^'", dt);
        return Term::literal(t.text, "^^" + to_ntriples(*dt_iri));
      }
      return Term::literal(t.text);
    }
    if (t.kind == Tok::Number) {
      bool decimal = t.text.find('.') != std::string::npos;
      std::string dt(decimal ? vocab::kXsdDecimal : vocab::kXsdInteger);
      return Term::literal(t.text, "^^<" + dt + ">");
    }
    fail("expected a variable, IRI, or literal in object position", t);
  }

  void predicate_object_list(BGPQuery& q, const PatternTerm& subject) {
    while (true) {
      PatternTerm predicate = verb();
      while (true) {
        q.patterns.push_back(TriplePattern{subject, predicate, object_term(), q.patterns.size() + 1});
        if (!is_punct(peek(), ",")) break;
        next();
      }
      if (!is_punct(peek(), ";")) return;
      next();
      // A trailing ';' before '.' or '}' is legal.
      if (is_punct(peek(), ".") || is_punct(peek(), "}")) return;
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const std::vector<std::pair<std::string, std::string>>* prefixes_ = nullptr;
};

void push_unique(std::vector<Variable>& out, const PatternTerm& t) {
  if (const Variable* v = as_variable(t); v && std::find(out.begin(), out.end(), *v) == out.end()) {
    out.push_back(*v);
  }
}

}  // namespace

std::string to_string(const PatternTerm& t) {
  if (const Variable* v = as_variable(t)) return "?" + v->name;
  return to_ntriples(std::get<Term>(t));
}

std::vector<Variable> TriplePattern::variables() const {
  std::vector<Variable> out;
  push_unique(out, subject);
  push_unique(out, predicate);
  push_unique(out, object);
  return out;
}

std::vector<Variable> BGPQuery::variables() const {
  std::vector<Variable> out;
  for (const auto& p : patterns) {
    push_unique(out, p.subject);
    push_unique(out, p.predicate);
    push_unique(out, p.object);
  }
  return out;
}

std::vector<Variable> BGPQuery::output_variables() const { return select_all ? variables() : projected; }

BGPQuery parse_query(std::string_view text) { return Parser(Lexer(text).run()).run(); }

BGPQuery load_query(const std::filesystem::path& path) { return parse_query(read_text_file(path)); }

std::string to_sparql(const BGPQuery& q) {
  std::string out;
  for (const auto& [name, iri] : q.prefixes) out += "PREFIX " + name + ": <" + iri + ">\n";
  out += "SELECT ";
  if (q.distinct) out += "DISTINCT ";
  if (q.select_all) {
    out += "*";
  } else {
    for (std::size_t i = 0; i < q.projected.size(); ++i) {
      if (i > 0) out += ' ';
      out += "?" + q.projected[i].name;
    }
  }
  out += " WHERE {\n";
  for (const auto& p : q.patterns) {
    out += "  " + to_string(p.subject) + ' ' + to_string(p.predicate) + ' ' + to_string(p.object) + " .\n";
  }
  out += "}\n";
  return out;
}

}  // namespace rdfhunter
