#include "rdfhunter/term.hpp"

#include <cctype>

#include "ntriples_lexer.hpp"

namespace rdfhunter {

namespace {

bool has_whitespace(std::string_view s) {
  for (unsigned char c : s) {
    if (std::isspace(c)) return true;
  }
  return false;
}

void escape_into(std::string& out, std::string_view s) {
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

std::size_t mix(std::size_t seed, std::size_t h) {
  return seed ^ (h + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace

Term Term::iri(std::string v) {
  if (v.empty() || has_whitespace(v)) {
    throw std::invalid_argument("IRI must be non-empty and free of whitespace: '" + v + "'");
  }
  return Term{TermKind::Iri, std::move(v), {}};
}

Term Term::literal(std::string lexical, std::string annotation) {
  return Term{TermKind::Literal, std::move(lexical), std::move(annotation)};
}

Term Term::blank(std::string id) {
  if (id.empty()) throw std::invalid_argument("blank node id must be non-empty");
  return Term{TermKind::Blank, std::move(id), {}};
}

std::string to_ntriples(const Term& t) {
  std::string out;
  switch (t.kind) {
    case TermKind::Iri:
      out.reserve(t.value.size() + 2);
      out += '<';
      out += t.value;
      out += '>';
      break;
    case TermKind::Blank:
      out = "_:" + t.value;
      break;
    case TermKind::Literal:
      out += '"';
      escape_into(out, t.value);
      out += '"';
      out += t.annotation;
      break;
  }
  return out;
}

std::string to_ntriples(const Triple& t) {
  return to_ntriples(t.subject) + ' ' + to_ntriples(t.predicate) + ' ' + to_ntriples(t.object) + " .";
}

Term parse_term(std::string_view text) {
  detail::NTriplesCursor cur(text, 1);
  Term t = cur.term();
  if (!cur.at_end()) cur.fail("trailing characters after term");
  return t;
}

std::string_view local_name(std::string_view iri) {
  auto cut = iri.find_last_of("#/");
  if (cut == std::string_view::npos || cut + 1 == iri.size()) return iri;
  return iri.substr(cut + 1);
}

std::string humanize_local_name(std::string_view local) {
  std::string out;
  out.reserve(local.size());
  for (std::size_t i = 0; i < local.size(); ++i) {
    char c = local[i];
    if (c == '%' && i + 2 < local.size()) {
      int hi = hex_value(local[i + 1]);
      int lo = hex_value(local[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out += static_cast<char>(hi * 16 + lo);
        i += 2;
        continue;
      }
    }
    out += (c == '_') ? ' ' : c;
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::size_t TermHash::operator()(const Term& t) const noexcept {
  std::size_t h = std::hash<std::string>{}(t.value);
  h = mix(h, static_cast<std::size_t>(t.kind));
  if (!t.annotation.empty()) h = mix(h, std::hash<std::string>{}(t.annotation));
  return h;
}

std::size_t TripleHash::operator()(const Triple& t) const noexcept {
  TermHash th;
  return mix(mix(th(t.subject), th(t.predicate)), th(t.object));
}

namespace detail {

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

void NTriplesCursor::fail(const std::string& what) const {
  throw ParseError("line " + std::to_string(line_) + ", column " + std::to_string(pos_ + 1) + ": " + what,
                   line_, pos_ + 1);
}

void NTriplesCursor::skip_ws() {
  while (!at_end() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r')) ++pos_;
}

void NTriplesCursor::append_codepoint(std::string& out, std::size_t digits) {
  if (pos_ + digits > text_.size()) fail("truncated unicode escape");
  char32_t cp = 0;
  for (std::size_t i = 0; i < digits; ++i) {
    int v = hex_value(text_[pos_ + i]);
    if (v < 0) fail("bad hex digit in unicode escape");
    cp = cp * 16 + static_cast<char32_t>(v);
  }
  if (cp > 0x10FFFF) fail("unicode escape out of range");
  pos_ += digits;
  append_utf8(out, cp);
}

std::string NTriplesCursor::unescape_until(char close, bool allow_string_escapes) {
  std::string out;
  while (true) {
    if (at_end()) fail(std::string("missing closing '") + close + "'");
    char c = text_[pos_++];
    if (c == close) return out;
    if (c != '\\') {
      out += c;
      continue;
    }
    if (at_end()) fail("dangling escape");
    char e = text_[pos_++];
    switch (e) {
      case 'u': append_codepoint(out, 4); continue;
      case 'U': append_codepoint(out, 8); continue;
      default: break;
    }
    if (!allow_string_escapes) fail("only \\u and \\U escapes are allowed in IRIs");
    switch (e) {
      case 't': out += '\t'; break;
      case 'b': out += '\b'; break;
      case 'n': out += '\n'; break;
      case 'r': out += '\r'; break;
      case 'f': out += '\f'; break;
      case '"': out += '"'; break;
      case '\'': out += '\''; break;
      case '\\': out += '\\'; break;
      default: fail(std::string("unknown escape \\") + e);
    }
  }
}

Term NTriplesCursor::iri() {
  if (peek() != '<') fail("expected '<'");
  ++pos_;
  std::string v = unescape_until('>', false);
  if (v.empty()) fail("empty IRI");
  if (has_whitespace(v)) fail("whitespace inside IRI");
  return Term{TermKind::Iri, std::move(v), {}};
}

Term NTriplesCursor::blank() {
  pos_ += 2;  // "_:"
  std::size_t start = pos_;
  while (!at_end()) {
    char c = text_[pos_];
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' ||
        static_cast<unsigned char>(c) >= 0x80) {
      ++pos_;
    } else {
      break;
    }
  }
  while (pos_ > start && text_[pos_ - 1] == '.') --pos_;
  if (pos_ == start) fail("empty blank node label");
  return Term{TermKind::Blank, std::string(text_.substr(start, pos_ - start)), {}};
}

Term NTriplesCursor::literal() {
  ++pos_;  // opening quote
  std::string lexical = unescape_until('"', true);
  std::string annotation;
  if (peek() == '@') {
    std::size_t start = pos_++;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-')) ++pos_;
    if (pos_ == start + 1) fail("empty language tag");
    annotation = std::string(text_.substr(start, pos_ - start));
  } else if (peek() == '^') {
    if (pos_ + 1 >= text_.size() || text_[pos_ + 1] != '^') fail("expected '^^'");
    pos_ += 2;
    Term dt = iri();
    annotation = "^^" + to_ntriples(dt);
  }
  return Term{TermKind::Literal, std::move(lexical), std::move(annotation)};
}

Term NTriplesCursor::term() {
  switch (peek()) {
    case '<': return iri();
    case '"': return literal();
    case '_':
      if (pos_ + 1 < text_.size() && text_[pos_ + 1] == ':') return blank();
      break;
    default: break;
  }
  fail("expected an IRI, literal, or blank node");
}

}  // namespace detail
}  // namespace rdfhunter
