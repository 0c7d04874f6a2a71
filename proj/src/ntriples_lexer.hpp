#pragma once

// Cursor over one line of N-Triples text. Shared by the file parser and
// by the line-record formats that embed N-Triples terms.

#include <cstddef>
#include <string>
#include <string_view>

#include "rdfhunter/term.hpp"

namespace rdfhunter::detail {

class NTriplesCursor {
 public:
  NTriplesCursor(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  void skip_ws();
  bool at_end() const noexcept { return pos_ >= text_.size(); }
  char peek() const noexcept { return at_end() ? '\0' : text_[pos_]; }
  std::size_t pos() const noexcept { return pos_; }
  void advance() noexcept { ++pos_; }

  Term term();
  Term iri();
  [[noreturn]] void fail(const std::string& what) const;

 private:
  Term literal();
  Term blank();
  std::string unescape_until(char close, bool allow_string_escapes);
  void append_codepoint(std::string& out, std::size_t digits);

  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

void append_utf8(std::string& out, char32_t cp);

}  // namespace rdfhunter::detail
