#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "memsest/ast.hpp"
#include "memsest/error.hpp"

namespace memsest {

enum class Tok {
  End,
  Ident,
  Keyword,
  Number,
  String,
  Punct,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;        // identifier/keyword/punctuator spelling, string contents (unescaped)
  std::int64_t value = 0;  // Number
  Span span;
  std::uint32_t line = 1;
  std::uint32_t column = 1;
};

struct LexResult {
  std::vector<Token> tokens;            // always terminated by Tok::End
  std::vector<std::string> includes;    // allowlisted #include headers, in order
};

/// Strips comments and preprocessor lines (keeping byte offsets), then
/// tokenizes. Throws ParseError on malformed tokens or disallowed #includes.
LexResult lex(std::string_view source);

} // namespace memsest
