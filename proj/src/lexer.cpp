#include "memsest/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <limits>

namespace memsest {

namespace {

class LineMap {
public:
  explicit LineMap(std::string_view src) {
    starts_.push_back(0);
    for (std::size_t i = 0; i < src.size(); ++i)
      if (src[i] == '\n')
        starts_.push_back(static_cast<std::uint32_t>(i + 1));
  }

  std::pair<std::uint32_t, std::uint32_t> at(std::size_t offset) const {
    auto it = std::upper_bound(starts_.begin(), starts_.end(), static_cast<std::uint32_t>(offset));
    auto line = static_cast<std::uint32_t>(it - starts_.begin());
    auto col = static_cast<std::uint32_t>(offset - starts_[line - 1] + 1);
    return {line, col};
  }

private:
  std::vector<std::uint32_t> starts_;
};

[[noreturn]] void fail(const LineMap& lines, std::size_t offset, Errc kind, std::string msg) {
  auto [line, col] = lines.at(offset);
  throw ParseError({Diagnostic{kind, line, col, std::move(msg)}});
}

// Returns the byte after a quoted literal starting at `i` (which holds the quote).
std::size_t skip_quoted(std::string_view s, std::size_t i) {
  char quote = s[i++];
  while (i < s.size() && s[i] != quote && s[i] != '\n') {
    if (s[i] == '\\' && i + 1 < s.size())
      ++i;
    ++i;
  }
  return i < s.size() && s[i] == quote ? i + 1 : i;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos)
    return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

// Blanks comments and preprocessor lines in place; byte offsets are preserved.
std::string strip(std::string_view src, const LineMap& lines, std::vector<std::string>& includes) {
  std::string out(src);
  std::size_t i = 0;
  bool line_start = true;
  while (i < out.size()) {
    char c = out[i];
    if (c == '\n') {
      line_start = true;
      ++i;
      continue;
    }
    if (line_start && (c == ' ' || c == '\t' || c == '\r')) {
      ++i;
      continue;
    }
    if (line_start && c == '#') {
      std::size_t end = out.find('\n', i);
      if (end == std::string::npos)
        end = out.size();
      std::string directive = trim(std::string_view(out).substr(i + 1, end - i - 1));
      if (directive.rfind("include", 0) == 0) {
        std::string rest = trim(std::string_view(directive).substr(7));
        if (rest.size() < 3 || !((rest.front() == '<' && rest.back() == '>') ||
                                 (rest.front() == '"' && rest.back() == '"')))
          fail(lines, i, Errc::SyntaxError, "malformed #include");
        std::string header = rest.substr(1, rest.size() - 2);
        if (!is_allowed_header(header))
          fail(lines, i, Errc::UnsupportedConstruct, "#include <" + header + "> is not supported");
        includes.push_back(header);
      }
      std::fill(out.begin() + static_cast<std::ptrdiff_t>(i), out.begin() + static_cast<std::ptrdiff_t>(end), ' ');
      i = end;
      continue;
    }
    line_start = false;
    if (c == '"' || c == '\'') {
      i = skip_quoted(out, i);
      continue;
    }
    if (c == '/' && i + 1 < out.size() && out[i + 1] == '/') {
      while (i < out.size() && out[i] != '\n')
        out[i++] = ' ';
      continue;
    }
    if (c == '/' && i + 1 < out.size() && out[i + 1] == '*') {
      std::size_t start = i;
      out[i++] = ' ';
      out[i++] = ' ';
      while (i < out.size() && !(out[i] == '*' && i + 1 < out.size() && out[i + 1] == '/')) {
        if (out[i] != '\n')
          out[i] = ' ';
        ++i;
      }
      if (i >= out.size())
        fail(lines, start, Errc::SyntaxError, "unterminated comment");
      out[i++] = ' ';
      out[i++] = ' ';
      continue;
    }
    ++i;
  }
  return out;
}

constexpr std::array<std::string_view, 7> kKeywords = {"int", "void", "if", "else",
                                                      "for", "while", "return"};

// Recognised so the parser can reject them with a precise diagnostic.
constexpr std::array<std::string_view, 27> kUnsupportedKeywords = {
    "char",   "short",  "long",     "float",  "double", "unsigned", "signed",
    "struct", "union",  "enum",     "typedef", "sizeof", "goto",    "switch",
    "case",   "default", "break",   "continue", "do",    "const",   "static",
    "extern", "volatile", "register", "auto",   "inline", "_Bool"};

constexpr std::array<std::string_view, 22> kPuncts3and2 = {
    "<<=", ">>=", "<=", ">=", "==", "!=", "&&", "||", "++", "--", "+=",
    "-=",  "*=",  "/=", "%=", "->", "<<", ">>", "&=", "|=", "^=", "::"};

int unescape(char c) {
  switch (c) {
    case 'n': return '\n';
    case 't': return '\t';
    case 'r': return '\r';
    case '0': return '\0';
    case '\\': return '\\';
    case '\'': return '\'';
    case '"': return '"';
    default: return -1;
  }
}

} // namespace

LexResult lex(std::string_view source) {
  LineMap lines(source);
  LexResult result;
  std::string text = strip(source, lines, result.includes);

  auto push = [&](Tok kind, std::string spelling, std::size_t begin, std::size_t end) {
    Token t;
    t.kind = kind;
    t.text = std::move(spelling);
    t.span = {static_cast<std::uint32_t>(begin), static_cast<std::uint32_t>(end)};
    auto [line, col] = lines.at(begin);
    t.line = line;
    t.column = col;
    result.tokens.push_back(std::move(t));
    return &result.tokens.back();
  };

  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isalpha(c) || c == '_') {
      while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_'))
        ++i;
      std::string word = text.substr(start, i - start);
      bool kw = std::find(kKeywords.begin(), kKeywords.end(), word) != kKeywords.end() ||
                std::find(kUnsupportedKeywords.begin(), kUnsupportedKeywords.end(), word) !=
                    kUnsupportedKeywords.end();
      push(kw ? Tok::Keyword : Tok::Ident, std::move(word), start, i);
      continue;
    }
    if (std::isdigit(c)) {
      int base = 10;
      if (text[i] == '0' && i + 1 < text.size() && (text[i + 1] == 'x' || text[i + 1] == 'X')) {
        base = 16;
        i += 2;
      } else if (text[i] == '0') {
        base = 8;
      }
      std::size_t digits = i;
      unsigned __int128 v = 0;
      while (i < text.size() && std::isxdigit(static_cast<unsigned char>(text[i]))) {
        char d = text[i];
        int dv = std::isdigit(static_cast<unsigned char>(d)) ? d - '0' : std::tolower(d) - 'a' + 10;
        if (dv >= base) {
          if (base == 10 && (d == 'e' || d == 'E'))
            break;
          fail(lines, start, Errc::SyntaxError, "invalid digit in integer literal");
        }
        v = v * static_cast<unsigned>(base) + static_cast<unsigned>(dv);
        if (v > static_cast<unsigned __int128>(std::numeric_limits<std::int64_t>::max()))
          fail(lines, start, Errc::SyntaxError, "integer literal out of range");
        ++i;
      }
      if (i == digits && base == 16)
        fail(lines, start, Errc::SyntaxError, "invalid hexadecimal literal");
      if (i < text.size() && (text[i] == '.' || text[i] == 'e' || text[i] == 'E'))
        fail(lines, start, Errc::UnsupportedConstruct, "floating point literals are not supported");
      if (i < text.size() && (std::isalpha(static_cast<unsigned char>(text[i])) || text[i] == '_'))
        fail(lines, start, Errc::UnsupportedConstruct, "integer literal suffixes are not supported");
      auto* t = push(Tok::Number, text.substr(start, i - start), start, i);
      t->value = static_cast<std::int64_t>(v);
      continue;
    }
    if (c == '\'') {
      ++i;
      int v = 0;
      if (i < text.size() && text[i] == '\\' && i + 1 < text.size()) {
        v = unescape(text[i + 1]);
        if (v < 0)
          fail(lines, start, Errc::SyntaxError, "unknown escape sequence");
        i += 2;
      } else if (i < text.size() && text[i] != '\'' && text[i] != '\n') {
        v = static_cast<unsigned char>(text[i]);
        ++i;
      } else {
        fail(lines, start, Errc::SyntaxError, "empty character literal");
      }
      if (i >= text.size() || text[i] != '\'')
        fail(lines, start, Errc::SyntaxError, "unterminated character literal");
      ++i;
      auto* t = push(Tok::Number, text.substr(start, i - start), start, i);
      t->value = v;
      continue;
    }
    if (c == '"') {
      ++i;
      std::string contents;
      while (i < text.size() && text[i] != '"') {
        if (text[i] == '\n')
          fail(lines, start, Errc::SyntaxError, "unterminated string literal");
        if (text[i] == '\\') {
          if (i + 1 >= text.size())
            break;
          int v = unescape(text[i + 1]);
          if (v < 0)
            fail(lines, i, Errc::SyntaxError, "unknown escape sequence");
          contents.push_back(static_cast<char>(v));
          i += 2;
          continue;
        }
        contents.push_back(text[i++]);
      }
      if (i >= text.size())
        fail(lines, start, Errc::SyntaxError, "unterminated string literal");
      ++i;
      push(Tok::String, std::move(contents), start, i);
      continue;
    }
    bool matched = false;
    for (auto p : kPuncts3and2) {
      if (text.compare(i, p.size(), p) == 0) {
        push(Tok::Punct, std::string(p), start, i + p.size());
        i += p.size();
        matched = true;
        break;
      }
    }
    if (matched)
      continue;
    static constexpr std::string_view singles = "+-*/%<>=!(){}[];,&|^~?:.";
    if (singles.find(static_cast<char>(c)) != std::string_view::npos) {
      push(Tok::Punct, std::string(1, static_cast<char>(c)), start, i + 1);
      ++i;
      continue;
    }
    fail(lines, start, Errc::SyntaxError,
         std::string("unexpected character '") + static_cast<char>(c) + "'");
  }
  Token end;
  end.kind = Tok::End;
  end.span = {static_cast<std::uint32_t>(text.size()), static_cast<std::uint32_t>(text.size())};
  auto [line, col] = lines.at(text.size());
  end.line = line;
  end.column = col;
  result.tokens.push_back(std::move(end));
  return result;
}

} // namespace memsest
