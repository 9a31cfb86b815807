#include "rlfg/lexer.hpp"

#include <cctype>

#include "rlfg/formula.hpp"

namespace rlfg {

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' ||
         c == '-';
}

}  // namespace

bool is_identifier(const std::string& s) {
  if (s.empty() || !ident_start(s[0])) return false;
  for (char c : s)
    if (!ident_char(c)) return false;
  return true;
}

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < n && ident_char(text[j])) ++j;
      out.push_back({Tok::Ident, text.substr(i, j - i), start});
      i = j;
      continue;
    }
    switch (c) {
      case '(': out.push_back({Tok::LParen, "(", start}); ++i; continue;
      case ')': out.push_back({Tok::RParen, ")", start}); ++i; continue;
      case '[': out.push_back({Tok::LBracket, "[", start}); ++i; continue;
      case ']': out.push_back({Tok::RBracket, "]", start}); ++i; continue;
      case ',': out.push_back({Tok::Comma, ",", start}); ++i; continue;
      case ';': out.push_back({Tok::Semi, ";", start}); ++i; continue;
      case ':': out.push_back({Tok::Colon, ":", start}); ++i; continue;
      case '=': out.push_back({Tok::Equals, "=", start}); ++i; continue;
      case '\\': out.push_back({Tok::Backslash, "\\", start}); ++i; continue;
      case '.': out.push_back({Tok::Dot, ".", start}); ++i; continue;
      case '$': out.push_back({Tok::Dollar, "$", start}); ++i; continue;
      case '-':
        if (i + 1 < n && text[i + 1] == 'o' &&
            (i + 2 >= n || !ident_char(text[i + 2]))) {
          out.push_back({Tok::Implic, "-o", start});
          i += 2;
          continue;
        }
        if (i + 1 < n && text[i + 1] == '>') {
          out.push_back({Tok::Arrow, "->", start});
          i += 2;
          continue;
        }
        throw SyntaxError("stray '-' (expected '-o' or '->')", start);
      default:
        throw SyntaxError(std::string("unexpected character '") + c + "'",
                          start);
    }
  }
  out.push_back({Tok::End, "", n});
  return out;
}

const char* tok_name(Tok kind) {
  switch (kind) {
    case Tok::Ident: return "identifier";
    case Tok::Implic: return "'-o'";
    case Tok::Arrow: return "'->'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Colon: return "':'";
    case Tok::Equals: return "'='";
    case Tok::Backslash: return "'\\'";
    case Tok::Dot: return "'.'";
    case Tok::Dollar: return "'$'";
    case Tok::End: return "end of input";
  }
  return "?";
}

}  // namespace rlfg
