// Shared tokenizer for the formula / lambda / f-term concrete syntaxes.

#ifndef RLFG_LEXER_HPP_
#define RLFG_LEXER_HPP_

#include <cstddef>
#include <string>
#include <vector>

namespace rlfg {

enum class Tok {
  Ident,
  Implic,     // -o
  Arrow,      // ->  (phrase-structure rules)
  LParen,
  RParen,
  LBracket,   // [ ]  (optional constituents)
  RBracket,
  Comma,
  Semi,
  Colon,
  Equals,
  Backslash,
  Dot,
  Dollar,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

// Identifiers are [A-Za-z][A-Za-z0-9_'-]*.  `-o` is only recognized at the
// start of a token, so it must be separated from a preceding identifier by
// whitespace or a delimiter.  Throws SyntaxError on stray characters.
std::vector<Token> lex(const std::string& text);

const char* tok_name(Tok kind);

}  // namespace rlfg

#endif  // RLFG_LEXER_HPP_
