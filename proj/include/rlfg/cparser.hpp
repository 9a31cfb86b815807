// C-structure parsing: tokenization, an all-parses bottom-up chart over the
// annotated CFG, and f-term assembly over parse trees.

#ifndef RLFG_CPARSER_HPP_
#define RLFG_CPARSER_HPP_

#include <memory>
#include <string>
#include <vector>

#include "rlfg/grammar.hpp"

namespace rlfg {

struct UnknownWordError : Error {
  explicit UnknownWordError(const std::string& word)
      : Error("unknown word '" + word + "'"), word(word) {}
  std::string word;
};

struct CNode;
using CNodePtr = std::shared_ptr<const CNode>;

// Lexical nodes carry their entry and no children; phrasal nodes carry the
// rule and variant that built them.
struct CNode {
  std::string category;
  const LexEntry* entry = nullptr;
  int rule_index = -1;
  int variant_index = -1;
  std::vector<CNodePtr> children;
};

// Whitespace splitting; sentence-final punctuation (`.?!`) is discarded.
std::vector<std::string> tokenize(const std::string& sentence);

// Every parse tree of the token string as the grammar's start category.
// Throws UnknownWordError for tokens without lexical entries.
std::vector<CNodePtr> parse_sentence(const Grammar& g,
                                     const std::vector<std::string>& tokens);

// The mother f-term of a tree: the multiset union of its rule's templates,
// each with `$` replaced by the corresponding daughter's f-term; a lexical
// node contributes its entry's items.
FTermPtr assemble_fterm(const Grammar& g, const CNodePtr& tree);

std::string format_ctree(const CNodePtr& tree);
std::string tree_yield(const CNodePtr& tree);

}  // namespace rlfg

#endif  // RLFG_CPARSER_HPP_
