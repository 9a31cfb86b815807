// Grammar definitions: the annotated-CFG file format, its reader, and
// validation (including deriving the constant type environment from labels).

#ifndef RLFG_GRAMMAR_HPP_
#define RLFG_GRAMMAR_HPP_

#include <string>
#include <vector>

#include "rlfg/fterm.hpp"
#include "rlfg/prover.hpp"

namespace rlfg {

struct GrammarError : Error {
  GrammarError(const std::string& msg, int line)
      : Error("line " + std::to_string(line) + ": " + msg), line(line) {}
  explicit GrammarError(const std::string& msg) : Error(msg), line(0) {}
  int line;
};

// One lexical entry: `items` is the multiset of f-terms the word
// contributes (labelled formulas, bare case/number resources, path
// equations).
struct LexEntry {
  std::string word;
  std::string category;
  FTermPtr items;
};

// One right-hand-side constituent of a phrase-structure rule.  The template
// contains at least one `$`, which the daughter's f-term replaces.
struct RhsItem {
  std::string category;
  FTermPtr tmpl;
  bool optional = false;
};

struct PSRule {
  std::string mother;
  std::vector<RhsItem> rhs;
  // Expansions of the optional constituents: each variant lists the rhs
  // indices present, in order.  Variants with fewer constituents come first.
  std::vector<std::vector<int>> variants;
};

struct GrammarSettings {
  bool path_eq_reuse = false;  // unbounded path-equation uses
  SearchLimits limits;
};

struct Grammar {
  Vocab vocab;
  std::string start;
  FormulaPtr goal;
  std::vector<LexEntry> lexicon;
  std::vector<PSRule> rules;
  GrammarSettings settings;
  TypeEnv type_env;  // filled by validate()

  std::vector<const LexEntry*> entries_for(const std::string& word) const;
};

struct Finding {
  enum class Severity { Warning, Error };
  Severity severity;
  std::string message;
};

// Reads the grammar file format:
//   atoms contentful: e t          atoms impotent: NOM ACC
//   attrs: SUBJ OBJ XCOMP          start: S
//   goal: t                        set path_eq_reuse = on
//   lex <word> <Cat> : <item> ; <item> ; ...
//   rule <Cat> -> <Cat>:<template> [ <Cat>:<template> ] ...
// '#' starts a comment.  Names must be declared before use.
Grammar parse_grammar(const std::string& text);
Grammar load_grammar_file(const std::string& path);

// Structural and typing checks beyond what the reader enforces; derives
// g.type_env from the lexical labels.  Error findings make a grammar
// unusable; warnings do not.
std::vector<Finding> validate(Grammar& g);

// Canonical re-emission of the file format; parse_grammar(format_grammar(g))
// reproduces g up to ordering.
std::string format_grammar(const Grammar& g);

}  // namespace rlfg

#endif  // RLFG_GRAMMAR_HPP_
