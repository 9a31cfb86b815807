// F-terms: the functional descriptions assembled over c-structures, and
// their normalization into flat resource-multiset states.

#ifndef RLFG_FTERM_HPP_
#define RLFG_FTERM_HPP_

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "rlfg/formula.hpp"
#include "rlfg/lambda.hpp"

namespace rlfg {

// Ill-formed f-term structure (path equation under an embedding, a
// placeholder outside a rule template, ...).
struct StructureError : Error {
  using Error::Error;
};

struct FTerm;
using FTermPtr = std::shared_ptr<const FTerm>;

// `lhs = rhs`, both non-empty attribute sequences.
struct PathEquation {
  std::vector<std::string> lhs;
  std::vector<std::string> rhs;
};

// Leaf (optionally labelled formula) | Multiset | Embed(attr, body)
// | PathEq | Opt | Hole.  Hole is the daughter placeholder `$` and is only
// legal inside rule templates.
struct FTerm {
  struct Leaf {
    FormulaPtr formula;
    TermPtr label;  // null = absent
  };
  struct Multiset {
    std::vector<FTermPtr> items;
  };
  struct Embed {
    std::string attr;
    FTermPtr body;
  };
  struct PathEq {
    PathEquation eq;
  };
  struct Opt {
    FTermPtr body;
  };
  struct Hole {};

  std::variant<Leaf, Multiset, Embed, PathEq, Opt, Hole> node;
};

FTermPtr ft_leaf(FormulaPtr formula, TermPtr label = nullptr);
FTermPtr ft_multiset(std::vector<FTermPtr> items);
FTermPtr ft_embed(const std::string& attr, FTermPtr body);
FTermPtr ft_patheq(PathEquation eq);
FTermPtr ft_opt(FTermPtr body);
FTermPtr ft_hole();

// ---------------------------------------------------------------------------
// Normalized states

// One resource of the flat state: a formula with any embedding prefix folded
// in as modal operators, plus its lambda label (null exactly when the
// natural type is Unit).  `id` is the stable index used by derivations.
struct Resource {
  FormulaPtr formula;
  TermPtr label;
  int id = -1;
};

// Remaining-use accounting for a path equation; -1 means unbounded.
struct EquationUse {
  PathEquation eq;
  int remaining = 1;
  int id = -1;
};

struct NormalState {
  std::vector<Resource> resources;
  std::vector<EquationUse> equations;
};

std::string format_path(const std::vector<std::string>& path);
std::string format_equation(const PathEquation& eq);
std::string format_resource(const Resource& r);
std::string resource_key(const Resource& r);
std::string state_key(const NormalState& s);
bool state_equal(const NormalState& a, const NormalState& b);

// Splits a formula into its outermost modal prefix and the remainder.
std::pair<std::vector<std::string>, FormulaPtr> split_modal_prefix(
    const FormulaPtr& f);
FormulaPtr wrap_modal_prefix(const std::vector<std::string>& prefix,
                             FormulaPtr body);

// Flattens an f-term into its normalized states: multisets are unioned,
// embeddings fold onto leaves as modal prefixes, and every optional subterm
// branches the result (absent branch first; duplicates removed).  Each
// state's resources are sorted canonically and numbered from 0.  `eq_uses`
// is the use budget given to every path equation (-1 = unbounded).
std::vector<NormalState> normalize(const FTermPtr& t, int eq_uses = 1);

// Builds the f-term corresponding to an already-flat state (used to feed
// states back through f-term-level operations in tests).
FTermPtr state_to_fterm(const NormalState& s);

// The bi-implication `f (a, b) = (f a, f b)` and its consequences: true iff
// the two f-terms normalize to the same set of states.
bool distribute_factor_equal(const FTermPtr& a, const FTermPtr& b);

// ---------------------------------------------------------------------------
// Placeholders (rule templates)

int count_holes(const FTermPtr& t);
FTermPtr substitute_holes(const FTermPtr& tmpl, const FTermPtr& daughter);

// ---------------------------------------------------------------------------
// Concrete syntax
//
//   element := formula | lambda ':' formula | attr '(' list ')'
//            | attr element | 'opt' '(' list ')' | path '=' path | '$'
//
// A comma-separated list at top level denotes a multiset.  parse_lex_items
// reads the semicolon-separated item list of a lexical entry.
FTermPtr parse_fterm(const std::string& text, const Vocab& vocab,
                     bool allow_holes = false);
FTermPtr parse_lex_items(const std::string& text, const Vocab& vocab);
FTermPtr parse_element_at(const std::vector<Token>& toks, std::size_t& pos,
                          const Vocab& vocab, bool allow_holes);

std::string format_fterm(const FTermPtr& t);

}  // namespace rlfg

#endif  // RLFG_FTERM_HPP_
