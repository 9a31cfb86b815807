// F-formulae: modal propositional resource types, the atom vocabulary,
// and the natural-type mapping onto model-theoretic types.

#ifndef RLFG_FORMULA_HPP_
#define RLFG_FORMULA_HPP_

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace rlfg {

// ---------------------------------------------------------------------------
// Errors

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Lexical/syntactic problem in some piece of concrete syntax.  `offset` is a
// byte offset into the text handed to the parser; `line` is filled in by the
// grammar reader, which works line by line.
struct SyntaxError : Error {
  SyntaxError(const std::string& msg, std::size_t offset)
      : Error(msg + " (at byte " + std::to_string(offset) + ")"),
        offset(offset) {}
  std::size_t offset = 0;
  int line = -1;
};

// Undeclared or doubly declared names, label typing violations, etc.
struct ValidationError : Error {
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Vocabulary

enum class AtomKind { Contentful, Impotent };

struct AtomDecl {
  std::string name;
  AtomKind kind;
};

bool is_identifier(const std::string& s);

// Declared atoms and attributes of one grammar.  Names are case-sensitive
// identifiers and must be declared before they are used in any formula.
class Vocab {
 public:
  void declare_atom(const std::string& name, AtomKind kind);
  void declare_attribute(const std::string& name);

  bool has_atom(const std::string& name) const;
  bool has_attribute(const std::string& name) const;
  AtomKind atom_kind(const std::string& name) const;

  const std::vector<AtomDecl>& atoms() const { return atoms_; }
  const std::vector<std::string>& attributes() const { return attrs_; }

 private:
  std::vector<AtomDecl> atoms_;
  std::vector<std::string> attrs_;
  std::map<std::string, std::size_t> atom_index_;
  std::map<std::string, std::size_t> attr_index_;
};

// ---------------------------------------------------------------------------
// F-formulae

struct FFormula;
using FormulaPtr = std::shared_ptr<const FFormula>;

// Atom | Modal(attr, body) | Implic(antecedent, consequent).
// Modal binds tighter than Implic; Implic associates to the right.
struct FFormula {
  struct Atom {
    std::string name;
    AtomKind kind;
  };
  struct Modal {
    std::string attr;
    FormulaPtr body;
  };
  struct Implic {
    FormulaPtr antecedent;
    FormulaPtr consequent;
  };

  std::variant<Atom, Modal, Implic> node;
};

FormulaPtr f_atom(const std::string& name, AtomKind kind);
FormulaPtr f_atom(const Vocab& vocab, const std::string& name);
FormulaPtr f_modal(const std::string& attr, FormulaPtr body);
FormulaPtr f_implic(FormulaPtr antecedent, FormulaPtr consequent);

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b);

const FFormula::Atom* as_atom(const FormulaPtr& f);
const FFormula::Modal* as_modal(const FormulaPtr& f);
const FFormula::Implic* as_implic(const FormulaPtr& f);

// Minimal-parenthesization concrete syntax; parse_formula round-trips it.
std::string format_formula(const FormulaPtr& f);

// Concrete syntax: `-o` right-associative, attribute prefix by juxtaposition
// binding tighter than `-o`, parentheses for grouping.  All identifiers must
// be declared in `vocab`.
FormulaPtr parse_formula(const std::string& text, const Vocab& vocab);

// Token-stream entry point shared with the f-term and grammar readers.
struct Token;
FormulaPtr parse_formula_at(const std::vector<Token>& toks, std::size_t& pos,
                            const Vocab& vocab);

// ---------------------------------------------------------------------------
// Semantic types

struct SemanticType;
using TypePtr = std::shared_ptr<const SemanticType>;

// Base(contentful atom) | Unit | Arrow.  Unit is the single-element type of
// semantically impotent resources; the natural-type mapping never puts it on
// the left of an Arrow.
struct SemanticType {
  struct Base {
    std::string atom;
  };
  struct Unit {};
  struct Arrow {
    TypePtr from;
    TypePtr to;
  };

  std::variant<Base, Unit, Arrow> node;
};

TypePtr t_base(const std::string& atom);
TypePtr t_unit();
TypePtr t_arrow(TypePtr from, TypePtr to);

bool type_equal(const TypePtr& a, const TypePtr& b);
bool is_unit(const TypePtr& t);
std::string format_type(const TypePtr& t);

// The four clauses of the natural-type mapping:
//   contentful atom -> Base, impotent atom -> Unit,
//   f phi -> natural_type(phi),
//   phi1 -o phi2 -> natural_type(phi2) when phi1 is impotent,
//                   Arrow(natural_type(phi1), natural_type(phi2)) otherwise.
TypePtr natural_type(const FormulaPtr& f);

}  // namespace rlfg

#endif  // RLFG_FORMULA_HPP_
