#include "rlfg/formula.hpp"

#include "rlfg/lexer.hpp"

namespace rlfg {

// ---------------------------------------------------------------------------
// Vocabulary

void Vocab::declare_atom(const std::string& name, AtomKind kind) {
  if (!is_identifier(name))
    throw ValidationError("invalid atom name '" + name + "'");
  if (atom_index_.count(name))
    throw ValidationError("duplicate atom declaration '" + name + "'");
  if (attr_index_.count(name))
    throw ValidationError("'" + name + "' is already an attribute");
  atom_index_[name] = atoms_.size();
  atoms_.push_back({name, kind});
}

void Vocab::declare_attribute(const std::string& name) {
  if (!is_identifier(name))
    throw ValidationError("invalid attribute name '" + name + "'");
  if (attr_index_.count(name))
    throw ValidationError("duplicate attribute declaration '" + name + "'");
  if (atom_index_.count(name))
    throw ValidationError("'" + name + "' is already an atom");
  attr_index_[name] = attrs_.size();
  attrs_.push_back(name);
}

bool Vocab::has_atom(const std::string& name) const {
  return atom_index_.count(name) != 0;
}

bool Vocab::has_attribute(const std::string& name) const {
  return attr_index_.count(name) != 0;
}

AtomKind Vocab::atom_kind(const std::string& name) const {
  auto it = atom_index_.find(name);
  if (it == atom_index_.end())
    throw ValidationError("undeclared atom '" + name + "'");
  return atoms_[it->second].kind;
}

// ---------------------------------------------------------------------------
// Constructors and structural predicates

FormulaPtr f_atom(const std::string& name, AtomKind kind) {
  return std::make_shared<FFormula>(FFormula{FFormula::Atom{name, kind}});
}

FormulaPtr f_atom(const Vocab& vocab, const std::string& name) {
  return f_atom(name, vocab.atom_kind(name));
}

FormulaPtr f_modal(const std::string& attr, FormulaPtr body) {
  return std::make_shared<FFormula>(
      FFormula{FFormula::Modal{attr, std::move(body)}});
}

FormulaPtr f_implic(FormulaPtr antecedent, FormulaPtr consequent) {
  return std::make_shared<FFormula>(
      FFormula{FFormula::Implic{std::move(antecedent), std::move(consequent)}});
}

const FFormula::Atom* as_atom(const FormulaPtr& f) {
  return std::get_if<FFormula::Atom>(&f->node);
}
const FFormula::Modal* as_modal(const FormulaPtr& f) {
  return std::get_if<FFormula::Modal>(&f->node);
}
const FFormula::Implic* as_implic(const FormulaPtr& f) {
  return std::get_if<FFormula::Implic>(&f->node);
}

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->node.index() != b->node.index()) return false;
  if (auto* at = as_atom(a)) {
    auto* bt = as_atom(b);
    return at->name == bt->name && at->kind == bt->kind;
  }
  if (auto* am = as_modal(a)) {
    auto* bm = as_modal(b);
    return am->attr == bm->attr && formula_equal(am->body, bm->body);
  }
  auto* ai = as_implic(a);
  auto* bi = as_implic(b);
  return formula_equal(ai->antecedent, bi->antecedent) &&
         formula_equal(ai->consequent, bi->consequent);
}

// ---------------------------------------------------------------------------
// Printing

std::string format_formula(const FormulaPtr& f) {
  if (auto* a = as_atom(f)) return a->name;
  if (auto* m = as_modal(f)) {
    std::string body = format_formula(m->body);
    if (as_implic(m->body)) body = "(" + body + ")";
    return m->attr + " " + body;
  }
  auto* i = as_implic(f);
  std::string lhs = format_formula(i->antecedent);
  if (as_implic(i->antecedent)) lhs = "(" + lhs + ")";
  return lhs + " -o " + format_formula(i->consequent);
}

// ---------------------------------------------------------------------------
// Parsing
//
//   formula := unit ('-o' formula)?
//   unit    := ATTR unit | ATOM | '(' formula ')'

namespace {

FormulaPtr parse_unit(const std::vector<Token>& toks, std::size_t& pos,
                      const Vocab& vocab);

FormulaPtr parse_implic(const std::vector<Token>& toks, std::size_t& pos,
                        const Vocab& vocab) {
  FormulaPtr lhs = parse_unit(toks, pos, vocab);
  if (toks[pos].kind == Tok::Implic) {
    ++pos;
    return f_implic(std::move(lhs), parse_implic(toks, pos, vocab));
  }
  return lhs;
}

FormulaPtr parse_unit(const std::vector<Token>& toks, std::size_t& pos,
                      const Vocab& vocab) {
  const Token& t = toks[pos];
  if (t.kind == Tok::LParen) {
    ++pos;
    FormulaPtr inner = parse_implic(toks, pos, vocab);
    if (toks[pos].kind != Tok::RParen)
      throw SyntaxError("expected ')' in formula", toks[pos].offset);
    ++pos;
    return inner;
  }
  if (t.kind != Tok::Ident)
    throw SyntaxError(std::string("expected formula, found ") +
                          tok_name(t.kind),
                      t.offset);
  if (vocab.has_attribute(t.text)) {
    ++pos;
    return f_modal(t.text, parse_unit(toks, pos, vocab));
  }
  if (vocab.has_atom(t.text)) {
    ++pos;
    return f_atom(t.text, vocab.atom_kind(t.text));
  }
  throw SyntaxError("undeclared identifier '" + t.text + "' in formula",
                    t.offset);
}

}  // namespace

FormulaPtr parse_formula_at(const std::vector<Token>& toks, std::size_t& pos,
                            const Vocab& vocab) {
  return parse_implic(toks, pos, vocab);
}

FormulaPtr parse_formula(const std::string& text, const Vocab& vocab) {
  std::vector<Token> toks = lex(text);
  std::size_t pos = 0;
  FormulaPtr f = parse_formula_at(toks, pos, vocab);
  if (toks[pos].kind != Tok::End)
    throw SyntaxError(std::string("trailing ") + tok_name(toks[pos].kind) +
                          " after formula",
                      toks[pos].offset);
  return f;
}

// ---------------------------------------------------------------------------
// Semantic types

TypePtr t_base(const std::string& atom) {
  return std::make_shared<SemanticType>(SemanticType{SemanticType::Base{atom}});
}

TypePtr t_unit() {
  static const TypePtr unit =
      std::make_shared<SemanticType>(SemanticType{SemanticType::Unit{}});
  return unit;
}

TypePtr t_arrow(TypePtr from, TypePtr to) {
  return std::make_shared<SemanticType>(
      SemanticType{SemanticType::Arrow{std::move(from), std::move(to)}});
}

bool is_unit(const TypePtr& t) {
  return std::holds_alternative<SemanticType::Unit>(t->node);
}

bool type_equal(const TypePtr& a, const TypePtr& b) {
  if (a.get() == b.get()) return true;
  if (a->node.index() != b->node.index()) return false;
  if (auto* ab = std::get_if<SemanticType::Base>(&a->node))
    return ab->atom == std::get<SemanticType::Base>(b->node).atom;
  if (is_unit(a)) return true;
  auto& aa = std::get<SemanticType::Arrow>(a->node);
  auto& ba = std::get<SemanticType::Arrow>(b->node);
  return type_equal(aa.from, ba.from) && type_equal(aa.to, ba.to);
}

std::string format_type(const TypePtr& t) {
  if (auto* b = std::get_if<SemanticType::Base>(&t->node)) return b->atom;
  if (is_unit(t)) return "()";
  auto& a = std::get<SemanticType::Arrow>(t->node);
  std::string lhs = format_type(a.from);
  if (std::holds_alternative<SemanticType::Arrow>(a.from->node))
    lhs = "(" + lhs + ")";
  return lhs + " -> " + format_type(a.to);
}

TypePtr natural_type(const FormulaPtr& f) {
  if (auto* a = as_atom(f))
    return a->kind == AtomKind::Contentful ? t_base(a->name) : t_unit();
  if (auto* m = as_modal(f)) return natural_type(m->body);
  auto* i = as_implic(f);
  TypePtr t2 = natural_type(i->consequent);
  TypePtr t1 = natural_type(i->antecedent);
  return is_unit(t1) ? t2 : t_arrow(std::move(t1), std::move(t2));
}

}  // namespace rlfg
