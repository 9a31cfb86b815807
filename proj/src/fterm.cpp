#include "rlfg/fterm.hpp"

#include <algorithm>
#include <set>

#include "rlfg/lexer.hpp"

namespace rlfg {

// ---------------------------------------------------------------------------
// Constructors

FTermPtr ft_leaf(FormulaPtr formula, TermPtr label) {
  return std::make_shared<FTerm>(
      FTerm{FTerm::Leaf{std::move(formula), std::move(label)}});
}
FTermPtr ft_multiset(std::vector<FTermPtr> items) {
  return std::make_shared<FTerm>(FTerm{FTerm::Multiset{std::move(items)}});
}
FTermPtr ft_embed(const std::string& attr, FTermPtr body) {
  return std::make_shared<FTerm>(FTerm{FTerm::Embed{attr, std::move(body)}});
}
FTermPtr ft_patheq(PathEquation eq) {
  return std::make_shared<FTerm>(FTerm{FTerm::PathEq{std::move(eq)}});
}
FTermPtr ft_opt(FTermPtr body) {
  return std::make_shared<FTerm>(FTerm{FTerm::Opt{std::move(body)}});
}
FTermPtr ft_hole() { return std::make_shared<FTerm>(FTerm{FTerm::Hole{}}); }

// ---------------------------------------------------------------------------
// Formatting helpers

std::string format_path(const std::vector<std::string>& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += ' ';
    out += path[i];
  }
  return out;
}

std::string format_equation(const PathEquation& eq) {
  return format_path(eq.lhs) + " = " + format_path(eq.rhs);
}

std::string format_resource(const Resource& r) {
  if (r.label) return format_lambda(r.label) + " : " + format_formula(r.formula);
  return format_formula(r.formula);
}

std::string resource_key(const Resource& r) {
  return format_formula(r.formula) + " : " +
         (r.label ? canonical_key(r.label) : "<none>");
}

std::string state_key(const NormalState& s) {
  std::string out;
  for (const Resource& r : s.resources) {
    out += resource_key(r);
    out += '|';
  }
  out += "##";
  for (const EquationUse& e : s.equations) {
    out += format_equation(e.eq);
    out += '*';
    out += std::to_string(e.remaining);
    out += '|';
  }
  return out;
}

bool state_equal(const NormalState& a, const NormalState& b) {
  return state_key(a) == state_key(b);
}

std::pair<std::vector<std::string>, FormulaPtr> split_modal_prefix(
    const FormulaPtr& f) {
  std::vector<std::string> prefix;
  FormulaPtr rest = f;
  while (auto* m = as_modal(rest)) {
    prefix.push_back(m->attr);
    rest = m->body;
  }
  return {std::move(prefix), std::move(rest)};
}

FormulaPtr wrap_modal_prefix(const std::vector<std::string>& prefix,
                             FormulaPtr body) {
  FormulaPtr out = std::move(body);
  for (std::size_t i = prefix.size(); i-- > 0;) out = f_modal(prefix[i], out);
  return out;
}

// ---------------------------------------------------------------------------
// Normalization

namespace {

struct Bundle {
  std::vector<Resource> resources;
  std::vector<PathEquation> equations;
};

constexpr std::size_t kMaxBranches = 1u << 16;

Bundle merge(const Bundle& a, const Bundle& b) {
  Bundle out = a;
  out.resources.insert(out.resources.end(), b.resources.begin(),
                       b.resources.end());
  out.equations.insert(out.equations.end(), b.equations.begin(),
                       b.equations.end());
  return out;
}

// Returns every flat expansion of `t` under the given embedding prefix, one
// Bundle per assignment of present/absent to the optional subterms (absent
// listed first).
std::vector<Bundle> expand(const FTermPtr& t,
                           const std::vector<std::string>& prefix) {
  if (auto* leaf = std::get_if<FTerm::Leaf>(&t->node)) {
    Bundle b;
    b.resources.push_back(
        Resource{wrap_modal_prefix(prefix, leaf->formula), leaf->label, -1});
    return {std::move(b)};
  }
  if (auto* eq = std::get_if<FTerm::PathEq>(&t->node)) {
    if (!prefix.empty())
      throw StructureError("path equation '" + format_equation(eq->eq) +
                           "' under attribute embedding '" +
                           format_path(prefix) + "'");
    Bundle b;
    b.equations.push_back(eq->eq);
    return {std::move(b)};
  }
  if (auto* em = std::get_if<FTerm::Embed>(&t->node)) {
    std::vector<std::string> inner = prefix;
    inner.push_back(em->attr);
    return expand(em->body, inner);
  }
  if (auto* opt = std::get_if<FTerm::Opt>(&t->node)) {
    std::vector<Bundle> out;
    out.emplace_back();  // absent branch first
    for (Bundle& b : expand(opt->body, prefix)) out.push_back(std::move(b));
    return out;
  }
  if (auto* ms = std::get_if<FTerm::Multiset>(&t->node)) {
    std::vector<Bundle> out;
    out.emplace_back();
    for (const FTermPtr& item : ms->items) {
      std::vector<Bundle> item_bundles = expand(item, prefix);
      std::vector<Bundle> next;
      next.reserve(out.size() * item_bundles.size());
      for (const Bundle& acc : out)
        for (const Bundle& ib : item_bundles) next.push_back(merge(acc, ib));
      if (next.size() > kMaxBranches)
        throw StructureError("too many optional branches in one f-term");
      out = std::move(next);
    }
    return out;
  }
  throw StructureError("placeholder '$' has no daughter to stand for");
}

}  // namespace

std::vector<NormalState> normalize(const FTermPtr& t, int eq_uses) {
  std::vector<NormalState> states;
  std::set<std::string> seen;
  for (Bundle& b : expand(t, {})) {
    NormalState s;
    s.resources = std::move(b.resources);
    std::sort(s.resources.begin(), s.resources.end(),
              [](const Resource& x, const Resource& y) {
                return resource_key(x) < resource_key(y);
              });
    for (std::size_t i = 0; i < s.resources.size(); ++i)
      s.resources[i].id = static_cast<int>(i);
    for (PathEquation& eq : b.equations)
      s.equations.push_back(EquationUse{std::move(eq), eq_uses, -1});
    std::sort(s.equations.begin(), s.equations.end(),
              [](const EquationUse& x, const EquationUse& y) {
                return format_equation(x.eq) < format_equation(y.eq);
              });
    for (std::size_t i = 0; i < s.equations.size(); ++i)
      s.equations[i].id = static_cast<int>(i);
    if (seen.insert(state_key(s)).second) states.push_back(std::move(s));
  }
  return states;
}

FTermPtr state_to_fterm(const NormalState& s) {
  std::vector<FTermPtr> items;
  for (const Resource& r : s.resources) items.push_back(ft_leaf(r.formula, r.label));
  for (const EquationUse& e : s.equations) items.push_back(ft_patheq(e.eq));
  return ft_multiset(std::move(items));
}

bool distribute_factor_equal(const FTermPtr& a, const FTermPtr& b) {
  auto keys = [](const FTermPtr& t) {
    std::set<std::string> out;
    for (const NormalState& s : normalize(t)) out.insert(state_key(s));
    return out;
  };
  return keys(a) == keys(b);
}

// ---------------------------------------------------------------------------
// Placeholders

int count_holes(const FTermPtr& t) {
  if (std::holds_alternative<FTerm::Hole>(t->node)) return 1;
  if (auto* ms = std::get_if<FTerm::Multiset>(&t->node)) {
    int n = 0;
    for (const FTermPtr& item : ms->items) n += count_holes(item);
    return n;
  }
  if (auto* em = std::get_if<FTerm::Embed>(&t->node))
    return count_holes(em->body);
  if (auto* opt = std::get_if<FTerm::Opt>(&t->node))
    return count_holes(opt->body);
  return 0;
}

FTermPtr substitute_holes(const FTermPtr& tmpl, const FTermPtr& daughter) {
  if (std::holds_alternative<FTerm::Hole>(tmpl->node)) return daughter;
  if (auto* ms = std::get_if<FTerm::Multiset>(&tmpl->node)) {
    std::vector<FTermPtr> items;
    items.reserve(ms->items.size());
    for (const FTermPtr& item : ms->items)
      items.push_back(substitute_holes(item, daughter));
    return ft_multiset(std::move(items));
  }
  if (auto* em = std::get_if<FTerm::Embed>(&tmpl->node))
    return ft_embed(em->attr, substitute_holes(em->body, daughter));
  if (auto* opt = std::get_if<FTerm::Opt>(&tmpl->node))
    return ft_opt(substitute_holes(opt->body, daughter));
  return tmpl;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

bool is_boundary(const std::vector<Token>& toks, std::size_t i, int depth) {
  Tok k = toks[i].kind;
  if (k == Tok::End) return true;
  if (depth > 0) return false;
  return k == Tok::Comma || k == Tok::Semi || k == Tok::RParen ||
         k == Tok::LBracket || k == Tok::RBracket;
}

// Locates the end of the element starting at `pos` and the first top-level
// ':' and '=' within it, which decide between labelled leaf, path equation,
// and the remaining forms.
struct Extent {
  std::size_t end;
  std::size_t colon = SIZE_MAX;
  std::size_t equals = SIZE_MAX;
};

Extent scan_element(const std::vector<Token>& toks, std::size_t pos) {
  Extent e{pos};
  int depth = 0;
  std::size_t i = pos;
  while (!is_boundary(toks, i, depth)) {
    switch (toks[i].kind) {
      case Tok::LParen: ++depth; break;
      case Tok::RParen: --depth; break;
      case Tok::Colon:
        if (depth == 0 && e.colon == SIZE_MAX) e.colon = i;
        break;
      case Tok::Equals:
        if (depth == 0 && e.equals == SIZE_MAX) e.equals = i;
        break;
      default: break;
    }
    ++i;
  }
  e.end = i;
  return e;
}

std::vector<std::string> parse_attr_path(const std::vector<Token>& toks,
                                         std::size_t& pos, const Vocab& vocab,
                                         std::size_t stop) {
  std::vector<std::string> path;
  while (pos < stop && toks[pos].kind == Tok::Ident) {
    if (!vocab.has_attribute(toks[pos].text))
      throw SyntaxError("undeclared attribute '" + toks[pos].text +
                            "' in path equation",
                        toks[pos].offset);
    path.push_back(toks[pos].text);
    ++pos;
  }
  if (path.empty())
    throw SyntaxError("expected attribute path", toks[pos].offset);
  return path;
}

std::vector<FTermPtr> parse_list(const std::vector<Token>& toks,
                                 std::size_t& pos, const Vocab& vocab,
                                 bool allow_holes, Tok sep) {
  std::vector<FTermPtr> items;
  while (true) {
    items.push_back(parse_element_at(toks, pos, vocab, allow_holes));
    if (toks[pos].kind == sep) {
      ++pos;
      continue;
    }
    break;
  }
  return items;
}

FTermPtr list_to_fterm(std::vector<FTermPtr> items) {
  if (items.size() == 1) return items[0];
  return ft_multiset(std::move(items));
}

FTermPtr parse_paren_list(const std::vector<Token>& toks, std::size_t& pos,
                          const Vocab& vocab, bool allow_holes) {
  // Caller consumed '('.
  FTermPtr body = list_to_fterm(parse_list(toks, pos, vocab, allow_holes,
                                           Tok::Comma));
  if (toks[pos].kind != Tok::RParen)
    throw SyntaxError("expected ')' in f-term", toks[pos].offset);
  ++pos;
  return body;
}

}  // namespace

FTermPtr parse_element_at(const std::vector<Token>& toks, std::size_t& pos,
                          const Vocab& vocab, bool allow_holes) {
  const Token& t = toks[pos];
  if (t.kind == Tok::Dollar) {
    if (!allow_holes)
      throw SyntaxError("placeholder '$' is only allowed in rule templates",
                        t.offset);
    ++pos;
    return ft_hole();
  }

  Extent extent = scan_element(toks, pos);
  if (extent.end == pos)
    throw SyntaxError(std::string("expected f-term, found ") +
                          tok_name(t.kind),
                      t.offset);

  // Labelled leaf: `lambda : formula` (a label never contains a top-level
  // '=', so a ':' before any '=' settles it).
  if (extent.colon != SIZE_MAX &&
      (extent.equals == SIZE_MAX || extent.colon < extent.equals)) {
    TermPtr label = parse_lambda_at(toks, pos);
    if (pos != extent.colon)
      throw SyntaxError("malformed label before ':'", toks[pos].offset);
    ++pos;
    FormulaPtr formula = parse_formula_at(toks, pos, vocab);
    if (pos != extent.end)
      throw SyntaxError("trailing material after labelled leaf",
                        toks[pos].offset);
    return ft_leaf(std::move(formula), std::move(label));
  }

  // Path equation: `attr+ = attr+`.
  if (extent.equals != SIZE_MAX) {
    PathEquation eq;
    eq.lhs = parse_attr_path(toks, pos, vocab, extent.equals);
    if (pos != extent.equals)
      throw SyntaxError("malformed path before '='", toks[pos].offset);
    ++pos;
    eq.rhs = parse_attr_path(toks, pos, vocab, extent.end);
    if (pos != extent.end)
      throw SyntaxError("trailing material after path equation",
                        toks[pos].offset);
    return ft_patheq(std::move(eq));
  }

  // Optional subterm: `opt( ... )`.
  if (t.kind == Tok::Ident && t.text == "opt" &&
      toks[pos + 1].kind == Tok::LParen) {
    pos += 2;
    return ft_opt(parse_paren_list(toks, pos, vocab, allow_holes));
  }

  // Plain formula leaf, if the whole extent parses as one formula.
  if (t.kind == Tok::Ident || t.kind == Tok::LParen) {
    std::size_t save = pos;
    try {
      FormulaPtr f = parse_formula_at(toks, pos, vocab);
      if (pos == extent.end) return ft_leaf(std::move(f));
    } catch (const SyntaxError&) {
    }
    pos = save;
  }

  // Attribute embedding: `attr ( list )` or `attr element`.
  if (t.kind == Tok::Ident && vocab.has_attribute(t.text)) {
    ++pos;
    if (toks[pos].kind == Tok::LParen) {
      ++pos;
      return ft_embed(t.text, parse_paren_list(toks, pos, vocab, allow_holes));
    }
    return ft_embed(t.text, parse_element_at(toks, pos, vocab, allow_holes));
  }

  // Parenthesized group: `( list )`.
  if (t.kind == Tok::LParen) {
    ++pos;
    return parse_paren_list(toks, pos, vocab, allow_holes);
  }

  if (t.kind == Tok::Ident)
    throw SyntaxError("undeclared identifier '" + t.text + "' in f-term",
                      t.offset);
  throw SyntaxError(std::string("expected f-term, found ") + tok_name(t.kind),
                    t.offset);
}

FTermPtr parse_fterm(const std::string& text, const Vocab& vocab,
                     bool allow_holes) {
  std::vector<Token> toks = lex(text);
  std::size_t pos = 0;
  FTermPtr t = list_to_fterm(parse_list(toks, pos, vocab, allow_holes,
                                        Tok::Comma));
  if (toks[pos].kind != Tok::End)
    throw SyntaxError(std::string("trailing ") + tok_name(toks[pos].kind) +
                          " after f-term",
                      toks[pos].offset);
  return t;
}

FTermPtr parse_lex_items(const std::string& text, const Vocab& vocab) {
  std::vector<Token> toks = lex(text);
  std::size_t pos = 0;
  std::vector<FTermPtr> items =
      parse_list(toks, pos, vocab, /*allow_holes=*/false, Tok::Semi);
  if (toks[pos].kind != Tok::End)
    throw SyntaxError(std::string("trailing ") + tok_name(toks[pos].kind) +
                          " after lexical items",
                      toks[pos].offset);
  return list_to_fterm(std::move(items));
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string fmt_fterm(const FTermPtr& t, bool toplevel);

std::string fmt_list(const FTermPtr& t) {
  if (auto* ms = std::get_if<FTerm::Multiset>(&t->node)) {
    std::string out;
    for (std::size_t i = 0; i < ms->items.size(); ++i) {
      if (i) out += ", ";
      out += fmt_fterm(ms->items[i], false);
    }
    return out;
  }
  return fmt_fterm(t, false);
}

std::string fmt_fterm(const FTermPtr& t, bool toplevel) {
  if (auto* leaf = std::get_if<FTerm::Leaf>(&t->node)) {
    if (leaf->label)
      return format_lambda(leaf->label) + " : " + format_formula(leaf->formula);
    return format_formula(leaf->formula);
  }
  if (auto* ms = std::get_if<FTerm::Multiset>(&t->node)) {
    std::string inner = fmt_list(t);
    (void)ms;
    return toplevel ? inner : "(" + inner + ")";
  }
  if (auto* em = std::get_if<FTerm::Embed>(&t->node))
    return em->attr + "(" + fmt_list(em->body) + ")";
  if (auto* eq = std::get_if<FTerm::PathEq>(&t->node))
    return format_equation(eq->eq);
  if (auto* opt = std::get_if<FTerm::Opt>(&t->node))
    return "opt(" + fmt_list(opt->body) + ")";
  return "$";
}

}  // namespace

std::string format_fterm(const FTermPtr& t) { return fmt_fterm(t, true); }

}  // namespace rlfg
