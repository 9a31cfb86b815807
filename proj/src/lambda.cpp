#include "rlfg/lambda.hpp"

#include <algorithm>

#include "rlfg/lexer.hpp"

namespace rlfg {

// ---------------------------------------------------------------------------
// Constructors and accessors

TermPtr l_var(const std::string& name) {
  return std::make_shared<LambdaTerm>(LambdaTerm{LambdaTerm::Var{name}});
}
TermPtr l_const(const std::string& name) {
  return std::make_shared<LambdaTerm>(LambdaTerm{LambdaTerm::Const{name}});
}
TermPtr l_abs(const std::string& var, TermPtr body) {
  return std::make_shared<LambdaTerm>(
      LambdaTerm{LambdaTerm::Abs{var, std::move(body)}});
}
TermPtr l_app(TermPtr fun, TermPtr arg) {
  return std::make_shared<LambdaTerm>(
      LambdaTerm{LambdaTerm::App{std::move(fun), std::move(arg)}});
}

const LambdaTerm::Var* as_var(const TermPtr& t) {
  return std::get_if<LambdaTerm::Var>(&t->node);
}
const LambdaTerm::Const* as_constant(const TermPtr& t) {
  return std::get_if<LambdaTerm::Const>(&t->node);
}
const LambdaTerm::Abs* as_abs(const TermPtr& t) {
  return std::get_if<LambdaTerm::Abs>(&t->node);
}
const LambdaTerm::App* as_app(const TermPtr& t) {
  return std::get_if<LambdaTerm::App>(&t->node);
}

// ---------------------------------------------------------------------------
// Substitution and reduction

namespace {

void collect_free(const TermPtr& t, std::vector<std::string>& bound,
                  std::set<std::string>& out) {
  if (auto* v = as_var(t)) {
    if (std::find(bound.begin(), bound.end(), v->name) == bound.end())
      out.insert(v->name);
  } else if (auto* a = as_abs(t)) {
    bound.push_back(a->var);
    collect_free(a->body, bound, out);
    bound.pop_back();
  } else if (auto* ap = as_app(t)) {
    collect_free(ap->fun, bound, out);
    collect_free(ap->arg, bound, out);
  }
}

std::string fresh_name(const std::string& base,
                       const std::set<std::string>& avoid) {
  std::string name = base;
  do {
    name += '\'';
  } while (avoid.count(name));
  return name;
}

TermPtr reduce(TermPtr t, long& steps);

}  // namespace

std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  collect_free(t, bound, out);
  return out;
}

TermPtr substitute(const TermPtr& body, const std::string& name,
                   const TermPtr& arg) {
  if (auto* v = as_var(body)) return v->name == name ? arg : body;
  if (as_constant(body)) return body;
  if (auto* ap = as_app(body))
    return l_app(substitute(ap->fun, name, arg),
                 substitute(ap->arg, name, arg));
  auto* ab = as_abs(body);
  if (ab->var == name) return body;  // shadowed: nothing free below
  std::set<std::string> arg_free = free_vars(arg);
  if (arg_free.count(ab->var)) {
    // The binder would capture a free variable of `arg`: rename it first.
    std::set<std::string> avoid = std::move(arg_free);
    avoid.merge(free_vars(ab->body));
    avoid.insert(name);
    std::string renamed = fresh_name(ab->var, avoid);
    TermPtr fresh_body = substitute(ab->body, ab->var, l_var(renamed));
    return l_abs(renamed, substitute(fresh_body, name, arg));
  }
  return l_abs(ab->var, substitute(ab->body, name, arg));
}

namespace {

constexpr long kMaxReduceSteps = 1000000;

// Recursion depth is bounded by the term's structural depth; contracting a
// redex loops instead of recursing, so divergent reduction (whose term never
// deepens) hits the step guard, not the stack.
TermPtr reduce(TermPtr t, long& steps) {
  for (;;) {
    if (++steps > kMaxReduceSteps)
      throw Error("beta reduction exceeded its step limit");
    if (as_var(t) || as_constant(t)) return t;
    if (auto* a = as_abs(t)) {
      TermPtr body = reduce(a->body, steps);
      return body == a->body ? t : l_abs(a->var, body);
    }
    auto* ap = as_app(t);
    TermPtr fun = reduce(ap->fun, steps);
    if (auto* fa = as_abs(fun)) {
      t = substitute(fa->body, fa->var, ap->arg);
      continue;
    }
    TermPtr arg = reduce(ap->arg, steps);
    return fun == ap->fun && arg == ap->arg ? t : l_app(fun, arg);
  }
}

}  // namespace

TermPtr beta_normalize(const TermPtr& t) {
  long steps = 0;
  return reduce(t, steps);
}

// ---------------------------------------------------------------------------
// Alpha-equivalence

namespace {

void canon(const TermPtr& t, std::vector<std::string>& stack,
           std::string& out) {
  if (auto* v = as_var(t)) {
    for (std::size_t i = stack.size(); i-- > 0;) {
      if (stack[i] == v->name) {
        out += 'b';
        out += std::to_string(stack.size() - 1 - i);
        out += ';';
        return;
      }
    }
    out += "f:";
    out += v->name;
    out += ';';
    return;
  }
  if (auto* c = as_constant(t)) {
    out += "c:";
    out += c->name;
    out += ';';
    return;
  }
  if (auto* a = as_abs(t)) {
    out += "L.";
    stack.push_back(a->var);
    canon(a->body, stack, out);
    stack.pop_back();
    return;
  }
  auto* ap = as_app(t);
  out += '(';
  canon(ap->fun, stack, out);
  out += ' ';
  canon(ap->arg, stack, out);
  out += ')';
}

}  // namespace

std::string canonical_key(const TermPtr& t) {
  std::string out;
  std::vector<std::string> stack;
  canon(t, stack, out);
  return out;
}

bool alpha_equal(const TermPtr& a, const TermPtr& b) {
  return canonical_key(a) == canonical_key(b);
}

// ---------------------------------------------------------------------------
// Type inference
//
// Standard unification over a small node arena.  Constants are monomorphic:
// every occurrence of a constant shares one type node.

namespace {

struct Infer {
  struct Node {
    enum Kind { TVar, TBase, TUnit, TArrow } kind = TVar;
    std::string base;
    int a = -1, b = -1;
    int link = -1;  // TVar only
  };

  std::vector<Node> nodes;
  std::map<std::string, int> const_slots;  // constants not in the caller env
  const TypeEnv* env = nullptr;

  int fresh() {
    nodes.push_back({});
    return static_cast<int>(nodes.size()) - 1;
  }

  int of_type(const TypePtr& t) {
    if (auto* b = std::get_if<SemanticType::Base>(&t->node)) {
      nodes.push_back({Node::TBase, b->atom, -1, -1, -1});
    } else if (is_unit(t)) {
      nodes.push_back({Node::TUnit, "", -1, -1, -1});
    } else {
      auto& a = std::get<SemanticType::Arrow>(t->node);
      int from = of_type(a.from);
      int to = of_type(a.to);
      nodes.push_back({Node::TArrow, "", from, to, -1});
    }
    return static_cast<int>(nodes.size()) - 1;
  }

  int find(int i) {
    while (nodes[i].kind == Node::TVar && nodes[i].link >= 0)
      i = nodes[i].link;
    return i;
  }

  bool occurs(int var, int t) {
    t = find(t);
    if (t == var) return true;
    if (nodes[t].kind == Node::TArrow)
      return occurs(var, nodes[t].a) || occurs(var, nodes[t].b);
    return false;
  }

  std::string show(int i) {
    i = find(i);
    switch (nodes[i].kind) {
      case Node::TVar: return "?" + std::to_string(i);
      case Node::TBase: return nodes[i].base;
      case Node::TUnit: return "()";
      case Node::TArrow: {
        std::string lhs = show(nodes[i].a);
        if (nodes[find(nodes[i].a)].kind == Node::TArrow) lhs = "(" + lhs + ")";
        return lhs + " -> " + show(nodes[i].b);
      }
    }
    return "?";
  }

  void unify(int x, int y, const std::string& context) {
    x = find(x);
    y = find(y);
    if (x == y) return;
    if (nodes[x].kind == Node::TVar) {
      if (occurs(x, y))
        throw TypeError("infinite type in " + context);
      nodes[x].link = y;
      return;
    }
    if (nodes[y].kind == Node::TVar) {
      unify(y, x, context);
      return;
    }
    if (nodes[x].kind != nodes[y].kind ||
        (nodes[x].kind == Node::TBase && nodes[x].base != nodes[y].base))
      throw TypeError("cannot unify " + show(x) + " with " + show(y) + " in " +
                      context);
    if (nodes[x].kind == Node::TArrow) {
      unify(nodes[x].a, nodes[y].a, context);
      unify(nodes[x].b, nodes[y].b, context);
    }
  }

  int infer(const TermPtr& t, std::map<std::string, std::vector<int>>& scope,
            bool allow_new_consts) {
    if (auto* v = as_var(t)) {
      auto it = scope.find(v->name);
      if (it == scope.end() || it->second.empty())
        throw TypeError("unbound variable '" + v->name + "'");
      return it->second.back();
    }
    if (auto* c = as_constant(t)) {
      auto it = env->find(c->name);
      if (it != env->end()) return of_type(it->second);
      if (!allow_new_consts)
        throw TypeError("unknown constant '" + c->name + "'");
      auto slot = const_slots.find(c->name);
      if (slot == const_slots.end())
        slot = const_slots.emplace(c->name, fresh()).first;
      return slot->second;
    }
    if (auto* a = as_abs(t)) {
      int tv = fresh();
      scope[a->var].push_back(tv);
      int body = infer(a->body, scope, allow_new_consts);
      scope[a->var].pop_back();
      nodes.push_back({Node::TArrow, "", tv, body, -1});
      return static_cast<int>(nodes.size()) - 1;
    }
    auto* ap = as_app(t);
    int tf = infer(ap->fun, scope, allow_new_consts);
    int ta = infer(ap->arg, scope, allow_new_consts);
    int tr = fresh();
    nodes.push_back({Node::TArrow, "", ta, tr, -1});
    int want = static_cast<int>(nodes.size()) - 1;
    unify(tf, want, "application `" + format_lambda(t) + "`");
    return tr;
  }

  TypePtr extract(int i, const std::string& what) {
    i = find(i);
    switch (nodes[i].kind) {
      case Node::TVar:
        throw TypeError("type of " + what + " is not uniquely determined");
      case Node::TBase: return t_base(nodes[i].base);
      case Node::TUnit: return t_unit();
      case Node::TArrow:
        return t_arrow(extract(nodes[i].a, what), extract(nodes[i].b, what));
    }
    throw TypeError("unreachable");
  }
};

}  // namespace

TypePtr type_of(const TermPtr& t, const TypeEnv& env) {
  Infer inf;
  inf.env = &env;
  std::map<std::string, std::vector<int>> scope;
  int root = inf.infer(t, scope, /*allow_new_consts=*/false);
  return inf.extract(root, "`" + format_lambda(t) + "`");
}

void check_label(const TermPtr& t, const TypePtr& expected, TypeEnv& env) {
  Infer inf;
  inf.env = &env;
  std::map<std::string, std::vector<int>> scope;
  int root = inf.infer(t, scope, /*allow_new_consts=*/true);
  inf.unify(root, inf.of_type(expected),
            "label `" + format_lambda(t) + "` against type " +
                format_type(expected));
  for (auto& [name, slot] : inf.const_slots)
    env[name] = inf.extract(slot, "constant '" + name + "'");
}

// ---------------------------------------------------------------------------
// Label application

TermPtr label_apply(const TermPtr& fun_label, const FormulaPtr& fun_type,
                    const TermPtr& arg_label) {
  auto* imp = as_implic(fun_type);
  if (!imp)
    throw Error("label_apply on non-implication " + format_formula(fun_type));
  TypePtr t1 = natural_type(imp->antecedent);
  TypePtr t2 = natural_type(imp->consequent);
  if (is_unit(t1)) {
    if (arg_label)
      throw ValidationError("label present on impotent resource " +
                            format_formula(imp->antecedent));
    // Consuming a vacuous antecedent: the function label passes through
    // unchanged (and is itself absent when the whole result is vacuous).
    return fun_label;
  }
  if (!fun_label || !arg_label)
    throw Error("missing label on contentful resource");
  if (is_unit(t2)) return nullptr;
  return beta_normalize(l_app(fun_label, arg_label));
}

// ---------------------------------------------------------------------------
// Concrete syntax

namespace {

bool atom_start(Tok k) { return k == Tok::Ident || k == Tok::LParen; }

TermPtr parse_term(const std::vector<Token>& toks, std::size_t& pos,
                   std::vector<std::string>& scope);

TermPtr resolve(const std::string& name,
                const std::vector<std::string>& scope) {
  if (std::find(scope.begin(), scope.end(), name) != scope.end())
    return l_var(name);
  return l_const(name);
}

TermPtr parse_atom(const std::vector<Token>& toks, std::size_t& pos,
                   std::vector<std::string>& scope) {
  const Token& t = toks[pos];
  if (t.kind == Tok::LParen) {
    ++pos;
    TermPtr inner = parse_term(toks, pos, scope);
    if (toks[pos].kind != Tok::RParen)
      throw SyntaxError("expected ')' in lambda term", toks[pos].offset);
    ++pos;
    return inner;
  }
  if (t.kind != Tok::Ident)
    throw SyntaxError(std::string("expected lambda term, found ") +
                          tok_name(t.kind),
                      t.offset);
  ++pos;
  TermPtr head = resolve(t.text, scope);
  if (toks[pos].kind == Tok::LParen) {
    // Sugared application: c(a1,...,ak).
    ++pos;
    while (true) {
      head = l_app(head, parse_term(toks, pos, scope));
      if (toks[pos].kind == Tok::Comma) {
        ++pos;
        continue;
      }
      if (toks[pos].kind == Tok::RParen) {
        ++pos;
        break;
      }
      throw SyntaxError("expected ',' or ')' in argument list",
                        toks[pos].offset);
    }
  }
  return head;
}

TermPtr parse_term(const std::vector<Token>& toks, std::size_t& pos,
                   std::vector<std::string>& scope) {
  if (toks[pos].kind == Tok::Backslash) {
    ++pos;
    if (toks[pos].kind != Tok::Ident)
      throw SyntaxError("expected variable after '\\'", toks[pos].offset);
    std::string var = toks[pos].text;
    ++pos;
    if (toks[pos].kind != Tok::Dot)
      throw SyntaxError("expected '.' after binder", toks[pos].offset);
    ++pos;
    scope.push_back(var);
    TermPtr body = parse_term(toks, pos, scope);
    scope.pop_back();
    return l_abs(var, body);
  }
  TermPtr t = parse_atom(toks, pos, scope);
  while (atom_start(toks[pos].kind)) t = l_app(t, parse_atom(toks, pos, scope));
  return t;
}

}  // namespace

TermPtr parse_lambda_at(const std::vector<Token>& toks, std::size_t& pos) {
  std::vector<std::string> scope;
  return parse_term(toks, pos, scope);
}

TermPtr parse_lambda(const std::string& text) {
  std::vector<Token> toks = lex(text);
  std::size_t pos = 0;
  TermPtr t = parse_lambda_at(toks, pos);
  if (toks[pos].kind != Tok::End)
    throw SyntaxError(std::string("trailing ") + tok_name(toks[pos].kind) +
                          " after lambda term",
                      toks[pos].offset);
  return t;
}

namespace {

std::string fmt(const TermPtr& t, bool sugar);

std::string fmt_arg(const TermPtr& t, bool sugar) {
  if (as_app(t) || as_abs(t)) return "(" + fmt(t, sugar) + ")";
  return fmt(t, sugar);
}

std::string fmt(const TermPtr& t, bool sugar) {
  if (auto* v = as_var(t)) return v->name;
  if (auto* c = as_constant(t)) return c->name;
  if (auto* a = as_abs(t)) return "\\" + a->var + ". " + fmt(a->body, sugar);
  // Application spine.
  TermPtr head = t;
  std::vector<TermPtr> args;
  while (auto* ap = as_app(head)) {
    args.push_back(ap->arg);
    head = ap->fun;
  }
  std::reverse(args.begin(), args.end());
  if (sugar && as_constant(head)) {
    std::string out = as_constant(head)->name + "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out += ',';
      out += fmt(args[i], sugar);
    }
    return out + ")";
  }
  std::string out = as_abs(head) ? "(" + fmt(head, sugar) + ")"
                                 : fmt(head, sugar);
  for (const TermPtr& a : args) out += " " + fmt_arg(a, sugar);
  return out;
}

}  // namespace

std::string format_lambda(const TermPtr& t, bool sugar) {
  return fmt(t, sugar);
}

}  // namespace rlfg
