// Lambda labels: the simply-typed calculus that decorates resources, with
// beta-normalization, alpha-equivalence, type inference, and the application
// rule used when an implication is consumed.

#ifndef RLFG_LAMBDA_HPP_
#define RLFG_LAMBDA_HPP_

#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "rlfg/formula.hpp"

namespace rlfg {

struct LambdaTerm;
using TermPtr = std::shared_ptr<const LambdaTerm>;

// Var | Const | Abs | App.  The calculus is curried; `c(a,b)` in the concrete
// syntax is sugar for App(App(c,a),b).
struct LambdaTerm {
  struct Var {
    std::string name;
  };
  struct Const {
    std::string name;
  };
  struct Abs {
    std::string var;
    TermPtr body;
  };
  struct App {
    TermPtr fun;
    TermPtr arg;
  };

  std::variant<Var, Const, Abs, App> node;
};

TermPtr l_var(const std::string& name);
TermPtr l_const(const std::string& name);
TermPtr l_abs(const std::string& var, TermPtr body);
TermPtr l_app(TermPtr fun, TermPtr arg);

const LambdaTerm::Var* as_var(const TermPtr& t);
const LambdaTerm::Const* as_constant(const TermPtr& t);
const LambdaTerm::Abs* as_abs(const TermPtr& t);
const LambdaTerm::App* as_app(const TermPtr& t);

std::set<std::string> free_vars(const TermPtr& t);

// Capture-avoiding substitution of `arg` for free occurrences of `name`.
TermPtr substitute(const TermPtr& body, const std::string& name,
                   const TermPtr& arg);

// Normal-order reduction to beta-normal form.  Terminates on well-typed
// input; a generous step guard turns runaway reduction into an Error.
TermPtr beta_normalize(const TermPtr& t);

// Canonical de-Bruijn-style encoding: alpha-equivalent terms (and only they)
// share a key.  Keys also give the deterministic ordering of readings.
std::string canonical_key(const TermPtr& t);
bool alpha_equal(const TermPtr& a, const TermPtr& b);

// ---------------------------------------------------------------------------
// Typing

struct TypeError : Error {
  using Error::Error;
};

// Monomorphic types for the constants of a grammar.
using TypeEnv = std::map<std::string, TypePtr>;

// Simple-type inference.  Fails on ill-typed terms (naming the offending
// subterm), on variables not bound by an enclosing abstraction, and on terms
// whose type is not uniquely determined.
TypePtr type_of(const TermPtr& t, const TypeEnv& env);

// Checks `t` against `expected`, recording the types this forces for any
// constants absent from `env`.  Used to grow a grammar's constant
// environment from its lexical entries.
void check_label(const TermPtr& t, const TypePtr& expected, TypeEnv& env);

// ---------------------------------------------------------------------------
// Label application
//
// `fun_type` is the implication formula whose consumption this label
// application accompanies.  Labels are absent (null) exactly on resources of
// Unit natural type.
TermPtr label_apply(const TermPtr& fun_label, const FormulaPtr& fun_type,
                    const TermPtr& arg_label);

// ---------------------------------------------------------------------------
// Concrete syntax
//
//   term := '\' IDENT '.' term | app
//   app  := atom+                         (left-associative)
//   atom := IDENT | IDENT '(' term (',' term)* ')' | '(' term ')'
//
// An identifier is a Var when bound by an enclosing '\', a Const otherwise.
TermPtr parse_lambda(const std::string& text);
TermPtr parse_lambda_at(const std::vector<Token>& toks, std::size_t& pos);

// With `sugar`, fully collapses constant-headed application spines back to
// `c(a,b)` form; without it, prints curried juxtaposition.
std::string format_lambda(const TermPtr& t, bool sugar = true);

}  // namespace rlfg

#endif  // RLFG_LAMBDA_HPP_
