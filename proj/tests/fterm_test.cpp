#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "rlfg/fterm.hpp"
#include "support/random_gen.hpp"

using namespace rlfg;

namespace {

Vocab demo_vocab() {
  Vocab v;
  v.declare_atom("e", AtomKind::Contentful);
  v.declare_atom("t", AtomKind::Contentful);
  v.declare_atom("NOM", AtomKind::Impotent);
  v.declare_atom("ACC", AtomKind::Impotent);
  v.declare_attribute("SUBJ");
  v.declare_attribute("OBJ");
  v.declare_attribute("XCOMP");
  return v;
}

std::set<std::string> state_keys(const FTermPtr& t, int eq_uses = 1) {
  std::set<std::string> out;
  for (const NormalState& s : normalize(t, eq_uses)) out.insert(state_key(s));
  return out;
}

}  // namespace

TEST_CASE("f-term parse/format round trip") {
  Vocab v = demo_vocab();
  for (const char* text :
       {"Sandy : e", "NOM", "SUBJ(NOM, Sandy : NOM -o e)",
        "opt(ACC), \\x. snores(x) : SUBJ e -o t", "SUBJ = XCOMP SUBJ",
        "OBJ(opt(ACC), kim : e)", "\\P. seems(P) : XCOMP t -o t",
        "opt(SUBJ NOM)"}) {
    FTermPtr t = parse_fterm(text, v);
    CHECK(format_fterm(t) == text);
  }
}

TEST_CASE("labelled leaves need the colon before any equals") {
  Vocab v = demo_vocab();
  FTermPtr t = parse_fterm("\\y. \\x. likes(x,y) : OBJ e -o SUBJ e -o t", v);
  auto* leaf = std::get_if<FTerm::Leaf>(&t->node);
  REQUIRE(leaf);
  CHECK(format_lambda(leaf->label) == "\\y. \\x. likes(x,y)");
  CHECK(format_formula(leaf->formula) == "OBJ e -o SUBJ e -o t");
}

TEST_CASE("placeholders are rejected outside rule templates") {
  Vocab v = demo_vocab();
  CHECK_THROWS_AS(parse_fterm("$", v), SyntaxError);
  FTermPtr tmpl = parse_fterm("SUBJ(NOM, $)", v, /*allow_holes=*/true);
  CHECK(count_holes(tmpl) == 1);
  // An unreplaced hole cannot be normalized.
  CHECK_THROWS_AS(normalize(tmpl), StructureError);
}

TEST_CASE("substitute_holes splices the daughter everywhere") {
  Vocab v = demo_vocab();
  FTermPtr tmpl = parse_fterm("SUBJ(NOM, $)", v, true);
  FTermPtr daughter = parse_fterm("Sandy : NOM -o e", v);
  FTermPtr out = substitute_holes(tmpl, daughter);
  CHECK(count_holes(out) == 0);
  CHECK(format_fterm(out) == "SUBJ(NOM, Sandy : NOM -o e)");
}

TEST_CASE("undeclared names in f-terms are rejected") {
  Vocab v = demo_vocab();
  CHECK_THROWS_AS(parse_fterm("COMP(e)", v), SyntaxError);
  CHECK_THROWS_AS(parse_fterm("SUBJ = COMP SUBJ", v), SyntaxError);
  CHECK_THROWS_AS(parse_fterm("Sandy : q", v), SyntaxError);
}

TEST_CASE("embedding folds onto leaves as a modal prefix") {
  Vocab v = demo_vocab();
  auto states = normalize(parse_fterm("SUBJ(NOM, Sandy : NOM -o e)", v));
  REQUIRE(states.size() == 1);
  REQUIRE(states[0].resources.size() == 2);
  // Sorted canonically and numbered from zero.
  CHECK(states[0].resources[0].id == 0);
  CHECK(states[0].resources[1].id == 1);
  std::set<std::string> formulas;
  for (const Resource& r : states[0].resources)
    formulas.insert(format_formula(r.formula));
  CHECK(formulas == std::set<std::string>{"SUBJ NOM", "SUBJ (NOM -o e)"});
  // A leaf written with an explicit modal prefix lands in the same state.
  CHECK(state_keys(parse_fterm("SUBJ NOM, Sandy : SUBJ (NOM -o e)", v)) ==
        state_keys(parse_fterm("SUBJ(NOM, Sandy : NOM -o e)", v)));
}

TEST_CASE("nested embedding builds nested prefixes") {
  Vocab v = demo_vocab();
  auto states = normalize(parse_fterm("XCOMP(SUBJ(kim : e))", v));
  REQUIRE(states.size() == 1);
  REQUIRE(states[0].resources.size() == 1);
  CHECK(format_formula(states[0].resources[0].formula) == "XCOMP SUBJ e");
  auto [prefix, rest] =
      split_modal_prefix(states[0].resources[0].formula);
  CHECK(prefix == std::vector<std::string>{"XCOMP", "SUBJ"});
  CHECK(formula_equal(rest, f_atom(v, "e")));
  CHECK(formula_equal(wrap_modal_prefix(prefix, rest),
                      states[0].resources[0].formula));
}

TEST_CASE("optional subterms branch, absent side first") {
  Vocab v = demo_vocab();
  auto states = normalize(parse_fterm("opt(ACC), kim : e", v));
  REQUIRE(states.size() == 2);
  CHECK(states[0].resources.size() == 1);  // absent branch first
  CHECK(states[1].resources.size() == 2);
}

TEST_CASE("multiset expansion is a cross product with duplicates removed") {
  Vocab v = demo_vocab();
  // Two independent options: 4 assignments, 3 distinct states.
  auto states = normalize(parse_fterm("opt(ACC), opt(ACC)", v));
  CHECK(states.size() == 3);
  auto more = normalize(parse_fterm("opt(ACC), opt(NOM)", v));
  CHECK(more.size() == 4);
}

TEST_CASE("path equations under an embedding are structural errors") {
  Vocab v = demo_vocab();
  FTermPtr bad = parse_fterm("XCOMP(SUBJ = XCOMP SUBJ)", v);
  try {
    normalize(bad);
    CHECK(false);
  } catch (const StructureError& e) {
    std::string msg = e.what();
    CHECK(msg.find("SUBJ = XCOMP SUBJ") != std::string::npos);
    CHECK(msg.find("XCOMP") != std::string::npos);
  }
  // At top level the same equation is fine and lands in the state.
  auto states = normalize(parse_fterm("SUBJ = XCOMP SUBJ", v), 1);
  REQUIRE(states.size() == 1);
  REQUIRE(states[0].equations.size() == 1);
  CHECK(states[0].equations[0].remaining == 1);
  CHECK(format_equation(states[0].equations[0].eq) == "SUBJ = XCOMP SUBJ");
  // Unbounded budget is recorded as -1.
  CHECK(normalize(parse_fterm("SUBJ = XCOMP SUBJ", v), -1)[0]
            .equations[0]
            .remaining == -1);
}

TEST_CASE("too many optional branches overflow the expansion cap") {
  Vocab v = demo_vocab();
  std::vector<FTermPtr> items;
  for (int i = 0; i < 17; ++i) items.push_back(ft_opt(ft_leaf(f_atom(v, "NOM"))));
  CHECK_THROWS_AS(normalize(ft_multiset(std::move(items))), StructureError);
}

TEST_CASE("states round-trip through state_to_fterm") {
  Vocab v = demo_vocab();
  FTermPtr t = parse_fterm(
      "SUBJ(NOM, Sandy : NOM -o e), \\x. snores(x) : SUBJ e -o t, "
      "SUBJ = XCOMP SUBJ",
      v);
  for (const NormalState& s : normalize(t, 1)) {
    auto back = normalize(state_to_fterm(s), 1);
    REQUIRE(back.size() == 1);
    CHECK(state_equal(back[0], s));
  }
}

TEST_CASE("distribute/factor equivalence on handcrafted pairs") {
  Vocab v = demo_vocab();
  FTermPtr a = parse_fterm("SUBJ(NOM, kim : e)", v);
  FTermPtr b = parse_fterm("SUBJ(NOM), SUBJ(kim : e)", v);
  CHECK(distribute_factor_equal(a, b));
  FTermPtr c = parse_fterm("SUBJ(NOM), OBJ(kim : e)", v);
  CHECK(!distribute_factor_equal(a, c));
}

TEST_CASE("distribute/factor equivalence on random f-terms") {
  testgen::Gen gen(9091);
  int tried = 0;
  for (int i = 0; i < 500; ++i) {
    FTermPtr a1 = gen.fterm(3, 1, 0);
    FTermPtr a2 = gen.fterm(3, 1, 0);
    const std::string attr = i % 2 ? "SUBJ" : "OBJ";
    FTermPtr lhs = ft_embed(attr, ft_multiset({a1, a2}));
    FTermPtr rhs = ft_multiset({ft_embed(attr, a1), ft_embed(attr, a2)});
    CHECK(distribute_factor_equal(lhs, rhs));
    ++tried;
  }
  CHECK(tried == 500);
}

TEST_CASE("resource keys distinguish labels up to alpha only") {
  Vocab v = demo_vocab();
  Resource a{parse_formula("e", v), parse_lambda("Sandy"), 0};
  Resource b{parse_formula("e", v), parse_lambda("Kim"), 0};
  Resource c{parse_formula("e", v), parse_lambda("Sandy"), 3};
  CHECK(resource_key(a) != resource_key(b));
  CHECK(resource_key(a) == resource_key(c));  // ids do not matter
  Resource lam1{parse_formula("SUBJ e -o t", v), parse_lambda("\\x. f(x)"), 0};
  Resource lam2{parse_formula("SUBJ e -o t", v), parse_lambda("\\y. f(y)"), 0};
  CHECK(resource_key(lam1) == resource_key(lam2));
}
