#include <algorithm>
#include <string>
#include <vector>

#include "doctest.h"
#include "rlfg/grammar.hpp"

using namespace rlfg;

namespace {

const char* kFragment = R"(# one-verb fragment
atoms contentful: e t
atoms impotent: NOM
attrs: SUBJ
start: S
goal: t

lex Sandy NP : Sandy : NOM -o e
lex snores VP : \x. snores(x) : SUBJ e -o t
rule S -> NP:SUBJ(NOM, $) VP:$
)";

bool has_error(const std::vector<Finding>& fs, const std::string& needle) {
  return std::any_of(fs.begin(), fs.end(), [&](const Finding& f) {
    return f.severity == Finding::Severity::Error &&
           f.message.find(needle) != std::string::npos;
  });
}

bool has_warning(const std::vector<Finding>& fs, const std::string& needle) {
  return std::any_of(fs.begin(), fs.end(), [&](const Finding& f) {
    return f.severity == Finding::Severity::Warning &&
           f.message.find(needle) != std::string::npos;
  });
}

}  // namespace

TEST_CASE("a small grammar file parses into the expected pieces") {
  Grammar g = parse_grammar(kFragment);
  CHECK(g.start == "S");
  CHECK(format_formula(g.goal) == "t");
  CHECK(g.vocab.atom_kind("NOM") == AtomKind::Impotent);
  REQUIRE(g.lexicon.size() == 2);
  CHECK(g.lexicon[0].word == "Sandy");
  CHECK(g.lexicon[0].category == "NP");
  REQUIRE(g.rules.size() == 1);
  CHECK(g.rules[0].mother == "S");
  REQUIRE(g.rules[0].rhs.size() == 2);
  CHECK(g.rules[0].rhs[0].category == "NP");
  CHECK(format_fterm(g.rules[0].rhs[0].tmpl) == "SUBJ(NOM, $)");
  CHECK(g.rules[0].rhs[1].category == "VP");
  CHECK(!g.rules[0].rhs[1].optional);
  // No optional constituents: exactly one variant with both daughters.
  CHECK(g.rules[0].variants == std::vector<std::vector<int>>{{0, 1}});
  CHECK(validate(g).empty());
  // Lexical lookup.
  CHECK(g.entries_for("Sandy").size() == 1);
  CHECK(g.entries_for("sandy").empty());  // case-sensitive
}

TEST_CASE("goal defaults to the atom t when present") {
  Grammar g = parse_grammar(
      "atoms contentful: e t\nstart: S\nlex a S : x : e\n");
  CHECK(format_formula(g.goal) == "t");
  CHECK_THROWS_AS(
      parse_grammar("atoms contentful: e\nstart: S\nlex a S : x : e\n"),
      GrammarError);
}

TEST_CASE("optional constituents expand smallest-first") {
  Grammar g = parse_grammar(R"(
atoms contentful: e t
atoms impotent: ACC
attrs: OBJ XCOMP
start: VP
lex ate V : x : e
rule VP -> V:$ [ NP:OBJ($) ] [ VP:XCOMP($) ]
)");
  REQUIRE(g.rules.size() == 1);
  const PSRule& r = g.rules[0];
  REQUIRE(r.rhs.size() == 3);
  CHECK(r.rhs[1].optional);
  CHECK(r.rhs[2].optional);
  REQUIRE(r.variants.size() == 4);
  CHECK(r.variants[0] == std::vector<int>{0});
  CHECK(r.variants[3] == std::vector<int>{0, 1, 2});
  // Middle variants each drop one optional; fewer constituents come first.
  CHECK(r.variants[1].size() == 2);
  CHECK(r.variants[2].size() == 2);
}

TEST_CASE("grammar reader rejects malformed files with line numbers") {
  auto line_of = [](const std::string& text) {
    try {
      parse_grammar(text);
    } catch (const GrammarError& e) {
      return e.line;
    }
    return -1;
  };
  // Missing start symbol (reported at end, line 0).
  CHECK(line_of("atoms contentful: t\n") == 0);
  // Undeclared atom inside a lexical formula.
  CHECK(line_of("atoms contentful: t\nstart: S\nlex a S : x : q\n") == 3);
  // Template without a placeholder.
  CHECK(line_of("atoms contentful: e t\nstart: S\nlex a A : x : e\n"
                "rule S -> A:e\n") == 4);
  // Rule whose constituents are all optional.
  CHECK(line_of("atoms contentful: e t\nstart: S\nlex a A : x : e\n"
                "rule S -> [ A:$ ]\n") == 4);
  // Label on a semantically impotent item.
  CHECK(line_of("atoms contentful: t\natoms impotent: SG\nstart: S\n"
                "lex a A : x : SG\n") == 4);
  // Malformed settings.
  CHECK(line_of("set max_nodes = banana\n") == 1);
  CHECK(line_of("set max_nodes = -3\n") == 1);
  CHECK(line_of("set path_eq_reuse = maybe\n") == 1);
  CHECK(line_of("set frobnicate = 3\n") == 1);
  // Unknown directive.
  CHECK(line_of("frobnicate: yes\n") == 1);
  // Duplicate atom declaration.
  CHECK(line_of("atoms contentful: e e\n") == 1);
}

TEST_CASE("settings land in the grammar") {
  Grammar g = parse_grammar(R"(
atoms contentful: t
start: S
lex a S : x : t
set path_eq_reuse = on
set max_nodes = 1234
set max_prefix_depth = 5
)");
  CHECK(g.settings.path_eq_reuse);
  CHECK(g.settings.limits.max_nodes == 1234);
  CHECK(g.settings.limits.max_prefix_depth == 5);
}

TEST_CASE("validate derives the constant type environment from labels") {
  Grammar g = parse_grammar(kFragment);
  REQUIRE(validate(g).empty());
  REQUIRE(g.type_env.count("snores"));
  CHECK(format_type(g.type_env.at("snores")) == "e -> t");
  // The name label of the NP is a constant of type e.
  REQUIRE(g.type_env.count("Sandy"));
  CHECK(format_type(g.type_env.at("Sandy")) == "e");
}

TEST_CASE("validate flags conflicting label types as errors") {
  // The first entry fixes f at e -> t; the second demands a bare e.
  Grammar h = parse_grammar(R"(
atoms contentful: e t
start: S
lex a S : \x. f(x) : e -o t
lex b S : f : e
)");
  auto findings = validate(h);
  CHECK(has_error(findings, "lex 'b'"));
}

TEST_CASE("validate flags unresolved label types") {
  Grammar g = parse_grammar(R"(
atoms contentful: e t
start: S
lex a S : f(c) : t
)");
  auto findings = validate(g);
  CHECK(has_error(findings, "not uniquely determined"));
}

TEST_CASE("validate warns about unreachable and undefined categories") {
  Grammar g = parse_grammar(R"(
atoms contentful: e t
start: S
lex a S : x : t
lex stranded NP : y : e
rule Q -> NP:$
)");
  auto findings = validate(g);
  CHECK(has_warning(findings, "'stranded'"));
  CHECK(has_warning(findings, "'Q'"));
  CHECK(!has_error(findings, ""));
}

TEST_CASE("validate warns about exact duplicate lexical entries") {
  Grammar g = parse_grammar(R"(
atoms contentful: e t
start: S
lex a S : x : t
lex a S : x : t
)");
  CHECK(has_warning(validate(g), "duplicate lexical entry"));
}

TEST_CASE("validate rejects unary rule cycles") {
  Grammar g = parse_grammar(R"(
atoms contentful: e t
start: S
lex a A : x : t
rule S -> A:$
rule A -> S:$
)");
  CHECK(has_error(validate(g), "unary rule cycle"));
  // A unary chain without a cycle is fine.
  Grammar h = parse_grammar(R"(
atoms contentful: e t
start: S
lex a B : x : t
rule S -> A:$
rule A -> B:$
)");
  CHECK(!has_error(validate(h), "unary rule cycle"));
}

TEST_CASE("missing start-category definition is an error finding") {
  Grammar g = parse_grammar(R"(
atoms contentful: t
start: S
lex a A : x : t
)");
  CHECK(has_error(validate(g), "start symbol 'S'"));
}

TEST_CASE("grammar formatting round-trips through the reader") {
  const char* sources[] = {kFragment, R"(
atoms contentful: e t
atoms impotent: NOM ACC
attrs: SUBJ OBJ XCOMP
start: S
goal: t
set path_eq_reuse = on
set max_nodes = 5000
lex him NP : he : ACC -o e
lex seems V : \P. seems(P) : XCOMP t -o t ; SUBJ = XCOMP SUBJ
rule S -> NP:SUBJ(opt(NOM), $) VP:$
rule VP -> V:$ [ NP:OBJ(opt(ACC), $) ] [ VP:XCOMP($) ]
)"};
  for (const char* src : sources) {
    Grammar g = parse_grammar(src);
    std::string emitted = format_grammar(g);
    Grammar h = parse_grammar(emitted);
    CHECK(format_grammar(h) == emitted);  // fixpoint after one round
    CHECK(h.start == g.start);
    CHECK(formula_equal(h.goal, g.goal));
    CHECK(h.lexicon.size() == g.lexicon.size());
    CHECK(h.rules.size() == g.rules.size());
    CHECK(h.settings.path_eq_reuse == g.settings.path_eq_reuse);
    CHECK(h.settings.limits.max_nodes == g.settings.limits.max_nodes);
    for (std::size_t i = 0; i < g.rules.size(); ++i) {
      CHECK(h.rules[i].variants == g.rules[i].variants);
      for (std::size_t j = 0; j < g.rules[i].rhs.size(); ++j)
        CHECK(format_fterm(h.rules[i].rhs[j].tmpl) ==
              format_fterm(g.rules[i].rhs[j].tmpl));
    }
  }
}

TEST_CASE("missing grammar files fail with a readable error") {
  CHECK_THROWS_WITH_AS(load_grammar_file("/nonexistent/g.rlfg"),
                       "cannot open grammar file '/nonexistent/g.rlfg'",
                       Error);
}
