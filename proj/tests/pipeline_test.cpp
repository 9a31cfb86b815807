#include <string>
#include <vector>

#include "doctest.h"
#include "rlfg/pipeline.hpp"

using namespace rlfg;

namespace {

Grammar fragment() {
  Grammar g = parse_grammar(R"(
atoms contentful: e t
atoms impotent: NOM
attrs: SUBJ
start: S
lex Sandy NP : Sandy : NOM -o e
lex snores VP : \x. snores(x) : SUBJ e -o t
rule S -> NP:SUBJ(NOM, $) VP:$
)");
  REQUIRE(validate(g).empty());
  return g;
}

Grammar number_clash() {
  Grammar g = parse_grammar(R"(
atoms contentful: e t
atoms impotent: SG PL
attrs: SUBJ
start: S
lex Sandy NP : Sandy : e ; SG
lex snore VP : \x. snore(x) : SUBJ PL -o SUBJ e -o t
rule S -> NP:SUBJ($) VP:$
)");
  REQUIRE(validate(g).empty());
  return g;
}

}  // namespace

TEST_CASE("analyze reports a grammatical sentence with its reading") {
  Grammar g = fragment();
  CaseReport r = analyze(g, "Sandy snores.", {});
  CHECK(r.verdict == Verdict::Grammatical);
  REQUIRE(r.ctrees.size() == 1);
  CHECK(r.ctrees[0] == "(S (NP Sandy) (VP snores))");
  CHECK(r.fterms.size() == 1);
  CHECK(r.readings == std::vector<std::string>{"snores(Sandy)"});
  CHECK(r.derivations.size() == 1);
  CHECK(r.diagnostics.empty());
  CHECK(r.elapsed_ms >= 0.0);
}

TEST_CASE("analyze distinguishes parse failure from proof failure") {
  Grammar g = fragment();
  CaseReport flipped = analyze(g, "snores Sandy.", {});
  CHECK(flipped.verdict == Verdict::NoCStructure);
  CHECK(flipped.diagnostics ==
        std::vector<std::string>{"no c-structure spans the sentence"});

  CaseReport unknown = analyze(g, "Sandy sleeps.", {});
  CHECK(unknown.verdict == Verdict::NoCStructure);
  CHECK(unknown.diagnostics ==
        std::vector<std::string>{"unknown word 'sleeps'"});

  CaseReport empty = analyze(g, "...", {});
  CHECK(empty.verdict == Verdict::NoCStructure);

  Grammar clash = number_clash();
  CaseReport mismatch = analyze(clash, "Sandy snore.", {});
  CHECK(mismatch.verdict == Verdict::NoDerivation);
  CHECK(mismatch.ctrees.size() == 1);  // the c-structure itself is fine
  CHECK(mismatch.readings.empty());
  bool noted = false;
  for (const std::string& d : mismatch.diagnostics)
    noted = noted || d == "unsatisfied antecedent: SUBJ PL";
  CHECK(noted);
}

TEST_CASE("option overrides reach the search limits") {
  Grammar g = fragment();
  RunOptions tiny;
  tiny.max_nodes = 1;
  CHECK_THROWS_AS(analyze(g, "Sandy snores.", tiny), BudgetError);
}

TEST_CASE("derivations render as indented proof trees") {
  Grammar g = fragment();
  CaseReport r = analyze(g, "Sandy snores.", {});
  REQUIRE(r.derivations.size() == 1);
  CHECK(format_derivation(r.derivations[0], true) ==
        "apply => snores(Sandy) : t\n"
        "  assume \\x. snores(x) : SUBJ e -o t\n"
        "  apply => Sandy : SUBJ e\n"
        "    lift SUBJ => Sandy : SUBJ NOM -o SUBJ e\n"
        "      assume Sandy : SUBJ (NOM -o e)\n"
        "    assume SUBJ NOM\n");
}

TEST_CASE("case text rendering shows the essentials") {
  Grammar g = fragment();
  RunOptions opts;
  opts.show_fterm = true;
  opts.show_proof = true;
  std::string text = render_case_text(analyze(g, "Sandy snores.", opts), opts);
  CHECK(text.find("sentence: Sandy snores.") != std::string::npos);
  CHECK(text.find("verdict: grammatical") != std::string::npos);
  CHECK(text.find("c-structures: 1") != std::string::npos);
  CHECK(text.find("(S (NP Sandy) (VP snores))") != std::string::npos);
  CHECK(text.find("SUBJ(NOM, Sandy : NOM -o e)") != std::string::npos);
  CHECK(text.find("readings:\n  snores(Sandy)") != std::string::npos);
  CHECK(text.find("derivations: 1") != std::string::npos);
  CHECK(text.find("proof 1:") != std::string::npos);
}

TEST_CASE("corpus files parse into cases with line numbers") {
  auto cases = parse_corpus(R"(# comment
ok both | Sandy likes Kim | likes(Sandy,Kim), likes(Kim,Sandy)

bad starred | Kim Sandy   # trailing comment
noparse scrambled | likes Sandy Kim
)");
  REQUIRE(cases.size() == 3);
  CHECK(cases[0].kind == CorpusCase::Kind::Ok);
  CHECK(cases[0].name == "both");
  CHECK(cases[0].sentence == "Sandy likes Kim");
  CHECK(cases[0].expected_readings ==
        std::vector<std::string>{"likes(Sandy,Kim)", "likes(Kim,Sandy)"});
  CHECK(cases[0].line == 2);
  CHECK(cases[1].kind == CorpusCase::Kind::Bad);
  CHECK(cases[1].sentence == "Kim Sandy");
  CHECK(cases[1].line == 4);
  CHECK(cases[2].kind == CorpusCase::Kind::NoParse);
}

TEST_CASE("malformed corpus lines name their line number") {
  auto error_of = [](const std::string& text) -> std::string {
    try {
      parse_corpus(text);
    } catch (const Error& e) {
      return e.what();
    }
    return "";
  };
  CHECK(error_of("ok n | s\n") ==
        "corpus line 1: 'ok' cases need | sentence | readings");
  CHECK(error_of("\n\nbad n | s | r\n").find("corpus line 3") == 0);
  CHECK(error_of("ok n | s |\n").find("at least one expected reading") !=
        std::string::npos);
  CHECK(error_of("ok n | s | a, , b\n").find("empty expected reading") !=
        std::string::npos);
  CHECK(error_of("zap n | s\n").find("unknown case kind 'zap'") !=
        std::string::npos);
  CHECK(error_of("ok | s | r\n").find("missing case name") !=
        std::string::npos);
  CHECK(error_of("ok n extra | s | r\n").find("unexpected text") !=
        std::string::npos);
  CHECK(error_of("ok n |  | r\n").find("empty sentence") !=
        std::string::npos);
}

TEST_CASE("reading comparison is alpha/beta-insensitive and order-free") {
  Grammar g = fragment();
  CaseReport r = analyze(g, "Sandy snores.", {});
  std::string detail;
  CHECK(readings_match(r.derivations, {"snores(Sandy)"}, &detail));
  // A beta-reducible spelling of the same reading still matches.
  CHECK(readings_match(r.derivations, {"(\\x. snores(x))(Sandy)"}, &detail));
  CHECK(readings_match(r.derivations, {"(\\q. q)(snores(Sandy))"}, &detail));
  CHECK(!readings_match(r.derivations, {"snores(Kim)"}, &detail));
  CHECK(detail ==
        "readings {snores(Sandy)} != expected {snores(Kim)}");
  CHECK(!readings_match(r.derivations,
                        {"snores(Sandy)", "snores(Sandy,Sandy)"}, nullptr));
}

TEST_CASE("run_corpus keeps input order and aggregates the outcome") {
  Grammar g = fragment();
  auto cases = parse_corpus(
      "ok good | Sandy snores. | snores(Sandy)\n"
      "noparse flipped | snores Sandy.\n"
      "ok wrong | Sandy snores. | snores(Kim)\n");
  CorpusReport rep = run_corpus(g, cases, {});
  REQUIRE(rep.outcomes.size() == 3);
  CHECK(rep.outcomes[0].scase.name == "good");
  CHECK(rep.outcomes[0].pass);
  CHECK(rep.outcomes[1].scase.name == "flipped");
  CHECK(rep.outcomes[1].pass);
  CHECK(rep.outcomes[2].scase.name == "wrong");
  CHECK(!rep.outcomes[2].pass);
  CHECK(rep.outcomes[2].failure.find("expected {snores(Kim)}") !=
        std::string::npos);
  CHECK(!rep.all_pass);
  CHECK(!rep.budget_exceeded);

  std::string text = render_corpus_text(rep, {});
  CHECK(text.find("PASS good: grammatical; readings: snores(Sandy)") !=
        std::string::npos);
  CHECK(text.find("PASS flipped: no-cstructure") != std::string::npos);
  CHECK(text.find("FAIL wrong: grammatical") != std::string::npos);
  CHECK(text.find("total 3, passed 2, failed 1\n") != std::string::npos);
  CHECK(text.find("failed: wrong\n") != std::string::npos);
}

TEST_CASE("an empty corpus passes with zero cases") {
  Grammar g = fragment();
  auto cases = parse_corpus("# nothing but comments\n\n");
  CHECK(cases.empty());
  CorpusReport rep = run_corpus(g, cases, {});
  CHECK(rep.all_pass);
  CHECK(rep.outcomes.empty());
  CHECK(render_corpus_text(rep, {}) == "total 0, passed 0, failed 0\n");
}

TEST_CASE("per-case budget blowups mark the corpus, not just the case") {
  Grammar g = fragment();
  auto cases = parse_corpus("ok good | Sandy snores. | snores(Sandy)\n");
  RunOptions tiny;
  tiny.max_nodes = 1;
  CorpusReport rep = run_corpus(g, cases, tiny);
  REQUIRE(rep.outcomes.size() == 1);
  CHECK(!rep.outcomes[0].pass);
  CHECK(rep.outcomes[0].budget_exceeded);
  CHECK(rep.budget_exceeded);
  CHECK(rep.outcomes[0].report.verdict == Verdict::NoDerivation);
}

TEST_CASE("case JSON follows the schema") {
  Grammar g = fragment();
  CaseReport r = analyze(g, "Sandy snores.", {});
  nlohmann::ordered_json j = case_json(r, true);
  CHECK(j["sentence"] == "Sandy snores.");
  CHECK(j["verdict"] == "grammatical");
  CHECK(j["cstructures"].is_number_integer());
  CHECK(j["cstructures"] == 1);
  CHECK(j["readings"] == nlohmann::ordered_json::array({"snores(Sandy)"}));
  REQUIRE(j["derivations"].size() == 1);
  const auto& steps = j["derivations"][0]["steps"];
  REQUIRE(steps.size() == 3);
  for (const auto& s : steps) {
    CHECK(s.contains("rule"));
    CHECK(s["inputs"].is_array());
    CHECK(s["output"].contains("formula"));
    CHECK(s["output"].contains("label"));
  }
  CHECK(j["derivations"][0]["conclusion"] == "snores(Sandy) : t");
  CHECK(j["diagnostics"].is_array());
  CHECK(j["elapsed_ms"] == 0);
  // Key order is fixed by the schema.
  std::vector<std::string> keys;
  for (auto& el : j.items()) keys.push_back(el.key());
  CHECK(keys == std::vector<std::string>{"sentence", "verdict", "cstructures",
                                         "readings", "derivations",
                                         "diagnostics", "elapsed_ms"});
}

TEST_CASE("labels that vanish at Unit type serialize as JSON null") {
  Grammar g = parse_grammar(R"(
atoms contentful: e
atoms impotent: NOM
start: S
goal: NOM
lex go S : f : e -o NOM ; x : e
)");
  REQUIRE(validate(g).empty());
  CaseReport r = analyze(g, "go", {});
  REQUIRE(r.verdict == Verdict::Grammatical);
  REQUIRE(r.derivations.size() == 1);
  nlohmann::ordered_json j = case_json(r, true);
  CHECK(j["derivations"][0]["steps"][0]["output"]["label"].is_null());
  CHECK(j["derivations"][0]["conclusion"] == "NOM");
  CHECK(j["readings"].empty());  // a vacuous conclusion has no reading
}

TEST_CASE("corpus JSON carries per-case rows and a summary") {
  Grammar g = fragment();
  auto cases = parse_corpus(
      "ok good | Sandy snores. | snores(Sandy)\n"
      "ok wrong | Sandy snores. | snores(Kim)\n");
  CorpusReport rep = run_corpus(g, cases, {});
  nlohmann::ordered_json j = corpus_json(rep, true);
  REQUIRE(j["cases"].size() == 2);
  CHECK(j["cases"][0]["name"] == "good");
  CHECK(j["cases"][0]["expectation"] == "ok");
  CHECK(j["cases"][0]["pass"] == true);
  CHECK(!j["cases"][0].contains("failure"));
  CHECK(j["cases"][0]["verdict"] == "grammatical");
  CHECK(j["cases"][1]["pass"] == false);
  CHECK(j["cases"][1].contains("failure"));
  CHECK(j["summary"]["total"] == 2);
  CHECK(j["summary"]["passed"] == 1);
  CHECK(j["summary"]["failed"] ==
        nlohmann::ordered_json::array({"wrong"}));

  // Repeated runs serialize identically.
  CorpusReport again = run_corpus(g, cases, {});
  CHECK(corpus_json(again, true).dump(2) == j.dump(2));
}
