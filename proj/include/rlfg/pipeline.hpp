// The sentence pipeline (tokenize, parse, assemble, normalize, derive) and
// corpus running, with text and JSON rendering.

#ifndef RLFG_PIPELINE_HPP_
#define RLFG_PIPELINE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rlfg/cparser.hpp"
#include "rlfg/grammar.hpp"
#include "rlfg/prover.hpp"

namespace rlfg {

enum class Verdict { Grammatical, NoDerivation, NoCStructure };
const char* verdict_name(Verdict v);

struct RunOptions {
  bool show_proof = false;
  bool show_fterm = false;
  bool raw_lambda = false;  // curried λ printing instead of constant sugar
  std::optional<long> max_nodes;
  std::optional<int> max_prefix_depth;
  std::optional<bool> path_eq_reuse;  // overrides the grammar setting
};

// One analyzed sentence.  `derivations` spans every c-structure and every
// normal state of its f-term.
struct CaseReport {
  std::string sentence;
  Verdict verdict = Verdict::NoCStructure;
  std::vector<std::string> ctrees;
  std::vector<std::string> fterms;  // assembled f-term per c-structure
  std::vector<Derivation> derivations;
  std::vector<std::string> readings;  // distinct, canonical order
  std::vector<std::string> diagnostics;
  double elapsed_ms = 0.0;
};

// Throws BudgetError when proof search exhausts its node budget.
CaseReport analyze(const Grammar& g, const std::string& sentence,
                   const RunOptions& opts = {});

// ---------------------------------------------------------------------------
// Corpora

// One case per line:
//   ok <name> | <sentence> | <expected-lambda>[, <expected-lambda>...]
//   bad <name> | <sentence>
//   noparse <name> | <sentence>
struct CorpusCase {
  enum class Kind { Ok, Bad, NoParse };
  Kind kind;
  std::string name;
  std::string sentence;
  std::vector<std::string> expected_readings;
  int line = 0;
};

std::vector<CorpusCase> parse_corpus(const std::string& text);
std::vector<CorpusCase> load_corpus_file(const std::string& path);

struct CaseOutcome {
  CorpusCase scase;
  CaseReport report;
  bool pass = false;
  bool budget_exceeded = false;
  std::string failure;  // empty when pass
};

struct CorpusReport {
  std::vector<CaseOutcome> outcomes;  // input order
  bool all_pass = true;
  bool budget_exceeded = false;
};

// Runs every case on a worker pool; outcomes joined in input order.
CorpusReport run_corpus(const Grammar& g, const std::vector<CorpusCase>& cases,
                        const RunOptions& opts = {});

// Set equality of derivation readings against expected λ texts, compared by
// α-equivalence after β-normalization.  On mismatch `detail` (if non-null)
// receives a got-vs-expected description.
bool readings_match(const std::vector<Derivation>& ds,
                    const std::vector<std::string>& expected,
                    std::string* detail = nullptr);

// ---------------------------------------------------------------------------
// Rendering.  All output is deterministic: identical inputs render
// byte-identical text and JSON (timings are reported as 0 for this reason).

std::string show_resource(const Resource& r, bool sugar = true);
std::string format_derivation(const Derivation& d, bool sugar = true);

std::string render_case_text(const CaseReport& r, const RunOptions& opts);
std::string render_corpus_text(const CorpusReport& rep,
                               const RunOptions& opts);

nlohmann::ordered_json case_json(const CaseReport& r, bool sugar = true);
nlohmann::ordered_json corpus_json(const CorpusReport& rep, bool sugar = true);

}  // namespace rlfg

#endif  // RLFG_PIPELINE_HPP_
