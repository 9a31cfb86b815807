#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rlfg/pipeline.hpp"

namespace {

// Exit codes: 0 all pass / grammatical, 1 expectation mismatch or
// ungrammatical, 2 usage or grammar error, 3 search budget exceeded.
enum ExitCode { kOk = 0, kMismatch = 1, kUsage = 2, kBudget = 3 };

int report_findings(const std::vector<rlfg::Finding>& findings) {
  int errors = 0;
  for (const rlfg::Finding& f : findings) {
    bool is_error = f.severity == rlfg::Finding::Severity::Error;
    std::cerr << (is_error ? "error: " : "warning: ") << f.message << "\n";
    if (is_error) ++errors;
  }
  return errors;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"resource-logic grammar analyzer"};
  app.require_subcommand(1);

  rlfg::RunOptions opts;
  bool json = false;
  app.add_flag("--json", json, "emit JSON instead of text");
  app.add_flag("--show-proof", opts.show_proof,
               "print each derivation as a proof tree");
  app.add_flag("--show-fterm", opts.show_fterm, "print assembled f-terms");
  app.add_flag("--raw-lambda", opts.raw_lambda,
               "curried lambda printing instead of constant sugar");
  app.add_option("--max-nodes", opts.max_nodes,
                 "proof search node budget (overrides the grammar)");
  app.add_option("--max-depth", opts.max_prefix_depth,
                 "modal prefix depth bound (overrides the grammar)");
  auto* reuse_flag = app.add_flag(
      "--path-eq-reuse", "allow unbounded path-equation reuse");

  std::string parse_grammar_path, sentence;
  auto* parse_cmd = app.add_subcommand("parse", "analyze one sentence");
  parse_cmd->fallthrough();
  parse_cmd->add_option("grammar", parse_grammar_path, "grammar file")
      ->required();
  parse_cmd->add_option("sentence", sentence, "sentence to analyze")
      ->required();

  std::string corpus_grammar_path, corpus_path;
  auto* corpus_cmd =
      app.add_subcommand("corpus", "run every case in a corpus file");
  corpus_cmd->fallthrough();
  corpus_cmd->add_option("grammar", corpus_grammar_path, "grammar file")
      ->required();
  corpus_cmd->add_option("corpus", corpus_path, "corpus file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  if (reuse_flag->count() > 0) opts.path_eq_reuse = true;

  try {
    if (parse_cmd->parsed()) {
      rlfg::Grammar g = rlfg::load_grammar_file(parse_grammar_path);
      if (report_findings(rlfg::validate(g)) > 0) return kUsage;
      rlfg::CaseReport rep = rlfg::analyze(g, sentence, opts);
      if (json)
        std::cout << rlfg::case_json(rep, !opts.raw_lambda).dump(2) << "\n";
      else
        std::cout << rlfg::render_case_text(rep, opts);
      return rep.verdict == rlfg::Verdict::Grammatical ? kOk : kMismatch;
    }
    rlfg::Grammar g = rlfg::load_grammar_file(corpus_grammar_path);
    if (report_findings(rlfg::validate(g)) > 0) return kUsage;
    std::vector<rlfg::CorpusCase> cases = rlfg::load_corpus_file(corpus_path);
    rlfg::CorpusReport rep = rlfg::run_corpus(g, cases, opts);
    if (json)
      std::cout << rlfg::corpus_json(rep, !opts.raw_lambda).dump(2) << "\n";
    else
      std::cout << rlfg::render_corpus_text(rep, opts);
    if (rep.budget_exceeded) return kBudget;
    return rep.all_pass ? kOk : kMismatch;
  } catch (const rlfg::BudgetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBudget;
  } catch (const rlfg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
