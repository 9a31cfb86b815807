#include "rlfg/pipeline.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <set>
#include <sstream>

namespace rlfg {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Grammatical: return "grammatical";
    case Verdict::NoDerivation: return "no-derivation";
    case Verdict::NoCStructure: return "no-cstructure";
  }
  return "?";
}

namespace {

std::string join(const std::vector<std::string>& parts,
                 const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

SearchLimits effective_limits(const Grammar& g, const RunOptions& opts) {
  SearchLimits lim = g.settings.limits;
  if (opts.max_nodes) lim.max_nodes = *opts.max_nodes;
  if (opts.max_prefix_depth) lim.max_prefix_depth = *opts.max_prefix_depth;
  return lim;
}

}  // namespace

CaseReport analyze(const Grammar& g, const std::string& sentence,
                   const RunOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  CaseReport rep;
  rep.sentence = sentence;
  const SearchLimits lim = effective_limits(g, opts);
  const bool reuse = opts.path_eq_reuse.value_or(g.settings.path_eq_reuse);
  const int eq_uses = reuse ? -1 : 1;

  std::vector<CNodePtr> trees;
  bool parse_failed = false;
  try {
    trees = parse_sentence(g, tokenize(sentence));
  } catch (const UnknownWordError& e) {
    rep.diagnostics.push_back(e.what());
    parse_failed = true;
  }
  if (!parse_failed && trees.empty()) {
    rep.diagnostics.push_back("no c-structure spans the sentence");
    parse_failed = true;
  }
  if (parse_failed) {
    rep.verdict = Verdict::NoCStructure;
    rep.elapsed_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    return rep;
  }

  std::vector<NormalState> states;
  std::set<std::string> seen_states;
  for (const CNodePtr& tree : trees) {
    rep.ctrees.push_back(format_ctree(tree));
    FTermPtr ft = assemble_fterm(g, tree);
    rep.fterms.push_back(format_fterm(ft));
    for (NormalState& s : normalize(ft, eq_uses))
      if (seen_states.insert(state_key(s)).second) states.push_back(s);
  }

  bool depth_hit = false;
  for (const NormalState& s : states) {
    DeriveResult dr = derive(s, g.goal, lim);
    depth_hit = depth_hit || dr.depth_bound_hit;
    for (Derivation& d : dr.derivations) rep.derivations.push_back(d);
  }
  rep.readings = reading_strings(rep.derivations, !opts.raw_lambda);

  if (!rep.derivations.empty()) {
    rep.verdict = Verdict::Grammatical;
  } else {
    rep.verdict = Verdict::NoDerivation;
    std::set<std::string> seen_notes;
    for (const NormalState& s : states) {
      Diagnosis diag = diagnose(s, g.goal, lim);
      for (const std::string& note : diag.notes)
        if (seen_notes.insert(note).second) rep.diagnostics.push_back(note);
      depth_hit = depth_hit || diag.depth_bound_hit;
    }
    if (depth_hit)
      rep.diagnostics.push_back(
          "restructuring depth bound pruned part of the search");
  }

  rep.elapsed_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  return rep;
}

// ---------------------------------------------------------------------------
// Corpora

namespace {

std::vector<std::string> split_fields(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

// Splits on commas outside parentheses, so `likes(Sandy,Kim)` stays whole.
std::vector<std::string> split_top_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  std::string last = trim(cur);
  if (!last.empty() || !out.empty()) out.push_back(last);
  return out;
}

[[noreturn]] void corpus_error(int line, const std::string& msg) {
  throw Error("corpus line " + std::to_string(line) + ": " + msg);
}

}  // namespace

std::vector<CorpusCase> parse_corpus(const std::string& text) {
  std::vector<CorpusCase> cases;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    std::vector<std::string> fields = split_fields(line, '|');
    std::istringstream head(fields[0]);
    std::string kind_word, name, extra;
    head >> kind_word >> name;
    if (name.empty()) corpus_error(lineno, "missing case name");
    if (head >> extra)
      corpus_error(lineno, "unexpected text after case name: '" + extra + "'");

    CorpusCase c;
    c.name = name;
    c.line = lineno;
    if (kind_word == "ok") {
      c.kind = CorpusCase::Kind::Ok;
      if (fields.size() != 3)
        corpus_error(lineno, "'ok' cases need | sentence | readings");
      c.expected_readings = split_top_commas(fields[2]);
      for (const std::string& r : c.expected_readings)
        if (r.empty()) corpus_error(lineno, "empty expected reading");
      if (c.expected_readings.empty())
        corpus_error(lineno, "'ok' cases need at least one expected reading");
    } else if (kind_word == "bad" || kind_word == "noparse") {
      c.kind = kind_word == "bad" ? CorpusCase::Kind::Bad
                                  : CorpusCase::Kind::NoParse;
      if (fields.size() != 2)
        corpus_error(lineno,
                     "'" + kind_word + "' cases need exactly | sentence");
    } else {
      corpus_error(lineno, "unknown case kind '" + kind_word + "'");
    }
    c.sentence = fields[1];
    if (c.sentence.empty()) corpus_error(lineno, "empty sentence");
    cases.push_back(std::move(c));
  }
  return cases;
}

std::vector<CorpusCase> load_corpus_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_corpus(buf.str());
}

bool readings_match(const std::vector<Derivation>& ds,
                    const std::vector<std::string>& expected,
                    std::string* detail) {
  std::set<std::string> got_keys;
  std::vector<std::string> got_texts;
  for (const TermPtr& t : readings(ds)) {
    got_keys.insert(canonical_key(t));
    got_texts.push_back(format_lambda(t, true));
  }
  std::set<std::string> want_keys;
  for (const std::string& s : expected)
    want_keys.insert(canonical_key(beta_normalize(parse_lambda(s))));
  if (got_keys == want_keys) return true;
  if (detail)
    *detail = "readings {" + join(got_texts, ", ") + "} != expected {" +
              join(expected, ", ") + "}";
  return false;
}

namespace {

const char* kind_name(CorpusCase::Kind k) {
  switch (k) {
    case CorpusCase::Kind::Ok: return "ok";
    case CorpusCase::Kind::Bad: return "bad";
    case CorpusCase::Kind::NoParse: return "noparse";
  }
  return "?";
}

CaseOutcome run_one(const Grammar& g, const CorpusCase& c,
                    const RunOptions& opts) {
  CaseOutcome o;
  o.scase = c;
  try {
    o.report = analyze(g, c.sentence, opts);
    switch (c.kind) {
      case CorpusCase::Kind::Ok:
        if (o.report.verdict != Verdict::Grammatical) {
          o.failure = std::string("expected grammatical, got ") +
                      verdict_name(o.report.verdict);
        } else {
          std::string detail;
          if (readings_match(o.report.derivations, c.expected_readings,
                             &detail))
            o.pass = true;
          else
            o.failure = detail;
        }
        break;
      case CorpusCase::Kind::Bad:
        if (o.report.verdict == Verdict::NoDerivation)
          o.pass = true;
        else
          o.failure = std::string("expected no-derivation, got ") +
                      verdict_name(o.report.verdict);
        break;
      case CorpusCase::Kind::NoParse:
        if (o.report.verdict == Verdict::NoCStructure)
          o.pass = true;
        else
          o.failure = std::string("expected no-cstructure, got ") +
                      verdict_name(o.report.verdict);
        break;
    }
  } catch (const BudgetError& e) {
    o.report.sentence = c.sentence;
    o.report.verdict = Verdict::NoDerivation;
    o.report.diagnostics = {e.what()};
    o.budget_exceeded = true;
    o.failure = e.what();
  } catch (const Error& e) {
    o.report.sentence = c.sentence;
    o.report.diagnostics = {e.what()};
    o.failure = e.what();
  }
  return o;
}

}  // namespace

CorpusReport run_corpus(const Grammar& g, const std::vector<CorpusCase>& cases,
                        const RunOptions& opts) {
  std::vector<std::future<CaseOutcome>> futures;
  futures.reserve(cases.size());
  for (const CorpusCase& c : cases)
    futures.push_back(std::async(std::launch::async, run_one, std::cref(g), c,
                                 std::cref(opts)));
  CorpusReport rep;
  for (auto& f : futures) {
    CaseOutcome o = f.get();
    rep.all_pass = rep.all_pass && o.pass;
    rep.budget_exceeded = rep.budget_exceeded || o.budget_exceeded;
    rep.outcomes.push_back(std::move(o));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Rendering

std::string show_resource(const Resource& r, bool sugar) {
  std::string f = format_formula(r.formula);
  if (!r.label) return f;
  return format_lambda(r.label, sugar) + " : " + f;
}

std::string format_derivation(const Derivation& d, bool sugar) {
  std::map<int, const Step*> producer;
  for (const Step& s : d.steps) producer[s.result.id] = &s;
  std::map<int, const Resource*> leaves;
  for (const Resource& r : d.initial.resources) leaves[r.id] = &r;
  std::map<int, const EquationUse*> eqs;
  for (const EquationUse& e : d.initial.equations) eqs[e.id] = &e;

  std::string out;
  std::function<void(int, int)> rec = [&](int id, int depth) {
    std::string ind(2 * static_cast<std::size_t>(depth), ' ');
    auto it = producer.find(id);
    if (it == producer.end()) {
      out += ind + "assume " + show_resource(*leaves.at(id), sugar) + "\n";
      return;
    }
    const Step& s = *it->second;
    std::string tag = rule_name(s.rule);
    if (s.rule == Step::Rule::Lift) tag += " " + s.attribute;
    if (s.rule == Step::Rule::PathEq)
      tag += " " + format_equation(eqs.at(s.equation)->eq);
    out += ind + tag + " => " + show_resource(s.result, sugar) + "\n";
    for (int in : s.inputs) rec(in, depth + 1);
  };
  rec(d.conclusion.id, 0);
  return out;
}

namespace {

std::string indent_lines(const std::string& block, const std::string& pad) {
  std::string out;
  std::istringstream in(block);
  std::string line;
  while (std::getline(in, line)) out += pad + line + "\n";
  return out;
}

}  // namespace

std::string render_case_text(const CaseReport& r, const RunOptions& opts) {
  std::string out;
  out += "sentence: " + r.sentence + "\n";
  out += std::string("verdict: ") + verdict_name(r.verdict) + "\n";
  out += "c-structures: " + std::to_string(r.ctrees.size()) + "\n";
  for (const std::string& t : r.ctrees) out += "  " + t + "\n";
  if (opts.show_fterm && !r.fterms.empty()) {
    out += "f-terms:\n";
    for (const std::string& f : r.fterms) out += "  " + f + "\n";
  }
  if (!r.readings.empty()) {
    out += "readings:\n";
    for (const std::string& s : r.readings) out += "  " + s + "\n";
  }
  out += "derivations: " + std::to_string(r.derivations.size()) + "\n";
  if (opts.show_proof) {
    for (std::size_t i = 0; i < r.derivations.size(); ++i) {
      out += "proof " + std::to_string(i + 1) + ":\n";
      out += indent_lines(format_derivation(r.derivations[i], !opts.raw_lambda),
                          "  ");
    }
  }
  if (!r.diagnostics.empty()) {
    out += "diagnostics:\n";
    for (const std::string& s : r.diagnostics) out += "  " + s + "\n";
  }
  return out;
}

std::string render_corpus_text(const CorpusReport& rep,
                               const RunOptions& opts) {
  std::string out;
  int passed = 0;
  std::vector<std::string> failed;
  for (const CaseOutcome& o : rep.outcomes) {
    out += std::string(o.pass ? "PASS" : "FAIL") + " " + o.scase.name + ": " +
           verdict_name(o.report.verdict);
    if (!o.report.readings.empty())
      out += "; readings: " + join(o.report.readings, ", ");
    if (!o.pass && !o.failure.empty()) out += "; " + o.failure;
    out += "\n";
    if (opts.show_proof || opts.show_fterm)
      out += indent_lines(render_case_text(o.report, opts), "  ");
    if (o.pass)
      ++passed;
    else
      failed.push_back(o.scase.name);
  }
  out += "total " + std::to_string(rep.outcomes.size()) + ", passed " +
         std::to_string(passed) + ", failed " +
         std::to_string(failed.size()) + "\n";
  if (!failed.empty()) out += "failed: " + join(failed, " ") + "\n";
  return out;
}

nlohmann::ordered_json case_json(const CaseReport& r, bool sugar) {
  nlohmann::ordered_json j;
  j["sentence"] = r.sentence;
  j["verdict"] = verdict_name(r.verdict);
  j["cstructures"] = static_cast<int>(r.ctrees.size());
  j["readings"] = r.readings;
  nlohmann::ordered_json ds = nlohmann::ordered_json::array();
  for (const Derivation& d : r.derivations) {
    nlohmann::ordered_json steps = nlohmann::ordered_json::array();
    for (const Step& s : d.steps) {
      nlohmann::ordered_json output;
      output["formula"] = format_formula(s.result.formula);
      if (s.result.label)
        output["label"] = format_lambda(s.result.label, sugar);
      else
        output["label"] = nullptr;
      nlohmann::ordered_json step;
      step["rule"] = rule_name(s.rule);
      step["inputs"] = s.inputs;
      step["output"] = output;
      steps.push_back(std::move(step));
    }
    nlohmann::ordered_json dj;
    dj["steps"] = std::move(steps);
    dj["conclusion"] = show_resource(d.conclusion, sugar);
    ds.push_back(std::move(dj));
  }
  j["derivations"] = std::move(ds);
  j["diagnostics"] = r.diagnostics;
  j["elapsed_ms"] = 0;
  return j;
}

nlohmann::ordered_json corpus_json(const CorpusReport& rep, bool sugar) {
  nlohmann::ordered_json cases = nlohmann::ordered_json::array();
  int passed = 0;
  nlohmann::ordered_json failed = nlohmann::ordered_json::array();
  for (const CaseOutcome& o : rep.outcomes) {
    nlohmann::ordered_json row;
    row["name"] = o.scase.name;
    row["expectation"] = kind_name(o.scase.kind);
    row["pass"] = o.pass;
    if (!o.pass) row["failure"] = o.failure;
    nlohmann::ordered_json body = case_json(o.report, sugar);
    for (auto& el : body.items()) row[el.key()] = el.value();
    cases.push_back(std::move(row));
    if (o.pass)
      ++passed;
    else
      failed.push_back(o.scase.name);
  }
  nlohmann::ordered_json j;
  j["cases"] = std::move(cases);
  nlohmann::ordered_json summary;
  summary["total"] = rep.outcomes.size();
  summary["passed"] = passed;
  summary["failed"] = std::move(failed);
  j["summary"] = std::move(summary);
  return j;
}

}  // namespace rlfg
