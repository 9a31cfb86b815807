#include "rlfg/grammar.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "rlfg/lexer.hpp"

namespace rlfg {

std::vector<const LexEntry*> Grammar::entries_for(
    const std::string& word) const {
  std::vector<const LexEntry*> out;
  for (const LexEntry& e : lexicon)
    if (e.word == word) out.push_back(&e);
  return out;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> fields(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string f;
  while (in >> f) out.push_back(f);
  return out;
}

void for_each_leaf(const FTermPtr& t,
                   const std::function<void(const FTerm::Leaf&)>& fn) {
  if (auto* leaf = std::get_if<FTerm::Leaf>(&t->node)) {
    fn(*leaf);
  } else if (auto* ms = std::get_if<FTerm::Multiset>(&t->node)) {
    for (const FTermPtr& item : ms->items) for_each_leaf(item, fn);
  } else if (auto* em = std::get_if<FTerm::Embed>(&t->node)) {
    for_each_leaf(em->body, fn);
  } else if (auto* opt = std::get_if<FTerm::Opt>(&t->node)) {
    for_each_leaf(opt->body, fn);
  }
}

// Slices the template of one rule constituent out of the token stream: it
// ends at the next `Cat:` boundary, a bracket, or the end of the line.
std::size_t template_end(const std::vector<Token>& toks, std::size_t pos) {
  int depth = 0;
  for (std::size_t i = pos;; ++i) {
    switch (toks[i].kind) {
      case Tok::End: return i;
      case Tok::LParen: ++depth; break;
      case Tok::RParen: --depth; break;
      case Tok::LBracket:
      case Tok::RBracket:
        if (depth == 0) return i;
        break;
      case Tok::Ident:
        if (depth == 0 && i > pos && toks[i + 1].kind == Tok::Colon) return i;
        break;
      default: break;
    }
  }
}

FTermPtr parse_template(const std::vector<Token>& toks, std::size_t& pos,
                        const Vocab& vocab) {
  std::size_t end = template_end(toks, pos);
  std::vector<Token> slice(toks.begin() + pos, toks.begin() + end);
  slice.push_back(Token{Tok::End, "", toks[end].offset});
  std::size_t p = 0;
  FTermPtr tmpl = parse_element_at(slice, p, vocab, /*allow_holes=*/true);
  if (slice[p].kind != Tok::End)
    throw SyntaxError("trailing material in rule template", slice[p].offset);
  pos = end;
  return tmpl;
}

void reject_impotent_labels(const FTermPtr& items) {
  for_each_leaf(items, [](const FTerm::Leaf& leaf) {
    if (leaf.label && is_unit(natural_type(leaf.formula)))
      throw ValidationError("label '" + format_lambda(leaf.label) +
                            "' on semantically impotent formula " +
                            format_formula(leaf.formula));
  });
}

std::vector<std::vector<int>> expand_variants(const std::vector<RhsItem>& rhs) {
  std::vector<int> optional_positions;
  for (std::size_t i = 0; i < rhs.size(); ++i)
    if (rhs[i].optional) optional_positions.push_back(static_cast<int>(i));
  std::vector<std::vector<int>> variants;
  const std::size_t k = optional_positions.size();
  for (std::size_t mask = 0; mask < (1u << k); ++mask) {
    std::vector<int> present;
    std::size_t opt_seen = 0;
    for (std::size_t i = 0; i < rhs.size(); ++i) {
      if (!rhs[i].optional) {
        present.push_back(static_cast<int>(i));
      } else {
        if (mask & (1u << opt_seen)) present.push_back(static_cast<int>(i));
        ++opt_seen;
      }
    }
    variants.push_back(std::move(present));
  }
  std::stable_sort(variants.begin(), variants.end(),
                   [](const std::vector<int>& a, const std::vector<int>& b) {
                     return a.size() < b.size();
                   });
  return variants;
}

}  // namespace

Grammar parse_grammar(const std::string& text) {
  Grammar g;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  bool saw_goal = false;

  auto fail = [&](const std::string& msg) -> GrammarError {
    return GrammarError(msg, lineno);
  };

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (std::size_t hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    try {
      if (kw == "lex") {
        std::string word, cat;
        ls >> word >> cat;
        if (word.empty() || cat.empty())
          throw fail("expected 'lex <word> <Category> : <items>'");
        if (!is_identifier(cat))
          throw fail("invalid category name '" + cat + "'");
        std::string rest;
        std::getline(ls, rest);
        rest = trim(rest);
        if (rest.empty() || rest[0] != ':')
          throw fail("expected ':' after the category of '" + word + "'");
        FTermPtr items = parse_lex_items(rest.substr(1), g.vocab);
        reject_impotent_labels(items);
        g.lexicon.push_back(LexEntry{word, cat, std::move(items)});
      } else if (kw == "rule") {
        std::string rest;
        std::getline(ls, rest);
        std::vector<Token> toks = lex(rest);
        std::size_t pos = 0;
        if (toks[pos].kind != Tok::Ident)
          throw fail("expected mother category after 'rule'");
        PSRule rule;
        rule.mother = toks[pos++].text;
        if (toks[pos].kind != Tok::Arrow) throw fail("expected '->' in rule");
        ++pos;
        while (toks[pos].kind != Tok::End) {
          RhsItem item;
          if (toks[pos].kind == Tok::LBracket) {
            item.optional = true;
            ++pos;
          }
          if (toks[pos].kind != Tok::Ident || toks[pos + 1].kind != Tok::Colon)
            throw fail("expected '<Category>:<template>' in rule");
          item.category = toks[pos].text;
          pos += 2;
          item.tmpl = parse_template(toks, pos, g.vocab);
          if (count_holes(item.tmpl) < 1)
            throw fail("template for '" + item.category +
                       "' has no '$' placeholder");
          if (item.optional) {
            if (toks[pos].kind != Tok::RBracket)
              throw fail("unclosed '[' around optional constituent");
            ++pos;
          }
          rule.rhs.push_back(std::move(item));
        }
        if (rule.rhs.empty()) throw fail("rule has an empty right-hand side");
        if (std::all_of(rule.rhs.begin(), rule.rhs.end(),
                        [](const RhsItem& r) { return r.optional; }))
          throw fail("rule admits an empty expansion (every constituent "
                     "is optional)");
        rule.variants = expand_variants(rule.rhs);
        g.rules.push_back(std::move(rule));
      } else if (kw == "set") {
        std::vector<std::string> f = fields(line);
        if (f.size() != 4 || f[2] != "=")
          throw fail("expected 'set <key> = <value>'");
        auto number = [&](const std::string& s) -> long {
          try {
            std::size_t used = 0;
            long v = std::stol(s, &used);
            if (used == s.size() && v >= 0) return v;
          } catch (const std::logic_error&) {
          }
          throw fail("setting '" + f[1] + "' needs a non-negative number, "
                     "got '" + s + "'");
        };
        if (f[1] == "path_eq_reuse") {
          if (f[3] == "on") g.settings.path_eq_reuse = true;
          else if (f[3] == "off") g.settings.path_eq_reuse = false;
          else throw fail("path_eq_reuse must be 'on' or 'off'");
        } else if (f[1] == "max_nodes") {
          g.settings.limits.max_nodes = number(f[3]);
        } else if (f[1] == "max_prefix_depth") {
          g.settings.limits.max_prefix_depth = static_cast<int>(number(f[3]));
        } else {
          throw fail("unknown setting '" + f[1] + "'");
        }
      } else {
        std::size_t colon = line.find(':');
        if (colon == std::string::npos)
          throw fail("unrecognized directive '" + kw + "'");
        std::string head = trim(line.substr(0, colon));
        std::string rest = trim(line.substr(colon + 1));
        std::vector<std::string> hf = fields(head);
        if (hf.size() == 2 && hf[0] == "atoms" &&
            (hf[1] == "contentful" || hf[1] == "impotent")) {
          AtomKind kind = hf[1] == "contentful" ? AtomKind::Contentful
                                                : AtomKind::Impotent;
          for (const std::string& name : fields(rest))
            g.vocab.declare_atom(name, kind);
        } else if (hf.size() == 1 && hf[0] == "attrs") {
          for (const std::string& name : fields(rest))
            g.vocab.declare_attribute(name);
        } else if (hf.size() == 1 && hf[0] == "start") {
          std::vector<std::string> sf = fields(rest);
          if (sf.size() != 1 || !is_identifier(sf[0]))
            throw fail("expected one category after 'start:'");
          g.start = sf[0];
        } else if (hf.size() == 1 && hf[0] == "goal") {
          g.goal = parse_formula(rest, g.vocab);
          saw_goal = true;
        } else {
          throw fail("unrecognized directive '" + head + "'");
        }
      }
    } catch (const GrammarError&) {
      throw;
    } catch (const Error& e) {
      throw GrammarError(e.what(), lineno);
    }
  }

  if (g.start.empty()) throw GrammarError("no start symbol");
  if (!saw_goal) {
    if (!g.vocab.has_atom("t"))
      throw GrammarError("no goal formula and no atom 't' to default to");
    g.goal = f_atom(g.vocab, "t");
  }
  return g;
}

Grammar load_grammar_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open grammar file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_grammar(buf.str());
}

// ---------------------------------------------------------------------------
// Validation

std::vector<Finding> validate(Grammar& g) {
  std::vector<Finding> out;
  auto warn = [&](const std::string& m) {
    out.push_back({Finding::Severity::Warning, m});
  };
  auto error = [&](const std::string& m) {
    out.push_back({Finding::Severity::Error, m});
  };

  // Label typing, and the constant environment it induces.
  g.type_env.clear();
  for (const LexEntry& e : g.lexicon) {
    for_each_leaf(e.items, [&](const FTerm::Leaf& leaf) {
      TypePtr want = natural_type(leaf.formula);
      if (!leaf.label) {
        if (!is_unit(want))
          error("lex '" + e.word + "': formula " +
                format_formula(leaf.formula) +
                " is contentful but carries no label");
        return;
      }
      try {
        check_label(leaf.label, want, g.type_env);
      } catch (const TypeError& te) {
        error("lex '" + e.word + "': " + std::string(te.what()));
      }
    });
  }

  // Category bookkeeping.
  std::set<std::string> lexical, mothers, on_rhs;
  for (const LexEntry& e : g.lexicon) lexical.insert(e.category);
  for (const PSRule& r : g.rules) {
    mothers.insert(r.mother);
    for (const RhsItem& item : r.rhs) on_rhs.insert(item.category);
  }
  auto known = [&](const std::string& c) {
    return lexical.count(c) || mothers.count(c);
  };
  if (!known(g.start))
    error("start symbol '" + g.start + "' has no rules and no lexical entries");
  for (const std::string& c : on_rhs)
    if (!known(c)) warn("category '" + c + "' is used but never defined");

  // Reachability from the start symbol.
  std::set<std::string> reachable{g.start};
  bool grew = true;
  while (grew) {
    grew = false;
    for (const PSRule& r : g.rules) {
      if (!reachable.count(r.mother)) continue;
      for (const RhsItem& item : r.rhs)
        if (reachable.insert(item.category).second) grew = true;
    }
  }
  for (const PSRule& r : g.rules)
    if (!reachable.count(r.mother))
      warn("rule for '" + r.mother + "' is unreachable from '" + g.start + "'");
  for (const LexEntry& e : g.lexicon)
    if (!reachable.count(e.category))
      warn("word '" + e.word + "' (" + e.category + ") is unreachable from '" +
           g.start + "'");

  // Unary cycles would let the chart grow trees without bound.
  std::map<std::string, std::set<std::string>> unary;
  for (const PSRule& r : g.rules)
    for (const std::vector<int>& variant : r.variants)
      if (variant.size() == 1)
        unary[r.mother].insert(r.rhs[variant[0]].category);
  for (const auto& [from, tos] : unary) {
    std::set<std::string> seen;
    std::vector<std::string> work(tos.begin(), tos.end());
    while (!work.empty()) {
      std::string c = work.back();
      work.pop_back();
      if (!seen.insert(c).second) continue;
      if (c == from) {
        error("unary rule cycle through category '" + from + "'");
        break;
      }
      auto it = unary.find(c);
      if (it != unary.end())
        work.insert(work.end(), it->second.begin(), it->second.end());
    }
  }

  // Duplicate entries are legal (they create genuine ambiguity) but worth
  // flagging when they are exact copies.
  std::set<std::string> entry_keys;
  for (const LexEntry& e : g.lexicon) {
    std::string key = e.word + "\x1f" + e.category + "\x1f" +
                      format_fterm(e.items);
    if (!entry_keys.insert(key).second)
      warn("duplicate lexical entry for '" + e.word + "' (" + e.category +
           ")");
  }

  return out;
}

// ---------------------------------------------------------------------------
// Formatting

std::string format_grammar(const Grammar& g) {
  std::ostringstream out;
  std::string contentful, impotent;
  for (const AtomDecl& a : g.vocab.atoms()) {
    std::string& bucket =
        a.kind == AtomKind::Contentful ? contentful : impotent;
    if (!bucket.empty()) bucket += ' ';
    bucket += a.name;
  }
  if (!contentful.empty()) out << "atoms contentful: " << contentful << "\n";
  if (!impotent.empty()) out << "atoms impotent: " << impotent << "\n";
  if (!g.vocab.attributes().empty()) {
    out << "attrs:";
    for (const std::string& a : g.vocab.attributes()) out << ' ' << a;
    out << "\n";
  }
  out << "start: " << g.start << "\n";
  out << "goal: " << format_formula(g.goal) << "\n";
  if (g.settings.path_eq_reuse) out << "set path_eq_reuse = on\n";
  SearchLimits defaults;
  if (g.settings.limits.max_nodes != defaults.max_nodes)
    out << "set max_nodes = " << g.settings.limits.max_nodes << "\n";
  if (g.settings.limits.max_prefix_depth != defaults.max_prefix_depth)
    out << "set max_prefix_depth = " << g.settings.limits.max_prefix_depth
        << "\n";
  for (const LexEntry& e : g.lexicon) {
    out << "lex " << e.word << ' ' << e.category << " : ";
    if (auto* ms = std::get_if<FTerm::Multiset>(&e.items->node)) {
      for (std::size_t i = 0; i < ms->items.size(); ++i) {
        if (i) out << " ; ";
        out << format_fterm(ms->items[i]);
      }
    } else {
      out << format_fterm(e.items);
    }
    out << "\n";
  }
  for (const PSRule& r : g.rules) {
    out << "rule " << r.mother << " ->";
    for (const RhsItem& item : r.rhs) {
      out << ' ';
      if (item.optional) out << "[ ";
      out << item.category << ':' << format_fterm(item.tmpl);
      if (item.optional) out << " ]";
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace rlfg
