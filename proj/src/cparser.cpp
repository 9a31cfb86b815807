#include "rlfg/cparser.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace rlfg {

std::vector<std::string> tokenize(const std::string& sentence) {
  std::istringstream in(sentence);
  std::vector<std::string> tokens;
  std::string t;
  while (in >> t) tokens.push_back(t);
  if (!tokens.empty()) {
    std::string& last = tokens.back();
    while (!last.empty() && (last.back() == '.' || last.back() == '?' ||
                             last.back() == '!'))
      last.pop_back();
    if (last.empty()) tokens.pop_back();
  }
  return tokens;
}

namespace {

using Cell = std::vector<CNodePtr>;
using ChartKey = std::pair<std::string, std::pair<int, int>>;

struct Chart {
  std::map<ChartKey, Cell> cells;

  const Cell& at(const std::string& cat, int i, int j) const {
    static const Cell empty;
    auto it = cells.find({cat, {i, j}});
    return it == cells.end() ? empty : it->second;
  }

  void add(const std::string& cat, int i, int j, CNodePtr node) {
    cells[{cat, {i, j}}].push_back(std::move(node));
  }
};

// Enumerates every way to split [start, stop) over the remaining variant
// constituents, collecting complete child sequences into `out`.
void match_sequence(const Chart& chart, const Grammar& g, const PSRule& rule,
                    const std::vector<int>& variant, std::size_t pos,
                    int start, int stop, std::vector<CNodePtr>& children,
                    std::vector<std::vector<CNodePtr>>& out) {
  const std::string& cat = rule.rhs[variant[pos]].category;
  if (pos + 1 == variant.size()) {
    for (const CNodePtr& tree : chart.at(cat, start, stop)) {
      children.push_back(tree);
      out.push_back(children);
      children.pop_back();
    }
    return;
  }
  for (int mid = start + 1; mid <= stop - static_cast<int>(variant.size() -
                                                           pos - 1);
       ++mid) {
    const Cell& cell = chart.at(cat, start, mid);
    for (const CNodePtr& tree : cell) {
      children.push_back(tree);
      match_sequence(chart, g, rule, variant, pos + 1, mid, stop, children,
                     out);
      children.pop_back();
    }
  }
}

}  // namespace

std::vector<CNodePtr> parse_sentence(const Grammar& g,
                                     const std::vector<std::string>& tokens) {
  const int n = static_cast<int>(tokens.size());
  for (const std::string& word : tokens)
    if (g.entries_for(word).empty()) throw UnknownWordError(word);
  if (n == 0) return {};

  Chart chart;
  for (int i = 0; i < n; ++i) {
    for (const LexEntry* entry : g.entries_for(tokens[i])) {
      auto node = std::make_shared<CNode>();
      node->category = entry->category;
      node->entry = entry;
      chart.add(entry->category, i, i + 1, std::move(node));
    }
  }

  // How many fixpoint sweeps one span can need: every sweep that adds a tree
  // lengthens some unary chain, and acyclic unary chains are bounded by the
  // number of categories.
  std::set<std::string> categories;
  for (const PSRule& r : g.rules) categories.insert(r.mother);
  for (const LexEntry& e : g.lexicon) categories.insert(e.category);
  const int max_sweeps = static_cast<int>(categories.size()) + 2;

  for (int len = 1; len <= n; ++len) {
    for (int i = 0; i + len <= n; ++i) {
      const int j = i + len;
      std::set<std::tuple<int, int, std::vector<const CNode*>>> built;
      bool grew = true;
      int sweeps = 0;
      while (grew) {
        grew = false;
        if (++sweeps > max_sweeps)
          throw Error("parse chart failed to converge (unary rule cycle?)");
        for (std::size_t ri = 0; ri < g.rules.size(); ++ri) {
          const PSRule& rule = g.rules[ri];
          for (std::size_t vi = 0; vi < rule.variants.size(); ++vi) {
            const std::vector<int>& variant = rule.variants[vi];
            if (static_cast<int>(variant.size()) > len) continue;
            std::vector<std::vector<CNodePtr>> combos;
            std::vector<CNodePtr> scratch;
            match_sequence(chart, g, rule, variant, 0, i, j, scratch, combos);
            for (std::vector<CNodePtr>& children : combos) {
              std::vector<const CNode*> sig;
              sig.reserve(children.size());
              for (const CNodePtr& c : children) sig.push_back(c.get());
              if (!built
                       .insert({static_cast<int>(ri), static_cast<int>(vi),
                                std::move(sig)})
                       .second)
                continue;
              auto node = std::make_shared<CNode>();
              node->category = rule.mother;
              node->rule_index = static_cast<int>(ri);
              node->variant_index = static_cast<int>(vi);
              node->children = std::move(children);
              chart.add(rule.mother, i, j, std::move(node));
              grew = true;
            }
          }
        }
      }
    }
  }

  return chart.at(g.start, 0, n);
}

FTermPtr assemble_fterm(const Grammar& g, const CNodePtr& tree) {
  if (tree->entry) return tree->entry->items;
  const PSRule& rule = g.rules[tree->rule_index];
  const std::vector<int>& variant = rule.variants[tree->variant_index];
  if (variant.size() != tree->children.size())
    throw Error("internal: tree arity does not match its rule variant");
  std::vector<FTermPtr> parts;
  parts.reserve(variant.size());
  for (std::size_t k = 0; k < variant.size(); ++k)
    parts.push_back(substitute_holes(rule.rhs[variant[k]].tmpl,
                                     assemble_fterm(g, tree->children[k])));
  return ft_multiset(std::move(parts));
}

std::string format_ctree(const CNodePtr& tree) {
  if (tree->entry) return "(" + tree->category + " " + tree->entry->word + ")";
  std::string out = "(" + tree->category;
  for (const CNodePtr& c : tree->children) out += " " + format_ctree(c);
  return out + ")";
}

std::string tree_yield(const CNodePtr& tree) {
  if (tree->entry) return tree->entry->word;
  std::string out;
  for (std::size_t i = 0; i < tree->children.size(); ++i) {
    if (i) out += ' ';
    out += tree_yield(tree->children[i]);
  }
  return out;
}

}  // namespace rlfg
