#include "rlfg/prover.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace rlfg {

const char* rule_name(Step::Rule r) {
  switch (r) {
    case Step::Rule::Apply: return "apply";
    case Step::Rule::Lift: return "lift";
    case Step::Rule::PathEq: return "patheq";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Single-step operations

std::optional<Resource> try_lift(const Resource& r) {
  auto [prefix, rest] = split_modal_prefix(r.formula);
  if (prefix.empty()) return std::nullopt;
  auto* imp = as_implic(rest);
  if (!imp) return std::nullopt;
  const std::string& attr = prefix.back();
  std::vector<std::string> outer(prefix.begin(), prefix.end() - 1);
  FormulaPtr lifted = f_implic(f_modal(attr, imp->antecedent),
                               f_modal(attr, imp->consequent));
  Resource out{wrap_modal_prefix(outer, std::move(lifted)), r.label, r.id};
  if (!type_equal(natural_type(out.formula), natural_type(r.formula)))
    throw Error("internal: lift changed a natural type");
  return out;
}

namespace {

const Resource* find_resource(const NormalState& s, int id) {
  for (const Resource& r : s.resources)
    if (r.id == id) return &r;
  return nullptr;
}

int next_resource_id(const NormalState& s) {
  int next = 0;
  for (const Resource& r : s.resources) next = std::max(next, r.id + 1);
  return next;
}

}  // namespace

std::optional<NormalState> apply_implication(const NormalState& s, int fun_id,
                                             int arg_id) {
  if (fun_id == arg_id) return std::nullopt;
  const Resource* fun = find_resource(s, fun_id);
  const Resource* arg = find_resource(s, arg_id);
  if (!fun || !arg) return std::nullopt;
  auto* imp = as_implic(fun->formula);
  if (!imp || !formula_equal(arg->formula, imp->antecedent))
    return std::nullopt;
  Resource produced{imp->consequent,
                    label_apply(fun->label, fun->formula, arg->label),
                    next_resource_id(s)};
  NormalState out;
  out.equations = s.equations;
  for (const Resource& r : s.resources)
    if (r.id != fun_id && r.id != arg_id) out.resources.push_back(r);
  out.resources.push_back(std::move(produced));
  return out;
}

std::optional<NormalState> apply_path_eq(const NormalState& s, int eq_id,
                                         int resource_id,
                                         int max_prefix_depth) {
  const EquationUse* eq = nullptr;
  for (const EquationUse& e : s.equations)
    if (e.id == eq_id) eq = &e;
  const Resource* src = find_resource(s, resource_id);
  if (!eq || !src || eq->remaining == 0) return std::nullopt;
  auto [prefix, rest] = split_modal_prefix(src->formula);
  if (eq->eq.lhs.size() > prefix.size() ||
      !std::equal(eq->eq.lhs.begin(), eq->eq.lhs.end(), prefix.begin()))
    return std::nullopt;
  std::vector<std::string> rewritten = eq->eq.rhs;
  rewritten.insert(rewritten.end(), prefix.begin() + eq->eq.lhs.size(),
                   prefix.end());
  if (static_cast<int>(rewritten.size()) > max_prefix_depth)
    return std::nullopt;
  NormalState out;
  for (const EquationUse& e : s.equations) {
    EquationUse copy = e;
    if (e.id == eq_id && copy.remaining > 0) --copy.remaining;
    out.equations.push_back(std::move(copy));
  }
  for (const Resource& r : s.resources)
    if (r.id != resource_id) out.resources.push_back(r);
  out.resources.push_back(Resource{
      wrap_modal_prefix(rewritten, rest), src->label, next_resource_id(s)});
  return out;
}

// ---------------------------------------------------------------------------
// The search engine
//
// The search runs over contents, not tokens: a state is the sorted multiset
// of interned resource contents plus the equations' remaining-use vector.
// Steps are likewise content-level, which makes the spec's derivation
// identity (step multisets compared by resource content) the engine's native
// notion, and makes independently ordered explorations of the same proof
// converge.  Positional resource ids are assigned when a completion is
// rendered back into a Derivation.

namespace {

struct CStep {
  Step::Rule rule;
  int in1 = -1, in2 = -1;  // content ids (Apply: fun, arg; otherwise in1)
  int out = -1;            // content id
  int eq = -1;             // PathEq: equation id
  std::string attr;        // Lift: distributed attribute
  std::string key;         // canonical signature, also the replay order
};

void insert_sorted(std::vector<int>& v, int x) {
  v.insert(std::lower_bound(v.begin(), v.end(), x), x);
}

struct Engine {
  FormulaPtr goal;
  SearchLimits lim;
  bool unbounded = false;

  std::vector<Resource> contents;  // content id -> representative
  std::map<std::string, int> content_ix;
  std::vector<CStep> csteps;
  std::map<std::string, int> step_ix;
  std::vector<PathEquation> eqs;

  long visited = 0;
  bool depth_hit = false;

  // (sorted content ids, per-equation remaining uses)
  using Key = std::pair<std::vector<int>, std::vector<int>>;
  using CompletionSet = std::vector<std::vector<int>>;
  std::map<Key, std::optional<CompletionSet>> memo;
  std::set<Key> deadends;

  int intern_content(const Resource& r) {
    std::string k = resource_key(r);
    auto it = content_ix.find(k);
    if (it != content_ix.end()) return it->second;
    int id = static_cast<int>(contents.size());
    content_ix.emplace(std::move(k), id);
    Resource stored = r;
    stored.id = id;
    contents.push_back(std::move(stored));
    return id;
  }

  int intern_step(Step::Rule rule, int in1, int in2, int eq,
                  std::string attr, const Resource& result) {
    std::string key;
    switch (rule) {
      case Step::Rule::Apply:
        key = "A:" + std::to_string(in1) + ":" + std::to_string(in2);
        break;
      case Step::Rule::Lift:
        key = "L:" + std::to_string(in1);
        break;
      case Step::Rule::PathEq:
        key = "P:" + std::to_string(eq) + ":" + std::to_string(in1);
        break;
    }
    auto it = step_ix.find(key);
    if (it != step_ix.end()) return it->second;
    CStep cs;
    cs.rule = rule;
    cs.in1 = in1;
    cs.in2 = in2;
    cs.eq = eq;
    cs.attr = std::move(attr);
    cs.out = intern_content(result);
    cs.key = key;
    int sid = static_cast<int>(csteps.size());
    csteps.push_back(std::move(cs));
    step_ix.emplace(csteps[sid].key, sid);
    return sid;
  }

  void bump(long n) {
    visited += n;
    if (visited > lim.max_nodes)
      throw BudgetError("proof search exceeded its node budget of " +
                            std::to_string(lim.max_nodes),
                        visited);
  }

  bool is_goal(const Key& s) const {
    return s.first.size() == 1 &&
           formula_equal(contents[s.first[0]].formula, goal);
  }

  Key next_key(const Key& s, std::initializer_list<int> consumed, int added,
               int eq) const {
    Key out = s;
    for (int c : consumed)
      out.first.erase(std::find(out.first.begin(), out.first.end(), c));
    insert_sorted(out.first, added);
    if (eq >= 0 && out.second[eq] > 0) --out.second[eq];
    return out;
  }

  std::vector<std::pair<int, Key>> gen_moves(const Key& s) {
    std::vector<std::pair<int, Key>> out;
    const std::vector<int>& ids = s.first;
    auto multiplicity = [&](int c) {
      return std::count(ids.begin(), ids.end(), c);
    };
    // Implication application.
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i && ids[i] == ids[i - 1]) continue;
      int fi = ids[i];
      auto* imp = as_implic(contents[fi].formula);
      if (!imp) continue;
      for (std::size_t j = 0; j < ids.size(); ++j) {
        if (j && ids[j] == ids[j - 1]) continue;
        int ai = ids[j];
        if (ai == fi && multiplicity(fi) < 2) continue;
        if (!formula_equal(contents[ai].formula, imp->antecedent)) continue;
        Resource res{imp->consequent,
                     label_apply(contents[fi].label, contents[fi].formula,
                                 contents[ai].label),
                     -1};
        int sid = intern_step(Step::Rule::Apply, fi, ai, -1, "", res);
        out.emplace_back(sid, next_key(s, {fi, ai}, csteps[sid].out, -1));
      }
    }
    // Modal-over-implication lift.
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i && ids[i] == ids[i - 1]) continue;
      int ri = ids[i];
      if (std::optional<Resource> lifted = try_lift(contents[ri])) {
        std::string attr = split_modal_prefix(contents[ri].formula)
                               .first.back();
        int sid = intern_step(Step::Rule::Lift, ri, -1, -1, std::move(attr),
                              *lifted);
        out.emplace_back(sid, next_key(s, {ri}, csteps[sid].out, -1));
      }
    }
    // Path-equation restructuring.
    for (int e = 0; e < static_cast<int>(eqs.size()); ++e) {
      if (s.second[e] == 0) continue;
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i && ids[i] == ids[i - 1]) continue;
        int ri = ids[i];
        auto [prefix, rest] = split_modal_prefix(contents[ri].formula);
        const PathEquation& peq = eqs[e];
        if (peq.lhs.size() > prefix.size() ||
            !std::equal(peq.lhs.begin(), peq.lhs.end(), prefix.begin()))
          continue;
        std::vector<std::string> rewritten = peq.rhs;
        rewritten.insert(rewritten.end(), prefix.begin() + peq.lhs.size(),
                         prefix.end());
        if (static_cast<int>(rewritten.size()) > lim.max_prefix_depth) {
          depth_hit = true;
          continue;
        }
        Resource res{wrap_modal_prefix(rewritten, rest), contents[ri].label,
                     -1};
        int sid = intern_step(Step::Rule::PathEq, ri, -1, e, "", res);
        out.emplace_back(sid, next_key(s, {ri}, csteps[sid].out, e));
      }
    }
    bump(static_cast<long>(out.size()) + 1);
    if (lim.reverse_moves) std::reverse(out.begin(), out.end());
    return out;
  }

  // Bounded mode: (sum of remaining uses, resource count, modal-over-implic
  // measure) strictly decreases along every move, so no state ever recurs on
  // one path and memoization over full states is sound.
  const CompletionSet& completions(const Key& s) {
    auto found = memo.find(s);
    if (found != memo.end()) {
      if (!found->second)
        throw Error("internal: unexpected cycle in bounded proof search");
      return *found->second;
    }
    memo[s];  // mark in progress
    std::set<std::vector<int>> acc;
    if (is_goal(s)) acc.insert(std::vector<int>{});
    std::vector<std::pair<int, Key>> moves = gen_moves(s);
    if (moves.empty() && !is_goal(s)) deadends.insert(s);
    for (const auto& [sid, next] : moves) {
      for (const std::vector<int>& sub : completions(next)) {
        std::vector<int> comp = sub;
        insert_sorted(comp, sid);
        acc.insert(std::move(comp));
      }
    }
    std::optional<CompletionSet>& slot = memo[s];
    slot.emplace(acc.begin(), acc.end());
    return *slot;
  }

  // Unbounded-reuse mode: states can recur, so completions are explored per
  // path with revisits pruned (a derivation that passes through the same
  // proof state twice adds no new readings) and no cross-path caching.
  std::set<std::vector<int>> completions_path(const Key& s,
                                              std::vector<Key>& path) {
    if (std::find(path.begin(), path.end(), s) != path.end()) return {};
    std::set<std::vector<int>> acc;
    if (is_goal(s)) acc.insert(std::vector<int>{});
    path.push_back(s);
    std::vector<std::pair<int, Key>> moves = gen_moves(s);
    if (moves.empty() && !is_goal(s)) deadends.insert(s);
    for (const auto& [sid, next] : moves) {
      for (std::vector<int> sub : completions_path(next, path)) {
        insert_sorted(sub, sid);
        acc.insert(std::move(sub));
      }
    }
    path.pop_back();
    return acc;
  }

  CompletionSet run(const Key& initial) {
    if (unbounded) {
      std::vector<Key> path;
      std::set<std::vector<int>> acc = completions_path(initial, path);
      return CompletionSet(acc.begin(), acc.end());
    }
    return completions(initial);
  }
};

// Canonical copy of the caller's state: resources sorted by content and
// renumbered from 0, equations renumbered in formatted order.
NormalState canonicalize(const NormalState& s) {
  NormalState out = s;
  std::sort(out.resources.begin(), out.resources.end(),
            [](const Resource& a, const Resource& b) {
              return resource_key(a) < resource_key(b);
            });
  for (std::size_t i = 0; i < out.resources.size(); ++i)
    out.resources[i].id = static_cast<int>(i);
  std::sort(out.equations.begin(), out.equations.end(),
            [](const EquationUse& a, const EquationUse& b) {
              return format_equation(a.eq) < format_equation(b.eq);
            });
  for (std::size_t i = 0; i < out.equations.size(); ++i)
    out.equations[i].id = static_cast<int>(i);
  return out;
}

void validate_labels(const NormalState& s) {
  for (const Resource& r : s.resources) {
    bool want = !is_unit(natural_type(r.formula));
    bool have = r.label != nullptr;
    if (want && !have)
      throw ValidationError("missing label on contentful resource " +
                            format_formula(r.formula));
    if (!want && have)
      throw ValidationError("label '" + format_lambda(r.label) +
                            "' on semantically impotent resource " +
                            format_formula(r.formula));
  }
}

Engine make_engine(const NormalState& canonical, const FormulaPtr& goal,
                   const SearchLimits& limits, Engine::Key& initial) {
  Engine eng;
  eng.goal = goal;
  eng.lim = limits;
  for (const EquationUse& e : canonical.equations) {
    eng.eqs.push_back(e.eq);
    initial.second.push_back(e.remaining);
    if (e.remaining < 0) eng.unbounded = true;
  }
  for (const Resource& r : canonical.resources)
    initial.first.push_back(eng.intern_content(r));
  std::sort(initial.first.begin(), initial.first.end());
  return eng;
}

// Replays one completion (a multiset of content-level steps) from the
// canonical initial state, assigning positional resource ids and producing
// the canonical step order: at each point the pending step with the smallest
// signature whose inputs are available fires next.
Derivation render(const std::vector<int>& completion,
                  const NormalState& initial, Engine& eng,
                  std::vector<std::string>& order_key) {
  Derivation d;
  d.initial = initial;
  std::map<int, std::vector<int>> avail;  // content id -> positions, ascending
  for (const Resource& r : initial.resources)
    avail[eng.intern_content(r)].push_back(r.id);
  std::map<int, int> pending;
  for (int sid : completion) ++pending[sid];
  int next_pos = static_cast<int>(initial.resources.size());

  auto take = [&](int content) {
    std::vector<int>& v = avail[content];
    int pos = v.front();
    v.erase(v.begin());
    if (v.empty()) avail.erase(content);
    return pos;
  };

  while (!pending.empty()) {
    int best = -1;
    for (const auto& [sid, count] : pending) {
      const CStep& cs = eng.csteps[sid];
      auto have = [&](int content, int need) {
        auto it = avail.find(content);
        return it != avail.end() &&
               static_cast<int>(it->second.size()) >= need;
      };
      bool ok = cs.rule == Step::Rule::Apply
                    ? (cs.in1 == cs.in2 ? have(cs.in1, 2)
                                        : have(cs.in1, 1) && have(cs.in2, 1))
                    : have(cs.in1, 1);
      if (!ok) continue;
      if (best < 0 || cs.key < eng.csteps[best].key) best = sid;
    }
    if (best < 0) throw Error("internal: completion replay stuck");
    const CStep& cs = eng.csteps[best];
    Step step;
    step.rule = cs.rule;
    step.attribute = cs.attr;
    step.equation = cs.eq;
    if (cs.rule == Step::Rule::Apply) {
      int fun_pos = take(cs.in1);
      int arg_pos = take(cs.in2);
      step.inputs = {fun_pos, arg_pos};
    } else {
      step.inputs = {take(cs.in1)};
    }
    step.result = eng.contents[cs.out];
    step.result.id = next_pos;
    avail[cs.out].push_back(next_pos);
    ++next_pos;
    order_key.push_back(cs.key);
    d.steps.push_back(std::move(step));
    if (--pending[best] == 0) pending.erase(best);
  }

  if (avail.size() != 1 || avail.begin()->second.size() != 1)
    throw Error("internal: completion did not leave a single resource");
  d.conclusion = eng.contents[avail.begin()->first];
  d.conclusion.id = avail.begin()->second.front();
  return d;
}

}  // namespace

DeriveResult derive(const NormalState& s, const FormulaPtr& goal,
                    const SearchLimits& limits) {
  NormalState canonical = canonicalize(s);
  validate_labels(canonical);
  Engine::Key initial;
  Engine eng = make_engine(canonical, goal, limits, initial);
  Engine::CompletionSet completions = eng.run(initial);

  std::vector<std::pair<std::vector<std::string>, Derivation>> rendered;
  for (const std::vector<int>& comp : completions) {
    std::vector<std::string> order_key;
    Derivation d = render(comp, canonical, eng, order_key);
    rendered.emplace_back(std::move(order_key), std::move(d));
  }
  std::sort(rendered.begin(), rendered.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  DeriveResult out;
  out.nodes_visited = eng.visited;
  out.depth_bound_hit = eng.depth_hit;
  for (auto& [key, d] : rendered) out.derivations.push_back(std::move(d));
  return out;
}

std::vector<TermPtr> readings(const std::vector<Derivation>& derivations) {
  std::map<std::string, TermPtr> by_key;
  for (const Derivation& d : derivations)
    if (d.conclusion.label)
      by_key.emplace(canonical_key(d.conclusion.label), d.conclusion.label);
  std::vector<TermPtr> out;
  for (auto& [key, term] : by_key) out.push_back(term);
  return out;
}

std::vector<std::string> reading_strings(const std::vector<Derivation>& ds,
                                         bool sugar) {
  std::vector<std::string> out;
  for (const TermPtr& t : readings(ds)) out.push_back(format_lambda(t, sugar));
  return out;
}

Diagnosis diagnose(const NormalState& s, const FormulaPtr& goal,
                   const SearchLimits& limits) {
  NormalState canonical = canonicalize(s);
  validate_labels(canonical);
  Engine::Key initial;
  Engine eng = make_engine(canonical, goal, limits, initial);
  Engine::CompletionSet completions = eng.run(initial);

  Diagnosis d;
  d.provable = !completions.empty();
  d.depth_bound_hit = eng.depth_hit;
  if (d.provable) return d;

  // Keep, over all dead ends, the smallest leftover multisets (what remains
  // after setting aside one goal-typed resource, when there is one).
  std::size_t best = SIZE_MAX;
  std::set<std::string> notes;
  std::vector<std::pair<std::size_t, std::vector<int>>> leftovers;
  for (const Engine::Key& dead : eng.deadends) {
    std::vector<int> ids = dead.first;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (formula_equal(eng.contents[ids[i]].formula, goal)) {
        ids.erase(ids.begin() + i);
        break;
      }
    }
    if (ids.empty()) continue;
    best = std::min(best, ids.size());
    leftovers.emplace_back(ids.size(), std::move(ids));
  }
  for (const auto& [size, ids] : leftovers) {
    if (size != best) continue;
    std::vector<std::string> parts;
    for (int ci : ids) parts.push_back(format_formula(eng.contents[ci].formula));
    std::sort(parts.begin(), parts.end());
    std::string joined;
    for (std::size_t i = 0; i < parts.size(); ++i) {
      if (i) joined += ", ";
      joined += parts[i];
    }
    notes.insert("unconsumed: " + joined);
    for (int ci : ids)
      if (auto* imp = as_implic(eng.contents[ci].formula))
        notes.insert("unsatisfied antecedent: " +
                     format_formula(imp->antecedent));
  }
  if (eng.deadends.empty() && !d.provable)
    notes.insert("no complete search branch (bounds pruned the search)");
  d.notes.assign(notes.begin(), notes.end());
  return d;
}

}  // namespace rlfg
