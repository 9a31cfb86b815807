#include "support/oracle.hpp"

namespace rlfg::testgen {

namespace {

void dfs(const NormalState& s, const FormulaPtr& goal, int max_prefix_depth,
         std::set<std::string>& out) {
  if (s.resources.size() == 1 &&
      formula_equal(s.resources[0].formula, goal) &&
      s.resources[0].label)
    out.insert(canonical_key(s.resources[0].label));

  for (const Resource& fun : s.resources)
    for (const Resource& arg : s.resources)
      if (auto next = apply_implication(s, fun.id, arg.id))
        dfs(*next, goal, max_prefix_depth, out);

  for (std::size_t i = 0; i < s.resources.size(); ++i) {
    if (auto lifted = try_lift(s.resources[i])) {
      NormalState next = s;
      next.resources[i] = *lifted;
      dfs(next, goal, max_prefix_depth, out);
    }
  }

  for (const EquationUse& e : s.equations) {
    if (e.remaining < 0)
      throw Error("oracle only handles bounded equation uses");
    for (const Resource& r : s.resources)
      if (auto next = apply_path_eq(s, e.id, r.id, max_prefix_depth))
        dfs(*next, goal, max_prefix_depth, out);
  }
}

}  // namespace

std::set<std::string> oracle_reading_keys(const NormalState& s,
                                          const FormulaPtr& goal,
                                          int max_prefix_depth) {
  std::set<std::string> out;
  dfs(s, goal, max_prefix_depth, out);
  return out;
}

std::set<std::string> engine_reading_keys(const NormalState& s,
                                          const FormulaPtr& goal,
                                          const SearchLimits& limits) {
  std::set<std::string> out;
  for (const TermPtr& t : readings(derive(s, goal, limits).derivations))
    out.insert(canonical_key(t));
  return out;
}

}  // namespace rlfg::testgen
