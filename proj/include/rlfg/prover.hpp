// The resource-logic prover: consumes a normalized state and finds every
// derivation of the goal formula under implication application, the
// modal-over-implication lift, and path-equation restructuring.

#ifndef RLFG_PROVER_HPP_
#define RLFG_PROVER_HPP_

#include <optional>
#include <string>
#include <vector>

#include "rlfg/fterm.hpp"

namespace rlfg {

struct SearchLimits {
  int max_prefix_depth = 8;   // modal prefix length a restructuring may build
  long max_nodes = 1000000;   // states + moves explored before giving up
  bool reverse_moves = false;  // exploration-order probe used by tests
};

struct BudgetError : Error {
  BudgetError(const std::string& msg, long nodes)
      : Error(msg), nodes(nodes) {}
  long nodes;
};

// One inference step.  `inputs` are resource ids: {fun, arg} for Apply,
// {source} for Lift and PathEq.  The produced resource (with its fresh id)
// is in `result`.
struct Step {
  enum class Rule { Apply, Lift, PathEq };
  Rule rule;
  std::vector<int> inputs;
  std::string attribute;  // Lift: the distributed attribute
  int equation = -1;      // PathEq: equation id in the initial state
  Resource result;
};

const char* rule_name(Step::Rule r);

// A complete proof: replaying `steps` in order from `initial` consumes every
// resource and leaves exactly `conclusion`.  Two derivations are distinct
// iff their step multisets differ (inputs compared as resource contents).
struct Derivation {
  NormalState initial;
  std::vector<Step> steps;
  Resource conclusion;
};

// ---------------------------------------------------------------------------
// Single-step operations

// Distributes the innermost modal of the formula's outer prefix over the
// implication directly beneath it; nullopt when the formula has no such
// shape.  The natural type (and the label) is unchanged.
std::optional<Resource> try_lift(const Resource& r);

// Consumes resources `fun_id` (an implication) and `arg_id` (structurally
// equal to its antecedent), inserting the consequent with the applied label;
// nullopt when the shapes do not match.
std::optional<NormalState> apply_implication(const NormalState& s, int fun_id,
                                             int arg_id);

// Rewrites the leading lhs-prefix of resource `resource_id` to the rhs of
// equation `eq_id`, spending one use; nullopt when the equation is
// exhausted, the prefix does not match, or the result would exceed
// `max_prefix_depth`.
std::optional<NormalState> apply_path_eq(const NormalState& s, int eq_id,
                                         int resource_id,
                                         int max_prefix_depth = 8);

// ---------------------------------------------------------------------------
// Search

struct DeriveResult {
  std::vector<Derivation> derivations;  // deterministic order
  long nodes_visited = 0;
  bool depth_bound_hit = false;  // some restructuring was pruned by depth
};

// All derivations of `goal` from `s`, deduplicated by step multiset and
// conclusion.  Unused path equations are free.  Throws BudgetError when the
// node budget is exhausted and ValidationError when a resource's label does
// not respect the natural-type invariant.
DeriveResult derive(const NormalState& s, const FormulaPtr& goal,
                    const SearchLimits& limits = {});

// Distinct conclusion labels in canonical order.
std::vector<TermPtr> readings(const std::vector<Derivation>& derivations);
std::vector<std::string> reading_strings(const std::vector<Derivation>& ds,
                                         bool sugar = true);

// ---------------------------------------------------------------------------
// Failure analysis

struct Diagnosis {
  bool provable = false;
  bool depth_bound_hit = false;
  // For unprovable states: the minimal leftover resource multisets over all
  // maximal search branches, plus unsatisfied antecedents found in them.
  std::vector<std::string> notes;
};

Diagnosis diagnose(const NormalState& s, const FormulaPtr& goal,
                   const SearchLimits& limits = {});

}  // namespace rlfg

#endif  // RLFG_PROVER_HPP_
