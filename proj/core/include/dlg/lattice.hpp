#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "dlg/graph.hpp"
#include "dlg/refinement.hpp"
#include "dlg/subsumption.hpp"

namespace dlg {

/// Bounds for the lattice searches. step_budget caps search work
/// (expansions and candidate checks); exceeding it throws
/// budget_exhausted.
struct SearchOptions {
    std::size_t step_budget = 5'000'000;
};

/// A chain of single rule applications; each step's input is the
/// previous step's result. Empty steps iff start and end coincide.
struct RefinementPath {
    Graph start;
    Graph end;
    std::vector<RuleApplication> steps;
};

/// Length of the shortest refinement path from the empty graph to g
/// under a downward operator. Closed form: 0 for the empty graph;
/// |E|+1 for flat operators; |E|+1 plus the label depths of every
/// vertex and edge for the ordered non-trans operator. The ordered
/// trans operator has no such closed form (splitting an edge copies an
/// already specialized label onto both halves, undercutting the label
/// sum), so its lengths come from an exact bounded search.
std::size_t path_length_from_top(const Graph& g, const OperatorSpec& op,
                                 const SearchOptions& opt = {});

/// Shortest downward path length from g_u to g_d, requiring that g_u
/// subsumes g_d under the operator's relation with object identity.
/// Closed form: |E_d| - |E_u| + the minimal label cost over witnesses,
/// plus one extra step when g_u is empty and g_d is not; exact search
/// for the ordered trans operator, as above.
std::size_t path_length_between(const Graph& g_u, const Graph& g_d, const OperatorSpec& op,
                                const SearchOptions& opt = {});

/// A concrete refinement path following the completeness construction:
/// downward operators walk from g_u to a graph equivalent to g_d
/// (extend the vertex cover, split mapped chains, specialize labels,
/// extend the edge cover); upward operators walk from g_u to a graph
/// equivalent to g_d by generalizing labels and removing delta leaves
/// and non-bridge delta edges. The required subsumption (g_u over g_d
/// for downward, g_d over g_u for upward) is checked under spec.
RefinementPath refinement_path_between(const Graph& g_u, const Graph& g_d,
                                       const OperatorSpec& op, const RelationSpec& spec,
                                       const SearchOptions& opt = {});

/// An anti-unifier or unifier together with the witnesses certifying
/// its subsumption relations to the two inputs.
struct LatticeResult {
    Graph graph;
    Witness witness_left, witness_right;
};

/// A most specific graph subsuming both inputs under the operator's
/// relation with object identity. No downward refinement of the result
/// subsumes both inputs; ties between maximal candidates break by
/// longest path from the top, then smallest canonical form.
LatticeResult antiunify(const Graph& g1, const Graph& g2, const OperatorSpec& op,
                        const SearchOptions& opt = {});

/// Most general graphs subsumed by both inputs under the operator's
/// relation with object identity, built by overlaying the inputs under
/// every injective partial correspondence (plus a single connecting
/// edge when the overlay falls apart). No upward refinement of a result
/// is subsumed by both inputs. Sorted by canonical form, truncated to
/// limit; empty when no unifier exists within the construction bound.
std::vector<LatticeResult> unify(const Graph& g1, const Graph& g2, const OperatorSpec& op,
                                 std::size_t limit, const SearchOptions& opt = {});

} // namespace dlg
