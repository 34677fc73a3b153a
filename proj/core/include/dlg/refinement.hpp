#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dlg/graph.hpp"
#include "dlg/subsumption.hpp"
#include "dlg/taxonomy.hpp"

namespace dlg {

/// Rewrite rules. R* rules specialize (downward), UR* rules generalize
/// (upward); the *PO variants work over an ordered label set.
enum class RuleId {
    R0, R1, R2, R3, R4,
    UR0, UR1, UR2,
    R0PO, R1PO, R2PO, R3PO, R4PO, R5PO, R6PO,
    UR0PO, UR1PO, UR2PO, UR3PO, UR4PO,
};

const char* rule_name(RuleId r);
std::optional<RuleId> rule_from_name(const std::string& name);

/// Rule variables bound to concrete vertex ids / labels. Keys are the
/// variable names as they appear in the rules: "v*", "v", "v1", "v2",
/// "v3", "a", "b", and "e.from"/"e.to" for edge variables.
using Bindings = std::map<std::string, std::string>;

enum class Direction { down, up };
enum class Labeling { flat, ordered };

/// Selects one of the eight refinement operators:
///   down/flat       rho_f   (R0-R3)        down/flat/trans    rho_tf  (R0-R4)
///   up/flat         gamma_f (UR0, UR1)     up/flat/trans      gamma_tf (UR0-UR2)
///   down/ordered    rho_po  (R0PO-R5PO)    down/ordered/trans rho_tpo (R0PO-R6PO)
///   up/ordered      gamma_po (UR0PO-UR3PO) up/ordered/trans   gamma_tpo (UR0PO-UR4PO)
struct OperatorSpec {
    Direction direction = Direction::down;
    Labeling labeling = Labeling::flat;
    bool transitive = false;
    std::optional<LabelTaxonomy> taxonomy; // required iff ordered
    std::vector<Label> alphabet; // required nonempty iff flat

    void validate() const;
    std::vector<RuleId> rules() const;
    /// The subsumption relation this operator refines under.
    RelationSpec relation_spec(bool object_identity) const;
    OperatorSpec reversed() const;
    const char* name() const;
};

/// One rule application: which rule, the variable bindings that satisfy
/// its applicability conditions, and the rewritten graph.
struct RuleApplication {
    RuleId rule;
    Bindings bindings;
    Graph result;
};

/// Applies one rule with explicit bindings. Throws invalid_input naming
/// the violated applicability condition.
Graph apply_rule(const Graph& g, RuleId rule, const Bindings& bindings,
                 const OperatorSpec& op);

/// The complete, finite set of refinements of g under the operator, in a
/// deterministic order. Every result is connected. Duplicate graphs
/// reached through different bindings are kept.
std::vector<RuleApplication> refine(const Graph& g, const OperatorSpec& op);

/// refine(g, op) deduplicated by isomorphism, sorted by canonical form.
std::vector<Graph> refine_set(const Graph& g, const OperatorSpec& op);

std::size_t count_refinements(const Graph& g, const OperatorSpec& op);

/// Smallest "_n" id not yet used by g.
VertexId fresh_vertex_id(const Graph& g);

} // namespace dlg
