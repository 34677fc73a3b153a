#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "dlg/graph.hpp"
#include "dlg/taxonomy.hpp"

namespace dlg {

enum class Relation { plain, po, trans, trans_po };

const char* relation_name(Relation r);
std::optional<Relation> relation_from_name(const std::string& name);

/// Which of the four subsumption relations to decide, whether the
/// object-identity constraint applies, and the label order for the
/// po variants (required exactly for those).
struct RelationSpec {
    Relation relation = Relation::plain;
    bool object_identity = false;
    std::optional<LabelTaxonomy> taxonomy;

    bool ordered() const { return relation == Relation::po || relation == Relation::trans_po; }
    bool transitive() const {
        return relation == Relation::trans || relation == Relation::trans_po;
    }
    void validate() const;

    /// Equal labels for plain relations, taxonomy order otherwise.
    bool label_ok(const Label& general, const Label& specific) const;
};

/// A subsumption certificate: the vertex mapping m, and for the trans
/// relations the edge-to-chain mapping m_e (one directed chain in g2
/// per g1 edge).
struct Witness {
    std::map<VertexId, VertexId> vertex_map;
    std::map<EdgeKey, std::vector<EdgeKey>> edge_paths;

    bool operator==(const Witness& other) const = default;
    bool operator<(const Witness& other) const;
};

/// Decides g1 <= g2 under the given relation. Returns a valid witness
/// when the relation holds; the empty graph subsumes everything through
/// the empty witness. Inputs must be connected or empty, and all labels
/// must belong to the taxonomy when one is present.
std::optional<Witness> subsumes(const Graph& g1, const Graph& g2, const RelationSpec& spec);

/// All distinct witnesses, search order then sorted, truncated to limit.
/// For trans relations, chains are bounded by |V2| edges.
std::vector<Witness> enumerate_witnesses(const Graph& g1, const Graph& g2,
                                         const RelationSpec& spec, std::size_t limit);

/// Mutual subsumption.
bool equivalent(const Graph& g1, const Graph& g2, const RelationSpec& spec);

/// Checks a witness clause by clause against the relation's definition;
/// throws invalid_input naming the failing clause.
void validate_witness(const Graph& g1, const Graph& g2, const RelationSpec& spec,
                      const Witness& w);

/// The part of g2 referred to by a witness, and its complement. For
/// trans relations the cover includes every chain edge and chain vertex.
struct CoverDelta {
    std::set<VertexId> cover_vertices, delta_vertices;
    std::set<EdgeKey> cover_edges, delta_edges;
};

CoverDelta cover_delta(const Graph& g1, const Graph& g2, const RelationSpec& spec,
                       const Witness& w);

} // namespace dlg
