#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dlg/taxonomy.hpp"

namespace dlg {

using VertexId = std::string;
using EdgeKey = std::pair<VertexId, VertexId>;

/// A directed labeled graph: vertices and directed edges, each carrying
/// exactly one label. Edges form a set of ordered pairs, so parallel
/// same-direction edges are impossible; self-loops are allowed.
///
/// Immutable after construction. All queries are pure, so instances can
/// be shared freely across threads.
class Graph {
public:
    struct Edge {
        int from = 0;
        int to = 0;
        Label label;
    };

    Graph() = default; // the empty graph

    /// Validates and builds a graph. Every edge endpoint must name a
    /// vertex; when a taxonomy is given, every label must belong to it.
    /// Connectivity (ignoring edge direction) is computed here; the
    /// empty graph counts as connected.
    static Graph make(const std::map<VertexId, Label>& vertex_labels,
                      const std::map<EdgeKey, Label>& edge_labels,
                      const LabelTaxonomy* taxonomy = nullptr);

    std::size_t vertex_count() const { return ids_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    bool empty() const { return ids_.empty(); }
    bool connected() const { return connected_; }

    const std::vector<VertexId>& vertices() const { return ids_; } // sorted
    const std::vector<Edge>& edges() const { return edges_; } // sorted by (from, to)

    bool has_vertex(const VertexId& v) const { return index_of(v) >= 0; }
    bool has_edge(const VertexId& from, const VertexId& to) const;

    const Label& vertex_label(const VertexId& v) const;
    const Label& edge_label(const VertexId& from, const VertexId& to) const;

    // Index-based access for algorithms. Vertex indices follow the
    // sorted id order and are stable for a given graph.
    int index_of(const VertexId& v) const;
    const VertexId& vertex_at(int i) const { return ids_[i]; }
    const Label& vertex_label_at(int i) const { return vlabels_[i]; }
    int edge_index(int from, int to) const; // -1 when absent
    const std::vector<int>& out_edges(int v) const { return out_[v]; }
    const std::vector<int>& in_edges(int v) const { return in_[v]; }
    /// Incident edge count; a self-loop counts once.
    std::size_t incident_count(int v) const;

    /// All labels appearing on vertices or edges, sorted and deduplicated.
    std::vector<Label> label_set() const;

    bool same_structure(const Graph& other) const; // identical ids, edges and labels

private:
    std::vector<VertexId> ids_;
    std::vector<Label> vlabels_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> out_, in_;
    std::map<std::pair<int, int>, int> edge_lookup_;
    bool connected_ = true;
};

/// True iff every vertex pair is joined by an undirected path; true for
/// the empty graph and singletons.
bool is_connected(const Graph& g);

/// Edges whose removal disconnects a connected graph (direction ignored).
/// Throws on disconnected input.
std::set<EdgeKey> bridges(const Graph& g);

/// Directed (or undirected) reachability between two existing vertices.
bool path_exists(const Graph& g, const VertexId& from, const VertexId& to, bool directed);

/// Copy with one edge removed. Helper for bridge-style removal checks.
Graph remove_edge(const Graph& g, const EdgeKey& e);

} // namespace dlg
