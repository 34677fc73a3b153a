#include "dlg/graph.hpp"

#include <algorithm>
#include <deque>

#include "dlg/errors.hpp"

namespace dlg {

Graph Graph::make(const std::map<VertexId, Label>& vertex_labels,
                  const std::map<EdgeKey, Label>& edge_labels,
                  const LabelTaxonomy* taxonomy) {
    Graph g;
    g.ids_.reserve(vertex_labels.size());
    g.vlabels_.reserve(vertex_labels.size());
    for (const auto& [id, label] : vertex_labels) {
        if (taxonomy && !taxonomy->contains(label))
            throw invalid_input("graph: vertex '" + id + "' has label '" + label +
                                "' outside the taxonomy");
        g.ids_.push_back(id);
        g.vlabels_.push_back(label);
    }
    g.out_.resize(g.ids_.size());
    g.in_.resize(g.ids_.size());

    for (const auto& [key, label] : edge_labels) {
        int from = g.index_of(key.first);
        int to = g.index_of(key.second);
        if (from < 0)
            throw invalid_input("graph: edge endpoint '" + key.first + "' is not a vertex");
        if (to < 0)
            throw invalid_input("graph: edge endpoint '" + key.second + "' is not a vertex");
        if (taxonomy && !taxonomy->contains(label))
            throw invalid_input("graph: edge (" + key.first + ", " + key.second +
                                ") has label '" + label + "' outside the taxonomy");
        int e = static_cast<int>(g.edges_.size());
        g.edges_.push_back({from, to, label});
        g.edge_lookup_[{from, to}] = e;
        g.out_[from].push_back(e);
        g.in_[to].push_back(e);
    }

    g.connected_ = is_connected(g);
    return g;
}

bool Graph::has_edge(const VertexId& from, const VertexId& to) const {
    int f = index_of(from), t = index_of(to);
    return f >= 0 && t >= 0 && edge_index(f, t) >= 0;
}

const Label& Graph::vertex_label(const VertexId& v) const {
    int i = index_of(v);
    if (i < 0)
        throw invalid_input("graph: unknown vertex '" + v + "'");
    return vlabels_[i];
}

const Label& Graph::edge_label(const VertexId& from, const VertexId& to) const {
    int f = index_of(from), t = index_of(to);
    int e = (f >= 0 && t >= 0) ? edge_index(f, t) : -1;
    if (e < 0)
        throw invalid_input("graph: unknown edge (" + from + ", " + to + ")");
    return edges_[e].label;
}

int Graph::index_of(const VertexId& v) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
    if (it == ids_.end() || *it != v)
        return -1;
    return static_cast<int>(it - ids_.begin());
}

int Graph::edge_index(int from, int to) const {
    auto it = edge_lookup_.find({from, to});
    return it == edge_lookup_.end() ? -1 : it->second;
}

std::size_t Graph::incident_count(int v) const {
    std::size_t n = out_[v].size();
    for (int e : in_[v])
        if (edges_[e].from != v) // self-loops already counted in out_
            ++n;
    return n;
}

std::vector<Label> Graph::label_set() const {
    std::vector<Label> out = vlabels_;
    for (const Edge& e : edges_)
        out.push_back(e.label);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool Graph::same_structure(const Graph& other) const {
    if (ids_ != other.ids_ || vlabels_ != other.vlabels_)
        return false;
    if (edges_.size() != other.edges_.size())
        return false;
    for (std::size_t i = 0; i < edges_.size(); ++i)
        if (edges_[i].from != other.edges_[i].from || edges_[i].to != other.edges_[i].to ||
            edges_[i].label != other.edges_[i].label)
            return false;
    return true;
}

bool is_connected(const Graph& g) {
    if (g.vertex_count() <= 1)
        return true;
    std::vector<char> seen(g.vertex_count(), 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        auto visit = [&](int w) {
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                queue.push_back(w);
            }
        };
        for (int e : g.out_edges(v))
            visit(g.edges()[e].to);
        for (int e : g.in_edges(v))
            visit(g.edges()[e].from);
    }
    return reached == g.vertex_count();
}

Graph remove_edge(const Graph& g, const EdgeKey& e) {
    std::map<VertexId, Label> vls;
    std::map<EdgeKey, Label> els;
    for (const VertexId& v : g.vertices())
        vls[v] = g.vertex_label(v);
    for (const Graph::Edge& edge : g.edges()) {
        EdgeKey key{g.vertex_at(edge.from), g.vertex_at(edge.to)};
        if (key != e)
            els[key] = edge.label;
    }
    if (els.size() == g.edge_count())
        throw invalid_input("graph: unknown edge (" + e.first + ", " + e.second + ")");
    return Graph::make(vls, els);
}

std::set<EdgeKey> bridges(const Graph& g) {
    if (!g.connected())
        throw invalid_input("bridges: graph is not connected");
    std::set<EdgeKey> out;
    for (const Graph::Edge& edge : g.edges()) {
        if (edge.from == edge.to)
            continue; // removing a loop never disconnects
        EdgeKey key{g.vertex_at(edge.from), g.vertex_at(edge.to)};
        if (!is_connected(remove_edge(g, key)))
            out.insert(key);
    }
    return out;
}

bool path_exists(const Graph& g, const VertexId& from, const VertexId& to, bool directed) {
    int s = g.index_of(from), t = g.index_of(to);
    if (s < 0)
        throw invalid_input("path_exists: unknown vertex '" + from + "'");
    if (t < 0)
        throw invalid_input("path_exists: unknown vertex '" + to + "'");
    if (s == t)
        return true;
    std::vector<char> seen(g.vertex_count(), 0);
    std::deque<int> queue{s};
    seen[s] = 1;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        auto visit = [&](int w) {
            if (w == t)
                return true;
            if (!seen[w]) {
                seen[w] = 1;
                queue.push_back(w);
            }
            return false;
        };
        for (int e : g.out_edges(v))
            if (visit(g.edges()[e].to))
                return true;
        if (!directed)
            for (int e : g.in_edges(v))
                if (visit(g.edges()[e].from))
                    return true;
    }
    return false;
}

} // namespace dlg
