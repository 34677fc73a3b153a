#include "dlg/canonical.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace dlg {

namespace {

// Rank-compressed color refinement. Colors start from (vertex label,
// out-degree, in-degree, self-loop label) and absorb the sorted
// neighborhood signature until the partition stabilizes.
std::vector<int> refine_colors(const Graph& g, std::vector<std::string> color) {
    const int n = static_cast<int>(g.vertex_count());
    std::vector<int> rank(n, 0);
    int classes = 0;
    while (true) {
        std::vector<std::string> sorted = color;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        for (int v = 0; v < n; ++v)
            rank[v] = static_cast<int>(
                std::lower_bound(sorted.begin(), sorted.end(), color[v]) - sorted.begin());
        int now = static_cast<int>(sorted.size());
        if (now == classes || now == n)
            break;
        classes = now;
        for (int v = 0; v < n; ++v) {
            std::vector<std::string> sig;
            for (int e : g.out_edges(v)) {
                const Graph::Edge& edge = g.edges()[e];
                sig.push_back(">" + edge.label + ":" + std::to_string(rank[edge.to]));
            }
            for (int e : g.in_edges(v)) {
                const Graph::Edge& edge = g.edges()[e];
                sig.push_back("<" + edge.label + ":" + std::to_string(rank[edge.from]));
            }
            std::sort(sig.begin(), sig.end());
            std::string next = std::to_string(rank[v]);
            for (const std::string& s : sig)
                next += "|" + s;
            color[v] = std::move(next);
        }
    }
    return rank;
}

std::vector<std::string> initial_colors(const Graph& g) {
    const int n = static_cast<int>(g.vertex_count());
    std::vector<std::string> color(n);
    for (int v = 0; v < n; ++v) {
        int self = g.edge_index(v, v);
        color[v] = g.vertex_label_at(v) + "/" + std::to_string(g.out_edges(v).size()) + "/" +
                   std::to_string(g.in_edges(v).size()) + "/" +
                   (self >= 0 ? g.edges()[self].label : std::string());
    }
    return color;
}

std::string serialize_with_order(const Graph& g, const std::vector<int>& order) {
    std::vector<int> position(g.vertex_count());
    for (std::size_t i = 0; i < order.size(); ++i)
        position[order[i]] = static_cast<int>(i);
    nlohmann::json doc;
    doc["vertices"] = nlohmann::json::array();
    for (int v : order)
        doc["vertices"].push_back({{"id", "n" + std::to_string(position[v])},
                                   {"label", g.vertex_label_at(v)}});
    std::vector<std::tuple<int, int, Label>> es;
    for (const Graph::Edge& e : g.edges())
        es.emplace_back(position[e.from], position[e.to], e.label);
    std::sort(es.begin(), es.end());
    doc["edges"] = nlohmann::json::array();
    for (const auto& [f, t, l] : es)
        doc["edges"].push_back({{"from", "n" + std::to_string(f)},
                                {"to", "n" + std::to_string(t)},
                                {"label", l}});
    return doc.dump();
}

struct CanonicalSearch {
    const Graph& g;
    int n;
    std::string best;
    std::vector<int> best_order;

    explicit CanonicalSearch(const Graph& graph)
        : g(graph), n(static_cast<int>(graph.vertex_count())) {}

    void descend(std::vector<std::string> color) {
        std::vector<int> rank = refine_colors(g, color);
        // First class (by rank) holding more than one vertex.
        std::map<int, std::vector<int>> classes;
        for (int v = 0; v < n; ++v)
            classes[rank[v]].push_back(v);
        for (const auto& [r, members] : classes) {
            if (members.size() == 1)
                continue;
            for (int pick : members) {
                std::vector<std::string> next = color;
                for (int v = 0; v < n; ++v)
                    next[v] = std::to_string(rank[v]) + "." + next[v];
                next[pick] = "!" + next[pick]; // singled out, sorts first
                descend(std::move(next));
            }
            return;
        }
        // Discrete partition: ranks induce a total order.
        std::vector<int> order(n);
        for (int v = 0; v < n; ++v)
            order[rank[v]] = v;
        std::string key = serialize_with_order(g, order);
        if (best.empty() || key < best) {
            best = key;
            best_order = order;
        }
    }
};

} // namespace

std::vector<int> canonical_order(const Graph& g) {
    if (g.empty())
        return {};
    CanonicalSearch search(g);
    search.descend(initial_colors(g));
    return search.best_order;
}

std::string canonical_key(const Graph& g) {
    if (g.empty())
        return serialize_with_order(g, {});
    CanonicalSearch search(g);
    search.descend(initial_colors(g));
    return search.best;
}

bool isomorphic(const Graph& a, const Graph& b) {
    if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count())
        return false;
    return canonical_key(a) == canonical_key(b);
}

} // namespace dlg
