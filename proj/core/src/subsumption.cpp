#include "dlg/subsumption.hpp"

#include <algorithm>
#include <deque>

#include "dlg/errors.hpp"

namespace dlg {

const char* relation_name(Relation r) {
    switch (r) {
    case Relation::plain: return "plain";
    case Relation::po: return "po";
    case Relation::trans: return "trans";
    case Relation::trans_po: return "trans_po";
    }
    return "?";
}

std::optional<Relation> relation_from_name(const std::string& name) {
    if (name == "plain") return Relation::plain;
    if (name == "po") return Relation::po;
    if (name == "trans") return Relation::trans;
    if (name == "trans_po") return Relation::trans_po;
    return std::nullopt;
}

void RelationSpec::validate() const {
    if (ordered() && !taxonomy)
        throw invalid_input(std::string("relation '") + relation_name(relation) +
                            "' requires a taxonomy");
    if (!ordered() && taxonomy)
        throw invalid_input(std::string("relation '") + relation_name(relation) +
                            "' does not take a taxonomy");
}

bool RelationSpec::label_ok(const Label& general, const Label& specific) const {
    if (!ordered())
        return general == specific;
    return taxonomy->leq(general, specific);
}

bool Witness::operator<(const Witness& other) const {
    if (vertex_map != other.vertex_map)
        return vertex_map < other.vertex_map;
    return edge_paths < other.edge_paths;
}

namespace {

void check_inputs(const Graph& g1, const Graph& g2, const RelationSpec& spec) {
    spec.validate();
    if (!g1.connected())
        throw invalid_input("subsumption: left graph is not connected");
    if (!g2.connected())
        throw invalid_input("subsumption: right graph is not connected");
    if (spec.ordered()) {
        for (const Graph* g : {&g1, &g2})
            for (const Label& l : g->label_set())
                if (!spec.taxonomy->contains(l))
                    throw invalid_input("subsumption: label '" + l + "' is not in the taxonomy");
    }
}

// Assignment order for g1's vertices: start at the smallest id, then
// always pick the smallest-id vertex adjacent (ignoring direction) to
// the ones already placed. g1 is connected, so this covers everything.
std::vector<int> assignment_order(const Graph& g1) {
    const int n = static_cast<int>(g1.vertex_count());
    std::vector<int> order;
    std::vector<char> placed(n, 0);
    while (static_cast<int>(order.size()) < n) {
        int pick = -1;
        for (int v = 0; v < n; ++v) {
            if (placed[v])
                continue;
            bool adjacent = order.empty();
            if (!adjacent) {
                for (int e : g1.out_edges(v))
                    if (placed[g1.edges()[e].to]) {
                        adjacent = true;
                        break;
                    }
                if (!adjacent)
                    for (int e : g1.in_edges(v))
                        if (placed[g1.edges()[e].from]) {
                            adjacent = true;
                            break;
                        }
            }
            if (adjacent) {
                pick = v;
                break;
            }
        }
        placed[pick] = 1;
        order.push_back(pick);
    }
    return order;
}

struct Matcher {
    const Graph& g1;
    const Graph& g2;
    const RelationSpec& spec;
    std::size_t limit;

    int n1, n2;
    std::vector<int> order;
    std::vector<int> map;  // g1 index -> g2 index, -1 unassigned
    std::vector<int> used; // g2 index -> how many g1 vertices map here
    std::vector<Witness> results;
    std::size_t max_chain;

    Matcher(const Graph& a, const Graph& b, const RelationSpec& s, std::size_t lim)
        : g1(a), g2(b), spec(s), limit(lim) {
        n1 = static_cast<int>(g1.vertex_count());
        n2 = static_cast<int>(g2.vertex_count());
        order = assignment_order(g1);
        map.assign(n1, -1);
        used.assign(n2, 0);
        max_chain = spec.transitive() ? g2.vertex_count() : 1;
    }

    bool label_ok(const Label& a, const Label& b) const { return spec.label_ok(a, b); }

    // Interior vertices a chain may not pass through: images of every
    // g1 vertex other than the chain's own endpoints.
    std::vector<char> forbidden_for(int s, int t) const {
        std::vector<char> f(n2, 0);
        if (spec.object_identity)
            for (int v = 0; v < n1; ++v)
                if (map[v] >= 0 && map[v] != s && map[v] != t)
                    f[map[v]] = 1;
        return f;
    }

    bool chain_exists(int s, int t, const Label& l1) const {
        std::vector<char> forbidden = forbidden_for(s, t);
        std::vector<int> dist(n2, -1);
        std::deque<int> queue;
        auto relax = [&](int v, int d) {
            if (dist[v] < 0) {
                dist[v] = d;
                queue.push_back(v);
            }
        };
        // First hop from s; arrival at t counts from one edge onward.
        for (int e : g2.out_edges(s)) {
            const Graph::Edge& edge = g2.edges()[e];
            if (!label_ok(l1, edge.label))
                continue;
            if (edge.to == t)
                return true;
            if (!forbidden[edge.to])
                relax(edge.to, 1);
        }
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            if (dist[v] + 1 > static_cast<int>(max_chain))
                continue;
            for (int e : g2.out_edges(v)) {
                const Graph::Edge& edge = g2.edges()[e];
                if (!label_ok(l1, edge.label))
                    continue;
                if (edge.to == t)
                    return true;
                if (!forbidden[edge.to] && dist[v] + 1 < static_cast<int>(max_chain))
                    relax(edge.to, dist[v] + 1);
            }
        }
        return false;
    }

    // All label-compatible chains from s to t with at most max_chain
    // edges and legal interiors, as edge-key sequences in search order.
    void collect_chains(int s, int t, const Label& l1, const std::vector<char>& forbidden,
                        std::vector<EdgeKey>& prefix, int at, std::size_t cap,
                        std::vector<std::vector<EdgeKey>>& out) const {
        if (out.size() >= cap)
            return;
        if (!prefix.empty() && at == t)
            out.push_back(prefix);
        if (prefix.size() >= max_chain)
            return;
        if (!prefix.empty() && forbidden[at])
            return; // would make a forbidden vertex an interior
        for (int e : g2.out_edges(at)) {
            const Graph::Edge& edge = g2.edges()[e];
            if (!label_ok(l1, edge.label))
                continue;
            prefix.push_back({g2.vertex_at(edge.from), g2.vertex_at(edge.to)});
            collect_chains(s, t, l1, forbidden, prefix, edge.to, cap, out);
            prefix.pop_back();
        }
    }

    std::vector<std::vector<EdgeKey>> chains(int s, int t, const Label& l1,
                                             std::size_t cap) const {
        std::vector<std::vector<EdgeKey>> out;
        std::vector<EdgeKey> prefix;
        std::vector<char> forbidden = forbidden_for(s, t);
        collect_chains(s, t, l1, forbidden, prefix, s, cap, out);
        return out;
    }

    // Adjacency (or chain) consistency of assigning w to v, against the
    // already-mapped neighborhood.
    bool consistent(int v, int w) const {
        for (int e : g1.out_edges(v)) {
            const Graph::Edge& edge = g1.edges()[e];
            int x = edge.to;
            int wx = (x == v) ? w : map[x];
            if (wx < 0)
                continue;
            if (!spec.transitive()) {
                int e2 = g2.edge_index(w, wx);
                if (e2 < 0 || !label_ok(edge.label, g2.edges()[e2].label))
                    return false;
            } else if (!chain_exists(w, wx, edge.label)) {
                return false;
            }
        }
        for (int e : g1.in_edges(v)) {
            const Graph::Edge& edge = g1.edges()[e];
            int x = edge.from;
            if (x == v)
                continue; // self-loop handled above
            int wx = map[x];
            if (wx < 0)
                continue;
            if (!spec.transitive()) {
                int e2 = g2.edge_index(wx, w);
                if (e2 < 0 || !label_ok(edge.label, g2.edges()[e2].label))
                    return false;
            } else if (!chain_exists(wx, w, edge.label)) {
                return false;
            }
        }
        return true;
    }

    Witness vertex_witness() const {
        Witness wit;
        for (int v = 0; v < n1; ++v)
            wit.vertex_map[g1.vertex_at(v)] = g2.vertex_at(map[v]);
        return wit;
    }

    void emit() {
        if (!spec.transitive()) {
            results.push_back(vertex_witness());
            return;
        }
        // One chain choice per g1 edge; edges in sorted order.
        std::vector<const Graph::Edge*> g1_edges;
        for (const Graph::Edge& e : g1.edges())
            g1_edges.push_back(&e);
        std::vector<std::vector<std::vector<EdgeKey>>> options;
        for (const Graph::Edge* e : g1_edges) {
            std::size_t cap = (limit == 1) ? 1 : limit;
            auto ch = chains(map[e->from], map[e->to], e->label, cap);
            if (ch.empty())
                return; // interiors became illegal under the full map
            options.push_back(std::move(ch));
        }
        Witness base = vertex_witness();
        std::vector<std::size_t> pick(options.size(), 0);
        while (true) {
            Witness wit = base;
            for (std::size_t i = 0; i < options.size(); ++i) {
                const Graph::Edge* e = g1_edges[i];
                wit.edge_paths[{g1.vertex_at(e->from), g1.vertex_at(e->to)}] =
                    options[i][pick[i]];
            }
            results.push_back(std::move(wit));
            if (results.size() >= limit)
                return;
            std::size_t i = options.size();
            while (i > 0) {
                --i;
                if (++pick[i] < options[i].size())
                    break;
                pick[i] = 0;
                if (i == 0)
                    return;
            }
        }
    }

    void extend(std::size_t pos) {
        if (results.size() >= limit)
            return;
        if (pos == order.size()) {
            emit();
            return;
        }
        int v = order[pos];
        for (int w = 0; w < n2; ++w) {
            if (spec.object_identity && used[w])
                continue;
            if (!label_ok(g1.vertex_label_at(v), g2.vertex_label_at(w)))
                continue;
            if (!consistent(v, w))
                continue;
            map[v] = w;
            ++used[w];
            extend(pos + 1);
            map[v] = -1;
            --used[w];
            if (results.size() >= limit)
                return;
        }
    }

    std::vector<Witness> run() {
        if (n1 == 0) {
            results.push_back(Witness{});
            return results;
        }
        if (n2 == 0)
            return results;
        extend(0);
        return results;
    }
};

} // namespace

std::optional<Witness> subsumes(const Graph& g1, const Graph& g2, const RelationSpec& spec) {
    check_inputs(g1, g2, spec);
    Matcher m(g1, g2, spec, 1);
    auto found = m.run();
    if (found.empty())
        return std::nullopt;
    return found.front();
}

std::vector<Witness> enumerate_witnesses(const Graph& g1, const Graph& g2,
                                         const RelationSpec& spec, std::size_t limit) {
    check_inputs(g1, g2, spec);
    if (limit == 0)
        return {};
    Matcher m(g1, g2, spec, limit);
    auto found = m.run();
    std::sort(found.begin(), found.end());
    return found;
}

bool equivalent(const Graph& g1, const Graph& g2, const RelationSpec& spec) {
    return subsumes(g1, g2, spec).has_value() && subsumes(g2, g1, spec).has_value();
}

void validate_witness(const Graph& g1, const Graph& g2, const RelationSpec& spec,
                      const Witness& w) {
    check_inputs(g1, g2, spec);
    for (const VertexId& v : g1.vertices())
        if (!w.vertex_map.count(v))
            throw invalid_input("witness: vertex '" + v + "' is unmapped");
    for (const auto& [v, img] : w.vertex_map) {
        if (!g1.has_vertex(v))
            throw invalid_input("witness: '" + v + "' is not a vertex of the left graph");
        if (!g2.has_vertex(img))
            throw invalid_input("witness: image '" + img + "' is not a vertex of the right graph");
        if (!spec.label_ok(g1.vertex_label(v), g2.vertex_label(img)))
            throw invalid_input("witness: label of '" + v + "' is not compatible with '" + img +
                                "'");
    }
    if (spec.object_identity) {
        std::set<VertexId> images;
        for (const auto& [v, img] : w.vertex_map)
            if (!images.insert(img).second)
                throw invalid_input("witness: object identity violated at image '" + img + "'");
    }
    if (!spec.transitive()) {
        if (!w.edge_paths.empty())
            throw invalid_input("witness: edge paths are only defined for trans relations");
        for (const Graph::Edge& e : g1.edges()) {
            const VertexId& from = g1.vertex_at(e.from);
            const VertexId& to = g1.vertex_at(e.to);
            const VertexId& mf = w.vertex_map.at(from);
            const VertexId& mt = w.vertex_map.at(to);
            if (!g2.has_edge(mf, mt))
                throw invalid_input("witness: edge (" + from + ", " + to +
                                    ") has no image edge (" + mf + ", " + mt + ")");
            if (!spec.label_ok(e.label, g2.edge_label(mf, mt)))
                throw invalid_input("witness: edge (" + from + ", " + to +
                                    ") maps to an incompatible label");
        }
        return;
    }
    for (const Graph::Edge& e : g1.edges()) {
        EdgeKey key{g1.vertex_at(e.from), g1.vertex_at(e.to)};
        auto it = w.edge_paths.find(key);
        if (it == w.edge_paths.end() || it->second.empty())
            throw invalid_input("witness: edge (" + key.first + ", " + key.second +
                                ") has no chain");
        const auto& chain = it->second;
        const VertexId& mf = w.vertex_map.at(key.first);
        const VertexId& mt = w.vertex_map.at(key.second);
        if (chain.front().first != mf)
            throw invalid_input("witness: chain of (" + key.first + ", " + key.second +
                                ") does not start at the mapped source");
        if (chain.back().second != mt)
            throw invalid_input("witness: chain of (" + key.first + ", " + key.second +
                                ") does not end at the mapped target");
        for (std::size_t i = 0; i < chain.size(); ++i) {
            if (!g2.has_edge(chain[i].first, chain[i].second))
                throw invalid_input("witness: chain edge (" + chain[i].first + ", " +
                                    chain[i].second + ") is not in the right graph");
            if (!spec.label_ok(e.label, g2.edge_label(chain[i].first, chain[i].second)))
                throw invalid_input("witness: chain edge (" + chain[i].first + ", " +
                                    chain[i].second + ") has an incompatible label");
            if (i + 1 < chain.size() && chain[i].second != chain[i + 1].first)
                throw invalid_input("witness: chain of (" + key.first + ", " + key.second +
                                    ") is not consecutive");
        }
    }
    for (const auto& [key, chain] : w.edge_paths)
        if (!g1.has_edge(key.first, key.second))
            throw invalid_input("witness: chain given for nonexistent edge (" + key.first +
                                ", " + key.second + ")");
    if (spec.object_identity) {
        // No vertex may map into the chain of an edge it does not belong to.
        for (const auto& [v, img] : w.vertex_map) {
            for (const auto& [key, chain] : w.edge_paths) {
                if (v == key.first || v == key.second)
                    continue;
                for (const EdgeKey& ce : chain)
                    if (ce.first == img || ce.second == img)
                        throw invalid_input("witness: object identity violated, '" + v +
                                            "' maps into the chain of (" + key.first + ", " +
                                            key.second + ")");
            }
        }
    }
}

CoverDelta cover_delta(const Graph& g1, const Graph& g2, const RelationSpec& spec,
                       const Witness& w) {
    validate_witness(g1, g2, spec, w);
    CoverDelta cd;
    for (const auto& [v, img] : w.vertex_map)
        cd.cover_vertices.insert(img);
    if (!spec.transitive()) {
        for (const Graph::Edge& e : g1.edges())
            cd.cover_edges.insert({w.vertex_map.at(g1.vertex_at(e.from)),
                                   w.vertex_map.at(g1.vertex_at(e.to))});
    } else {
        for (const auto& [key, chain] : w.edge_paths)
            for (const EdgeKey& ce : chain) {
                cd.cover_edges.insert(ce);
                cd.cover_vertices.insert(ce.first);
                cd.cover_vertices.insert(ce.second);
            }
    }
    for (const VertexId& v : g2.vertices())
        if (!cd.cover_vertices.count(v))
            cd.delta_vertices.insert(v);
    for (const Graph::Edge& e : g2.edges()) {
        EdgeKey key{g2.vertex_at(e.from), g2.vertex_at(e.to)};
        if (!cd.cover_edges.count(key))
            cd.delta_edges.insert(key);
    }
    return cd;
}

} // namespace dlg
