#include "dlg/lattice.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>

#include "dlg/canonical.hpp"
#include "dlg/errors.hpp"

namespace dlg {

namespace {

struct Budget {
    std::size_t left;
    const char* who;
    void tick() {
        if (left == 0)
            throw budget_exhausted(std::string(who) + ": step budget exhausted");
        --left;
    }
};

OperatorSpec with_direction(const OperatorSpec& op, Direction d) {
    OperatorSpec out = op;
    out.direction = d;
    return out;
}

void check_lattice_inputs(const Graph& g1, const Graph& g2, const OperatorSpec& op) {
    op.validate();
    if (!g1.connected() || !g2.connected())
        throw invalid_input("lattice: inputs must be connected or empty");
}

// ---------------------------------------------------------------------
// Anti-unification for the plain/po relations: maximum-score connected
// common embedding. A state is an injective set of vertex pairs grown
// connectedly; its realized graph takes every edge slot both sides
// support and the deepest admissible label per element.

struct PairSlot {
    int x, y;
    Label label;
    std::size_t depth;
};

struct EmbeddingSearch {
    const Graph& g1;
    const Graph& g2;
    const OperatorSpec& op;
    const LabelTaxonomy* tax;
    Budget& budget;

    std::vector<PairSlot> pairs;
    // edge_slot[i][j]: label+depth for a result edge from pair i to pair j.
    std::map<std::pair<int, int>, PairSlot> edge_slots;

    std::set<std::vector<int>> seen;
    std::size_t best_score = 0;
    std::string best_key;
    Graph best_graph;
    std::map<int, int> best_members; // pair index -> result position

    EmbeddingSearch(const Graph& a, const Graph& b, const OperatorSpec& o, Budget& bud)
        : g1(a), g2(b), op(o), tax(o.taxonomy ? &*o.taxonomy : nullptr), budget(bud) {
        for (int x = 0; x < static_cast<int>(g1.vertex_count()); ++x)
            for (int y = 0; y < static_cast<int>(g2.vertex_count()); ++y) {
                auto best = common_label(g1.vertex_label_at(x), g2.vertex_label_at(y));
                if (best)
                    pairs.push_back({x, y, best->first, best->second});
            }
        for (int i = 0; i < static_cast<int>(pairs.size()); ++i)
            for (int j = 0; j < static_cast<int>(pairs.size()); ++j) {
                if (i != j && (pairs[i].x == pairs[j].x || pairs[i].y == pairs[j].y))
                    continue; // never co-selected
                int e1 = g1.edge_index(pairs[i].x, pairs[j].x);
                int e2 = g2.edge_index(pairs[i].y, pairs[j].y);
                if (e1 < 0 || e2 < 0)
                    continue;
                auto best = common_label(g1.edges()[e1].label, g2.edges()[e2].label);
                if (best)
                    edge_slots[{i, j}] = {0, 0, best->first, best->second};
            }
    }

    // Deepest common generalization and its depth; flat labels must be
    // equal and weigh nothing.
    std::optional<std::pair<Label, std::size_t>> common_label(const Label& a,
                                                              const Label& b) const {
        if (op.labeling == Labeling::flat) {
            if (a != b)
                return std::nullopt;
            return std::make_pair(a, std::size_t{0});
        }
        Label pick = tax->deepest_common_generalizations(a, b).front();
        return std::make_pair(pick, static_cast<std::size_t>(tax->depth(pick)));
    }

    bool adjacent(int i, int j) const {
        return edge_slots.count({i, j}) || edge_slots.count({j, i});
    }

    void consider(const std::vector<int>& members) {
        std::size_t score = 1; // the R0 step
        for (int i : members)
            score += pairs[i].depth;
        for (int i : members)
            for (int j : members) {
                auto it = edge_slots.find({i, j});
                if (it != edge_slots.end())
                    score += 1 + it->second.depth;
            }
        if (score < best_score)
            return;
        auto [graph, positions] = realize(members);
        std::string key = canonical_key(graph);
        if (score > best_score || best_key.empty() || key < best_key) {
            best_score = score;
            best_key = key;
            best_graph = graph;
            best_members = positions;
        }
    }

    std::pair<Graph, std::map<int, int>> realize(const std::vector<int>& members) const {
        std::map<VertexId, Label> vls;
        std::map<EdgeKey, Label> els;
        std::map<int, int> position;
        for (std::size_t k = 0; k < members.size(); ++k) {
            position[members[k]] = static_cast<int>(k);
            vls["u" + std::to_string(k)] = pairs[members[k]].label;
        }
        for (int i : members)
            for (int j : members) {
                auto it = edge_slots.find({i, j});
                if (it != edge_slots.end())
                    els[{"u" + std::to_string(position[i]), "u" + std::to_string(position[j])}] =
                        it->second.label;
            }
        return {Graph::make(vls, els, tax), position};
    }

    void grow(std::vector<int> members, std::vector<char> used1, std::vector<char> used2) {
        budget.tick();
        consider(members);
        for (int k = 0; k < static_cast<int>(pairs.size()); ++k) {
            if (used1[pairs[k].x] || used2[pairs[k].y])
                continue;
            bool attach = false;
            for (int i : members)
                if (adjacent(i, k)) {
                    attach = true;
                    break;
                }
            if (!attach)
                continue;
            std::vector<int> next = members;
            next.push_back(k);
            std::sort(next.begin(), next.end());
            if (!seen.insert(next).second)
                continue;
            std::vector<char> u1 = used1, u2 = used2;
            u1[pairs[k].x] = 1;
            u2[pairs[k].y] = 1;
            grow(std::move(next), std::move(u1), std::move(u2));
        }
    }

    void run() {
        std::vector<char> used1(g1.vertex_count(), 0), used2(g2.vertex_count(), 0);
        for (int k = 0; k < static_cast<int>(pairs.size()); ++k) {
            std::vector<int> members{k};
            if (!seen.insert(members).second)
                continue;
            std::vector<char> u1 = used1, u2 = used2;
            u1[pairs[k].x] = 1;
            u2[pairs[k].y] = 1;
            grow(std::move(members), std::move(u1), std::move(u2));
        }
    }

    LatticeResult result() const {
        if (best_key.empty())
            return {Graph{}, Witness{}, Witness{}};
        LatticeResult res;
        res.graph = best_graph;
        for (const auto& [pair_index, pos] : best_members) {
            res.witness_left.vertex_map["u" + std::to_string(pos)] =
                g1.vertex_at(pairs[pair_index].x);
            res.witness_right.vertex_map["u" + std::to_string(pos)] =
                g2.vertex_at(pairs[pair_index].y);
        }
        return res;
    }
};

// ---------------------------------------------------------------------
// Anti-unification for the trans relations: explore the refinement
// graph downward from the empty graph, keeping common subsumers, and
// return the best locally maximal one.

LatticeResult antiunify_by_search(const Graph& g1, const Graph& g2, const OperatorSpec& op,
                                  Budget& budget) {
    OperatorSpec down = with_direction(op, Direction::down);
    RelationSpec spec = down.relation_spec(true);

    std::map<std::string, Graph> explored;
    std::deque<Graph> frontier;
    Graph empty;
    explored.emplace(canonical_key(empty), empty);
    frontier.push_back(empty);

    std::size_t best_score = 0;
    std::string best_key;
    Graph best_graph;
    bool have_best = false;

    while (!frontier.empty()) {
        budget.tick();
        Graph g = frontier.front();
        frontier.pop_front();
        bool maximal = true;
        for (const Graph& r : refine_set(g, down)) {
            if (!subsumes(r, g1, spec) || !subsumes(r, g2, spec))
                continue;
            maximal = false;
            std::string key = canonical_key(r);
            if (explored.emplace(key, r).second)
                frontier.push_back(r);
        }
        if (maximal) {
            std::size_t score = path_length_from_top(g, down);
            std::string key = canonical_key(g);
            if (!have_best || score > best_score || (score == best_score && key < best_key)) {
                have_best = true;
                best_score = score;
                best_key = key;
                best_graph = g;
            }
        }
    }

    LatticeResult res;
    res.graph = best_graph;
    if (auto w = subsumes(best_graph, g1, spec))
        res.witness_left = *w;
    if (auto w = subsumes(best_graph, g2, spec))
        res.witness_right = *w;
    return res;
}

} // namespace

LatticeResult antiunify(const Graph& g1, const Graph& g2, const OperatorSpec& op,
                        const SearchOptions& opt) {
    check_lattice_inputs(g1, g2, op);
    // Argument order must not matter: normalize by canonical key.
    if (canonical_key(g2) < canonical_key(g1)) {
        LatticeResult swapped = antiunify(g2, g1, op, opt);
        std::swap(swapped.witness_left, swapped.witness_right);
        return swapped;
    }
    Budget budget{opt.step_budget, "antiunify"};
    if (g1.empty() || g2.empty())
        return {Graph{}, Witness{}, Witness{}};
    if (op.transitive)
        return antiunify_by_search(g1, g2, op, budget);
    EmbeddingSearch search(g1, g2, op, budget);
    search.run();
    return search.result();
}

namespace {

// All injective partial correspondences between the vertex sets.
void correspondences(const std::vector<VertexId>& v1, const std::vector<VertexId>& v2,
                     std::size_t at, std::vector<std::pair<VertexId, VertexId>>& current,
                     std::set<VertexId>& used,
                     std::vector<std::vector<std::pair<VertexId, VertexId>>>& out) {
    if (at == v1.size()) {
        out.push_back(current);
        return;
    }
    correspondences(v1, v2, at + 1, current, used, out); // leave v1[at] unmatched
    for (const VertexId& w : v2) {
        if (used.count(w))
            continue;
        current.push_back({v1[at], w});
        used.insert(w);
        correspondences(v1, v2, at + 1, current, used, out);
        used.erase(w);
        current.pop_back();
    }
}

struct OverlayParts {
    std::map<VertexId, Label> v;
    std::map<EdgeKey, Label> e;
};

// Unifier candidate construction state: labels still to choose for
// merged vertices/edges branch over minimal common specializations.
void branch_labels(const OverlayParts& base,
                   const std::vector<std::pair<VertexId, std::vector<Label>>>& vertex_choices,
                   const std::vector<std::pair<EdgeKey, std::vector<Label>>>& edge_choices,
                   std::size_t vi, std::size_t ei, OverlayParts acc,
                   std::vector<OverlayParts>& out) {
    if (vi < vertex_choices.size()) {
        for (const Label& l : vertex_choices[vi].second) {
            OverlayParts next = acc;
            next.v[vertex_choices[vi].first] = l;
            branch_labels(base, vertex_choices, edge_choices, vi + 1, ei, std::move(next), out);
        }
        return;
    }
    if (ei < edge_choices.size()) {
        for (const Label& l : edge_choices[ei].second) {
            OverlayParts next = acc;
            next.e[edge_choices[ei].first] = l;
            branch_labels(base, vertex_choices, edge_choices, vi, ei + 1, std::move(next), out);
        }
        return;
    }
    out.push_back(std::move(acc));
}

std::vector<std::set<VertexId>> components(const OverlayParts& p) {
    std::map<VertexId, VertexId> parent;
    for (const auto& [v, l] : p.v)
        parent[v] = v;
    std::function<VertexId(VertexId)> find = [&](VertexId v) {
        while (parent[v] != v)
            v = parent[v] = parent[parent[v]];
        return v;
    };
    for (const auto& [key, l] : p.e)
        parent[find(key.first)] = find(key.second);
    std::map<VertexId, std::set<VertexId>> groups;
    for (const auto& [v, l] : p.v)
        groups[find(v)].insert(v);
    std::vector<std::set<VertexId>> out;
    for (auto& [root, members] : groups)
        out.push_back(std::move(members));
    return out;
}

} // namespace

std::vector<LatticeResult> unify(const Graph& g1, const Graph& g2, const OperatorSpec& op,
                                 std::size_t limit, const SearchOptions& opt) {
    check_lattice_inputs(g1, g2, op);
    Budget budget{opt.step_budget, "unify"};
    const bool ordered = op.labeling == Labeling::ordered;
    const LabelTaxonomy* tax = op.taxonomy ? &*op.taxonomy : nullptr;
    OperatorSpec up = with_direction(op, Direction::up);
    RelationSpec spec = op.relation_spec(true);

    // Bridge labels for disconnected overlays: most general choices.
    std::vector<Label> bridge_labels;
    if (ordered)
        bridge_labels.push_back(tax->top());
    else {
        bridge_labels = op.alphabet;
        std::sort(bridge_labels.begin(), bridge_labels.end());
        bridge_labels.erase(std::unique(bridge_labels.begin(), bridge_labels.end()),
                            bridge_labels.end());
    }

    std::vector<std::vector<std::pair<VertexId, VertexId>>> sigmas;
    {
        std::vector<std::pair<VertexId, VertexId>> current;
        std::set<VertexId> used;
        correspondences(g1.vertices(), g2.vertices(), 0, current, used, sigmas);
    }

    std::map<std::string, Graph> candidates;
    auto add_candidate = [&](const OverlayParts& p) {
        budget.tick();
        Graph g = Graph::make(p.v, p.e, tax);
        if (!g.connected())
            return;
        candidates.emplace(canonical_key(g), std::move(g));
    };

    for (const auto& sigma : sigmas) {
        budget.tick();
        std::map<VertexId, VertexId> to_merged1, to_merged2;
        OverlayParts base;
        std::vector<std::pair<VertexId, std::vector<Label>>> vertex_choices;
        bool admissible = true;

        for (const auto& [v, w] : sigma) {
            VertexId id = "m:" + v + ":" + w;
            to_merged1[v] = id;
            to_merged2[w] = id;
            const Label& l1 = g1.vertex_label(v);
            const Label& l2 = g2.vertex_label(w);
            if (!ordered) {
                if (l1 != l2) {
                    admissible = false;
                    break;
                }
                base.v[id] = l1;
            } else {
                auto mcs = tax->minimal_common_specializations(l1, l2);
                if (mcs.empty()) {
                    admissible = false;
                    break;
                }
                vertex_choices.push_back({id, mcs});
            }
        }
        if (!admissible)
            continue;
        for (const VertexId& v : g1.vertices())
            if (!to_merged1.count(v)) {
                to_merged1[v] = "a:" + v;
                base.v["a:" + v] = g1.vertex_label(v);
            }
        for (const VertexId& w : g2.vertices())
            if (!to_merged2.count(w)) {
                to_merged2[w] = "b:" + w;
                base.v["b:" + w] = g2.vertex_label(w);
            }

        // Project edges; merged slots need a common specialization.
        std::map<EdgeKey, std::vector<Label>> slot_labels;
        for (const Graph::Edge& e : g1.edges()) {
            EdgeKey key{to_merged1.at(g1.vertex_at(e.from)), to_merged1.at(g1.vertex_at(e.to))};
            slot_labels[key].push_back(e.label);
        }
        for (const Graph::Edge& e : g2.edges()) {
            EdgeKey key{to_merged2.at(g2.vertex_at(e.from)), to_merged2.at(g2.vertex_at(e.to))};
            slot_labels[key].push_back(e.label);
        }
        std::vector<std::pair<EdgeKey, std::vector<Label>>> edge_choices;
        for (const auto& [key, labels] : slot_labels) {
            if (labels.size() == 1) {
                base.e[key] = labels.front();
            } else if (!ordered) {
                if (labels[0] != labels[1]) {
                    admissible = false;
                    break;
                }
                base.e[key] = labels[0];
            } else {
                auto mcs = tax->minimal_common_specializations(labels[0], labels[1]);
                if (mcs.empty()) {
                    admissible = false;
                    break;
                }
                edge_choices.push_back({key, mcs});
            }
        }
        if (!admissible)
            continue;

        std::vector<OverlayParts> branches;
        branch_labels(base, vertex_choices, edge_choices, 0, 0, base, branches);
        for (const OverlayParts& branch : branches) {
            auto comps = components(branch);
            if (comps.size() <= 1) {
                if (!branch.v.empty())
                    add_candidate(branch);
                else if (g1.empty() && g2.empty())
                    candidates.emplace(canonical_key(Graph{}), Graph{});
                continue;
            }
            if (comps.size() != 2)
                continue; // connected inputs never overlay into more parts
            for (const VertexId& u : comps[0])
                for (const VertexId& v : comps[1])
                    for (const Label& l : bridge_labels) {
                        OverlayParts bridged = branch;
                        bridged.e[{u, v}] = l;
                        add_candidate(bridged);
                        bridged = branch;
                        bridged.e[{v, u}] = l;
                        add_candidate(bridged);
                    }
        }
    }

    // Keep candidates that are unifiers and locally minimal.
    std::vector<LatticeResult> out;
    for (const auto& [key, cand] : candidates) {
        budget.tick();
        auto wl = subsumes(g1, cand, spec);
        if (!wl)
            continue;
        auto wr = subsumes(g2, cand, spec);
        if (!wr)
            continue;
        bool minimal = true;
        for (const Graph& r : refine_set(cand, up)) {
            if (subsumes(g1, r, spec) && subsumes(g2, r, spec)) {
                minimal = false;
                break;
            }
        }
        if (!minimal)
            continue;
        out.push_back({cand, *wl, *wr});
        if (out.size() >= limit)
            break;
    }
    return out;
}

} // namespace dlg
