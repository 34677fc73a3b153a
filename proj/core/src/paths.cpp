#include <algorithm>
#include <limits>
#include <set>
#include <vector>

#include "dlg/canonical.hpp"
#include "dlg/errors.hpp"
#include "dlg/lattice.hpp"

namespace dlg {

namespace {

constexpr std::size_t kWitnessLimit = 200000;

// One Hasse step from `from` toward the more specific label `to`.
Label specialize_step(const LabelTaxonomy& tax, const Label& from, const Label& to) {
    auto total = tax.distance(from, to);
    if (!total || *total == 0)
        throw error("label step: '" + from + "' is not strictly above '" + to + "'");
    for (const Label& c : tax.children(from))
        if (tax.leq(c, to) && tax.distance(c, to) == *total - 1)
            return c;
    throw error("label step: no child of '" + from + "' leads to '" + to + "'");
}

// One Hasse step from `from` toward the more general label `toward`.
Label generalize_step(const LabelTaxonomy& tax, const Label& from, const Label& toward) {
    auto total = tax.distance(toward, from);
    if (!total || *total == 0)
        throw error("label step: '" + toward + "' is not strictly below '" + from + "'");
    for (const Label& p : tax.parents(from))
        if (tax.leq(toward, p) && tax.distance(toward, p) == *total - 1)
            return p;
    throw error("label step: no parent of '" + from + "' leads to '" + toward + "'");
}

std::size_t label_cost(const LabelTaxonomy& tax, const Label& general, const Label& specific) {
    auto d = tax.distance(general, specific);
    if (!d)
        throw error("label cost: '" + general + "' does not generalize '" + specific + "'");
    return static_cast<std::size_t>(*d);
}

// Total label-specialization work a single-edge-image witness implies:
// mapped elements pay the distance from their source label, everything
// else in g_d starts at top. The ordered trans operator takes the
// search route instead, since edge splitting can share label work.
std::size_t witness_label_cost(const Graph& g_u, const Graph& g_d, const RelationSpec& spec,
                               const Witness& w) {
    const LabelTaxonomy& tax = *spec.taxonomy;
    std::size_t cost = 0;
    std::set<VertexId> mapped_vertices;
    for (const auto& [v, img] : w.vertex_map) {
        cost += label_cost(tax, g_u.vertex_label(v), g_d.vertex_label(img));
        mapped_vertices.insert(img);
    }
    std::set<EdgeKey> covered_edges;
    for (const Graph::Edge& e : g_u.edges()) {
        EdgeKey img{w.vertex_map.at(g_u.vertex_at(e.from)),
                    w.vertex_map.at(g_u.vertex_at(e.to))};
        cost += label_cost(tax, e.label, g_d.edge_label(img.first, img.second));
        covered_edges.insert(img);
    }
    for (const VertexId& v : g_d.vertices())
        if (!mapped_vertices.count(v))
            cost += tax.depth(g_d.vertex_label(v));
    for (const Graph::Edge& e : g_d.edges()) {
        EdgeKey key{g_d.vertex_at(e.from), g_d.vertex_at(e.to)};
        if (!covered_edges.count(key))
            cost += tax.depth(e.label);
    }
    return cost;
}

// Exact shortest path by breadth-first search over the refinement
// graph, states keyed by canonical form and pruned to the target's
// element counts (rules never remove, so the prune is admissible).
std::size_t search_path_length(const Graph& from, const Graph& target,
                               const OperatorSpec& down, const SearchOptions& opt) {
    const std::string goal = canonical_key(target);
    std::set<std::string> seen{canonical_key(from)};
    if (seen.count(goal))
        return 0;
    std::vector<Graph> layer{from};
    std::size_t budget = opt.step_budget;
    for (std::size_t depth = 1; !layer.empty(); ++depth) {
        std::vector<Graph> next;
        for (const Graph& g : layer) {
            if (budget-- == 0)
                throw budget_exhausted("path length search: step budget exhausted");
            for (const Graph& r : refine_set(g, down)) {
                if (r.vertex_count() > target.vertex_count() ||
                    r.edge_count() > target.edge_count())
                    continue;
                std::string key = canonical_key(r);
                if (key == goal)
                    return depth;
                if (seen.insert(std::move(key)).second)
                    next.push_back(r);
            }
        }
        layer = std::move(next);
    }
    throw error("path length search: target not reachable");
}

} // namespace

std::size_t path_length_from_top(const Graph& g, const OperatorSpec& op,
                                 const SearchOptions& opt) {
    op.validate();
    if (op.direction != Direction::down)
        throw invalid_input("path_length_from_top: needs a downward operator");
    if (!g.connected())
        throw invalid_input("path_length_from_top: graph is not connected");
    if (g.empty())
        return 0;
    if (op.labeling == Labeling::ordered && op.transitive)
        return search_path_length(Graph{}, g, op, opt);
    std::size_t len = g.edge_count() + 1;
    if (op.labeling == Labeling::ordered) {
        const LabelTaxonomy& tax = *op.taxonomy;
        for (const VertexId& v : g.vertices())
            len += static_cast<std::size_t>(tax.depth(g.vertex_label(v)));
        for (const Graph::Edge& e : g.edges())
            len += static_cast<std::size_t>(tax.depth(e.label));
    }
    return len;
}

std::size_t path_length_between(const Graph& g_u, const Graph& g_d, const OperatorSpec& op,
                                const SearchOptions& opt) {
    op.validate();
    if (op.direction != Direction::down)
        throw invalid_input("path_length_between: needs a downward operator");
    RelationSpec spec = op.relation_spec(true);
    auto witnesses = enumerate_witnesses(g_u, g_d, spec, kWitnessLimit);
    if (witnesses.empty())
        throw invalid_input("path_length_between: g_u does not subsume g_d under object "
                            "identity");
    if (op.labeling == Labeling::ordered && op.transitive)
        return search_path_length(g_u, g_d, op, opt);
    std::size_t base = g_d.edge_count() - g_u.edge_count();
    if (g_u.empty() && !g_d.empty())
        base += 1;
    if (op.labeling == Labeling::flat)
        return base;
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (const Witness& w : witnesses)
        best = std::min(best, witness_label_cost(g_u, g_d, spec, w));
    return base + best;
}

namespace {

struct PathBuilder {
    const OperatorSpec& op;
    const LabelTaxonomy* tax;
    std::size_t budget;
    Graph cur;
    std::vector<RuleApplication> steps;
    // Witness state: target-or-source vertex/edge correspondence.
    std::map<VertexId, VertexId> vmap;
    std::map<EdgeKey, std::vector<EdgeKey>> chains;

    PathBuilder(const OperatorSpec& o, std::size_t b)
        : op(o), tax(o.taxonomy ? &*o.taxonomy : nullptr), budget(b) {}

    void tick() {
        if (budget == 0)
            throw budget_exhausted("refinement_path_between: step budget exhausted");
        --budget;
    }

    void apply(RuleId rule, Bindings bind) {
        Graph next = apply_rule(cur, rule, bind, op);
        steps.push_back({rule, std::move(bind), next});
        cur = std::move(next);
    }
};

// Downward: walk from g_u to a graph equivalent to g_d. vmap maps
// current vertices to g_d vertices; chains maps current edges to the
// g_d chains they stand for (singletons for plain relations).
RefinementPath downward_path(const Graph& g_u, const Graph& g_d, const OperatorSpec& op,
                             const RelationSpec& spec, const Witness& w0,
                             const SearchOptions& opt) {
    const bool ordered = op.labeling == Labeling::ordered;

    PathBuilder b(op, opt.step_budget);
    b.cur = g_u;
    b.vmap = w0.vertex_map;
    if (spec.transitive())
        b.chains = w0.edge_paths;
    else
        for (const Graph::Edge& e : g_u.edges()) {
            EdgeKey key{g_u.vertex_at(e.from), g_u.vertex_at(e.to)};
            b.chains[key] = {{b.vmap.at(key.first), b.vmap.at(key.second)}};
        }

    while (true) {
        b.tick();

        // Empty start: create the first vertex.
        if (b.cur.empty()) {
            if (g_d.empty())
                break;
            const VertexId& v2 = g_d.vertices().front();
            VertexId vs = fresh_vertex_id(b.cur);
            if (ordered)
                b.apply(RuleId::R0PO, {{"v*", vs}});
            else
                b.apply(RuleId::R0, {{"v*", vs}, {"a", g_d.vertex_label(v2)}});
            b.vmap[vs] = v2;
            continue;
        }

        // Split an edge still standing for a multi-edge chain.
        bool acted = false;
        for (auto& [key, chain] : b.chains) {
            if (chain.size() < 2)
                continue;
            VertexId vs = fresh_vertex_id(b.cur);
            const VertexId& w2 = chain.front().second;
            if (ordered)
                b.apply(RuleId::R6PO, {{"v*", vs}, {"v1", key.first}, {"v2", key.second},
                                       {"b", b.cur.edge_label(key.first, key.second)}});
            else
                b.apply(RuleId::R4, {{"v*", vs}, {"v1", key.first}, {"v2", key.second},
                                     {"a", g_d.vertex_label(w2)},
                                     {"b", b.cur.edge_label(key.first, key.second)}});
            std::vector<EdgeKey> head{chain.front()};
            std::vector<EdgeKey> tail(chain.begin() + 1, chain.end());
            EdgeKey k = key;
            b.chains.erase(k);
            b.chains[{k.first, vs}] = head;
            b.chains[{vs, k.second}] = tail;
            b.vmap[vs] = w2;
            acted = true;
            break;
        }
        if (acted)
            continue;

        // Specialize a vertex label one step toward its target.
        if (ordered) {
            for (const VertexId& v : b.cur.vertices()) {
                const Label& have = b.cur.vertex_label(v);
                const Label& want = g_d.vertex_label(b.vmap.at(v));
                if (have != want) {
                    b.apply(RuleId::R4PO, {{"v1", v}, {"a", have},
                                           {"b", specialize_step(*b.tax, have, want)}});
                    acted = true;
                    break;
                }
            }
            if (acted)
                continue;
        }

        // Extend the vertex cover along a g_d edge at its frontier.
        std::set<VertexId> covered;
        for (const auto& [v, img] : b.vmap)
            covered.insert(img);
        if (covered.size() < g_d.vertex_count()) {
            VertexId pick_new, pick_old;
            bool outgoing = false; // (new, old) in E_d
            bool found = false;
            for (const VertexId& v2 : g_d.vertices()) {
                if (covered.count(v2))
                    continue;
                for (const VertexId& w2 : g_d.vertices()) {
                    if (!covered.count(w2))
                        continue;
                    if (g_d.has_edge(v2, w2)) {
                        pick_new = v2;
                        pick_old = w2;
                        outgoing = true;
                        found = true;
                        break;
                    }
                    if (g_d.has_edge(w2, v2)) {
                        pick_new = v2;
                        pick_old = w2;
                        outgoing = false;
                        found = true;
                        break;
                    }
                }
                if (found)
                    break;
            }
            if (!found)
                throw error("refinement_path_between: no frontier vertex in a connected "
                            "target");
            VertexId v1;
            for (const auto& [v, img] : b.vmap)
                if (img == pick_old) {
                    v1 = v;
                    break;
                }
            VertexId vs = fresh_vertex_id(b.cur);
            if (outgoing) { // g_d edge (new, old)
                if (ordered)
                    b.apply(RuleId::R2PO, {{"v*", vs}, {"v1", v1}});
                else
                    b.apply(RuleId::R1, {{"v*", vs}, {"v1", v1},
                                         {"a", g_d.vertex_label(pick_new)},
                                         {"b", g_d.edge_label(pick_new, pick_old)}});
                b.chains[{vs, v1}] = {{pick_new, pick_old}};
            } else { // g_d edge (old, new)
                if (ordered)
                    b.apply(RuleId::R1PO, {{"v*", vs}, {"v1", v1}});
                else
                    b.apply(RuleId::R2, {{"v*", vs}, {"v1", v1},
                                         {"a", g_d.vertex_label(pick_new)},
                                         {"b", g_d.edge_label(pick_old, pick_new)}});
                b.chains[{v1, vs}] = {{pick_old, pick_new}};
            }
            b.vmap[vs] = pick_new;
            continue;
        }

        // Specialize an edge label one step toward its target.
        if (ordered) {
            for (const auto& [key, chain] : b.chains) {
                const Label& have = b.cur.edge_label(key.first, key.second);
                const Label& want = g_d.edge_label(chain.front().first, chain.front().second);
                if (have != want) {
                    b.apply(RuleId::R5PO, {{"e.from", key.first}, {"e.to", key.second},
                                           {"a", have},
                                           {"b", specialize_step(*b.tax, have, want)}});
                    acted = true;
                    break;
                }
            }
            if (acted)
                continue;
        }

        // Extend the edge cover: any preimage pair without a current edge.
        std::set<EdgeKey> edge_cover;
        for (const auto& [key, chain] : b.chains)
            edge_cover.insert(chain.front());
        bool added = false;
        for (const Graph::Edge& f : g_d.edges()) {
            EdgeKey fkey{g_d.vertex_at(f.from), g_d.vertex_at(f.to)};
            if (edge_cover.count(fkey))
                continue;
            for (const auto& [a, ia] : b.vmap) {
                if (ia != fkey.first || added)
                    continue;
                for (const auto& [c, ic] : b.vmap) {
                    if (ic != fkey.second || b.cur.has_edge(a, c))
                        continue;
                    if (ordered)
                        b.apply(RuleId::R3PO, {{"v1", a}, {"v2", c}});
                    else
                        b.apply(RuleId::R3, {{"v1", a}, {"v2", c},
                                             {"a", g_d.edge_label(fkey.first, fkey.second)}});
                    b.chains[{a, c}] = {fkey};
                    added = true;
                    break;
                }
            }
            if (added)
                break;
        }
        if (added)
            continue;

        // Without object identity the covers can be complete while the
        // graphs are still inequivalent: a collapsing witness needs
        // every preimage pair of a target edge to carry that edge, or
        // the inverted mapping has nowhere to send it. Saturate.
        bool saturated = false;
        for (const auto& [a, ia] : b.vmap) {
            for (const auto& [c, ic] : b.vmap) {
                if (b.cur.has_edge(a, c) || !g_d.has_edge(ia, ic))
                    continue;
                if (ordered)
                    b.apply(RuleId::R3PO, {{"v1", a}, {"v2", c}});
                else
                    b.apply(RuleId::R3, {{"v1", a}, {"v2", c},
                                         {"a", g_d.edge_label(ia, ic)}});
                b.chains[{a, c}] = {{ia, ic}};
                saturated = true;
                break;
            }
            if (saturated)
                break;
        }
        if (saturated)
            continue;

        break; // covers complete and saturated, labels matched, chains single
    }
    return {g_u, b.cur, std::move(b.steps)};
}

// Upward: walk from g_u to a graph equivalent to g_d by generalizing.
// vmap maps g_d vertices into the current graph; chains maps g_d edges
// to chains in the current graph.
RefinementPath upward_path(const Graph& g_u, const Graph& g_d, const OperatorSpec& op,
                           const RelationSpec& spec, const Witness& w0,
                           const SearchOptions& opt) {
    const bool ordered = op.labeling == Labeling::ordered;

    PathBuilder b(op, opt.step_budget);
    b.cur = g_u;
    b.vmap = w0.vertex_map;
    if (spec.transitive())
        b.chains = w0.edge_paths;
    else
        for (const Graph::Edge& e : g_d.edges()) {
            EdgeKey key{g_d.vertex_at(e.from), g_d.vertex_at(e.to)};
            b.chains[key] = {{b.vmap.at(key.first), b.vmap.at(key.second)}};
        }

    while (true) {
        b.tick();

        std::set<VertexId> image;
        for (const auto& [x, img] : b.vmap)
            image.insert(img);
        std::set<VertexId> cover_v = image;
        std::set<EdgeKey> cover_e;
        for (const auto& [key, chain] : b.chains)
            for (const EdgeKey& f : chain) {
                cover_e.insert(f);
                cover_v.insert(f.first);
                cover_v.insert(f.second);
            }
        std::set<VertexId> delta_v;
        for (const VertexId& v : b.cur.vertices())
            if (!cover_v.count(v))
                delta_v.insert(v);
        std::set<EdgeKey> delta_e;
        for (const Graph::Edge& e : b.cur.edges()) {
            EdgeKey key{b.cur.vertex_at(e.from), b.cur.vertex_at(e.to)};
            if (!cover_e.count(key))
                delta_e.insert(key);
        }

        bool acted = false;
        if (ordered) {
            // Non-image vertices drift to top.
            for (const VertexId& v : b.cur.vertices()) {
                if (image.count(v))
                    continue;
                const Label& have = b.cur.vertex_label(v);
                if (have != b.tax->top()) {
                    b.apply(RuleId::UR0PO,
                            {{"v1", v}, {"a", have},
                             {"b", generalize_step(*b.tax, have, b.tax->top())}});
                    acted = true;
                    break;
                }
            }
            if (acted)
                continue;
            // Image vertices drift to their g_d source labels.
            for (const auto& [x, img] : b.vmap) {
                const Label& want = g_d.vertex_label(x);
                const Label& have = b.cur.vertex_label(img);
                if (want != have) {
                    b.apply(RuleId::UR0PO, {{"v1", img}, {"a", have},
                                            {"b", generalize_step(*b.tax, have, want)}});
                    acted = true;
                    break;
                }
            }
            if (acted)
                continue;
            // Delta edges drift to top.
            for (const EdgeKey& e : delta_e) {
                const Label& have = b.cur.edge_label(e.first, e.second);
                if (have != b.tax->top()) {
                    b.apply(RuleId::UR1PO,
                            {{"e.from", e.first}, {"e.to", e.second}, {"a", have},
                             {"b", generalize_step(*b.tax, have, b.tax->top())}});
                    acted = true;
                    break;
                }
            }
            if (acted)
                continue;
            // Chain edges drift to their g_d edge labels, staying
            // compatible with every chain that shares them.
            for (const auto& [key, chain] : b.chains) {
                const Label& want = g_d.edge_label(key.first, key.second);
                for (const EdgeKey& f : chain) {
                    const Label& have = b.cur.edge_label(f.first, f.second);
                    if (have == want)
                        continue;
                    Label next = generalize_step(*b.tax, have, want);
                    bool compatible = true;
                    for (const auto& [key2, chain2] : b.chains) {
                        if (std::find(chain2.begin(), chain2.end(), f) == chain2.end())
                            continue;
                        if (!b.tax->leq(g_d.edge_label(key2.first, key2.second), next))
                            compatible = false;
                    }
                    if (!compatible)
                        continue;
                    b.apply(RuleId::UR1PO, {{"e.from", f.first}, {"e.to", f.second},
                                            {"a", have}, {"b", next}});
                    acted = true;
                    break;
                }
                if (acted)
                    break;
            }
            if (acted)
                continue;
        }

        if (!delta_v.empty() || !delta_e.empty()) {
            // A delta leaf, or failing that a non-bridge delta edge.
            VertexId leaf;
            bool have_leaf = false;
            for (const VertexId& v : delta_v)
                if (b.cur.incident_count(b.cur.index_of(v)) <= 1) {
                    leaf = v;
                    have_leaf = true;
                    break;
                }
            if (have_leaf) {
                if (ordered)
                    b.apply(RuleId::UR3PO, {{"v", leaf}});
                else
                    b.apply(RuleId::UR1, {{"v", leaf}});
                continue;
            }
            auto bridge_set = bridges(b.cur);
            EdgeKey removable;
            bool found = false;
            for (const EdgeKey& e : delta_e)
                if (!bridge_set.count(e)) {
                    removable = e;
                    found = true;
                    break;
                }
            if (!found)
                throw error("refinement_path_between: no delta leaf and no non-bridge "
                            "delta edge");
            if (ordered)
                b.apply(RuleId::UR2PO, {{"e.from", removable.first}, {"e.to", removable.second}});
            else
                b.apply(RuleId::UR0, {{"e.from", removable.first}, {"e.to", removable.second}});
            continue;
        }

        // Shorten a multi-edge chain at an interior vertex. Chains that
        // partially share a segment can make a shortening inapplicable
        // (the interior picks up extra edges); skip those candidates.
        if (spec.transitive()) {
            for (auto& [key, chain] : b.chains) {
                if (chain.size() < 2)
                    continue;
                const VertexId& v1 = chain[0].first;
                const VertexId& mid = chain[0].second;
                const VertexId& v3 = chain[1].second;
                std::size_t touching = 0;
                for (const Graph::Edge& e : b.cur.edges())
                    if (b.cur.vertex_at(e.from) == mid || b.cur.vertex_at(e.to) == mid)
                        ++touching;
                if (touching > 2)
                    continue;
                if (b.cur.edge_label(v1, mid) != b.cur.edge_label(mid, v3))
                    continue;
                if (ordered && b.cur.vertex_label(mid) != b.tax->top())
                    continue;
                if (ordered)
                    b.apply(RuleId::UR4PO, {{"v1", v1}, {"v2", mid}, {"v3", v3}});
                else
                    b.apply(RuleId::UR2, {{"v1", v1}, {"v2", mid}, {"v3", v3}});
                // Splice (v1,mid)+(mid,v3) into (v1,v3) in every chain.
                EdgeKey merged{v1, v3}, first{v1, mid}, second{mid, v3};
                for (auto& [key2, chain2] : b.chains) {
                    std::vector<EdgeKey> next;
                    for (std::size_t i = 0; i < chain2.size(); ++i) {
                        if (i + 1 < chain2.size() && chain2[i] == first &&
                            chain2[i + 1] == second) {
                            next.push_back(merged);
                            ++i;
                        } else {
                            next.push_back(chain2[i]);
                        }
                    }
                    chain2 = std::move(next);
                }
                acted = true;
                break;
            }
            if (acted)
                continue;
        }

        break; // delta empty, labels matched, chains single: done
    }
    return {g_u, b.cur, std::move(b.steps)};
}

} // namespace

RefinementPath refinement_path_between(const Graph& g_u, const Graph& g_d,
                                       const OperatorSpec& op, const RelationSpec& spec,
                                       const SearchOptions& opt) {
    op.validate();
    spec.validate();
    if (op.relation_spec(false).relation != spec.relation)
        throw invalid_input("refinement_path_between: operator and relation disagree");

    const bool down = op.direction == Direction::down;
    const Graph& general = down ? g_u : g_d;
    const Graph& specific = down ? g_d : g_u;
    auto witnesses = enumerate_witnesses(general, specific, spec, 500);
    if (witnesses.empty())
        throw invalid_input(down
                                ? "refinement_path_between: g_u does not subsume g_d"
                                : "refinement_path_between: g_d does not subsume g_u");

    // Chains that share interior vertices can defeat the construction;
    // try every witness before giving up.
    for (const Witness& w : witnesses) {
        RefinementPath path;
        try {
            path = down ? downward_path(g_u, g_d, op, spec, w, opt)
                        : upward_path(g_u, g_d, op, spec, w, opt);
        } catch (const budget_exhausted&) {
            throw;
        } catch (const error&) {
            continue;
        }
        if (equivalent(path.end, g_d, spec))
            return path;
    }
    throw error("refinement_path_between: no witness yields a path reaching the target");
}

} // namespace dlg
