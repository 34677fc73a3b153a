#include <doctest.h>

#include <random>

#include "dlg/canonical.hpp"
#include "dlg/lattice.hpp"
#include "support/build.hpp"
#include "support/oracle.hpp"

using namespace dlg;

namespace {

OperatorSpec flat_op(std::vector<Label> alpha) {
    return {Direction::down, Labeling::flat, false, std::nullopt, std::move(alpha)};
}
OperatorSpec po_op(const LabelTaxonomy& tax) {
    return {Direction::down, Labeling::ordered, false, tax, {}};
}

// Exhaustive anti-unifier oracle: among every corpus graph that
// subsumes both inputs and has no refinement doing the same, pick the
// longest path from the top, then the smallest canonical form.
Graph antiunify_oracle(const Graph& g1, const Graph& g2, const OperatorSpec& op,
                       const std::vector<Graph>& corpus) {
    RelationSpec spec = op.relation_spec(true);
    Graph best;
    std::size_t best_score = 0;
    std::string best_key;
    bool found = false;
    for (const Graph& cand : corpus) {
        if (!subsumes(cand, g1, spec) || !subsumes(cand, g2, spec))
            continue;
        bool maximal = true;
        for (const Graph& r : refine_set(cand, op))
            if (subsumes(r, g1, spec) && subsumes(r, g2, spec)) {
                maximal = false;
                break;
            }
        if (!maximal)
            continue;
        std::size_t score = path_length_from_top(cand, op);
        std::string key = canonical_key(cand);
        if (!found || score > best_score || (score == best_score && key < best_key)) {
            found = true;
            best = cand;
            best_score = score;
            best_key = key;
        }
    }
    return best;
}

} // namespace

TEST_CASE("antiunify is idempotent and absorbs the empty graph") {
    OperatorSpec op = flat_op({"a", "b", "r"});
    RelationSpec spec = op.relation_spec(true);
    Graph g = G("v1:a, v2:b | v1-r->v2");
    CHECK(equivalent(antiunify(g, g, op).graph, g, spec));
    CHECK(antiunify(g, Graph{}, op).graph.empty());
    CHECK(antiunify(Graph{}, Graph{}, op).graph.empty());
}

TEST_CASE("antiunify of diverging chains keeps the shared vertex") {
    OperatorSpec op = flat_op({"a", "b", "c", "r"});
    Graph g1 = G("v1:a, v2:b | v1-r->v2");
    Graph g2 = G("w1:a, w2:c | w1-r->w2");
    LatticeResult res = antiunify(g1, g2, op);
    CHECK(res.graph.vertex_count() == 1);
    CHECK(res.graph.vertex_label_at(0) == "a");
    CHECK(res.graph.edge_count() == 0);

    oracle::CorpusSpec cs;
    cs.max_vertices = 2;
    cs.max_edges = 1;
    cs.vertex_labels = {"a", "b", "c"};
    cs.edge_labels = {"r"};
    Graph expected = antiunify_oracle(g1, g2, op, oracle::enumerate_connected(cs));
    CHECK(canonical_key(res.graph) == canonical_key(expected));
}

TEST_CASE("antiunify matches the exhaustive oracle on random flat pairs") {
    std::mt19937_64 rng(2025);
    OperatorSpec op = flat_op({"a", "b"});
    oracle::CorpusSpec cs;
    cs.max_vertices = 3;
    cs.max_edges = 3;
    auto corpus = oracle::enumerate_connected(cs);
    for (int i = 0; i < 40; ++i) {
        Graph g1 = oracle::random_connected(rng, 3, {"a", "b"}, {"a", "b"}, false, 0.25);
        Graph g2 = oracle::random_connected(rng, 3, {"a", "b"}, {"a", "b"}, false, 0.25);
        LatticeResult res = antiunify(g1, g2, op);
        Graph expected = antiunify_oracle(g1, g2, op, corpus);
        CHECK(path_length_from_top(res.graph, op) == path_length_from_top(expected, op));
        CHECK(canonical_key(res.graph) == canonical_key(expected));
    }
}

TEST_CASE("antiunify under an ordered alphabet generalizes labels") {
    LabelTaxonomy tax = T("top=any; any<b; b<c; any<r");
    OperatorSpec op = po_op(tax);
    RelationSpec spec = op.relation_spec(true);
    Graph g1 = G("v1:b", &tax);
    Graph g2 = G("w1:c", &tax);
    LatticeResult res = antiunify(g1, g2, op);
    // b generalizes c, so the deepest common label is b itself.
    CHECK(res.graph.vertex_count() == 1);
    CHECK(res.graph.vertex_label_at(0) == "b");
    CHECK(subsumes(res.graph, g1, spec));
    CHECK(subsumes(res.graph, g2, spec));
}

TEST_CASE("antiunify result subsumes both inputs and is locally maximal") {
    std::mt19937_64 rng(88);
    OperatorSpec op = flat_op({"a", "b"});
    RelationSpec spec = op.relation_spec(true);
    for (int i = 0; i < 30; ++i) {
        Graph g1 = oracle::random_connected(rng, 4, {"a", "b"}, {"a", "b"}, false, 0.3);
        Graph g2 = oracle::random_connected(rng, 4, {"a", "b"}, {"a", "b"}, false, 0.3);
        LatticeResult res = antiunify(g1, g2, op);
        CHECK(subsumes(res.graph, g1, spec));
        CHECK(subsumes(res.graph, g2, spec));
        if (!res.graph.empty()) {
            validate_witness(res.graph, g1, spec, res.witness_left);
            validate_witness(res.graph, g2, spec, res.witness_right);
        }
        for (const Graph& r : refine_set(res.graph, op))
            CHECK_FALSE((subsumes(r, g1, spec).has_value() &&
                         subsumes(r, g2, spec).has_value()));
    }
}

TEST_CASE("antiunify is symmetric in its arguments") {
    OperatorSpec op = flat_op({"a", "b"});
    Graph g1 = G("v1:a, v2:b | v1-a->v2");
    Graph g2 = G("x:b, y:a, z:a | x-a->y, y-b->z");
    CHECK(canonical_key(antiunify(g1, g2, op).graph) ==
          canonical_key(antiunify(g2, g1, op).graph));
}

TEST_CASE("unify with the empty graph returns the other input") {
    OperatorSpec op = flat_op({"a", "b", "r"});
    Graph g = G("v1:a, v2:b | v1-r->v2");
    auto res = unify(g, Graph{}, op, 10);
    REQUIRE(res.size() == 1);
    CHECK(canonical_key(res.front().graph) == canonical_key(g));

    auto both_empty = unify(Graph{}, Graph{}, op, 10);
    REQUIRE(both_empty.size() == 1);
    CHECK(both_empty.front().graph.empty());
}

TEST_CASE("unifying two distinct vertices needs a connecting edge") {
    OperatorSpec op = flat_op({"a", "b", "r"});
    RelationSpec spec = op.relation_spec(true);
    auto res = unify(G("v1:a"), G("w1:b"), op, 50);
    // Two directions times three edge labels.
    CHECK(res.size() == 6);
    for (const auto& r : res) {
        CHECK(r.graph.vertex_count() == 2);
        CHECK(r.graph.edge_count() == 1);
        CHECK(subsumes(G("v1:a"), r.graph, spec));
        CHECK(subsumes(G("w1:b"), r.graph, spec));
    }
}

TEST_CASE("unifying overlapping chains includes the merged chain") {
    OperatorSpec op = flat_op({"a", "b", "c", "r"});
    Graph g1 = G("v1:a, v2:b | v1-r->v2");
    Graph g2 = G("w1:b, w2:c | w1-r->w2");
    auto res = unify(g1, g2, op, 100);
    Graph merged = G("u1:a, u2:b, u3:c | u1-r->u2, u2-r->u3");
    bool found = false;
    for (const auto& r : res)
        if (canonical_key(r.graph) == canonical_key(merged))
            found = true;
    CHECK(found);
}

TEST_CASE("unifiers are locally minimal") {
    std::mt19937_64 rng(404);
    OperatorSpec op = flat_op({"a", "b"});
    RelationSpec spec = op.relation_spec(true);
    OperatorSpec up = op;
    up.direction = Direction::up;
    for (int i = 0; i < 15; ++i) {
        Graph g1 = oracle::random_connected(rng, 2, {"a", "b"}, {"a", "b"}, false, 0.2);
        Graph g2 = oracle::random_connected(rng, 3, {"a", "b"}, {"a", "b"}, false, 0.2);
        for (const auto& r : unify(g1, g2, op, 20)) {
            CHECK(subsumes(g1, r.graph, spec));
            CHECK(subsumes(g2, r.graph, spec));
            for (const Graph& gen : refine_set(r.graph, up))
                CHECK_FALSE((subsumes(g1, gen, spec).has_value() &&
                             subsumes(g2, gen, spec).has_value()));
        }
    }
}

TEST_CASE("ordered unification takes minimal common label specializations") {
    LabelTaxonomy tax = T("top=t; t<a; t<b; a<c; b<c; t<r");
    OperatorSpec op = po_op(tax);
    RelationSpec spec = op.relation_spec(true);
    auto res = unify(G("v1:a", &tax), G("w1:b", &tax), op, 50);
    // Merging the vertices labels them c; the unmerged overlays bridge
    // with a top edge.
    bool merged_c = false;
    for (const auto& r : res) {
        CHECK(subsumes(G("v1:a", &tax), r.graph, spec));
        CHECK(subsumes(G("w1:b", &tax), r.graph, spec));
        if (r.graph.vertex_count() == 1)
            merged_c = r.graph.vertex_label_at(0) == "c";
    }
    CHECK(merged_c);

    LabelTaxonomy no_join = T("top=t; t<a; t<b; t<r");
    auto res2 = unify(G("v1:a", &no_join), G("w1:b", &no_join),
                      po_op(no_join), 50);
    for (const auto& r : res2)
        CHECK(r.graph.vertex_count() == 2); // no common specialization to merge on
}
