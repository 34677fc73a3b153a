#include <doctest.h>

#include <random>

#include "dlg/canonical.hpp"
#include "dlg/errors.hpp"
#include "dlg/refinement.hpp"
#include "dlg/subsumption.hpp"
#include "support/build.hpp"
#include "support/fixtures.hpp"
#include "support/oracle.hpp"

using namespace dlg;

namespace {

RelationSpec plain(bool oi = false) { return {Relation::plain, oi, std::nullopt}; }
RelationSpec trans(bool oi = false) { return {Relation::trans, oi, std::nullopt}; }
RelationSpec po(const LabelTaxonomy& tax, bool oi = false) {
    return {Relation::po, oi, tax};
}

} // namespace

TEST_CASE("fig1 pair: plain fails, po holds with the captioned mapping") {
    LabelTaxonomy tax = fixture_taxonomy("fig1-tax");
    Graph g1 = fixture_graph("fig1-g1", &tax);
    Graph g2 = fixture_graph("fig1-g2", &tax);

    CHECK_FALSE(subsumes(g1, g2, plain()));
    auto w = subsumes(g1, g2, po(tax));
    REQUIRE(w);
    validate_witness(g1, g2, po(tax), *w);

    Witness expected;
    expected.vertex_map = {{"v1", "w2"}, {"v2", "w3"}, {"v3", "w4"}};
    auto all = enumerate_witnesses(g1, g2, po(tax), 1000);
    bool found = false;
    for (const Witness& cand : all)
        if (cand.vertex_map == expected.vertex_map)
            found = true;
    CHECK(found);
}

TEST_CASE("fig2 pair: plain fails, trans maps an edge to a 2-edge chain") {
    Graph g1 = fixture_graph("fig2-g1");
    Graph g2 = fixture_graph("fig2-g2");

    CHECK_FALSE(subsumes(g1, g2, plain()));
    auto all = enumerate_witnesses(g1, g2, trans(), 1000);
    REQUIRE_FALSE(all.empty());
    bool found = false;
    for (const Witness& w : all) {
        if (w.vertex_map != std::map<VertexId, VertexId>{{"v1", "w1"}, {"v2", "w3"},
                                                         {"v3", "w4"}})
            continue;
        for (const auto& [key, chain] : w.edge_paths)
            if (chain.size() == 2)
                found = true;
        validate_witness(g1, g2, trans(), w);
    }
    CHECK(found);
}

TEST_CASE("fig3 pair: object identity forbids the collapsed mapping") {
    Graph g1 = fixture_graph("fig3-g1");
    Graph g2 = fixture_graph("fig3-g2");

    CHECK_FALSE(subsumes(g1, g2, plain(true)));
    auto w = subsumes(g1, g2, plain(false));
    REQUIRE(w);

    bool found = false;
    for (const Witness& cand : enumerate_witnesses(g1, g2, plain(false), 1000))
        if (cand.vertex_map.at("v2") == "w4" && cand.vertex_map.at("v3") == "w4")
            found = true;
    CHECK(found);
}

TEST_CASE("enumerate_witnesses counts distinct mappings") {
    Graph a = G("v1:a");
    Graph chain = G("w1:a, w2:a | w1-r->w2");
    CHECK(enumerate_witnesses(a, chain, plain(), 100).size() == 2);

    Graph any = G("w1:x, w2:y | w1-r->w2");
    auto ws = enumerate_witnesses(Graph{}, any, plain(), 100);
    REQUIRE(ws.size() == 1);
    CHECK(ws.front().vertex_map.empty());
}

TEST_CASE("equivalence") {
    Graph g = G("v1:a, v2:b | v1-r->v2");
    CHECK(equivalent(g, g, plain()));
    Graph renamed = G("x:a, y:b | x-r->y");
    CHECK(equivalent(g, renamed, plain(true)));

    Graph super_ = G("v1:a, v2:b, v3:b | v1-r->v2, v1-r->v3");
    CHECK(subsumes(g, super_, plain(true)));
    CHECK_FALSE(equivalent(g, super_, plain(true)));
    CHECK(equivalent(g, super_, plain(false))); // no object identity: collapse
}

TEST_CASE("empty graphs") {
    Graph g = G("v1:a");
    CHECK(subsumes(Graph{}, g, plain()));
    CHECK_FALSE(subsumes(g, Graph{}, plain()));
    CHECK(subsumes(Graph{}, Graph{}, plain()));
}

TEST_CASE("disconnected input is rejected") {
    CHECK_THROWS_AS(subsumes(G("v1:a, v2:b"), G("v1:a"), plain()), invalid_input);
}

TEST_CASE("labels outside the taxonomy are rejected") {
    LabelTaxonomy tax = T("top=any; any<a");
    CHECK_THROWS_AS(subsumes(G("v1:zz"), G("v1:a"), po(tax)), invalid_input);
}

TEST_CASE("cover and delta") {
    Graph g1 = fixture_graph("fig4-g1");
    Graph g2 = fixture_graph("fig4-g2");
    auto w = subsumes(g1, g2, plain());
    REQUIRE(w);
    CoverDelta cd = cover_delta(g1, g2, plain(), *w);
    CHECK(cd.cover_vertices == std::set<VertexId>{"w1", "w2"});
    CHECK(cd.delta_vertices == std::set<VertexId>{"w3"});
    CHECK(cd.cover_edges == std::set<EdgeKey>{{"w1", "w2"}});
    CHECK(cd.delta_edges == std::set<EdgeKey>{{"w2", "w3"}});

    // Witness of a graph onto itself: empty delta.
    auto self = subsumes(g2, g2, plain(true));
    REQUIRE(self);
    CoverDelta cd2 = cover_delta(g2, g2, plain(true), *self);
    CHECK(cd2.delta_vertices.empty());
    CHECK(cd2.delta_edges.empty());

    // Single vertex into a chain: the delta holds the rest.
    Graph a = G("v1:a");
    Graph ab = G("w1:a, w2:b | w1-r->w2");
    auto w3 = subsumes(a, ab, plain());
    REQUIRE(w3);
    CoverDelta cd3 = cover_delta(a, ab, plain(), *w3);
    CHECK(cd3.delta_vertices == std::set<VertexId>{"w2"});
    CHECK(cd3.delta_edges == std::set<EdgeKey>{{"w1", "w2"}});
}

TEST_CASE("trans cover includes chain interiors") {
    Graph g1 = fixture_graph("fig2-g1");
    Graph g2 = fixture_graph("fig2-g2");
    auto w = subsumes(g1, g2, trans());
    REQUIRE(w);
    CoverDelta cd = cover_delta(g1, g2, trans(), *w);
    for (const auto& [key, chain] : w->edge_paths)
        for (const EdgeKey& f : chain) {
            CHECK(cd.cover_edges.count(f));
            CHECK(cd.cover_vertices.count(f.first));
            CHECK(cd.cover_vertices.count(f.second));
        }
}

TEST_CASE("agreement with the brute-force oracle on a random sample") {
    std::mt19937_64 rng(20240817);
    LabelTaxonomy tax = T("top=any; any<b; b<c");
    for (int i = 0; i < 300; ++i) {
        Graph g1 = oracle::random_connected(rng, 3, {"any", "b", "c"}, {"any", "b", "c"},
                                            i % 3 == 0, 0.2);
        Graph g2 = oracle::random_connected(rng, 4, {"any", "b", "c"}, {"any", "b", "c"},
                                            i % 3 == 0, 0.3);
        for (bool oi : {false, true}) {
            for (Relation rel : {Relation::plain, Relation::po, Relation::trans,
                                 Relation::trans_po}) {
                RelationSpec spec{rel, oi, std::nullopt};
                if (spec.ordered())
                    spec.taxonomy = tax;
                bool fast = subsumes(g1, g2, spec).has_value();
                bool slow = oracle::subsumes_bruteforce(g1, g2, spec);
                CHECK(fast == slow);
            }
        }
    }
}

TEST_CASE("monotonicity between relations") {
    std::mt19937_64 rng(7);
    LabelTaxonomy tax = T("top=any; any<a; any<b; any<r"); // order extending equality
    for (int i = 0; i < 200; ++i) {
        Graph g1 = oracle::random_connected(rng, 3, {"a", "b"}, {"r"}, false, 0.2);
        Graph g2 = oracle::random_connected(rng, 4, {"a", "b"}, {"r"}, false, 0.3);
        RelationSpec p = plain(), t = trans();
        RelationSpec o{Relation::po, false, tax};
        if (subsumes(g1, g2, p)) {
            CHECK(subsumes(g1, g2, o));
            CHECK(subsumes(g1, g2, t));
        }
        if (subsumes(g1, g2, plain(true)))
            CHECK(subsumes(g1, g2, p));
    }
}

TEST_CASE("reflexivity and transitivity on refinement chains") {
    std::mt19937_64 rng(99);
    OperatorSpec down{Direction::down, Labeling::flat, false, std::nullopt, {"a", "b"}};
    for (int i = 0; i < 50; ++i) {
        Graph g1 = oracle::random_connected(rng, 3, {"a", "b"}, {"a", "b"}, false, 0.2);
        CHECK(subsumes(g1, g1, plain(true)));
        auto step1 = refine_set(g1, down);
        if (step1.empty())
            continue;
        const Graph& g2 = step1[rng() % step1.size()];
        auto step2 = refine_set(g2, down);
        if (step2.empty())
            continue;
        const Graph& g3 = step2[rng() % step2.size()];
        REQUIRE(subsumes(g1, g2, plain()));
        REQUIRE(subsumes(g2, g3, plain()));
        CHECK(subsumes(g1, g3, plain()));
    }
}

TEST_CASE("every returned witness validates clause by clause") {
    std::mt19937_64 rng(4242);
    LabelTaxonomy tax = T("top=any; any<b; b<c");
    for (int i = 0; i < 100; ++i) {
        Graph g1 = oracle::random_connected(rng, 2, {"any", "b"}, {"b"}, false, 0.2);
        Graph g2 = oracle::random_connected(rng, 4, {"any", "b", "c"}, {"b", "c"}, false, 0.4);
        for (Relation rel : {Relation::plain, Relation::po, Relation::trans,
                             Relation::trans_po}) {
            for (bool oi : {false, true}) {
                RelationSpec spec{rel, oi, std::nullopt};
                if (spec.ordered())
                    spec.taxonomy = tax;
                for (const Witness& w : enumerate_witnesses(g1, g2, spec, 20))
                    CHECK_NOTHROW(validate_witness(g1, g2, spec, w));
            }
        }
    }
}
