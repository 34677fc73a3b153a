#include <doctest.h>

#include <filesystem>
#include <random>

#include "dlg/errors.hpp"
#include "dlg/io.hpp"
#include "dlg/subsumption.hpp"
#include "support/build.hpp"
#include "support/oracle.hpp"

using namespace dlg;

TEST_CASE("graph documents parse and round-trip") {
    Graph one = parse_graph(R"({"vertices": [{"id": "v1", "label": "a"}], "edges": []})");
    CHECK(one.vertex_count() == 1);
    CHECK(one.vertex_label("v1") == "a");

    Graph empty = parse_graph(R"({"vertices": [], "edges": []})");
    CHECK(empty.empty());

    Graph g = G("v1:a, v2:b | v1-r->v2, v2-s->v1");
    Graph back = parse_graph(serialize_graph(g));
    CHECK(back.same_structure(g));
}

TEST_CASE("graph document errors") {
    CHECK_THROWS_AS(parse_graph("{"), invalid_input);
    CHECK_THROWS_AS(parse_graph(R"({"vertices": []})"), invalid_input);
    CHECK_THROWS_AS(
        parse_graph(
            R"({"vertices": [{"id": "v1", "label": "a"}],
                "edges": [{"from": "v1", "to": "vX", "label": "r"}]})"),
        invalid_input);
    CHECK_THROWS_AS(
        parse_graph(
            R"({"vertices": [{"id": "v1", "label": "a"}, {"id": "v1", "label": "b"}],
                "edges": []})"),
        invalid_input);
}

TEST_CASE("canonical form ignores vertex identities") {
    Graph a = G("v1:x, v2:x, v3:x | v1-r->v2, v2-r->v3, v3-r->v1");
    Graph b = G("p:x, q:x, z:x | z-r->p, p-r->q, q-r->z");
    CHECK(serialize_graph(a, true) == serialize_graph(b, true));
    CHECK(isomorphic(a, b));

    Graph c = G("v1:x, v2:y | v1-r->v2");
    Graph d = G("v1:x, v2:y | v2-r->v1");
    CHECK_FALSE(isomorphic(c, d));
}

TEST_CASE("canonical key equality coincides with structural equivalence") {
    // isomorphic() must agree with mutual plain subsumption under
    // object identity, in both directions.
    std::mt19937_64 rng(88011);
    RelationSpec oi{Relation::plain, true, std::nullopt};
    for (int i = 0; i < 60; ++i) {
        Graph g1 = oracle::random_connected(rng, 3, {"a", "b"}, {"r", "s"}, i % 2 == 0, 0.3);
        Graph g2 = oracle::random_connected(rng, 3, {"a", "b"}, {"r", "s"}, i % 2 == 0, 0.3);
        CHECK(isomorphic(g1, g2) == equivalent(g1, g2, oi));

        // A renamed copy hits the positive branch.
        std::map<VertexId, Label> vls;
        std::map<EdgeKey, Label> els;
        for (const VertexId& v : g1.vertices())
            vls["q" + v] = g1.vertex_label(v);
        for (const Graph::Edge& e : g1.edges())
            els[{"q" + g1.vertex_at(e.from), "q" + g1.vertex_at(e.to)}] = e.label;
        Graph renamed = Graph::make(vls, els);
        CHECK(isomorphic(g1, renamed));
        CHECK(equivalent(g1, renamed, oi));
    }
}

TEST_CASE("canonical form survives permuted parses") {
    std::mt19937_64 rng(1212);
    for (int i = 0; i < 30; ++i) {
        Graph g = oracle::random_connected(rng, 4, {"a", "b"}, {"r", "s"}, i % 2 == 0, 0.3);
        // Renaming every vertex must not change the canonical text.
        std::map<VertexId, Label> vls;
        std::map<EdgeKey, Label> els;
        auto rename = [](const VertexId& v) { return "zz_" + v; };
        for (const VertexId& v : g.vertices())
            vls[rename(v)] = g.vertex_label(v);
        for (const Graph::Edge& e : g.edges())
            els[{rename(g.vertex_at(e.from)), rename(g.vertex_at(e.to))}] = e.label;
        Graph renamed = Graph::make(vls, els);
        CHECK(serialize_graph(g, true) == serialize_graph(renamed, true));
    }
}

TEST_CASE("taxonomy documents") {
    LabelTaxonomy tax = parse_taxonomy(
        R"({"top": "any", "covers": [["any", "b"], ["b", "c"]]})");
    CHECK(tax.top() == "any");
    CHECK(tax.leq("any", "c"));

    LabelTaxonomy back = parse_taxonomy(serialize_taxonomy(tax));
    CHECK(back.covers() == tax.covers());

    CHECK_THROWS_AS(parse_taxonomy(R"({"top": "any",
                                       "covers": [["c", "any"], ["any", "c"]]})"),
                    invalid_input);
    CHECK_THROWS_AS(parse_taxonomy(R"({"top": "any", "covers": [["b", "c"]]})"),
                    invalid_input);
    CHECK_THROWS_AS(parse_taxonomy(R"({"covers": []})"), invalid_input);
}

TEST_CASE("weight tables round-trip") {
    WeightTable w;
    w.entries["k1"] = 0.5;
    w.entries["k2"] = 1.0;
    w.entries["k3"] = 0.125;
    std::string text = serialize_weight_table(w);
    WeightTable back = parse_weight_table(text, 2.0);
    CHECK(back.entries == w.entries);
    CHECK(back.default_weight == 2.0);
    CHECK(back.weight_of("unseen") == 2.0);

    CHECK_THROWS_AS(parse_weight_table("no tab here\n", 1.0), invalid_input);
    CHECK_THROWS_AS(parse_weight_table("key\t-1.0\n", 1.0), invalid_input);
}

TEST_CASE("datasets load relative to the manifest") {
    std::string dir = "io_test_dataset";
    std::filesystem::create_directories(dir);
    write_file(dir + "/g1.json", serialize_graph(G("v1:a")));
    write_file(dir + "/g2.json", serialize_graph(G("v1:b")));
    write_file(dir + "/manifest.json",
               R"({"examples": [{"graph": "g1.json", "class": "x"},
                                {"graph": "g2.json", "class": "y"}]})");
    TrainingSet t = load_dataset(dir + "/manifest.json");
    CHECK(t.examples.size() == 2);
    CHECK(t.examples[0].label == "x");

    write_file(dir + "/bad.json", R"({"examples": [{"graph": "missing.json",
                                                    "class": "x"}]})");
    CHECK_THROWS_AS(load_dataset(dir + "/bad.json"), invalid_input);
    std::filesystem::remove_all(dir);
}

TEST_CASE("dot export names every element") {
    std::string dot = to_dot(G("v1:a, v2:b | v1-r->v2"));
    CHECK(dot.find("digraph") != std::string::npos);
    CHECK(dot.find("\"v1\" -> \"v2\"") != std::string::npos);
}
