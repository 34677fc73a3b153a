#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <nlohmann/json.hpp>

#include "dlg/io.hpp"
#include "dlg/subsumption.hpp"
#include "support/fixtures.hpp"

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;
};

std::string cli_binary() {
    const char* bin = std::getenv("DLG_BIN");
    REQUIRE(bin != nullptr);
    return bin;
}

std::string fixture(const std::string& name) {
    return fixtures_dir() + "/" + name + ".json";
}

RunResult run_cli(const std::string& args) {
    std::string cmd = cli_binary() + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    std::array<char, 4096> buf;
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0)
        res.output.append(buf.data(), n);
    int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

} // namespace

TEST_CASE("subsumes exit codes follow the relation") {
    auto holds = run_cli("subsumes " + fixture("fig1-g1") + " " + fixture("fig1-g2") +
                         " --relation po --taxonomy " + fixture("fig1-tax"));
    CHECK(holds.exit_code == 0);

    auto fails = run_cli("subsumes " + fixture("fig3-g1") + " " + fixture("fig3-g2") +
                         " --relation plain --oi");
    CHECK(fails.exit_code == 1);

    auto usage = run_cli("subsumes " + fixture("fig1-g1") + " " + fixture("fig1-g2") +
                         " --relation po");
    CHECK(usage.exit_code == 2); // po without a taxonomy

    auto missing = run_cli("subsumes does-not-exist.json " + fixture("fig1-g2"));
    CHECK(missing.exit_code == 3);
}

TEST_CASE("a holding subsumes prints the witness") {
    auto res = run_cli("subsumes " + fixture("fig1-g1") + " " + fixture("fig1-g2") +
                       " --relation po --taxonomy " + fixture("fig1-tax") +
                       " --emit-witness");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("holds") != std::string::npos);
    CHECK(res.output.find("v1 -> ") != std::string::npos);
}

TEST_CASE("self similarity prints 1") {
    auto res = run_cli("sim " + fixture("fig1-g1") + " " + fixture("fig1-g1") +
                       " --measure au");
    CHECK(res.exit_code == 0);
    CHECK(res.output == "1.000000\n");
}

TEST_CASE("structured output is byte-identical across runs") {
    for (std::string cmd :
         {"subsumes " + fixture("fig2-g1") + " " + fixture("fig2-g2") +
              " --relation trans --format structured",
          "refine " + fixture("fig4-g1") + " --direction up --format structured",
          "antiunify " + fixture("fig2-g1") + " " + fixture("fig2-g2") +
              " --format structured",
          "disintegrate " + fixture("fig4-g1") + " --seed 9 --format structured",
          "sim " + fixture("fig2-g1") + " " + fixture("fig2-g2") +
              " --measure props --seed 9 --format structured"}) {
        auto first = run_cli(cmd);
        auto second = run_cli(cmd);
        CHECK(first.exit_code == second.exit_code);
        CHECK(first.output == second.output);
        CHECK_FALSE(first.output.empty());
    }
}

TEST_CASE("emitted witnesses re-validate through the library checker") {
    auto res = run_cli("subsumes " + fixture("fig2-g1") + " " + fixture("fig2-g2") +
                       " --relation trans --format structured");
    REQUIRE(res.exit_code == 0);
    nlohmann::json doc = nlohmann::json::parse(res.output);
    REQUIRE(doc["holds"].get<bool>());

    dlg::Witness w;
    for (const auto& [v, img] : doc["witness"]["vertex_map"].items())
        w.vertex_map[v] = img.get<std::string>();
    for (const auto& entry : doc["witness"]["edge_paths"]) {
        dlg::EdgeKey key{entry["from"].get<std::string>(), entry["to"].get<std::string>()};
        for (const auto& pair : entry["chain"])
            w.edge_paths[key].push_back(
                {pair[0].get<std::string>(), pair[1].get<std::string>()});
    }
    dlg::Graph g1 = fixture_graph("fig2-g1");
    dlg::Graph g2 = fixture_graph("fig2-g2");
    dlg::RelationSpec spec{dlg::Relation::trans, false, std::nullopt};
    CHECK_NOTHROW(dlg::validate_witness(g1, g2, spec, w));
}

TEST_CASE("an exhausted budget exits with code 4") {
    auto res = run_cli("antiunify " + fixture("fig2-g1") + " " + fixture("fig2-g2") +
                       " --budget 1");
    CHECK(res.exit_code == 4);
}

TEST_CASE("pathlen agrees with the library") {
    auto res = run_cli("pathlen " + fixture("fig4-g1"));
    CHECK(res.exit_code == 0);
    CHECK(res.output == "2\n");
}
