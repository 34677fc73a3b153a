#include <benchmark/benchmark.h>

#include <random>

#include "dlg/canonical.hpp"
#include "dlg/lattice.hpp"
#include "dlg/refinement.hpp"
#include "dlg/similarity.hpp"
#include "dlg/subsumption.hpp"

namespace {

dlg::Graph random_graph(std::mt19937_64& rng, int n, double extra) {
    std::map<dlg::VertexId, dlg::Label> vls;
    std::map<dlg::EdgeKey, dlg::Label> els;
    std::vector<dlg::VertexId> ids;
    const char* vl[] = {"a", "b", "c"};
    const char* el[] = {"r", "s"};
    for (int i = 0; i < n; ++i) {
        ids.push_back("v" + std::to_string(i));
        vls[ids[i]] = vl[rng() % 3];
    }
    for (int i = 1; i < n; ++i)
        els[{ids[rng() % i], ids[i]}] = el[rng() % 2];
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && !els.count({ids[i], ids[j]}) && rng() % 100 < extra * 100)
                els[{ids[i], ids[j]}] = el[rng() % 2];
    return dlg::Graph::make(vls, els);
}

void bm_subsumes_plain(benchmark::State& state) {
    std::mt19937_64 rng(1);
    dlg::Graph pattern = random_graph(rng, 4, 0.1);
    dlg::Graph target = random_graph(rng, static_cast<int>(state.range(0)), 0.15);
    dlg::RelationSpec spec{dlg::Relation::plain, true, std::nullopt};
    for (auto _ : state)
        benchmark::DoNotOptimize(dlg::subsumes(pattern, target, spec));
}
BENCHMARK(bm_subsumes_plain)->Arg(8)->Arg(12)->Arg(16);

void bm_subsumes_trans(benchmark::State& state) {
    std::mt19937_64 rng(2);
    dlg::Graph pattern = random_graph(rng, 3, 0.1);
    dlg::Graph target = random_graph(rng, static_cast<int>(state.range(0)), 0.15);
    dlg::RelationSpec spec{dlg::Relation::trans, true, std::nullopt};
    for (auto _ : state)
        benchmark::DoNotOptimize(dlg::subsumes(pattern, target, spec));
}
BENCHMARK(bm_subsumes_trans)->Arg(8)->Arg(12);

void bm_refine_down(benchmark::State& state) {
    std::mt19937_64 rng(3);
    dlg::Graph g = random_graph(rng, static_cast<int>(state.range(0)), 0.15);
    dlg::OperatorSpec op{dlg::Direction::down, dlg::Labeling::flat, false, std::nullopt,
                         {"a", "b", "c", "r", "s"}};
    for (auto _ : state)
        benchmark::DoNotOptimize(dlg::refine(g, op));
}
BENCHMARK(bm_refine_down)->Arg(4)->Arg(6);

void bm_canonical_key(benchmark::State& state) {
    std::mt19937_64 rng(4);
    dlg::Graph g = random_graph(rng, static_cast<int>(state.range(0)), 0.2);
    for (auto _ : state)
        benchmark::DoNotOptimize(dlg::canonical_key(g));
}
BENCHMARK(bm_canonical_key)->Arg(6)->Arg(10);

void bm_antiunify(benchmark::State& state) {
    std::mt19937_64 rng(5);
    dlg::Graph g1 = random_graph(rng, static_cast<int>(state.range(0)), 0.15);
    dlg::Graph g2 = random_graph(rng, static_cast<int>(state.range(0)), 0.15);
    dlg::OperatorSpec op{dlg::Direction::down, dlg::Labeling::flat, false, std::nullopt,
                         {"a", "b", "c", "r", "s"}};
    for (auto _ : state)
        benchmark::DoNotOptimize(dlg::antiunify(g1, g2, op));
}
BENCHMARK(bm_antiunify)->Arg(4)->Arg(5);

void bm_disintegrate(benchmark::State& state) {
    std::mt19937_64 rng(6);
    dlg::Graph g = random_graph(rng, static_cast<int>(state.range(0)), 0.1);
    dlg::OperatorSpec op{dlg::Direction::up, dlg::Labeling::flat, false, std::nullopt,
                         {"a", "b", "c", "r", "s"}};
    for (auto _ : state) {
        state.PauseTiming();
        std::uint64_t seed = rng();
        state.ResumeTiming();
        benchmark::DoNotOptimize(dlg::disintegrate(g, op, seed));
    }
}
BENCHMARK(bm_disintegrate)->Arg(4)->Arg(5);

} // namespace

BENCHMARK_MAIN();
