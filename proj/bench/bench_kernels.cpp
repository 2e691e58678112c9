// Serial reference vs OpenMP kernels. Thread count follows OMP_NUM_THREADS.

#include <benchmark/benchmark.h>

#include "oe/embedding.hpp"
#include "oe/kernels.hpp"
#include "oe/lattice.hpp"
#include "oe/objectives.hpp"
#include "oe/synth.hpp"

namespace {

using namespace oe;

Exec exec_of(const benchmark::State& state) { return state.range(0) ? Exec::parallel : Exec::serial; }

const OntologyGraph& graph() {
    static const OntologyGraph g = [] {
        Rng rng(1);
        return synth::random_dag(3000, 0.002, rng);
    }();
    return g;
}

void BM_AncestorLists(benchmark::State& state) {
    const auto& g = graph();
    for (auto _ : state) benchmark::DoNotOptimize(kernels::ancestor_lists(g, exec_of(state)));
    state.SetLabel(exec_of(state) == Exec::parallel ? "parallel" : "serial");
}
BENCHMARK(BM_AncestorLists)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_NearestWitnesses(benchmark::State& state) {
    static const Reachability reach = compute_reachability(graph());
    static const PairSelection sel = [] {
        Rng rng(2);
        return select_incomparable_pairs(reach, 20000, rng);
    }();
    for (auto _ : state) benchmark::DoNotOptimize(kernels::nearest_witnesses(reach, sel.pairs, exec_of(state)));
    state.SetLabel(exec_of(state) == Exec::parallel ? "parallel" : "serial");
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(sel.pairs.size()));
}
BENCHMARK(BM_NearestWitnesses)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

struct ScoreFixture {
    EmbeddingTable table;
    BilinearParams params;
    std::vector<std::pair<PhraseRef, PhraseRef>> pairs;

    ScoreFixture() {
        Rng rng(3);
        table = init_table(50000, 50, rng, 1.0);
        params = init_bilinear(50, rng);
        for (int i = 0; i < 200000; ++i) {
            PhraseRef a{{static_cast<TokenId>(uniform_index(rng, 50000))}};
            PhraseRef b{{static_cast<TokenId>(uniform_index(rng, 50000)),
                         static_cast<TokenId>(uniform_index(rng, 50000))}};
            pairs.emplace_back(std::move(a), std::move(b));
        }
    }
};

const ScoreFixture& scores() {
    static const ScoreFixture f;
    return f;
}

void BM_OrderEnergies(benchmark::State& state) {
    const auto& f = scores();
    for (auto _ : state) benchmark::DoNotOptimize(kernels::order_energies(f.table, f.pairs, exec_of(state)));
    state.SetLabel(exec_of(state) == Exec::parallel ? "parallel" : "serial");
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.pairs.size()));
}
BENCHMARK(BM_OrderEnergies)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_BilinearScores(benchmark::State& state) {
    const auto& f = scores();
    for (auto _ : state)
        benchmark::DoNotOptimize(kernels::bilinear_scores(f.table, f.params, f.pairs, exec_of(state)));
    state.SetLabel(exec_of(state) == Exec::parallel ? "parallel" : "serial");
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(f.pairs.size()));
}
BENCHMARK(BM_BilinearScores)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
