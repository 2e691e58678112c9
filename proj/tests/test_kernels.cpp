#include <doctest.h>

#include <omp.h>

#include "oe/embedding.hpp"
#include "oe/kernels.hpp"
#include "oe/lattice.hpp"
#include "oe/objectives.hpp"
#include "support/oracles.hpp"

using namespace oe;

TEST_CASE("ancestor lists: serial equals parallel equals oracle") {
    Rng rng(41);
    for (int threads : {1, 3, 8}) {
        omp_set_num_threads(threads);
        auto g = oracle::random_dag(150, 0.03, rng);
        auto serial = kernels::ancestor_lists(g, Exec::serial);
        auto parallel = kernels::ancestor_lists(g, Exec::parallel);
        CHECK(serial == parallel);
        auto r = oracle::reachability(g);
        for (std::size_t a = 0; a < r.size(); ++a) {
            std::vector<ConceptId> want;
            for (std::size_t b = 0; b < r.size(); ++b)
                if (r[a][b]) want.push_back(static_cast<ConceptId>(b));
            CHECK(serial[a] == want);
        }
    }
}

TEST_CASE("nearest witnesses: serial equals parallel") {
    omp_set_num_threads(4);
    Rng rng(42);
    auto g = oracle::random_dag(120, 0.05, rng);
    auto reach = compute_reachability(g);
    Rng pick(1);
    auto sel = select_incomparable_pairs(reach, 2000, pick);
    auto s = kernels::nearest_witnesses(reach, sel.pairs, Exec::serial);
    auto p = kernels::nearest_witnesses(reach, sel.pairs, Exec::parallel);
    REQUIRE(s.size() == p.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(s[i].common_children == p[i].common_children);
        CHECK(s[i].common_parents == p[i].common_parents);
    }
}

TEST_CASE("scoring kernels: serial equals parallel bitwise") {
    omp_set_num_threads(4);
    Rng rng(43);
    auto table = init_table(50, 7, rng, 1.0);
    auto params = init_bilinear(7, rng, 0.3);
    std::vector<std::pair<PhraseRef, PhraseRef>> pairs;
    for (int i = 0; i < 997; ++i) {
        PhraseRef a{{static_cast<TokenId>(uniform_index(rng, 50))}};
        PhraseRef b{{static_cast<TokenId>(uniform_index(rng, 50)), static_cast<TokenId>(uniform_index(rng, 50))}};
        pairs.emplace_back(a, b);
    }
    auto es = kernels::order_energies(table, pairs, Exec::serial);
    CHECK(es == kernels::order_energies(table, pairs, Exec::parallel));
    auto bs = kernels::bilinear_scores(table, params, pairs, Exec::serial);
    CHECK(bs == kernels::bilinear_scores(table, params, pairs, Exec::parallel));
    for (std::size_t i = 0; i < pairs.size(); i += 97)
        CHECK(es[i] == order_energy(lookup_phrase(table, pairs[i].first), lookup_phrase(table, pairs[i].second)));
}
