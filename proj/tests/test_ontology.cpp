#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "oe/error.hpp"
#include "oe/ontology.hpp"
#include "support/oracles.hpp"

using namespace oe;

namespace {

IngestResult ingest(const std::string& text, std::string_view rel = "IsA") {
    std::istringstream in(text);
    return ingest_triplets(in, rel);
}

std::string serialize(const OntologyGraph& g, bool prov = false) {
    std::ostringstream os;
    write_triplets(g, os, prov);
    return os.str();
}

std::vector<std::string> sorted_lines(const std::string& s) {
    std::vector<std::string> lines;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    std::sort(lines.begin(), lines.end());
    return lines;
}

}  // namespace

TEST_CASE("ingest keeps the filtered relation with child=term1, parent=term2") {
    auto r = ingest("diabetes\tIsA\tchronic health condition\n");
    REQUIRE(r.graph.num_edges() == 1);
    CHECK(r.graph.num_concepts() == 2);
    const auto& e = r.graph.edges()[0];
    CHECK(r.graph.concepts().name(e.child) == "diabetes");
    CHECK(r.graph.concepts().name(e.parent) == "chronic health condition");
}

TEST_CASE("ingest filters relations, skips comments and normalizes terms") {
    auto r = ingest("# header\ncoral  Reefs\tIsA\tDelicate ecosystems\nroom\tHasA\tdoor\n");
    CHECK(r.graph.num_edges() == 1);
    CHECK(r.filtered_out == 1);
    CHECK(r.graph.concepts().find("coral reefs").has_value());
    CHECK(r.graph.concepts().find("delicate ecosystems").has_value());
    CHECK(ingest("fantasy_life.n.01\tIsA\timagination.n.01\n").graph.concepts().find("fantasy_life.n.01"));
}

TEST_CASE("empty input is a distinct error") {
    CHECK_THROWS_AS(ingest(""), EmptyOntology);
    CHECK_THROWS_AS(ingest("a\tHasA\tb\n"), EmptyOntology);
}

TEST_CASE("malformed lines are reported with line numbers and skipped") {
    auto r = ingest("a\tIsA\tb\nbroken line\nc\tIsA\n");
    CHECK(r.graph.num_edges() == 1);
    REQUIRE(r.malformed.size() == 2);
    CHECK(r.malformed[0].line == 2);
    CHECK(r.malformed[1].line == 3);
}

TEST_CASE("a 2-cycle keeps the first edge and reports the dropped one") {
    auto r = ingest("a\tIsA\tb\nb\tIsA\ta\n");
    CHECK(r.graph.num_edges() == 1);
    CHECK(r.cycles_dropped == 1);
    CHECK(r.graph.concepts().name(r.graph.edges()[0].child) == "a");
}

TEST_CASE("longer cycles are broken at the closing edge; duplicates and self loops dropped") {
    auto r = ingest("a\tIsA\tb\nb\tIsA\tc\nc\tIsA\ta\na\tIsA\tb\nd\tIsA\td\n");
    CHECK(r.graph.num_edges() == 2);
    CHECK(r.cycles_dropped == 1);
    CHECK(r.duplicates_dropped == 1);
    CHECK(r.self_loops_dropped == 1);
    CHECK_NOTHROW(require_acyclic(r.graph));
}

TEST_CASE("adjacency mirrors the edge set in both directions") {
    auto g = ingest("a\tIsA\tb\na\tIsA\tc\nb\tIsA\tc\n").graph;
    for (const auto& e : g.edges()) {
        auto p = g.parents(e.child);
        auto c = g.children(e.parent);
        CHECK(std::find(p.begin(), p.end(), e.parent) != p.end());
        CHECK(std::find(c.begin(), c.end(), e.child) != c.end());
    }
    std::size_t up = 0, down = 0;
    for (ConceptId i = 0; i < g.num_concepts(); ++i) {
        up += g.parents(i).size();
        down += g.children(i).size();
    }
    CHECK(up == g.num_edges());
    CHECK(down == g.num_edges());
}

TEST_CASE("closure of the dog chain adds dog -> animal") {
    auto g = ingest("dog\tIsA\tmammal\nmammal\tIsA\tanimal\n").graph;
    auto c = transitive_closure(g);
    CHECK(c.num_edges() == 3);
    auto dog = *c.concepts().find("dog");
    auto animal = *c.concepts().find("animal");
    CHECK(c.has_edge(dog, animal));
    for (const auto& e : c.edges())
        CHECK(e.provenance == (e.child == dog && e.parent == animal ? Provenance::closure : Provenance::original));
}

TEST_CASE("closure of one edge is unchanged") {
    auto g = ingest("a\tIsA\tb\n").graph;
    CHECK(oracle::edge_set(transitive_closure(g)) == oracle::edge_set(g));
}

TEST_CASE("closure of an n-chain has n(n-1)/2 edges") {
    for (std::size_t n : {2u, 5u, 17u, 40u}) {
        std::string text;
        for (std::size_t i = 0; i + 1 < n; ++i)
            text += "c" + std::to_string(i) + "\tIsA\tc" + std::to_string(i + 1) + "\n";
        CHECK(transitive_closure(ingest(text).graph).num_edges() == n * (n - 1) / 2);
    }
}

TEST_CASE("closure and reduction match the reachability oracle on random DAGs") {
    Rng rng(123);
    for (int trial = 0; trial < 20; ++trial) {
        auto g = oracle::random_dag(30 + trial, 0.12, rng);
        auto reach = oracle::reachability(g);
        auto closure = transitive_closure(g);
        CHECK(oracle::edge_set(closure) == oracle::closure_pairs(reach));
        CHECK(oracle::edge_set(transitive_closure(closure)) == oracle::edge_set(closure));
        auto red = transitive_reduction(g);
        CHECK(oracle::closure_pairs(oracle::reachability(red)) == oracle::closure_pairs(reach));
        // Minimal: dropping any reduction edge changes reachability.
        for (std::size_t k = 0; k < red.num_edges(); ++k) {
            std::vector<TripletEdge> fewer(red.edges().begin(), red.edges().end());
            fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(k));
            OntologyGraph smaller(red.concepts(), fewer);
            CHECK(oracle::closure_pairs(oracle::reachability(smaller)) != oracle::closure_pairs(reach));
        }
    }
}

TEST_CASE("50-node closure and 30-node reduction against the oracle") {
    Rng rng(50);
    auto g50 = oracle::random_dag(50, 0.08, rng);
    CHECK(oracle::edge_set(transitive_closure(g50)) == oracle::closure_pairs(oracle::reachability(g50)));
    auto g30 = oracle::random_dag(30, 0.15, rng);
    auto r30 = oracle::reachability(g30);
    auto red = transitive_reduction(g30);
    CHECK(oracle::closure_pairs(oracle::reachability(red)) == oracle::closure_pairs(r30));
    CHECK(oracle::edge_set(red) == oracle::reduction_pairs(r30));
}

TEST_CASE("reduction removes redundant edges and is idempotent") {
    auto g = ingest("a\tIsA\tb\nb\tIsA\tc\na\tIsA\tc\n").graph;
    auto red = transitive_reduction(g);
    CHECK(red.num_edges() == 2);
    CHECK_FALSE(red.has_edge(*g.concepts().find("a"), *g.concepts().find("c")));
    CHECK(oracle::edge_set(transitive_reduction(red)) == oracle::edge_set(red));
}

TEST_CASE("cyclic graphs are rejected by closure and reduction") {
    ConceptTable names;
    names.intern("x");
    names.intern("y");
    names.intern("z");
    OntologyGraph g(names, {{0, 1}, {1, 2}, {2, 0}});
    CHECK_THROWS_AS(transitive_closure(g), CycleError);
    CHECK_THROWS_AS(transitive_reduction(g), CycleError);
    try {
        require_acyclic(g);
    } catch (const CycleError& e) {
        CHECK(std::string(e.what()).find("->") != std::string::npos);
    }
}

TEST_CASE("negative sampling: forced outcome on a tiny graph") {
    ConceptTable names;
    names.intern("a");
    names.intern("b");
    names.intern("c");
    OntologyGraph g(names, {{0, 1}});
    auto reach = compute_reachability(g);
    Rng rng(5);
    for (int i = 0; i < 50; ++i) {
        auto [x, y] = sample_negative_pair(reach, rng, g.edges()[0], CorruptSide::parent);
        CHECK(x == 0);
        CHECK(y == 2);
    }
}

TEST_CASE("negative sampling exhausts on a complete bipartite closure") {
    // Every child below every parent: no corruption of (c0, p0) escapes the closure.
    ConceptTable names;
    for (auto s : {"c0", "c1", "p0", "p1"}) names.intern(s);
    OntologyGraph g(names, {{0, 2}, {0, 3}, {1, 2}, {1, 3}, {0, 1}, {2, 3}});
    auto reach = compute_reachability(g);
    Rng rng(1);
    CHECK_THROWS_AS(sample_negative_pair(reach, rng, {0, 3}, CorruptSide::child), NegativeSamplingExhausted);
    CHECK_THROWS_AS(sample_negative_pair(reach, rng, {0, 3}, CorruptSide::parent), NegativeSamplingExhausted);
    CHECK_THROWS_AS(sample_negative_either(reach, rng, {0, 3}, CorruptSide::parent), NegativeSamplingExhausted);
}

TEST_CASE("negative into a root falls back to the other side") {
    auto g = ingest("a\tIsA\troot\nb\tIsA\troot\n").graph;
    auto reach = compute_reachability(g);
    Rng rng(3);
    auto a = *g.concepts().find("a");
    auto root = *g.concepts().find("root");
    CHECK_THROWS_AS(sample_negative_pair(reach, rng, {a, root}, CorruptSide::child), NegativeSamplingExhausted);
    auto [x, y] = sample_negative_either(reach, rng, {a, root}, CorruptSide::child);
    CHECK(x == a);
    CHECK_FALSE(reach.reaches(x, y));
}

TEST_CASE("sampled negatives never fall in the closure") {
    Rng dag_rng(77);
    auto g = oracle::random_dag(100, 0.05, dag_rng);
    auto reach = compute_reachability(g);
    auto r = oracle::reachability(g);
    Rng rng(9);
    std::size_t bad = 0;
    for (int i = 0; i < 10000; ++i) {
        const auto& e = g.edges()[static_cast<std::size_t>(i) % g.num_edges()];
        auto [x, y] = sample_negative_either(reach, rng, e, i % 2 ? CorruptSide::child : CorruptSide::parent);
        bad += (x == y || r[x][y]);
        auto [fx, fy] = sample_free_pair(reach, rng);
        bad += (fx == fy || r[fx][fy]);
    }
    CHECK(bad == 0);
}

TEST_CASE("serialization round-trips modulo line order") {
    const std::string text = "dog\tIsA\tmammal\ncat\tIsA\tmammal\nmammal\tIsA\tanimal\n";
    auto g = ingest(text).graph;
    CHECK(sorted_lines(serialize(g)) == sorted_lines(text));
    auto closure = transitive_closure(g);
    auto again = ingest(serialize(closure, true)).graph;
    CHECK(serialize(again, true) == serialize(closure, true));
}

TEST_CASE("random DAG serialization round-trip is byte identical after re-ingest") {
    Rng rng(31);
    auto g = oracle::random_dag(40, 0.1, rng);
    std::string once = serialize(g);
    std::string twice = serialize(ingest(once).graph);
    CHECK(sorted_lines(once) == sorted_lines(twice));
}
