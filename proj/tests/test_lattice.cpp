#include <doctest.h>

#include <sstream>

#include "oe/error.hpp"
#include "oe/lattice.hpp"
#include "support/oracles.hpp"

using namespace oe;

namespace {

std::set<oracle::Constraint> as_tuples(const std::vector<JoinMeetConstraint>& cs) {
    std::set<oracle::Constraint> s;
    for (const auto& c : cs) s.emplace(c.kind == ConstraintKind::common_child ? 0 : 1, c.w1, c.w2, c.witness);
    return s;
}

OntologyGraph named(std::vector<std::string> names, std::vector<std::pair<int, int>> edges) {
    ConceptTable t;
    for (auto& n : names) t.intern(n);
    std::vector<TripletEdge> es;
    for (auto [c, p] : edges) es.push_back({ConceptId(c), ConceptId(p)});
    return OntologyGraph(std::move(t), std::move(es));
}

}  // namespace

TEST_CASE("diamond yields one join and one meet constraint") {
    // bottom -> left, bottom -> right, left -> top, right -> top
    auto g = named({"bottom", "left", "right", "top"}, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
    Rng rng(1);
    auto cs = mine_constraints(g, 1000, rng);
    auto counts = count_by_kind(cs);
    CHECK(counts.common_child == 1);
    CHECK(counts.common_parent == 1);
    for (const auto& c : cs) {
        CHECK(c.w1 == 1);
        CHECK(c.w2 == 2);
        CHECK(c.witness == (c.kind == ConstraintKind::common_child ? 0u : 3u));
    }
}

TEST_CASE("a chain has no incomparable pairs") {
    auto g = named({"a", "b", "c", "d"}, {{0, 1}, {1, 2}, {2, 3}});
    Rng rng(1);
    CHECK(mine_constraints(g, 1000, rng).empty());
}

TEST_CASE("only nearest witnesses are kept") {
    // x and y share child c and grandchild gc; only c is nearest.
    auto g = named({"x", "y", "c", "gc"}, {{2, 0}, {2, 1}, {3, 2}});
    Rng rng(1);
    auto cs = mine_constraints(g, 1000, rng);
    REQUIRE(cs.size() == 1);
    CHECK(cs[0].witness == 2);
}

TEST_CASE("miner matches the brute-force oracle on random DAGs") {
    Rng dag_rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        auto g = oracle::random_dag(8 + trial, 0.2, dag_rng);
        Rng rng(trial);
        auto cs = mine_constraints(g, 1u << 20, rng);
        CHECK(as_tuples(cs) == oracle::nearest_constraints(oracle::reachability(g)));
        CHECK(std::is_sorted(cs.begin(), cs.end()));
        CHECK(std::adjacent_find(cs.begin(), cs.end()) == cs.end());
    }
}

TEST_CASE("pair sampling is seeded, bounded and only draws incomparable pairs") {
    Rng dag_rng(5);
    auto g = oracle::random_dag(60, 0.05, dag_rng);
    auto reach = compute_reachability(g);
    for (std::size_t cap : {10u, 100u, 500u}) {
        Rng a(3), b(3);
        auto s1 = select_incomparable_pairs(reach, cap, a);
        auto s2 = select_incomparable_pairs(reach, cap, b);
        CHECK(s1.pairs == s2.pairs);
        CHECK(s1.pairs.size() == std::min(cap, s1.incomparable_total));
        CHECK(std::is_sorted(s1.pairs.begin(), s1.pairs.end()));
        for (auto [x, y] : s1.pairs) {
            CHECK(x < y);
            CHECK_FALSE(reach.comparable(x, y));
        }
    }
}

TEST_CASE("mining a cyclic graph raises a cycle error") {
    auto g = named({"a", "b"}, {{0, 1}, {1, 0}});
    Rng rng(1);
    CHECK_THROWS_AS(mine_constraints(g, 10, rng), CycleError);
}

TEST_CASE("emit and parse round-trip") {
    Rng dag_rng(8);
    auto g = oracle::random_dag(20, 0.2, dag_rng);
    Rng rng(1);
    auto cs = mine_constraints(g, 1000, rng);
    REQUIRE_FALSE(cs.empty());
    std::stringstream buf;
    emit_constraints(cs, g.concepts(), buf);
    auto back = parse_constraints(buf, g.concepts());
    std::sort(back.begin(), back.end());
    CHECK(back == cs);
    std::istringstream bad("common_child\tv1\tnope\tv2\n");
    CHECK_THROWS_AS(parse_constraints(bad, g.concepts()), ParseError);
    CHECK(parse_constraint_kind("common_parent") == ConstraintKind::common_parent);
    CHECK_FALSE(parse_constraint_kind("other"));
}

TEST_CASE("diamond with a root and a leaf") {
    // a and b are both below root r and above leaf l.
    auto g = named({"r", "a", "b", "l"}, {{1, 0}, {2, 0}, {3, 1}, {3, 2}});
    Rng rng(1);
    auto cs = mine_constraints(g, 10, rng);
    REQUIRE(cs.size() == 2);
    CHECK(cs[0] == JoinMeetConstraint{1, 2, ConstraintKind::common_child, 3});
    CHECK(cs[1] == JoinMeetConstraint{1, 2, ConstraintKind::common_parent, 0});
    std::ostringstream out;
    emit_constraints(cs, g.concepts(), out);
    CHECK(out.str() == "common_child\ta\tb\tl\ncommon_parent\ta\tb\tr\n");
    std::ostringstream empty;
    emit_constraints({}, g.concepts(), empty);
    CHECK(empty.str().empty());
}

TEST_CASE("40-node DAG: oracle equality and emit/parse round-trip") {
    Rng dag_rng(40);
    auto g = oracle::random_dag(40, 0.1, dag_rng);
    Rng rng(1);
    auto cs = mine_constraints(g, 1u << 20, rng);
    CHECK(as_tuples(cs) == oracle::nearest_constraints(oracle::reachability(g)));
    std::stringstream buf;
    emit_constraints(cs, g.concepts(), buf);
    auto back = parse_constraints(buf, g.concepts());
    CHECK(as_tuples(back) == as_tuples(cs));
}
