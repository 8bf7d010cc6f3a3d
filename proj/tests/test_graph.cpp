#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"

using namespace depscope;
using namespace depscope::testing;

TEST_CASE("empty input builds an empty graph") {
    DepGraph g = DepGraph::build({});
    CHECK(g.size() == 0);
    CHECK(g.edge_count() == 0);
    CHECK(g.top_n(5, DepGraph::TopMode::direct).empty());
}

TEST_CASE("single edge") {
    auto g = graph_from({make_record("a", {"b"}), make_record("b")});
    CHECK(g.size() == 2);
    CHECK(g.forward(0) == std::vector<std::uint32_t>{1});
    CHECK(g.reverse(1) == std::vector<std::uint32_t>{0});
    CHECK(g.reverse(0).empty());
}

TEST_CASE("lenient build drops self-loops and duplicates with counts") {
    DepGraph::BuildStats stats;
    auto g = DepGraph::build({make_record("a", {"a", "b", "b"}), make_record("b")}, false,
                             &stats);
    CHECK(g.size() == 2);
    CHECK(g.edge_count() == 1);
    CHECK(stats.dropped_self_loops == 1);
    CHECK(stats.dropped_duplicates == 1);
    CHECK(stats.total_dropped() == 2);
}

TEST_CASE("strict build rejects bad metadata") {
    CHECK_THROWS_AS(DepGraph::build({make_record("a", {"a"})}, true), std::invalid_argument);
    CHECK_THROWS_AS(DepGraph::build({make_record("a", {"ghost"})}, true),
                    std::invalid_argument);
    CHECK_THROWS_AS(DepGraph::build({make_record("a"), make_record("a")}, true),
                    std::invalid_argument);
    // lenient mode counts unresolved deps instead
    DepGraph::BuildStats stats;
    auto g = DepGraph::build({make_record("a", {"ghost"})}, false, &stats);
    CHECK(g.edge_count() == 0);
    CHECK(stats.dropped_unresolved == 1);
}

TEST_CASE("neighbors on a chain") {
    auto g = graph_from({make_record("a", {"b"}), make_record("b", {"c"}), make_record("c")});
    CHECK(g.neighbors(1, Direction::dependents) == std::vector<std::uint32_t>{0});
    CHECK(g.neighbors(1, Direction::dependencies) == std::vector<std::uint32_t>{2});
    CHECK_THROWS_AS(g.neighbors(3, Direction::dependents), std::out_of_range);
}

TEST_CASE("neighbors of an isolated node are empty") {
    auto g = graph_from({make_record("x")});
    CHECK(g.neighbors(0, Direction::dependents).empty());
    CHECK(g.neighbors(0, Direction::dependencies).empty());
}

TEST_CASE("transitive closure on a chain") {
    auto g = graph_from({make_record("a", {"b"}), make_record("b", {"c"}), make_record("c")});
    CHECK(g.transitive_closure(2, Direction::dependents) ==
          std::vector<std::uint32_t>{0, 1});
    CHECK(g.transitive_closure(0, Direction::dependencies) ==
          std::vector<std::uint32_t>{1, 2});
}

TEST_CASE("closure excludes the start node even on a cycle") {
    auto g = graph_from({make_record("a", {"b"}), make_record("b", {"a"})});
    CHECK(g.transitive_closure(0, Direction::dependencies) == std::vector<std::uint32_t>{1});
    CHECK(g.transitive_closure(0, Direction::dependents) == std::vector<std::uint32_t>{1});
}

TEST_CASE("top_n on a star") {
    std::vector<PackageRecord> records{make_record("hub")};
    for (int i = 1; i <= 5; ++i)
        records.push_back(make_record("x" + std::to_string(i), {"hub"}));
    auto g = graph_from(std::move(records));
    auto top = g.top_n(1, DepGraph::TopMode::direct);
    REQUIRE(top.size() == 1);
    CHECK(g.record(top[0].first).name == "hub");
    CHECK(top[0].second == 5);
}

TEST_CASE("top_n transitive on a chain") {
    auto g = graph_from({make_record("a", {"b"}), make_record("b", {"c"}), make_record("c")});
    auto top = g.top_n(3, DepGraph::TopMode::transitive);
    REQUIRE(top.size() == 3);
    CHECK(g.record(top[0].first).name == "c");
    CHECK(top[0].second == 2);
    CHECK(g.record(top[1].first).name == "b");
    CHECK(top[1].second == 1);
    CHECK(top[2].second == 0);
}

TEST_CASE("top_n ties break by ascending name") {
    std::vector<PackageRecord> records{make_record("beta"), make_record("alpha")};
    for (int i = 0; i < 3; ++i) {
        records.push_back(make_record("da" + std::to_string(i), {"alpha"}));
        records.push_back(make_record("db" + std::to_string(i), {"beta"}));
    }
    auto g = graph_from(std::move(records));
    auto top = g.top_n(2, DepGraph::TopMode::direct);
    CHECK(g.record(top[0].first).name == "alpha");
    CHECK(g.record(top[1].first).name == "beta");
}

TEST_CASE("edge mirror and closure-superset invariants on random graphs") {
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        auto g = random_graph(40, 0.08, seed);
        for (std::uint32_t i = 0; i < g.size(); ++i) {
            for (std::uint32_t j : g.forward(i)) {
                const auto& rev = g.reverse(j);
                CHECK(std::binary_search(rev.begin(), rev.end(), i));
            }
            for (std::uint32_t j : g.reverse(i)) {
                const auto& fwd = g.forward(j);
                CHECK(std::binary_search(fwd.begin(), fwd.end(), i));
            }
            for (auto dir : {Direction::dependencies, Direction::dependents}) {
                auto closure = g.transitive_closure(i, dir);
                for (std::uint32_t nb : g.neighbors(i, dir))
                    CHECK(std::binary_search(closure.begin(), closure.end(), nb));
            }
        }
    }
}

TEST_CASE("top_n direct counts match a brute-force recount") {
    auto g = random_graph(60, 0.05, 99);
    auto top = g.top_n(60, DepGraph::TopMode::direct);
    for (const auto& [pkg, count] : top) {
        std::size_t brute = 0;
        for (std::uint32_t i = 0; i < g.size(); ++i) {
            const auto& fwd = g.forward(i);
            if (std::binary_search(fwd.begin(), fwd.end(), pkg)) ++brute;
        }
        CHECK(count == brute);
    }
}

TEST_CASE("rebuilding from a graph's own records is a fixpoint") {
    auto g = random_graph(30, 0.1, 7);
    auto g2 = DepGraph::build(g.records(), true);
    REQUIRE(g2.size() == g.size());
    for (std::uint32_t i = 0; i < g.size(); ++i) {
        CHECK(g2.forward(i) == g.forward(i));
        CHECK(g2.reverse(i) == g.reverse(i));
    }
}
