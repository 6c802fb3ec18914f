#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>

#include "bibnet/graph.hpp"
#include "support/oracles.hpp"

using bibnet::Graph;
using bibnet::Link;
using bibnet::NodeId;

TEST_CASE("build sorts, deduplicates and indexes links") {
    Graph g = Graph::build({{2, 1}, {0, 1}, {2, 1}, {1, 2}}, true);
    CHECK(g.node_count() == 3);
    CHECK(g.link_count() == 3); // duplicate (2,1) collapsed
    CHECK(g.directed());
    CHECK(g.has_link(0, 1));
    CHECK(g.has_link(1, 2));
    CHECK(g.has_link(2, 1));
    CHECK_FALSE(g.has_link(1, 0));
    const auto nbr = g.out_neighbors(1);
    CHECK(std::is_sorted(nbr.begin(), nbr.end()));
}

TEST_CASE("undirected links are direction-free and stored once") {
    Graph g = Graph::build({{1, 0}, {0, 1}, {2, 0}}, false);
    CHECK(g.link_count() == 2);
    CHECK(g.has_link(0, 1));
    CHECK(g.has_link(1, 0));
    CHECK(g.degree(0) == 2);
    CHECK(g.in_neighbors(0).size() == g.out_neighbors(0).size());
}

TEST_CASE("empty input and disallowed self-loops are rejected") {
    CHECK_THROWS_AS(Graph::build({}, true), bibnet::InputError);
    CHECK_THROWS_AS(Graph::build({{1, 1}}, true), bibnet::InputError);
    CHECK_THROWS_AS(Graph::build({{0, 1}, {2, 2}}, false), bibnet::InputError);
    CHECK_THROWS_WITH(Graph::build({{3, 3}}, true), Catch::Matchers::ContainsSubstring("3"));
}

TEST_CASE("directed self-loops are retained when allowed") {
    Graph g = Graph::build({{0, 0}, {0, 1}, {1, 1}}, true, true);
    CHECK(g.link_count() == 3);
    CHECK(g.self_loop_count() == 2);
    CHECK(g.has_self_loop(0));
    CHECK(g.has_self_loop(1));
    CHECK(g.in_degree(1) == 2);
    CHECK(g.out_degree(1) == 1);
}

TEST_CASE("min_node_count pads isolated trailing nodes") {
    Graph g = Graph::build({{0, 1}}, false, false, 5);
    CHECK(g.node_count() == 5);
    CHECK(g.degree(4) == 0);
}

TEST_CASE("transpose adjacency is exact on random directed graphs") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 10; ++round) {
        Graph g = oracle::random_directed(60, 300, rng);
        for (NodeId v = 0; v < g.node_count(); ++v) {
            std::vector<NodeId> expected;
            for (NodeId u = 0; u < g.node_count(); ++u)
                if (g.has_link(u, v)) expected.push_back(u);
            const auto got = g.in_neighbors(v);
            REQUIRE(std::vector<NodeId>(got.begin(), got.end()) == expected);
        }
    }
}

TEST_CASE("degree identities hold") {
    std::mt19937_64 rng(11);
    Graph g = oracle::random_directed(80, 400, rng, true);
    std::size_t in_sum = 0, out_sum = 0;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        in_sum += g.in_degree(v);
        out_sum += g.out_degree(v);
        CHECK(g.degree(v) == g.in_degree(v) + g.out_degree(v));
    }
    CHECK(in_sum == g.link_count());
    CHECK(out_sum == g.link_count());
}

TEST_CASE("largest weakly connected component matches brute force") {
    std::mt19937_64 rng(13);
    for (int round = 0; round < 20; ++round) {
        const bool directed = round % 2 == 0;
        auto links = oracle::gnp_links(50, 0.03, rng, directed);
        if (links.empty()) links.push_back({0, 1});
        Graph g = Graph::build(std::move(links), directed, false, 50);
        CHECK(bibnet::largest_wcc(g).fraction ==
              Catch::Approx(oracle::brute_wcc_fraction(g)).epsilon(0));
    }
}

TEST_CASE("wcc membership is consistent") {
    Graph g = Graph::build({{0, 1}, {1, 2}, {3, 4}}, true);
    const auto wcc = bibnet::largest_wcc(g);
    CHECK(wcc.nodes == std::vector<NodeId>{0, 1, 2});
    CHECK(wcc.fraction == Catch::Approx(0.6));
    for (NodeId v = 0; v < g.node_count(); ++v)
        CHECK(static_cast<bool>(wcc.member[v]) ==
              (std::find(wcc.nodes.begin(), wcc.nodes.end(), v) != wcc.nodes.end()));
}

TEST_CASE("wcc ties break toward the smallest node id") {
    Graph g = Graph::build({{0, 1}, {2, 3}}, false);
    CHECK(bibnet::largest_wcc(g).nodes == std::vector<NodeId>{0, 1});
}

TEST_CASE("degree-mode bow-tie classifies sources, sinks and core") {
    // 0 -> 1 -> 2 -> 1 (cycle), 2 -> 3; node 4 isolated from the wcc: 4 -> 5.
    Graph g = Graph::build({{0, 1}, {1, 2}, {2, 1}, {2, 3}, {4, 5}}, true);
    const auto bt = bibnet::bow_tie(g);
    CHECK(bt.wcc == Catch::Approx(4.0 / 6.0));
    CHECK(bt.in == Catch::Approx(1.0 / 6.0));   // node 0
    CHECK(bt.core == Catch::Approx(2.0 / 6.0)); // 1 and 2
    CHECK(bt.out == Catch::Approx(1.0 / 6.0));  // node 3
    CHECK(bt.in + bt.core + bt.out == Catch::Approx(bt.wcc).epsilon(0));
}

TEST_CASE("degree-mode bow-tie ignores self-loops") {
    // Node 0 only cites itself and node 1: still a source.
    Graph g = Graph::build({{0, 0}, {0, 1}, {1, 2}}, true, true);
    const auto bt = bibnet::bow_tie(g);
    CHECK(bt.in == Catch::Approx(1.0 / 3.0));
    CHECK(bt.out == Catch::Approx(1.0 / 3.0));
    CHECK(bt.core == Catch::Approx(1.0 / 3.0));
}

TEST_CASE("bow-tie fractions partition the component on random graphs") {
    std::mt19937_64 rng(17);
    for (int round = 0; round < 10; ++round) {
        Graph g = oracle::random_directed(70, 250, rng);
        const auto bt = bibnet::bow_tie(g);
        CHECK(bt.in + bt.core + bt.out == Catch::Approx(bt.wcc).margin(1e-12));
    }
}

TEST_CASE("scc-mode bow-tie finds the core and its ancestry") {
    // in: 0; core: 1,2,3 (cycle); out: 4; tendril off the in-part: 5 (0 -> 5).
    Graph g =
        Graph::build({{0, 1}, {1, 2}, {2, 3}, {3, 1}, {3, 4}, {0, 5}}, true);
    const auto bt = bibnet::bow_tie(g, bibnet::BowTieMode::scc);
    CHECK(bt.core == Catch::Approx(3.0 / 6.0));
    CHECK(bt.in == Catch::Approx(1.0 / 6.0));
    CHECK(bt.out == Catch::Approx(1.0 / 6.0));
    CHECK(bt.wcc == Catch::Approx(1.0));
    CHECK(bt.in + bt.core + bt.out < bt.wcc); // node 5 is an unclassified tendril
}

TEST_CASE("bow-tie requires direction") {
    Graph g = Graph::build({{0, 1}}, false);
    CHECK_THROWS_AS(bibnet::bow_tie(g), bibnet::PreconditionError);
}

TEST_CASE("undirected view collapses reciprocal links and drops self-loops") {
    Graph g = Graph::build({{0, 1}, {1, 0}, {1, 2}, {2, 2}}, true, true);
    Graph u = bibnet::undirected_view(g);
    CHECK_FALSE(u.directed());
    CHECK(u.node_count() == g.node_count());
    CHECK(u.link_count() == 2);
    CHECK(u.self_loop_count() == 0);
}

TEST_CASE("undirected view link set equals the symmetrized closure") {
    std::mt19937_64 rng(19);
    for (int round = 0; round < 10; ++round) {
        Graph g = oracle::random_directed(50, 200, rng, true);
        Graph u = bibnet::undirected_view(g);
        REQUIRE(u.node_count() == g.node_count());
        for (NodeId a = 0; a < g.node_count(); ++a)
            for (NodeId b = 0; b < g.node_count(); ++b) {
                const bool expected = a != b && (g.has_link(a, b) || g.has_link(b, a));
                REQUIRE(u.has_link(a, b) == expected);
            }
    }
}

TEST_CASE("undirected view of an undirected graph is the graph itself") {
    Graph g = Graph::build({{0, 1}, {1, 2}}, false);
    Graph u = bibnet::undirected_view(g);
    CHECK_FALSE(u.directed());
    CHECK(u.link_count() == g.link_count());
    CHECK(u.node_count() == g.node_count());
}

TEST_CASE("undirected view of a loops-only graph is rejected") {
    Graph g = Graph::build({{0, 0}}, true, true);
    CHECK_THROWS_AS(bibnet::undirected_view(g), bibnet::InputError);
}
