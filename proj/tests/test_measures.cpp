#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "bibnet/measures.hpp"
#include "support/oracles.hpp"

using bibnet::DegreeRole;
using bibnet::Graph;
using bibnet::NodeId;

namespace {

/// Loopless degree per role, recomputed literally.
std::vector<double> ref_degrees(const Graph& g, DegreeRole role) {
    std::vector<double> k(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const std::size_t loop = g.directed() && g.has_self_loop(u) ? 1 : 0;
        if (role == DegreeRole::in)
            k[u] = static_cast<double>(g.in_degree(u) - loop);
        else if (role == DegreeRole::out)
            k[u] = static_cast<double>(g.out_degree(u) - loop);
        else
            k[u] = static_cast<double>(g.degree(u) - 2 * loop);
    }
    return k;
}

/// Reference mixing: two-pass Pearson over the explicit link list.
std::optional<double> ref_mixing(const Graph& g, DegreeRole alpha, DegreeRole beta) {
    const auto ka = ref_degrees(g, alpha);
    const auto kb = ref_degrees(g, beta);
    std::vector<std::pair<double, double>> samples;
    for (NodeId u = 0; u < g.node_count(); ++u)
        for (NodeId v : g.out_neighbors(u)) {
            if (u == v) continue;
            samples.emplace_back(ka[u], kb[v]);
            if (!g.directed()) samples.emplace_back(ka[v], kb[u]);
        }
    return oracle::pearson(samples);
}

} // namespace

TEST_CASE("power-law exponent hand cases") {
    // Two tail degrees k_min and e*k_min: gamma = 1 + 2 / ln(e) = 3.
    const std::vector<double> two{10.0, 10.0 * std::exp(1.0)};
    CHECK(bibnet::powerlaw_exponent(two, 10.0) == Catch::Approx(3.0).epsilon(1e-12));

    // Degrees below the cutoff are ignored.
    const std::vector<double> with_noise{1.0, 2.0, 10.0, 10.0 * std::exp(1.0), 3.0};
    CHECK(bibnet::powerlaw_exponent(with_noise, 10.0) == Catch::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("power-law exponent recovery from planted samples") {
    // Inverse-CDF sampling of a continuous power law with exponent 2.5.
    const double gamma = 2.5;
    std::mt19937_64 rng(123);
    std::vector<double> samples(100000);
    for (double& s : samples)
        s = 10.0 * std::pow(1.0 - bibnet::next_unit(rng), -1.0 / (gamma - 1.0));
    CHECK(bibnet::powerlaw_exponent(samples, 10.0) == Catch::Approx(2.5).margin(0.05));
}

TEST_CASE("power-law exponent error paths") {
    CHECK_THROWS_AS(bibnet::powerlaw_exponent(std::vector<double>{12.0}, 10.0),
                    bibnet::PreconditionError);
    CHECK_THROWS_AS(bibnet::powerlaw_exponent(std::vector<double>{10.0, 10.0, 10.0}, 10.0),
                    bibnet::PreconditionError); // degenerate tail
    CHECK_THROWS_AS(bibnet::powerlaw_exponent(std::vector<double>{1.0, 2.0}, 0.0),
                    bibnet::PreconditionError);
}

TEST_CASE("star graph is perfectly disassortative") {
    const Graph star = oracle::star_graph(20);
    const auto r = bibnet::degree_mixing(star, DegreeRole::total, DegreeRole::total);
    REQUIRE(r.has_value());
    CHECK(*r == -1.0); // exact, not approximate
}

TEST_CASE("degree mixing matches the explicit-link Pearson oracle") {
    std::mt19937_64 rng(31);
    const std::pair<DegreeRole, DegreeRole> cases[] = {
        {DegreeRole::in, DegreeRole::in},
        {DegreeRole::in, DegreeRole::out},
        {DegreeRole::out, DegreeRole::in},
        {DegreeRole::out, DegreeRole::out},
    };
    for (int round = 0; round < 8; ++round) {
        const Graph g = oracle::random_directed(120, 600, rng, true);
        for (const auto& [alpha, beta] : cases) {
            const auto got = bibnet::degree_mixing(g, alpha, beta);
            const auto want = ref_mixing(g, alpha, beta);
            REQUIRE(got.has_value() == want.has_value());
            if (want) CHECK(*got == Catch::Approx(*want).margin(1e-10));
        }
        const Graph u = bibnet::undirected_view(g);
        const auto got = bibnet::degree_mixing(u, DegreeRole::total, DegreeRole::total);
        const auto want = ref_mixing(u, DegreeRole::total, DegreeRole::total);
        REQUIRE(got.has_value() == want.has_value());
        if (want) CHECK(*got == Catch::Approx(*want).margin(1e-10));
    }
}

TEST_CASE("mixing on a constant-degree graph is undefined") {
    // A cycle: every degree is 2, so the correlation margin is constant.
    std::vector<bibnet::Link> links;
    for (NodeId v = 0; v < 8; ++v) links.push_back({v, static_cast<NodeId>((v + 1) % 8)});
    const Graph cycle = Graph::build(std::move(links), false);
    CHECK_FALSE(bibnet::degree_mixing(cycle, DegreeRole::total, DegreeRole::total).has_value());
}

TEST_CASE("clustering coefficient hand cases") {
    SECTION("triangle: everything closed") {
        const Graph g = oracle::complete_graph(3);
        const auto coef = bibnet::clustering_coefficients(g);
        for (NodeId v = 0; v < 3; ++v) {
            CHECK(coef.c[v] == 1.0);
            CHECK(coef.b[v] == 1.0);
            CHECK(coef.d[v] == 1.0);
        }
    }
    SECTION("path: no triangles anywhere") {
        const auto coef = bibnet::clustering_coefficients(oracle::path_graph(5));
        for (NodeId v = 0; v < 5; ++v) {
            CHECK(coef.c[v] == 0.0);
            CHECK(coef.b[v] == 0.0);
            CHECK(coef.d[v] == 0.0);
        }
    }
    SECTION("diamond: the degree-corrected variant saturates first") {
        // 0-1, 0-2, 1-2, 1-3, 2-3: node 0 closes its only neighbor pair.
        const Graph g = Graph::build({{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}}, false);
        const auto coef = bibnet::clustering_coefficients(g);
        CHECK(coef.c[0] == 1.0);
        CHECK(coef.b[0] == Catch::Approx(2.0 / 3.0));
        CHECK(coef.d[0] == 1.0);
        CHECK(coef.triangles[0] == 1);
    }
}

TEST_CASE("clustering matches brute-force enumeration exactly") {
    std::mt19937_64 rng(37);
    for (int round = 0; round < 12; ++round) {
        const Graph g = oracle::random_connected(80, 160, rng);
        const auto got = bibnet::clustering_coefficients(g);
        const auto want = oracle::brute_clustering(g);
        for (NodeId v = 0; v < g.node_count(); ++v) {
            REQUIRE(got.c[v] == want.c[v]);
            REQUIRE(got.b[v] == want.b[v]);
            REQUIRE(got.d[v] == want.d[v]);
            if (g.degree(v) >= 2) {
                REQUIRE(got.b[v] <= got.c[v]);
                REQUIRE(got.c[v] <= got.d[v]);
            }
        }
    }
}

TEST_CASE("clustering on a directed graph uses the undirected skeleton") {
    const Graph g = Graph::build({{0, 1}, {1, 0}, {1, 2}, {2, 0}}, true);
    const auto coef = bibnet::clustering_coefficients(g);
    for (NodeId v = 0; v < 3; ++v) CHECK(coef.c[v] == 1.0); // a triangle underneath
}

TEST_CASE("clustering mixing matches the oracle") {
    std::mt19937_64 rng(41);
    for (int round = 0; round < 6; ++round) {
        const Graph g = oracle::random_connected(70, 180, rng);
        const auto want_values = oracle::brute_clustering(g);
        const auto variants = {bibnet::ClusteringVariant::c, bibnet::ClusteringVariant::b,
                               bibnet::ClusteringVariant::d};
        std::size_t i = 0;
        for (const auto variant : variants) {
            const std::vector<double>& values =
                i == 0 ? want_values.c : i == 1 ? want_values.b : want_values.d;
            ++i;
            std::vector<std::pair<double, double>> samples;
            for (NodeId a = 0; a < g.node_count(); ++a)
                for (NodeId b : g.neighbors(a))
                    if (a < b) {
                        samples.emplace_back(values[a], values[b]);
                        samples.emplace_back(values[b], values[a]);
                    }
            const auto want = oracle::pearson(samples);
            const auto got = bibnet::clustering_mixing(g, variant);
            REQUIRE(got.has_value() == want.has_value());
            if (want) CHECK(*got == Catch::Approx(*want).margin(1e-10));
        }
    }
}

TEST_CASE("degree profiles partition the nodes") {
    std::mt19937_64 rng(43);
    const Graph g = oracle::random_connected(60, 90, rng);
    const auto rows = bibnet::degree_profiles(g);
    std::size_t total = 0;
    std::size_t prev = 0;
    for (const auto& row : rows) {
        if (total > 0) CHECK(row.degree > prev);
        prev = row.degree;
        total += row.count;
        if (row.degree > 0) CHECK(row.neighbor_connectivity.has_value());
    }
    CHECK(total == g.node_count());
}

TEST_CASE("star profile values") {
    const auto rows = bibnet::degree_profiles(oracle::star_graph(6));
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].degree == 1);
    CHECK(rows[0].count == 6);
    CHECK(*rows[0].neighbor_connectivity == 6.0); // every leaf sees the hub
    CHECK(rows[1].degree == 6);
    CHECK(rows[1].count == 1);
    CHECK(*rows[1].neighbor_connectivity == 1.0);
}

TEST_CASE("measure vector carries the canonical names in order") {
    std::mt19937_64 rng(47);
    const Graph directed = oracle::random_directed(40, 120, rng, true);
    const bibnet::MeasureVector dv = bibnet::measure_vector(directed);
    REQUIRE(dv.entries.size() == bibnet::directed_measure_names.size());
    for (std::size_t i = 0; i < dv.entries.size(); ++i)
        CHECK(dv.entries[i].first == bibnet::directed_measure_names[i]);

    const Graph undirected = oracle::random_connected(40, 80, rng);
    const bibnet::MeasureVector uv = bibnet::measure_vector(undirected);
    REQUIRE(uv.entries.size() == bibnet::undirected_measure_names.size());
    for (std::size_t i = 0; i < uv.entries.size(); ++i)
        CHECK(uv.entries[i].first == bibnet::undirected_measure_names[i]);
    CHECK_FALSE(uv.directed);
    CHECK(dv.directed);
}

TEST_CASE("measure vector basics are right on a hand graph") {
    // 0 -> 1 -> 2 -> 1, plus 3 -> 1: wcc = 1, core = {1, 2}.
    const Graph g = Graph::build({{0, 1}, {1, 2}, {2, 1}, {3, 1}}, true);
    bibnet::MeasureConfig mc;
    mc.anf_realizations = 4;
    const bibnet::MeasureVector mv = bibnet::measure_vector(g, mc);
    CHECK(*mv.value("wcc") == 1.0);
    CHECK(*mv.value("in") == 0.5);    // 0 and 3
    CHECK(*mv.value("core") == 0.5);  // 1 and 2
    CHECK(*mv.value("out") == 0.0);
    CHECK(*mv.value("mean_degree") == 2.0);
    CHECK_FALSE(mv.value("gamma").has_value()); // no tail at k_min = 10
    CHECK_THROWS_AS(mv.value("nope"), std::out_of_range);
}

TEST_CASE("measure vector JSON round trip preserves missing entries") {
    std::mt19937_64 rng(53);
    const Graph g = oracle::random_directed(30, 90, rng);
    bibnet::MeasureConfig mc;
    mc.anf_realizations = 4;
    const bibnet::MeasureVector mv = bibnet::measure_vector(g, mc);
    const auto j = mv.to_json();
    const bibnet::MeasureVector back = bibnet::MeasureVector::from_json(j, true);
    REQUIRE(back.entries.size() == mv.entries.size());
    for (std::size_t i = 0; i < mv.entries.size(); ++i) {
        CHECK(back.entries[i].first == mv.entries[i].first);
        CHECK(back.entries[i].second == mv.entries[i].second);
    }
    CHECK_THROWS_AS(bibnet::MeasureVector::from_json(nlohmann::json::object(), true),
                    bibnet::InputError);
}

TEST_CASE("measure vector is deterministic") {
    std::mt19937_64 rng(59);
    const Graph g = oracle::random_connected(200, 400, rng);
    const bibnet::MeasureVector a = bibnet::measure_vector(g);
    const bibnet::MeasureVector b = bibnet::measure_vector(g);
    for (std::size_t i = 0; i < a.entries.size(); ++i)
        CHECK(a.entries[i].second == b.entries[i].second);
}
