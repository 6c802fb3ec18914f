#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "bibnet/common.hpp"
#include "bibnet/graph.hpp"

namespace bibnet {

/// Kolmogorov-Smirnov distance between the empirical distributions of two
/// value sequences (inputs need not be sorted). Throws on empty input.
inline double ks_distance(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty())
        throw PreconditionError("KS distance needs two non-empty sequences");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    double best = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        best = std::max(best, std::abs(static_cast<double>(i) / na -
                                       static_cast<double>(j) / nb));
    }
    return best;
}

/// A connected node sample with the induced links of the original graph
/// (original directionality and self-loops restored).
struct Sample {
    std::vector<NodeId> node_ids;   ///< sorted original node ids
    std::vector<Link> induced_links;
    double ks = 0.0;                ///< degree-distribution distance to the full graph
    std::uint64_t seed = 0;
    bool truncated = false;         ///< largest component was smaller than requested
};

namespace detail {

/// Degree sequence of a graph's undirected skeleton, the yardstick both
/// full graphs and samples are reduced to before comparing.
inline std::vector<double> skeleton_degrees(const Graph& g) {
    const Graph local = g.directed() ? undirected_view(g) : Graph();
    const Graph& u = g.directed() ? local : g;
    std::vector<double> k(u.node_count());
    for (NodeId v = 0; v < u.node_count(); ++v) k[v] = static_cast<double>(u.degree(v));
    return k;
}

/// Random walk over `skeleton` restricted to the component `wcc`,
/// restarting to an already-visited node with probability 0.15 (and at
/// dead ends), until `size` distinct nodes are visited. Returns visited
/// ids in visit order.
inline std::vector<NodeId> walk_nodes(const Graph& skeleton, const WccResult& wcc,
                                      std::size_t size, std::mt19937_64& rng,
                                      bool* truncated) {
    std::vector<NodeId> visited;
    if (wcc.nodes.size() <= size) {
        *truncated = wcc.nodes.size() < size;
        return wcc.nodes;
    }
    *truncated = false;
    std::vector<char> seen(skeleton.node_count(), 0);
    NodeId current = wcc.nodes[next_below(rng, wcc.nodes.size())];
    seen[current] = 1;
    visited.push_back(current);
    constexpr double restart = 0.15;
    while (visited.size() < size) {
        const auto nbr = skeleton.neighbors(current);
        if (nbr.empty() || next_unit(rng) < restart) {
            current = visited[next_below(rng, visited.size())];
            continue;
        }
        current = nbr[next_below(rng, nbr.size())];
        if (!seen[current]) {
            seen[current] = 1;
            visited.push_back(current);
        }
    }
    return visited;
}

/// Induced undirected-skeleton degrees of a node set, via membership mask.
inline std::vector<double> induced_degrees(const Graph& skeleton,
                                           const std::vector<NodeId>& nodes,
                                           std::vector<char>& mask) {
    for (NodeId u : nodes) mask[u] = 1;
    std::vector<double> k;
    k.reserve(nodes.size());
    for (NodeId u : nodes) {
        std::size_t d = 0;
        for (NodeId v : skeleton.neighbors(u))
            if (mask[v]) ++d;
        k.push_back(static_cast<double>(d));
    }
    for (NodeId u : nodes) mask[u] = 0;
    return k;
}

inline Sample finish_sample(const Graph& g, std::vector<NodeId> nodes, double ks,
                            std::uint64_t seed, bool truncated, std::vector<char>& mask) {
    Sample s;
    s.node_ids = std::move(nodes);
    std::sort(s.node_ids.begin(), s.node_ids.end());
    s.ks = ks;
    s.seed = seed;
    s.truncated = truncated;
    for (NodeId u : s.node_ids) mask[u] = 1;
    for (NodeId u : s.node_ids)
        for (NodeId v : g.out_neighbors(u))
            if (mask[v] && (g.directed() || u <= v)) s.induced_links.push_back({u, v});
    for (NodeId u : s.node_ids) mask[u] = 0;
    return s;
}

} // namespace detail

/// Draws one random-walk sample of `size` distinct nodes (see
/// detail::walk_nodes) and scores it by the KS distance between its
/// induced degree sequence and the full graph's. If the largest component
/// is smaller than `size` the whole component is returned, flagged.
inline Sample random_walk_sample(const Graph& g, std::size_t size = 250,
                                 std::uint64_t seed = 42) {
    if (size < 2) throw PreconditionError("sample size must be at least 2");
    const Graph local = g.directed() ? undirected_view(g) : Graph();
    const Graph& skeleton = g.directed() ? local : g;
    const WccResult wcc = largest_wcc(skeleton);
    if (wcc.nodes.size() < 2)
        throw PreconditionError("sampling needs a component of at least 2 nodes");

    std::mt19937_64 rng(seed);
    bool truncated = false;
    std::vector<NodeId> nodes = detail::walk_nodes(skeleton, wcc, size, rng, &truncated);
    std::vector<char> mask(skeleton.node_count(), 0);
    const double ks = ks_distance(detail::induced_degrees(skeleton, nodes, mask),
                                  detail::skeleton_degrees(g));
    return detail::finish_sample(g, std::move(nodes), ks, seed, truncated, mask);
}

/// Draws `n_samples` random-walk samples with derived seeds (seed + index)
/// and returns the one whose induced degree sequence is closest to the
/// full graph's in KS distance; ties break toward the lower index. When
/// `all_ks` is given it receives every sample's distance, in index order.
inline Sample best_sample(const Graph& g, std::size_t n_samples = 5000,
                          std::size_t size = 250, std::uint64_t seed = 42,
                          std::vector<double>* all_ks = nullptr) {
    if (n_samples < 1) throw PreconditionError("need at least one sample");
    if (size < 2) throw PreconditionError("sample size must be at least 2");
    const Graph local = g.directed() ? undirected_view(g) : Graph();
    const Graph& skeleton = g.directed() ? local : g;
    const WccResult wcc = largest_wcc(skeleton);
    if (wcc.nodes.size() < 2)
        throw PreconditionError("sampling needs a component of at least 2 nodes");

    const std::vector<double> full_degrees = detail::skeleton_degrees(g);
    std::vector<char> mask(skeleton.node_count(), 0);
    if (all_ks) all_ks->clear();

    std::vector<NodeId> best_nodes;
    double best_ks = 0.0;
    bool best_truncated = false;
    std::uint64_t best_seed = 0;
    for (std::size_t i = 0; i < n_samples; ++i) {
        const std::uint64_t sample_seed = seed + i;
        std::mt19937_64 rng(sample_seed);
        bool truncated = false;
        std::vector<NodeId> nodes = detail::walk_nodes(skeleton, wcc, size, rng, &truncated);
        const double ks = ks_distance(detail::induced_degrees(skeleton, nodes, mask),
                                      full_degrees);
        if (all_ks) all_ks->push_back(ks);
        if (best_nodes.empty() || ks < best_ks) {
            best_nodes = std::move(nodes);
            best_ks = ks;
            best_truncated = truncated;
            best_seed = sample_seed;
        }
    }
    return detail::finish_sample(g, std::move(best_nodes), best_ks, best_seed,
                                 best_truncated, mask);
}

} // namespace bibnet
