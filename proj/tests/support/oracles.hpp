#pragma once

// Independent reference implementations and graph generators used to
// cross-check the library. Everything here favors the most literal,
// brute-force formulation over efficiency.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "bibnet/graph.hpp"

namespace oracle {

using bibnet::Graph;
using bibnet::Link;
using bibnet::NodeId;

// --- reference statistics ----------------------------------------------------------

/// Plain two-pass Pearson correlation over explicit sample pairs.
inline std::optional<double> pearson(const std::vector<std::pair<double, double>>& samples) {
    if (samples.size() < 2) return std::nullopt;
    const double n = static_cast<double>(samples.size());
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : samples) {
        mx += x;
        my += y;
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (const auto& [x, y] : samples) {
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
        sxy += (x - mx) * (y - my);
    }
    if (sxx == 0.0 || syy == 0.0) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

/// Spearman rank correlation (average ranks for ties).
inline std::optional<double> spearman(const std::vector<double>& a,
                                      const std::vector<double>& b) {
    auto rank_of = [](const std::vector<double>& x) {
        std::vector<std::size_t> order(x.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t i, std::size_t j) { return x[i] < x[j]; });
        std::vector<double> rank(x.size());
        std::size_t i = 0;
        while (i < order.size()) {
            std::size_t j = i;
            while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
            for (std::size_t k = i; k <= j; ++k)
                rank[order[k]] = static_cast<double>(i + j) / 2.0 + 1.0;
            i = j + 1;
        }
        return rank;
    };
    const auto ra = rank_of(a);
    const auto rb = rank_of(b);
    std::vector<std::pair<double, double>> samples;
    for (std::size_t i = 0; i < ra.size(); ++i) samples.emplace_back(ra[i], rb[i]);
    return pearson(samples);
}

// --- reference graph algorithms -----------------------------------------------------

/// Fraction of nodes in the largest weakly connected component, by
/// repeated whole-graph BFS.
inline double brute_wcc_fraction(const Graph& g) {
    const std::size_t n = g.node_count();
    std::vector<char> seen(n, 0);
    std::size_t best = 0;
    for (NodeId s = 0; s < n; ++s) {
        if (seen[s]) continue;
        std::size_t size = 0;
        std::deque<NodeId> queue{s};
        seen[s] = 1;
        while (!queue.empty()) {
            const NodeId v = queue.front();
            queue.pop_front();
            ++size;
            auto push = [&](NodeId w) {
                if (!seen[w]) {
                    seen[w] = 1;
                    queue.push_back(w);
                }
            };
            if (g.directed()) {
                for (NodeId w : g.out_neighbors(v)) push(w);
                for (NodeId w : g.in_neighbors(v)) push(w);
            } else {
                for (NodeId w : g.neighbors(v)) push(w);
            }
        }
        best = std::max(best, size);
    }
    return static_cast<double>(best) / static_cast<double>(n);
}

struct BruteClustering {
    std::vector<double> c, b, d;
};

/// Per-node clustering coefficients by literal neighbor-pair
/// enumeration on an undirected graph.
inline BruteClustering brute_clustering(const Graph& g) {
    const std::size_t n = g.node_count();
    std::size_t max_degree = 0;
    for (NodeId v = 0; v < n; ++v) max_degree = std::max(max_degree, g.degree(v));

    BruteClustering out;
    out.c.assign(n, 0.0);
    out.b.assign(n, 0.0);
    out.d.assign(n, 0.0);
    for (NodeId v = 0; v < n; ++v) {
        const auto nbrs = g.neighbors(v);
        const std::size_t k = nbrs.size();
        if (k <= 1) continue;
        std::uint64_t t = 0;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                if (g.has_link(nbrs[i], nbrs[j])) ++t;
        out.c[v] = 2.0 * static_cast<double>(t) /
                   (static_cast<double>(k) * static_cast<double>(k - 1));
        out.b[v] = out.c[v] * static_cast<double>(k) / static_cast<double>(max_degree);
        std::uint64_t reach = 0;
        for (NodeId w : nbrs) reach += std::min(g.degree(w) - 1, k - 1);
        const std::uint64_t omega = reach / 2;
        out.d[v] = omega == 0 ? 0.0 : static_cast<double>(t) / static_cast<double>(omega);
    }
    return out;
}

/// Exact hop plot of an undirected graph via all-pairs BFS: H[delta-1]
/// is the fraction of reachable ordered pairs within delta hops.
inline std::vector<double> exact_hop_plot(const Graph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::uint64_t> within; // ordered pairs at distance <= delta
    std::vector<std::uint32_t> dist(n);
    for (NodeId s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), UINT32_MAX);
        dist[s] = 0;
        std::deque<NodeId> queue{s};
        while (!queue.empty()) {
            const NodeId v = queue.front();
            queue.pop_front();
            for (NodeId w : g.neighbors(v))
                if (dist[w] == UINT32_MAX) {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
        }
        for (NodeId v = 0; v < n; ++v) {
            if (v == s || dist[v] == UINT32_MAX) continue;
            if (dist[v] > within.size()) within.resize(dist[v], 0);
            ++within[dist[v] - 1];
        }
    }
    std::vector<double> h(within.size());
    std::uint64_t cum = 0;
    std::uint64_t total = 0;
    for (std::uint64_t w : within) total += w;
    for (std::size_t i = 0; i < within.size(); ++i) {
        cum += within[i];
        h[i] = static_cast<double>(cum) / static_cast<double>(total);
    }
    return h;
}

/// Linear interpolation of the 90% point of a cumulative hop plot,
/// anchored at H(0) = 0.
inline double exact_delta90(const std::vector<double>& h) {
    double prev = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (h[i] >= 0.9)
            return static_cast<double>(i) + (0.9 - prev) / (h[i] - prev);
        prev = h[i];
    }
    return static_cast<double>(h.size());
}

// --- generators ---------------------------------------------------------------------

/// Erdos-Renyi style link sample. Returned links are unique; the graph
/// may be disconnected.
inline std::vector<Link> gnp_links(std::size_t n, double p, std::mt19937_64& rng,
                                   bool directed) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Link> links;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = directed ? 0 : u + 1; v < n; ++v) {
            if (u == v) continue;
            if (unit(rng) < p) links.push_back({u, v});
        }
    return links;
}

/// Connected undirected graph: a random spanning tree plus `extra`
/// random links.
inline Graph random_connected(std::size_t n, std::size_t extra, std::mt19937_64& rng) {
    std::vector<Link> links;
    std::uniform_int_distribution<std::size_t> any(0, n - 1);
    for (NodeId v = 1; v < n; ++v) {
        std::uniform_int_distribution<NodeId> earlier(0, v - 1);
        links.push_back({earlier(rng), v});
    }
    std::set<std::pair<NodeId, NodeId>> seen;
    for (const Link& l : links)
        seen.emplace(std::min(l.source, l.target), std::max(l.source, l.target));
    while (extra > 0) {
        const NodeId a = static_cast<NodeId>(any(rng));
        const NodeId b = static_cast<NodeId>(any(rng));
        if (a == b) continue;
        if (!seen.emplace(std::min(a, b), std::max(a, b)).second) continue;
        links.push_back({a, b});
        --extra;
    }
    return Graph::build(std::move(links), false);
}

inline Graph path_graph(std::size_t n) {
    std::vector<Link> links;
    for (NodeId v = 0; v + 1 < n; ++v) links.push_back({v, static_cast<NodeId>(v + 1)});
    return Graph::build(std::move(links), false);
}

inline Graph star_graph(std::size_t leaves) {
    std::vector<Link> links;
    for (NodeId v = 1; v <= leaves; ++v) links.push_back({0, v});
    return Graph::build(std::move(links), false);
}

inline Graph complete_graph(std::size_t n) {
    std::vector<Link> links;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v) links.push_back({u, v});
    return Graph::build(std::move(links), false);
}

/// Random directed graph with every node used (a directed cycle
/// backbone plus random extra links).
inline Graph random_directed(std::size_t n, std::size_t extra, std::mt19937_64& rng,
                             bool allow_self_loops = false) {
    std::vector<Link> links;
    for (NodeId v = 0; v < n; ++v) links.push_back({v, static_cast<NodeId>((v + 1) % n)});
    std::uniform_int_distribution<std::size_t> any(0, n - 1);
    for (std::size_t i = 0; i < extra; ++i) {
        const NodeId a = static_cast<NodeId>(any(rng));
        const NodeId b = static_cast<NodeId>(any(rng));
        if (a == b && !allow_self_loops) continue;
        links.push_back({a, b});
    }
    return Graph::build(std::move(links), true, allow_self_loops);
}

} // namespace oracle
