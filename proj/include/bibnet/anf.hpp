#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <thread>
#include <vector>

#include "bibnet/common.hpp"
#include "bibnet/graph.hpp"

namespace bibnet {

/// Estimated hop plot: h[i] is the fraction H(δ=i+1) of mutually
/// reachable node pairs lying within i+1 hops, ignoring directionality.
/// Monotone by construction with a final value of exactly 1.
struct HopPlot {
    std::vector<double> h;
    int realizations = 0;
    int trials = 0;

    std::size_t max_hops() const { return h.size(); }
    double at(std::size_t delta) const { // H(0) = 0 by convention
        if (delta == 0) return 0.0;
        return h[std::min(delta, h.size()) - 1];
    }
};

namespace detail {

constexpr std::size_t sparse_cap = 64; ///< exact set size before switching to sketches

/// Exact breadth growth of every node's neighborhood ball, tracked as
/// sorted sets until they exceed sparse_cap. Small components resolve
/// exactly and never need sketches at all.
struct SparseBalls {
    // sizes[u]: |ball(u, δ)| for δ = 0..sizes[u].size()-1. Nodes that went
    // big have their last recorded size at δ = big_at[u] - 1; resolved
    // nodes keep their final size forever (clamp the index).
    std::vector<std::vector<std::uint32_t>> sizes;
    std::vector<std::uint32_t> big_at; ///< UINT32_MAX when the node stays exact
    std::vector<double> exact_sum;     ///< Σ over exact nodes of |ball(u, δ)|, by δ
    std::size_t big_count = 0;

    bool exact_at(NodeId u, std::size_t delta) const { return delta < big_at[u]; }
    std::uint32_t size_at(NodeId u, std::size_t delta) const {
        const auto& s = sizes[u];
        return s[std::min(delta, s.size() - 1)];
    }
    double exact_sum_at(std::size_t delta) const {
        return exact_sum[std::min(delta, exact_sum.size() - 1)];
    }
};

inline SparseBalls grow_sparse_balls(const Graph& g) {
    const std::size_t n = g.node_count();
    SparseBalls balls;
    balls.sizes.assign(n, {});
    balls.big_at.assign(n, UINT32_MAX);

    std::vector<std::vector<NodeId>> cur(n), nxt(n);
    std::vector<char> changed(n, 1), next_changed(n, 0);
    std::vector<NodeId> scratch, merged;
    for (NodeId u = 0; u < n; ++u) {
        cur[u] = {u};
        balls.sizes[u] = {1};
    }
    balls.exact_sum = {static_cast<double>(n)};

    bool any_changed = true;
    for (std::size_t delta = 1; any_changed; ++delta) {
        any_changed = false;
        double sum = 0.0;
        for (NodeId u = 0; u < n; ++u) {
            if (balls.big_at[u] != UINT32_MAX) continue;
            bool stale = changed[u];
            for (NodeId v : g.neighbors(u)) stale = stale || changed[v];
            if (!stale) {
                nxt[u] = cur[u];
                sum += static_cast<double>(cur[u].size());
                continue;
            }
            bool big = false;
            scratch = cur[u];
            for (NodeId v : g.neighbors(u)) {
                if (balls.big_at[v] != UINT32_MAX) {
                    big = true;
                    break;
                }
                merged.clear();
                std::set_union(scratch.begin(), scratch.end(), cur[v].begin(), cur[v].end(),
                               std::back_inserter(merged));
                std::swap(scratch, merged);
                if (scratch.size() > sparse_cap) {
                    big = true;
                    break;
                }
            }
            if (big) {
                balls.big_at[u] = static_cast<std::uint32_t>(delta);
                ++balls.big_count;
                next_changed[u] = 1;
                any_changed = true;
                continue;
            }
            if (scratch.size() != cur[u].size()) {
                next_changed[u] = 1;
                any_changed = true;
            }
            nxt[u] = scratch;
            balls.sizes[u].push_back(static_cast<std::uint32_t>(scratch.size()));
            sum += static_cast<double>(scratch.size());
        }
        if (any_changed) balls.exact_sum.push_back(sum);
        std::swap(cur, nxt);
        std::swap(changed, next_changed);
        std::fill(next_changed.begin(), next_changed.end(), 0);
    }
    // From here on every surviving exact ball is stable, so the last
    // exact_sum entry is the permanent plateau (indices clamp to it).
    return balls;
}

/// Mean lowest-zero-bit estimate of a sketch's cardinality
/// (Flajolet-Martin with the standard 0.77351 correction).
inline double sketch_estimate(const std::uint64_t* masks, int trials) {
    double rank_sum = 0.0;
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t inverted = ~masks[t];
        rank_sum += inverted ? std::countr_zero(inverted) : 64;
    }
    return std::exp2(rank_sum / trials) / 0.77351;
}

} // namespace detail

/// Approximate hop plot via neighborhood-function sketches.
///
/// Directionality is disregarded. Every node carries `trials` 64-bit
/// bitmasks whose hop-δ union is formed by OR-ing neighbors; estimated
/// ball sizes use the 0.77351-corrected lowest-zero-bit rank. Balls of at
/// most 64 nodes are tracked exactly instead (computed once, shared by
/// all realizations), which removes the sketch's small-count bias; tiny
/// graphs therefore come out exact. The whole procedure is repeated
/// `realizations` times with derived seeds — realizations run
/// concurrently, and results do not depend on the execution order.
inline HopPlot hop_plot_anf(const Graph& g, int realizations = 100, int trials = 32,
                            std::uint64_t seed = 42) {
    if (realizations < 1 || trials < 1)
        throw PreconditionError("hop plot needs at least one realization and one trial");
    const Graph undirected = g.directed() ? undirected_view(g) : g;
    const std::size_t n = undirected.node_count();
    const detail::SparseBalls balls = detail::grow_sparse_balls(undirected);
    const std::size_t exact_hops = balls.exact_sum.size() - 1;

    // Fully resolved graphs need no sketches: all realizations coincide.
    std::vector<std::vector<double>> pair_counts(balls.big_count == 0 ? 1 : realizations);

    auto run_realization = [&](std::size_t r, std::vector<std::uint64_t>& cur,
                               std::vector<std::uint64_t>& nxt) {
        const std::size_t words = static_cast<std::size_t>(trials);
        if (balls.big_count != 0) { // fully exact runs never touch the masks
            std::mt19937_64 rng(mix_seed(seed, r));
            for (std::size_t i = 0; i < n * words; ++i) {
                const std::uint64_t draw = rng();
                const int bit = draw ? std::min(std::countr_zero(draw), 63) : 63;
                cur[i] = 1ULL << bit;
            }
        }
        std::vector<double>& pairs = pair_counts[r];
        pairs.assign(1, 0.0); // δ = 0: every ball is the node itself
        bool masks_stable = balls.big_count == 0;
        for (std::size_t delta = 1; !masks_stable || delta <= exact_hops; ++delta) {
            if (!masks_stable) {
                bool changed = false;
                for (NodeId u = 0; u < n; ++u) {
                    std::uint64_t* dst = nxt.data() + u * words;
                    const std::uint64_t* own = cur.data() + u * words;
                    for (std::size_t t = 0; t < words; ++t) dst[t] = own[t];
                    for (NodeId v : undirected.neighbors(u)) {
                        const std::uint64_t* src = cur.data() + v * words;
                        for (std::size_t t = 0; t < words; ++t) dst[t] |= src[t];
                    }
                    if (!changed)
                        for (std::size_t t = 0; t < words; ++t)
                            if (dst[t] != own[t]) {
                                changed = true;
                                break;
                            }
                }
                std::swap(cur, nxt);
                masks_stable = !changed;
                if (masks_stable && delta > exact_hops) break; // previous δ already final
            }
            double sum = balls.exact_sum_at(delta);
            for (NodeId u = 0; u < n; ++u)
                if (!balls.exact_at(u, delta))
                    sum += detail::sketch_estimate(cur.data() + u * words, trials);
            pairs.push_back(sum - static_cast<double>(n));
        }
        if (pairs.size() == 1) pairs.push_back(0.0); // edgeless view: no pairs at all
    };

    if (balls.big_count == 0) {
        std::vector<std::uint64_t> empty_cur, empty_nxt;
        run_realization(0, empty_cur, empty_nxt);
    } else {
        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        const std::size_t n_threads = std::min<std::size_t>(hw, realizations);
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (std::size_t t = 0; t < n_threads; ++t)
            pool.emplace_back([&, t] {
                std::vector<std::uint64_t> cur(n * trials), nxt(n * trials);
                for (std::size_t r = t; r < static_cast<std::size_t>(realizations); r += n_threads)
                    run_realization(r, cur, nxt);
            });
        for (auto& th : pool) th.join();
    }

    std::size_t max_hops = 0;
    for (const auto& pairs : pair_counts) max_hops = std::max(max_hops, pairs.size() - 1);

    HopPlot plot;
    plot.realizations = realizations;
    plot.trials = trials;
    plot.h.assign(max_hops, 0.0);
    for (const auto& pairs : pair_counts) {
        const double total = pairs.back();
        for (std::size_t delta = 1; delta <= max_hops; ++delta) {
            const double p = pairs[std::min(delta, pairs.size() - 1)];
            plot.h[delta - 1] += total > 0.0 ? p / total : 1.0;
        }
    }
    for (double& v : plot.h) v /= static_cast<double>(pair_counts.size());
    if (!plot.h.empty()) plot.h.back() = 1.0;
    return plot;
}

/// δ90: the interpolated hop count at which 90% of reachable pairs are
/// reached. Uses linear interpolation between surrounding integer hops,
/// anchored at H(0) = 0, so complete graphs report 0.9.
inline double effective_diameter(const HopPlot& plot) {
    constexpr double target = 0.9;
    if (plot.h.empty() || plot.h.back() < target)
        throw PreconditionError("hop plot never reaches 90%: graph too fragmented");
    double prev = 0.0;
    for (std::size_t i = 0; i < plot.h.size(); ++i) {
        const double cur = plot.h[i];
        if (cur >= target) {
            const double delta = static_cast<double>(i); // previous hop count
            if (cur == prev) return delta + 1.0;
            return delta + (target - prev) / (cur - prev);
        }
        prev = cur;
    }
    return static_cast<double>(plot.h.size()); // unreachable: back() >= target
}

} // namespace bibnet
