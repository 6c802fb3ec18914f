#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "bibnet/common.hpp"

namespace bibnet {

/// Immutable simple graph over dense node ids 0..node_count()-1.
///
/// Adjacency is stored in CSR form with sorted neighbor lists. Directed
/// graphs additionally keep the exact transpose for O(1) in-neighbor
/// access. Self-loops are permitted only on directed graphs and are
/// flagged per node; duplicate links are collapsed at build time.
class Graph {
public:
    Graph() = default;

    /// Builds a graph from a link sequence.
    ///
    /// Duplicate links collapse (for undirected graphs (u,v) and (v,u)
    /// are the same link). `min_node_count` widens the node range beyond
    /// the largest mentioned id, so graphs with trailing isolated nodes
    /// can be expressed.
    ///
    /// Throws InputError on an empty link sequence or on a self-loop when
    /// `allow_self_loops` is false (the offending pair is reported).
    static Graph build(std::vector<Link> links, bool directed,
                       bool allow_self_loops = false,
                       std::size_t min_node_count = 0) {
        if (links.empty())
            throw InputError("cannot build a graph from an empty link sequence");
        if (!directed || !allow_self_loops) {
            for (const Link& l : links)
                if (l.source == l.target)
                    throw InputError("self-loop rejected: (" + std::to_string(l.source) +
                                     ", " + std::to_string(l.target) + ")");
        }

        std::size_t max_id = 0;
        for (const Link& l : links)
            max_id = std::max<std::size_t>(max_id, std::max(l.source, l.target));

        Graph g;
        g.directed_ = directed;
        g.node_count_ = std::max(max_id + 1, min_node_count);

        if (!directed)
            for (Link& l : links)
                if (l.source > l.target) std::swap(l.source, l.target);
        std::sort(links.begin(), links.end());
        links.erase(std::unique(links.begin(), links.end()), links.end());
        g.link_count_ = links.size();

        g.self_loop_.assign(g.node_count_, false);
        for (const Link& l : links)
            if (l.source == l.target) {
                g.self_loop_[l.source] = true;
                ++g.self_loop_count_;
            }

        build_csr(links, g.node_count_, /*transpose=*/false, g.out_offsets_, g.out_targets_,
                  /*symmetrize=*/!directed);
        if (directed)
            build_csr(links, g.node_count_, /*transpose=*/true, g.in_offsets_, g.in_targets_,
                      /*symmetrize=*/false);
        return g;
    }

    std::size_t node_count() const { return node_count_; }

    /// Number of stored links: ordered pairs for directed graphs
    /// (self-loops included), unordered pairs for undirected ones.
    std::size_t link_count() const { return link_count_; }

    bool directed() const { return directed_; }
    std::size_t self_loop_count() const { return self_loop_count_; }
    bool has_self_loop(NodeId u) const { return self_loop_[u]; }

    /// Sorted successors (directed) or neighbors (undirected).
    std::span<const NodeId> out_neighbors(NodeId u) const {
        return {out_targets_.data() + out_offsets_[u],
                out_targets_.data() + out_offsets_[u + 1]};
    }

    /// Sorted predecessors; identical to out_neighbors on undirected graphs.
    std::span<const NodeId> in_neighbors(NodeId u) const {
        if (!directed_) return out_neighbors(u);
        return {in_targets_.data() + in_offsets_[u],
                in_targets_.data() + in_offsets_[u + 1]};
    }

    /// Alias for out_neighbors, for undirected call sites.
    std::span<const NodeId> neighbors(NodeId u) const { return out_neighbors(u); }

    std::size_t out_degree(NodeId u) const { return out_offsets_[u + 1] - out_offsets_[u]; }
    std::size_t in_degree(NodeId u) const {
        if (!directed_) return out_degree(u);
        return in_offsets_[u + 1] - in_offsets_[u];
    }

    /// Undirected degree, or k_in + k_out for directed graphs
    /// (a self-loop contributes once to each side).
    std::size_t degree(NodeId u) const {
        return directed_ ? out_degree(u) + in_degree(u) : out_degree(u);
    }

    bool has_link(NodeId u, NodeId v) const {
        auto nbr = out_neighbors(u);
        return std::binary_search(nbr.begin(), nbr.end(), v);
    }

private:
    static void build_csr(const std::vector<Link>& links, std::size_t n, bool transpose,
                          std::vector<std::size_t>& offsets, std::vector<NodeId>& targets,
                          bool symmetrize) {
        offsets.assign(n + 1, 0);
        for (const Link& l : links) {
            ++offsets[(transpose ? l.target : l.source) + 1];
            if (symmetrize && l.source != l.target) ++offsets[l.target + 1];
        }
        std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
        targets.resize(offsets[n]);
        std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
        for (const Link& l : links) {
            NodeId from = transpose ? l.target : l.source;
            NodeId to = transpose ? l.source : l.target;
            targets[cursor[from]++] = to;
            if (symmetrize && l.source != l.target) targets[cursor[l.target]++] = l.source;
        }
        for (std::size_t u = 0; u < n; ++u)
            std::sort(targets.begin() + offsets[u], targets.begin() + offsets[u + 1]);
    }

    bool directed_ = false;
    std::size_t node_count_ = 0;
    std::size_t link_count_ = 0;
    std::size_t self_loop_count_ = 0;
    std::vector<std::size_t> out_offsets_{0};
    std::vector<NodeId> out_targets_;
    std::vector<std::size_t> in_offsets_;
    std::vector<NodeId> in_targets_;
    std::vector<bool> self_loop_;
};

/// Largest weakly connected component.
struct WccResult {
    std::vector<NodeId> nodes;      ///< sorted member ids
    std::vector<char> member;      ///< node_count-sized membership mask
    double fraction = 0.0;          ///< |component| / node_count
};

/// Labels components by BFS over link direction ignored; ties between
/// equally large components break toward the smallest contained node id.
inline WccResult largest_wcc(const Graph& g) {
    const std::size_t n = g.node_count();
    std::vector<std::uint32_t> label(n, UINT32_MAX);
    std::vector<NodeId> queue;
    std::uint32_t component_count = 0;
    std::size_t best_size = 0;
    std::uint32_t best_label = 0;

    for (NodeId start = 0; start < n; ++start) {
        if (label[start] != UINT32_MAX) continue;
        const std::uint32_t c = component_count++;
        std::size_t size = 0;
        queue.assign(1, start);
        label[start] = c;
        while (!queue.empty()) {
            NodeId u = queue.back();
            queue.pop_back();
            ++size;
            auto visit = [&](NodeId v) {
                if (label[v] == UINT32_MAX) {
                    label[v] = c;
                    queue.push_back(v);
                }
            };
            for (NodeId v : g.out_neighbors(u)) visit(v);
            if (g.directed())
                for (NodeId v : g.in_neighbors(u)) visit(v);
        }
        if (size > best_size) {
            best_size = size;
            best_label = c;
        }
    }

    WccResult result;
    result.member.assign(n, 0);
    result.nodes.reserve(best_size);
    for (NodeId u = 0; u < n; ++u)
        if (label[u] == best_label) {
            result.member[u] = 1;
            result.nodes.push_back(u);
        }
    result.fraction = n == 0 ? 0.0 : static_cast<double>(best_size) / static_cast<double>(n);
    return result;
}

enum class BowTieMode {
    degree, ///< in = sources (k_in = 0), out = sinks (k_out = 0), core = the rest
    scc,    ///< core = largest SCC, in = its ancestors, out = its descendants
};

/// Macroscopic bow-tie decomposition of the largest weakly connected
/// component. All fractions are relative to the full node count, so in
/// degree mode in + core + out equals wcc exactly (the three classes
/// partition the component); in scc mode tendrils are left unclassified
/// and the sum may fall short of wcc.
struct BowTie {
    double wcc = 0.0;
    double in = 0.0;
    double core = 0.0;
    double out = 0.0;
    BowTieMode mode = BowTieMode::degree;
};

namespace detail {

/// Iterative Tarjan SCC; returns component label per node.
inline std::vector<std::uint32_t> scc_labels(const Graph& g, std::uint32_t& count) {
    const std::size_t n = g.node_count();
    constexpr std::uint32_t none = UINT32_MAX;
    std::vector<std::uint32_t> index(n, none), lowlink(n), label(n, none);
    std::vector<char> on_stack(n, 0);
    std::vector<NodeId> stack;
    struct Frame { NodeId node; std::size_t next; };
    std::vector<Frame> call;
    std::uint32_t next_index = 0;
    count = 0;

    for (NodeId root = 0; root < n; ++root) {
        if (index[root] != none) continue;
        call.push_back({root, 0});
        while (!call.empty()) {
            auto& [u, next] = call.back();
            if (next == 0) {
                index[u] = lowlink[u] = next_index++;
                stack.push_back(u);
                on_stack[u] = 1;
            }
            auto nbr = g.out_neighbors(u);
            bool descended = false;
            while (next < nbr.size()) {
                NodeId v = nbr[next++];
                if (index[v] == none) {
                    call.push_back({v, 0});
                    descended = true;
                    break;
                }
                if (on_stack[v]) lowlink[u] = std::min(lowlink[u], index[v]);
            }
            if (descended) continue;
            if (lowlink[u] == index[u]) {
                NodeId v;
                do {
                    v = stack.back();
                    stack.pop_back();
                    on_stack[v] = 0;
                    label[v] = count;
                } while (v != u);
                ++count;
            }
            NodeId finished = u;
            call.pop_back();
            if (!call.empty())
                lowlink[call.back().node] = std::min(lowlink[call.back().node], lowlink[finished]);
        }
    }
    return label;
}

} // namespace detail

inline BowTie bow_tie(const Graph& g, BowTieMode mode = BowTieMode::degree) {
    if (!g.directed())
        throw PreconditionError("bow-tie decomposition requires a directed graph");
    const WccResult wcc = largest_wcc(g);
    const double n = static_cast<double>(g.node_count());
    BowTie bt;
    bt.mode = mode;
    bt.wcc = wcc.fraction;

    std::size_t n_in = 0, n_out = 0, n_core = 0;
    if (mode == BowTieMode::degree) {
        // Self-loops are ignored, so a node citing only itself counts as a
        // source and a node cited only by itself counts as a sink.
        for (NodeId u : wcc.nodes) {
            const std::size_t loop = g.has_self_loop(u) ? 1 : 0;
            const std::size_t kin = g.in_degree(u) - loop;
            const std::size_t kout = g.out_degree(u) - loop;
            if (kin == 0 && kout > 0)
                ++n_in;
            else if (kout == 0 && kin > 0)
                ++n_out;
            else
                ++n_core;
        }
    } else {
        std::uint32_t scc_count = 0;
        const auto label = detail::scc_labels(g, scc_count);
        std::vector<std::size_t> size(scc_count, 0);
        for (NodeId u : wcc.nodes) ++size[label[u]];
        const std::uint32_t core = static_cast<std::uint32_t>(
            std::max_element(size.begin(), size.end()) - size.begin());

        // ancestors: reach the core going forward; descendants: reached from it.
        std::vector<char> reaches(g.node_count(), 0), reached(g.node_count(), 0);
        std::vector<NodeId> queue;
        for (NodeId u : wcc.nodes)
            if (label[u] == core) {
                reaches[u] = reached[u] = 1;
                queue.push_back(u);
            }
        std::vector<NodeId> frontier = queue;
        while (!frontier.empty()) {
            NodeId u = frontier.back();
            frontier.pop_back();
            for (NodeId v : g.out_neighbors(u))
                if (!reached[v]) {
                    reached[v] = 1;
                    frontier.push_back(v);
                }
        }
        frontier = queue;
        while (!frontier.empty()) {
            NodeId u = frontier.back();
            frontier.pop_back();
            for (NodeId v : g.in_neighbors(u))
                if (!reaches[v]) {
                    reaches[v] = 1;
                    frontier.push_back(v);
                }
        }
        for (NodeId u : wcc.nodes) {
            const bool in_core = label[u] == core;
            if (in_core)
                ++n_core;
            else if (reaches[u] && !reached[u])
                ++n_in;
            else if (reached[u] && !reaches[u])
                ++n_out;
        }
    }
    bt.in = n_in / n;
    bt.core = n_core / n;
    bt.out = n_out / n;
    return bt;
}

/// Projects a directed graph onto its undirected skeleton: reciprocal
/// link pairs collapse into one link, self-loops are dropped, the node
/// set (including any node thereby isolated) is preserved. Undirected
/// inputs are returned unchanged, which makes the operation idempotent.
inline Graph undirected_view(const Graph& g) {
    if (!g.directed()) return g;
    std::vector<Link> links;
    links.reserve(g.link_count());
    for (NodeId u = 0; u < g.node_count(); ++u)
        for (NodeId v : g.out_neighbors(u))
            if (u < v || (v < u && !g.has_link(v, u)))
                links.push_back({std::min(u, v), std::max(u, v)});
    if (links.empty())
        throw InputError("undirected view is empty: the graph has only self-loops");
    return Graph::build(std::move(links), /*directed=*/false, false, g.node_count());
}

} // namespace bibnet
