#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bibnet/anf.hpp"
#include "bibnet/common.hpp"
#include "bibnet/graph.hpp"

namespace bibnet {

// --- scale-free exponent ----------------------------------------------------

/// Maximum-likelihood power-law exponent over the degree tail k >= k_min:
/// gamma = 1 + n / sum(ln(k / k_min)).
///
/// Throws PreconditionError when the tail holds fewer than two degrees or
/// when every tail degree equals k_min (the likelihood degenerates).
inline double powerlaw_exponent(std::span<const double> degrees, double k_min) {
    if (k_min <= 0.0)
        throw PreconditionError("power-law fit needs a positive k_min");
    std::size_t n = 0;
    double log_sum = 0.0;
    for (double k : degrees)
        if (k >= k_min) {
            ++n;
            log_sum += std::log(k / k_min);
        }
    if (n < 2)
        throw PreconditionError("power-law fit needs at least 2 tail degrees, got " +
                                std::to_string(n));
    if (log_sum <= 0.0)
        throw PreconditionError("degenerate tail: every degree above the cutoff equals k_min");
    return 1.0 + static_cast<double>(n) / log_sum;
}

// --- mixing (Pearson correlation across link endpoints) ----------------------

enum class DegreeRole { in, out, total };

namespace detail {

/// Two-pass Pearson over a sample stream replayed by `emit(f)`, where f
/// is called as f(x, y) for every sample. Returns nullopt when fewer
/// than two samples exist or either margin has zero variance.
template <typename EmitFn>
std::optional<double> pearson_over_samples(EmitFn&& emit) {
    std::size_t count = 0;
    double sx = 0.0, sy = 0.0;
    emit([&](double x, double y) {
        ++count;
        sx += x;
        sy += y;
    });
    if (count < 2) return std::nullopt;
    const double mx = sx / static_cast<double>(count);
    const double my = sy / static_cast<double>(count);
    double cov = 0.0, vx = 0.0, vy = 0.0;
    emit([&](double x, double y) {
        cov += (x - mx) * (y - my);
        vx += (x - mx) * (x - mx);
        vy += (y - my) * (y - my);
    });
    if (vx <= 0.0 || vy <= 0.0) return std::nullopt;
    return cov / std::sqrt(vx * vy);
}

/// Degrees with self-loops excluded, per role.
inline std::vector<double> loopless_degrees(const Graph& g, DegreeRole role) {
    std::vector<double> k(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const std::size_t loop = g.directed() && g.has_self_loop(u) ? 1 : 0;
        std::size_t value = 0;
        switch (role) {
            case DegreeRole::in: value = g.in_degree(u) - loop; break;
            case DegreeRole::out: value = g.out_degree(u) - loop; break;
            case DegreeRole::total: value = g.degree(u) - 2 * loop; break;
        }
        k[u] = static_cast<double>(value);
    }
    return k;
}

} // namespace detail

/// Degree mixing r_(alpha,beta): the Pearson correlation between the
/// alpha-degree of a link's source and the beta-degree of its target,
/// taken over all links. Self-loops are excluded both as samples and
/// from the degrees. Undirected links contribute both orientations, so
/// the total/total case on an undirected graph is the classical
/// assortativity coefficient. Returns nullopt ("undefined mixing") when
/// either margin is constant or fewer than two samples exist.
inline std::optional<double> degree_mixing(const Graph& g, DegreeRole alpha, DegreeRole beta) {
    const std::vector<double> ka = detail::loopless_degrees(g, alpha);
    const std::vector<double> kb = alpha == beta ? ka : detail::loopless_degrees(g, beta);
    return detail::pearson_over_samples([&](auto&& take) {
        for (NodeId u = 0; u < g.node_count(); ++u)
            for (NodeId v : g.out_neighbors(u)) {
                if (u == v) continue;
                take(ka[u], kb[v]);
                if (!g.directed()) take(ka[v], kb[u]);
            }
    });
}

// --- clustering coefficients -------------------------------------------------

/// Per-node clustering coefficients on the undirected skeleton:
///   c = 2t / (k(k-1))          -- fraction of closed neighbor pairs
///   b = c * k / k_max          -- degree-corrected variant
///   d = t / omega              -- topologically corrected variant, where
///       omega = floor(sum_j min(k_j - 1, k - 1) / 2) caps the pairs the
///       neighborhood could possibly close.
/// Nodes with k <= 1 score 0 in all three, as does d when omega = 0.
/// The invariant b <= c <= d holds whenever k >= 2.
struct ClusteringCoefficients {
    std::vector<double> c, b, d;
    std::vector<std::uint64_t> triangles; ///< closed neighbor pairs per node
    std::size_t max_degree = 0;
};

inline ClusteringCoefficients clustering_coefficients(const Graph& g) {
    const Graph local = g.directed() ? undirected_view(g) : Graph();
    const Graph& u = g.directed() ? local : g;
    const std::size_t n = u.node_count();

    ClusteringCoefficients out;
    out.triangles.assign(n, 0);
    // Each triangle {a,b,w} is credited to w exactly once: when the link
    // (a,b) with a < b is intersected.
    for (NodeId a = 0; a < n; ++a) {
        const auto nbr_a = u.neighbors(a);
        for (NodeId b : nbr_a) {
            if (b <= a) continue;
            const auto nbr_b = u.neighbors(b);
            std::size_t i = 0, j = 0;
            while (i < nbr_a.size() && j < nbr_b.size()) {
                if (nbr_a[i] < nbr_b[j])
                    ++i;
                else if (nbr_b[j] < nbr_a[i])
                    ++j;
                else {
                    ++out.triangles[nbr_a[i]];
                    ++i;
                    ++j;
                }
            }
        }
    }

    for (NodeId v = 0; v < n; ++v) out.max_degree = std::max(out.max_degree, u.degree(v));
    out.c.assign(n, 0.0);
    out.b.assign(n, 0.0);
    out.d.assign(n, 0.0);
    for (NodeId v = 0; v < n; ++v) {
        const std::size_t k = u.degree(v);
        if (k <= 1) continue;
        const double t = static_cast<double>(out.triangles[v]);
        out.c[v] = 2.0 * t / (static_cast<double>(k) * static_cast<double>(k - 1));
        out.b[v] = out.c[v] * static_cast<double>(k) / static_cast<double>(out.max_degree);
        std::uint64_t reach = 0;
        for (NodeId w : u.neighbors(v))
            reach += std::min(u.degree(w) - 1, k - 1);
        const std::uint64_t omega = reach / 2;
        out.d[v] = omega == 0 ? 0.0 : t / static_cast<double>(omega);
    }
    return out;
}

enum class ClusteringVariant { c, b, d };

/// Clustering mixing r_c / r_b / r_d: Pearson correlation of a clustering
/// coefficient across link endpoints of the undirected skeleton (both
/// orientations per link). nullopt when the coefficient is constant.
inline std::optional<double> clustering_mixing(const Graph& g, ClusteringVariant variant) {
    const Graph local = g.directed() ? undirected_view(g) : Graph();
    const Graph& u = g.directed() ? local : g;
    const ClusteringCoefficients coef = clustering_coefficients(u);
    const std::vector<double>& values = variant == ClusteringVariant::c   ? coef.c
                                        : variant == ClusteringVariant::b ? coef.b
                                                                          : coef.d;
    return detail::pearson_over_samples([&](auto&& take) {
        for (NodeId a = 0; a < u.node_count(); ++a)
            for (NodeId b : u.neighbors(a))
                if (a < b) {
                    take(values[a], values[b]);
                    take(values[b], values[a]);
                }
    });
}

// --- degree-conditioned profiles ---------------------------------------------

/// One row per distinct degree of the undirected skeleton.
struct ProfileRow {
    std::size_t degree = 0;
    std::size_t count = 0;                          ///< nodes with this degree
    std::optional<double> neighbor_connectivity;    ///< mean over nodes of mean neighbor degree
    double mean_clustering = 0.0;                   ///< mean c over these nodes
};

/// Degree histogram, neighbor connectivity N(k) and clustering profile
/// C(k), all computed disregarding directionality. Histogram counts sum
/// to the node count.
inline std::vector<ProfileRow> degree_profiles(const Graph& g) {
    const Graph local = g.directed() ? undirected_view(g) : Graph();
    const Graph& u = g.directed() ? local : g;
    const ClusteringCoefficients coef = clustering_coefficients(u);

    std::vector<std::size_t> count;
    std::vector<double> nbr_sum, c_sum;
    auto widen = [&](std::size_t k) {
        if (k >= count.size()) {
            count.resize(k + 1, 0);
            nbr_sum.resize(k + 1, 0.0);
            c_sum.resize(k + 1, 0.0);
        }
    };
    for (NodeId v = 0; v < u.node_count(); ++v) {
        const std::size_t k = u.degree(v);
        widen(k);
        ++count[k];
        c_sum[k] += coef.c[v];
        if (k > 0) {
            double sum = 0.0;
            for (NodeId w : u.neighbors(v)) sum += static_cast<double>(u.degree(w));
            nbr_sum[k] += sum / static_cast<double>(k);
        }
    }

    std::vector<ProfileRow> rows;
    for (std::size_t k = 0; k < count.size(); ++k) {
        if (count[k] == 0) continue;
        ProfileRow row;
        row.degree = k;
        row.count = count[k];
        row.mean_clustering = c_sum[k] / static_cast<double>(count[k]);
        if (k > 0) row.neighbor_connectivity = nbr_sum[k] / static_cast<double>(count[k]);
        rows.push_back(row);
    }
    return rows;
}

// --- the measure vector -------------------------------------------------------

inline constexpr std::array<std::string_view, 20> directed_measure_names{
    "wcc",    "in",     "core",   "out",      "mean_degree", "gamma", "gamma_in",
    "gamma_out", "r",   "r_in_in", "r_in_out", "r_out_in",   "r_out_out",
    "mean_c", "mean_b", "mean_d", "r_c",      "r_b",         "r_d",   "delta90"};

inline constexpr std::array<std::string_view, 11> undirected_measure_names{
    "wcc",    "mean_degree", "gamma", "r",   "mean_c", "mean_b",
    "mean_d", "r_c",         "r_b",   "r_d", "delta90"};

/// Fixed-order map of measure name to value. Directed graphs carry 20
/// entries, undirected ones 11; statistically undefined entries (constant
/// margins, degenerate power-law tails) are present but empty.
struct MeasureVector {
    bool directed = false;
    std::vector<std::pair<std::string, std::optional<double>>> entries;

    std::optional<double> value(std::string_view name) const {
        for (const auto& [key, v] : entries)
            if (key == name) return v;
        throw std::out_of_range("no measure named " + std::string(name));
    }

    nlohmann::json to_json() const {
        nlohmann::json j = nlohmann::json::object();
        for (const auto& [key, v] : entries)
            j[key] = v ? nlohmann::json(*v) : nlohmann::json();
        return j;
    }

    static MeasureVector from_json(const nlohmann::json& j, bool directed) {
        MeasureVector m;
        m.directed = directed;
        auto names = directed ? std::span<const std::string_view>(directed_measure_names)
                              : std::span<const std::string_view>(undirected_measure_names);
        for (std::string_view name : names) {
            const auto it = j.find(std::string(name));
            if (it == j.end())
                throw InputError("measure vector is missing entry " + std::string(name));
            m.entries.emplace_back(std::string(name),
                                   it->is_null() ? std::nullopt
                                                 : std::optional<double>(it->get<double>()));
        }
        return m;
    }
};

struct MeasureConfig {
    double k_min = 10.0;       ///< power-law cutoff; the study uses 10 or 25
    int anf_realizations = 100;
    int anf_trials = 32;
    std::uint64_t seed = 42;
    BowTieMode bowtie_mode = BowTieMode::degree;
};

/// Computes the full canonical measure vector of a graph. Undirected
/// structure (gamma, r, clustering, delta90) is measured on the
/// undirected skeleton; gamma_in/gamma_out use raw in/out degrees; the
/// four directed mixings use loopless degrees over directed links.
/// Statistically undefined entries come back missing rather than
/// failing the whole vector. `hop_plot_out`, when given, receives the
/// hop plot so callers can export it without recomputing.
inline MeasureVector measure_vector(const Graph& g, const MeasureConfig& config = {},
                                    HopPlot* hop_plot_out = nullptr) {
    const Graph local = g.directed() ? undirected_view(g) : Graph();
    const Graph& u = g.directed() ? local : g;

    MeasureVector m;
    m.directed = g.directed();
    auto put = [&m](std::string_view name, std::optional<double> v) {
        m.entries.emplace_back(std::string(name), v);
    };
    auto gamma_of = [&config](std::vector<double> degrees) -> std::optional<double> {
        try {
            return powerlaw_exponent(degrees, config.k_min);
        } catch (const PreconditionError&) {
            return std::nullopt;
        }
    };
    auto view_degrees = [&u] {
        std::vector<double> k(u.node_count());
        for (NodeId v = 0; v < u.node_count(); ++v) k[v] = static_cast<double>(u.degree(v));
        return k;
    };

    put("wcc", largest_wcc(g).fraction);
    if (g.directed()) {
        const BowTie bt = bow_tie(g, config.bowtie_mode);
        put("in", bt.in);
        put("core", bt.core);
        put("out", bt.out);
    }
    put("mean_degree", 2.0 * static_cast<double>(g.link_count()) /
                           static_cast<double>(g.node_count()));
    put("gamma", gamma_of(view_degrees()));
    if (g.directed()) {
        std::vector<double> kin(g.node_count()), kout(g.node_count());
        for (NodeId v = 0; v < g.node_count(); ++v) {
            kin[v] = static_cast<double>(g.in_degree(v));
            kout[v] = static_cast<double>(g.out_degree(v));
        }
        put("gamma_in", gamma_of(std::move(kin)));
        put("gamma_out", gamma_of(std::move(kout)));
    }
    put("r", degree_mixing(u, DegreeRole::total, DegreeRole::total));
    if (g.directed()) {
        put("r_in_in", degree_mixing(g, DegreeRole::in, DegreeRole::in));
        put("r_in_out", degree_mixing(g, DegreeRole::in, DegreeRole::out));
        put("r_out_in", degree_mixing(g, DegreeRole::out, DegreeRole::in));
        put("r_out_out", degree_mixing(g, DegreeRole::out, DegreeRole::out));
    }

    const ClusteringCoefficients coef = clustering_coefficients(u);
    const double n = static_cast<double>(u.node_count());
    auto mean = [n](const std::vector<double>& xs) {
        double sum = 0.0;
        for (double x : xs) sum += x;
        return sum / n;
    };
    put("mean_c", mean(coef.c));
    put("mean_b", mean(coef.b));
    put("mean_d", mean(coef.d));
    auto link_mixing = [&u](const std::vector<double>& values) {
        return detail::pearson_over_samples([&](auto&& take) {
            for (NodeId a = 0; a < u.node_count(); ++a)
                for (NodeId b : u.neighbors(a))
                    if (a < b) {
                        take(values[a], values[b]);
                        take(values[b], values[a]);
                    }
        });
    };
    put("r_c", link_mixing(coef.c));
    put("r_b", link_mixing(coef.b));
    put("r_d", link_mixing(coef.d));

    const HopPlot plot = hop_plot_anf(u, config.anf_realizations, config.anf_trials, config.seed);
    try {
        put("delta90", effective_diameter(plot));
    } catch (const PreconditionError&) {
        put("delta90", std::nullopt);
    }
    if (hop_plot_out) *hop_plot_out = plot;
    return m;
}

} // namespace bibnet
