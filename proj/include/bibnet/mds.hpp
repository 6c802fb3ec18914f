#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "bibnet/common.hpp"
#include "bibnet/stats.hpp"

namespace bibnet {

enum class Normalization { zscore, none };

/// Symmetric zero-diagonal dissimilarity matrix over the databases.
struct DissimilarityMatrix {
    std::vector<std::string> labels;
    std::vector<double> d; ///< row-major n x n

    std::size_t size() const { return labels.size(); }
    double at(std::size_t i, std::size_t j) const { return d[i * size() + j]; }
};

/// Euclidean dissimilarities between database rows. Columns are z-scored
/// by default; a z-scored column with zero variance is an error (it has
/// no defined scale). Columns with fewer than two present values cannot
/// contribute to any pair and are skipped. Cells missing in either row
/// are excluded pairwise and the partial sum is rescaled by
/// M / M_present so sparsely shared rows are not drawn together
/// artificially. Fails when two rows share no usable column.
inline DissimilarityMatrix dissimilarity_matrix(const MeasureMatrix& m,
                                                Normalization norm = Normalization::zscore) {
    const std::size_t n = m.databases.size();
    const std::size_t mc = m.measures.size();
    if (n < 2) throw PreconditionError("dissimilarities need at least 2 databases");

    // Normalized copy; nullopt marks unusable cells.
    std::vector<std::optional<double>> z(n * mc);
    std::vector<char> usable(mc, 0);
    for (std::size_t j = 0; j < mc; ++j) {
        std::vector<std::size_t> present;
        for (std::size_t i = 0; i < n; ++i)
            if (m.at(i, j)) present.push_back(i);
        if (present.size() < 2) continue;
        double mean = 0.0;
        for (std::size_t i : present) mean += *m.at(i, j);
        mean /= static_cast<double>(present.size());
        double ss = 0.0;
        for (std::size_t i : present) {
            const double d = *m.at(i, j) - mean;
            ss += d * d;
        }
        const double sd = std::sqrt(ss / static_cast<double>(present.size() - 1));
        if (norm == Normalization::zscore && sd <= 0.0)
            throw PreconditionError("column " + m.measures[j] +
                                    " is constant: z-scoring is undefined");
        usable[j] = 1;
        for (std::size_t i : present)
            z[i * mc + j] = norm == Normalization::zscore ? (*m.at(i, j) - mean) / sd
                                                          : *m.at(i, j);
    }
    const auto total = static_cast<double>(std::count(usable.begin(), usable.end(), 1));
    if (total == 0.0) throw PreconditionError("no usable measure column for dissimilarities");

    DissimilarityMatrix out;
    out.labels = m.databases;
    out.d.assign(n * n, 0.0);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) {
            double sum = 0.0;
            double shared = 0.0;
            for (std::size_t j = 0; j < mc; ++j) {
                if (!usable[j]) continue;
                const auto& za = z[a * mc + j];
                const auto& zb = z[b * mc + j];
                if (!za || !zb) continue;
                const double diff = *za - *zb;
                sum += diff * diff;
                shared += 1.0;
            }
            if (shared == 0.0)
                throw PreconditionError("databases " + m.databases[a] + " and " +
                                        m.databases[b] + " share no usable measure");
            const double dist = std::sqrt(sum * total / shared);
            out.d[a * n + b] = out.d[b * n + a] = dist;
        }
    return out;
}

namespace detail {

/// Pool-adjacent-violators: least-squares non-decreasing fit of y.
inline std::vector<double> isotonic_fit(std::span<const double> y) {
    struct Block {
        double sum;
        double count;
    };
    std::vector<Block> blocks;
    blocks.reserve(y.size());
    for (double v : y) {
        blocks.push_back({v, 1.0});
        while (blocks.size() > 1) {
            auto& last = blocks[blocks.size() - 1];
            auto& prev = blocks[blocks.size() - 2];
            if (prev.sum / prev.count <= last.sum / last.count) break;
            prev.sum += last.sum;
            prev.count += last.count;
            blocks.pop_back();
        }
    }
    std::vector<double> fit;
    fit.reserve(y.size());
    for (const auto& b : blocks)
        fit.insert(fit.end(), static_cast<std::size_t>(b.count), b.sum / b.count);
    return fit;
}

/// Pairwise Euclidean distances of an n x dim configuration, packed in
/// the canonical (i < j) pair order.
inline std::vector<double> config_distances(std::span<const double> x, std::size_t n,
                                            std::size_t dim) {
    std::vector<double> d;
    d.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                const double diff = x[i * dim + k] - x[j * dim + k];
                s += diff * diff;
            }
            d.push_back(std::sqrt(s));
        }
    return d;
}

/// Kruskal stress-1 of a configuration against the target order:
/// disparities are the isotonic fit of the distances taken in
/// dissimilarity order (ties resolved by current distance, then pair
/// index, so tied targets do not constrain each other).
inline double stress_1(std::span<const double> target, std::span<const double> dist,
                       std::vector<double>* disparities_out = nullptr) {
    const std::size_t m = target.size();
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (target[a] != target[b]) return target[a] < target[b];
        if (dist[a] != dist[b]) return dist[a] < dist[b];
        return a < b;
    });
    std::vector<double> seq(m);
    for (std::size_t p = 0; p < m; ++p) seq[p] = dist[order[p]];
    const auto fit = isotonic_fit(seq);
    std::vector<double> disp(m);
    for (std::size_t p = 0; p < m; ++p) disp[order[p]] = fit[p];

    double num = 0.0;
    double den = 0.0;
    for (std::size_t p = 0; p < m; ++p) {
        const double e = dist[p] - disp[p];
        num += e * e;
        den += dist[p] * dist[p];
    }
    if (disparities_out) *disparities_out = std::move(disp);
    if (den <= 0.0) return num <= 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt(num / den);
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix (row-major).
/// Returns eigenvalues descending with matching columns in `vectors`.
inline void jacobi_eigen(std::vector<double> a, std::size_t n, std::vector<double>& values,
                         std::vector<double>& vectors) {
    vectors.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) vectors[i * n + i] = 1.0;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p * n + q] * a[p * n + q];
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a[p * n + q];
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k * n + p];
                    const double akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p * n + k];
                    const double aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = vectors[k * n + p];
                    const double vkq = vectors[k * n + q];
                    vectors[k * n + p] = c * vkp - s * vkq;
                    vectors[k * n + q] = s * vkp + c * vkq;
                }
            }
    }
    values.resize(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = a[i * n + i];
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return values[x] != values[y] ? values[x] > values[y] : x < y;
    });
    std::vector<double> sorted_values(n);
    std::vector<double> sorted_vectors(n * n);
    for (std::size_t c = 0; c < n; ++c) {
        sorted_values[c] = values[order[c]];
        for (std::size_t r = 0; r < n; ++r)
            sorted_vectors[r * n + c] = vectors[r * n + order[c]];
    }
    values = std::move(sorted_values);
    vectors = std::move(sorted_vectors);
}

/// Classical (Torgerson) scaling: double-center the squared
/// dissimilarities and keep the leading `dim` spectral coordinates.
inline std::vector<double> classical_scaling(const DissimilarityMatrix& dm, std::size_t dim) {
    const std::size_t n = dm.size();
    std::vector<double> sq(n * n);
    for (std::size_t i = 0; i < n * n; ++i) sq[i] = dm.d[i] * dm.d[i];
    std::vector<double> row_mean(n, 0.0);
    double grand = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) row_mean[i] += sq[i * n + j];
        row_mean[i] /= static_cast<double>(n);
        grand += row_mean[i];
    }
    grand /= static_cast<double>(n);
    std::vector<double> b(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            b[i * n + j] = -0.5 * (sq[i * n + j] - row_mean[i] - row_mean[j] + grand);
    std::vector<double> values;
    std::vector<double> vectors;
    jacobi_eigen(std::move(b), n, values, vectors);
    std::vector<double> x(n * dim, 0.0);
    for (std::size_t k = 0; k < dim && k < n; ++k) {
        const double scale = values[k] > 0.0 ? std::sqrt(values[k]) : 0.0;
        for (std::size_t i = 0; i < n; ++i) x[i * dim + k] = vectors[i * n + k] * scale;
    }
    return x;
}

} // namespace detail

struct MdsConfig {
    std::size_t dimensions = 2;
    std::size_t restarts = 20;
    std::size_t max_iterations = 500;
    double tolerance = 1e-6; ///< relative stress improvement per step
    std::uint64_t seed = 42;
};

struct MdsResult {
    std::vector<std::string> labels;
    std::vector<double> points; ///< row-major n x dimensions, centered
    std::size_t dimensions = 2;
    double stress = 0.0;
    std::size_t best_restart = 0;
    std::size_t iterations = 0;       ///< accepted updates of the winning restart
    std::uint64_t seed = 0;
    std::vector<double> stress_trace; ///< winning restart, non-increasing
};

/// Non-metric multidimensional scaling: alternates isotonic disparities
/// (Kruskal stress-1) with Guttman majorization updates, keeping an
/// update only when it lowers the stress so every recorded trace is
/// non-increasing. Restart 0 starts from classical scaling, the
/// remaining restarts from seeded Gaussian configurations; the restart
/// with the lowest final stress wins (ties: earliest).
inline MdsResult nmds_embed(const DissimilarityMatrix& dm, const MdsConfig& config = {}) {
    const std::size_t n = dm.size();
    const std::size_t dim = config.dimensions;
    if (n < 2) throw PreconditionError("embedding needs at least 2 points");
    if (dim < 1) throw PreconditionError("embedding needs at least 1 dimension");
    for (std::size_t i = 0; i < n; ++i) {
        if (dm.at(i, i) != 0.0)
            throw PreconditionError("dissimilarity matrix must have a zero diagonal");
        for (std::size_t j = i + 1; j < n; ++j)
            if (dm.at(i, j) != dm.at(j, i) || dm.at(i, j) < 0.0)
                throw PreconditionError("dissimilarity matrix must be symmetric, non-negative");
    }

    std::vector<double> target;
    target.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) target.push_back(dm.at(i, j));

    MdsResult best;
    best.labels = dm.labels;
    best.dimensions = dim;
    best.seed = config.seed;
    best.stress = std::numeric_limits<double>::infinity();

    for (std::size_t restart = 0; restart < std::max<std::size_t>(config.restarts, 1); ++restart) {
        std::vector<double> x;
        if (restart == 0) {
            x = detail::classical_scaling(dm, dim);
        } else {
            std::mt19937_64 rng(mix_seed(config.seed, restart));
            x.resize(n * dim);
            for (double& v : x) v = next_normal(rng);
        }

        std::vector<double> dist = detail::config_distances(x, n, dim);
        std::vector<double> disparities;
        double stress = detail::stress_1(target, dist, &disparities);
        std::vector<double> trace{stress};

        for (std::size_t iter = 0; iter < config.max_iterations; ++iter) {
            if (!(stress > 0.0) || !std::isfinite(stress)) break;
            // Guttman transform with b_ij = -disparity_ij / distance_ij.
            std::vector<double> next(n * dim, 0.0);
            std::vector<double> diag(n, 0.0);
            std::size_t p = 0;
            std::vector<double> b(n * n, 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j, ++p) {
                    const double w = dist[p] > 0.0 ? disparities[p] / dist[p] : 0.0;
                    b[i * n + j] = b[j * n + i] = -w;
                    diag[i] += w;
                    diag[j] += w;
                }
            for (std::size_t i = 0; i < n; ++i) b[i * n + i] = diag[i];
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    const double w = b[i * n + j] / static_cast<double>(n);
                    if (w == 0.0) continue;
                    for (std::size_t k = 0; k < dim; ++k)
                        next[i * dim + k] += w * x[j * dim + k];
                }

            std::vector<double> next_dist = detail::config_distances(next, n, dim);
            std::vector<double> next_disp;
            const double next_stress = detail::stress_1(target, next_dist, &next_disp);
            if (!(next_stress < stress)) break; // keep the trace monotone
            const double improvement = (stress - next_stress) / stress;
            x = std::move(next);
            dist = std::move(next_dist);
            disparities = std::move(next_disp);
            stress = next_stress;
            trace.push_back(stress);
            if (improvement < config.tolerance) break;
        }

        if (stress < best.stress) {
            best.points = std::move(x);
            best.stress = stress;
            best.best_restart = restart;
            best.iterations = trace.size() - 1;
            best.stress_trace = std::move(trace);
        }
    }
    // Distances are translation-invariant, so center the coordinates.
    for (std::size_t k = 0; k < dim; ++k) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) mean += best.points[i * dim + k];
        mean /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) best.points[i * dim + k] -= mean;
    }
    return best;
}

} // namespace bibnet
