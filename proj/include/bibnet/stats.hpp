#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <json.hpp>

#include "bibnet/common.hpp"
#include "bibnet/measures.hpp"

namespace bibnet {

// Critical values come from the continuous distributions themselves
// (regularized incomplete beta/gamma under the hood), not lookup tables.

inline double student_t_critical(double df, double significance) {
    return boost::math::quantile(boost::math::students_t(df), 1.0 - significance / 2.0);
}

inline double chi_squared_critical(double df, double significance) {
    return boost::math::quantile(boost::math::chi_squared(df), 1.0 - significance);
}

inline double normal_critical(double significance) {
    return boost::math::quantile(boost::math::normal(), 1.0 - significance / 2.0);
}

/// Fisher z-statistic for testing a correlation of n paired observations
/// against zero: z = sqrt(n-3)/2 * ln((1+r)/(1-r)). |r| = 1 yields an
/// infinite statistic (perfect dependence always rejects).
inline double fisher_z(double r, std::size_t n) {
    if (n < 4) throw PreconditionError("Fisher z needs at least 4 observations");
    r = std::clamp(r, -1.0, 1.0);
    return std::sqrt(static_cast<double>(n - 3)) * std::atanh(r);
}

// --- measure matrix -----------------------------------------------------------

/// Databases x measures table of measure values; empty cells mark
/// statistically undefined measures.
struct MeasureMatrix {
    std::vector<std::string> databases;
    std::vector<std::string> measures;
    std::vector<std::optional<double>> values; ///< row-major

    std::optional<double>& at(std::size_t db, std::size_t m) {
        return values[db * measures.size() + m];
    }
    const std::optional<double>& at(std::size_t db, std::size_t m) const {
        return values[db * measures.size() + m];
    }
};

/// Stacks the measure vectors of several databases into a matrix. All
/// vectors must share one paradigm (same entry list).
inline MeasureMatrix measure_matrix(std::vector<std::string> databases,
                                    const std::vector<MeasureVector>& vectors) {
    if (databases.size() != vectors.size() || vectors.empty())
        throw PreconditionError("need one measure vector per database");
    MeasureMatrix m;
    m.databases = std::move(databases);
    for (const auto& [name, value] : vectors.front().entries) m.measures.push_back(name);
    for (const auto& v : vectors) {
        if (v.entries.size() != m.measures.size())
            throw PreconditionError("measure vectors disagree on the measure list");
        for (std::size_t j = 0; j < m.measures.size(); ++j) {
            if (v.entries[j].first != m.measures[j])
                throw PreconditionError("measure vectors disagree on the measure list");
            m.values.push_back(v.entries[j].second);
        }
    }
    return m;
}

/// CSV round-trip ("database,<measure>,..."; empty cell = missing value;
/// names must not contain commas).
inline std::string measure_matrix_to_csv(const MeasureMatrix& m) {
    std::string out = "database";
    for (const auto& name : m.measures) out += "," + name;
    out += '\n';
    for (std::size_t i = 0; i < m.databases.size(); ++i) {
        out += m.databases[i];
        for (std::size_t j = 0; j < m.measures.size(); ++j) {
            out += ',';
            if (const auto& v = m.at(i, j)) out += format_double(*v);
        }
        out += '\n';
    }
    return out;
}

inline MeasureMatrix measure_matrix_from_csv(std::istream& in) {
    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            cells.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (!cells.empty() && !cells.back().empty() && cells.back().back() == '\r')
            cells.back().pop_back();
        return cells;
    };
    std::string line;
    if (!std::getline(in, line)) throw InputError("measure matrix CSV is empty");
    const auto header = split(line);
    if (header.size() < 2 || header[0] != "database")
        throw InputError("measure matrix CSV must start with a 'database,<measures...>' header");

    MeasureMatrix m;
    m.measures.assign(header.begin() + 1, header.end());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != header.size())
            throw InputError("measure matrix row has " + std::to_string(cells.size()) +
                             " cells, expected " + std::to_string(header.size()));
        m.databases.push_back(cells[0]);
        for (std::size_t j = 1; j < cells.size(); ++j) {
            if (cells[j].empty())
                m.values.emplace_back(std::nullopt);
            else
                m.values.emplace_back(std::stod(cells[j]));
        }
    }
    if (m.databases.empty()) throw InputError("measure matrix CSV has no data rows");
    return m;
}

/// JSON round-trip: {"databases": [...], "measures": [...],
/// "values": [[...]]} with null marking missing cells.
inline nlohmann::json measure_matrix_to_json(const MeasureMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.databases.size(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.measures.size(); ++j) {
            if (const auto& v = m.at(i, j))
                row.push_back(*v);
            else
                row.push_back(nullptr);
        }
        rows.push_back(std::move(row));
    }
    return {{"databases", m.databases}, {"measures", m.measures}, {"values", rows}};
}

inline MeasureMatrix measure_matrix_from_json(const nlohmann::json& j) {
    MeasureMatrix m;
    try {
        m.databases = j.at("databases").get<std::vector<std::string>>();
        m.measures = j.at("measures").get<std::vector<std::string>>();
        const auto& rows = j.at("values");
        if (!rows.is_array() || rows.size() != m.databases.size())
            throw InputError("measure matrix JSON needs one value row per database");
        for (const auto& row : rows) {
            if (!row.is_array() || row.size() != m.measures.size())
                throw InputError("measure matrix JSON row length does not match measures");
            for (const auto& cell : row) {
                if (cell.is_null())
                    m.values.emplace_back(std::nullopt);
                else
                    m.values.emplace_back(cell.get<double>());
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed measure matrix JSON: ") + e.what());
    }
    if (m.databases.empty()) throw InputError("measure matrix JSON has no databases");
    return m;
}

// --- externally studentized residuals -----------------------------------------

/// Residuals, consistency ranks and significance flags per database and
/// measure. Columns that could not be studentized are dropped and listed
/// with the reason. Ranks order |residual| ascending (1 = most typical);
/// a flag marks |residual| beyond the two-tailed t critical value.
struct ResidualMatrix {
    std::vector<std::string> databases;
    std::vector<std::string> measures;                ///< surviving columns
    std::vector<std::optional<double>> residuals;     ///< row-major
    std::vector<std::optional<int>> ranks;            ///< row-major, 1..present
    std::vector<char> flags;                          ///< row-major
    std::vector<std::pair<std::string, std::string>> dropped; ///< (measure, reason)
    double t_critical = 0.0;                          ///< at full N
    double significance = 0.1;

    std::size_t column_count() const { return measures.size(); }
    const std::optional<double>& residual(std::size_t db, std::size_t m) const {
        return residuals[db * measures.size() + m];
    }
    const std::optional<int>& rank(std::size_t db, std::size_t m) const {
        return ranks[db * measures.size() + m];
    }
    bool flag(std::size_t db, std::size_t m) const { return flags[db * measures.size() + m]; }
};

/// Studentizes every column of the matrix externally: each value is
/// compared against the mean of the other databases and scaled by their
/// corrected deviation,
///     x' = (x - mean_others) / (sd_others * sqrt(1 - 1/N)),
/// with sd_others^2 = SS_others / (N - 3), so that a column (1..6) puts
/// its first database at exactly -1.8. Requires at least 4 databases.
/// Columns are dropped (with diagnostics) when more than one cell is
/// missing, when fewer than 4 values remain, or when any leave-one-out
/// deviation is zero.
inline ResidualMatrix studentized_residuals(const MeasureMatrix& m, double significance = 0.1) {
    const std::size_t n = m.databases.size();
    if (n < 4)
        throw PreconditionError("studentized residuals need at least 4 databases, got " +
                                std::to_string(n));
    if (significance <= 0.0 || significance >= 1.0)
        throw PreconditionError("significance must lie in (0, 1)");

    ResidualMatrix rm;
    rm.databases = m.databases;
    rm.significance = significance;
    rm.t_critical = student_t_critical(static_cast<double>(n - 2), significance);

    struct Column {
        std::vector<std::optional<double>> residuals;
        std::vector<std::optional<int>> ranks;
        std::vector<char> flags;
    };
    std::vector<Column> kept;

    for (std::size_t j = 0; j < m.measures.size(); ++j) {
        std::vector<std::size_t> present;
        for (std::size_t i = 0; i < n; ++i)
            if (m.at(i, j)) present.push_back(i);
        if (n - present.size() > 1) {
            rm.dropped.emplace_back(m.measures[j], "more than one missing value");
            continue;
        }
        if (present.size() < 4) {
            rm.dropped.emplace_back(m.measures[j], "fewer than 4 usable values");
            continue;
        }
        const double np = static_cast<double>(present.size());
        double sum = 0.0;
        for (std::size_t i : present) sum += *m.at(i, j);

        Column col;
        col.residuals.assign(n, std::nullopt);
        col.ranks.assign(n, std::nullopt);
        col.flags.assign(n, 0);
        const double t_col = student_t_critical(np - 2.0, significance);
        bool degenerate = false;
        for (std::size_t i : present) {
            const double x = *m.at(i, j);
            const double mean_others = (sum - x) / (np - 1.0);
            double ss = 0.0;
            for (std::size_t k : present)
                if (k != i) {
                    const double d = *m.at(k, j) - mean_others;
                    ss += d * d;
                }
            if (ss <= 0.0) {
                degenerate = true;
                break;
            }
            const double sd = std::sqrt(ss / (np - 3.0));
            const double value = (x - mean_others) / (sd * std::sqrt(1.0 - 1.0 / np));
            col.residuals[i] = value;
            col.flags[i] = std::abs(value) > t_col;
        }
        if (degenerate) {
            rm.dropped.emplace_back(m.measures[j],
                                    "zero leave-one-out deviation (near-constant column)");
            continue;
        }
        std::sort(present.begin(), present.end(), [&](std::size_t a, std::size_t b) {
            const double va = std::abs(*col.residuals[a]);
            const double vb = std::abs(*col.residuals[b]);
            return va != vb ? va < vb : a < b;
        });
        for (std::size_t pos = 0; pos < present.size(); ++pos)
            col.ranks[present[pos]] = static_cast<int>(pos + 1);

        rm.measures.push_back(m.measures[j]);
        kept.push_back(std::move(col));
    }

    if (rm.measures.empty())
        throw PreconditionError("no measure column survived studentization");
    rm.residuals.resize(n * rm.measures.size());
    rm.ranks.resize(n * rm.measures.size());
    rm.flags.resize(n * rm.measures.size());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < rm.measures.size(); ++j) {
            rm.residuals[i * rm.measures.size() + j] = kept[j].residuals[i];
            rm.ranks[i * rm.measures.size() + j] = kept[j].ranks[i];
            rm.flags[i * rm.measures.size() + j] = kept[j].flags[i];
        }
    return rm;
}

// --- independence screening ----------------------------------------------------

namespace detail {

inline std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
    return pearson_over_samples([&](auto&& take) {
        for (std::size_t i = 0; i < x.size(); ++i) take(x[i], y[i]);
    });
}

/// Average-rank transform (ties share the mean of their positions).
inline std::vector<double> average_ranks(std::span<const double> x) {
    std::vector<std::size_t> order(x.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return x[a] != x[b] ? x[a] < x[b] : a < b;
    });
    std::vector<double> rank(x.size(), 0.0);
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
        const double shared = static_cast<double>(i + j + 2) / 2.0; // mean of i+1 .. j+1
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = shared;
        i = j + 1;
    }
    return rank;
}

inline std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    return pearson(rx, ry);
}

} // namespace detail

struct SelectionResult {
    std::vector<std::size_t> selected;   ///< surviving column indices, canonical order
    std::vector<std::string> selected_names;
    /// removal log: (measure, dependent pairs at removal, summed |z|)
    std::vector<std::tuple<std::string, std::size_t, double>> removed;
};

/// Greedily removes measures until no pair of the survivors is judged
/// dependent. A pair is dependent when either the Pearson correlation of
/// its residual columns or the Spearman correlation of its rank columns
/// rejects independence under the Fisher z-test at the given
/// significance. Among the remaining measures the one in the most
/// dependent pairs is removed first (ties: larger summed |z|, then the
/// later canonical position). Fails if fewer than two measures survive.
inline SelectionResult select_independent_measures(const ResidualMatrix& rm,
                                                   double significance = 0.1) {
    const std::size_t mcount = rm.column_count();
    const std::size_t n = rm.databases.size();
    if (mcount < 2)
        throw PreconditionError("independence screening needs at least 2 measures");
    const double z_crit = normal_critical(significance);

    // Pairwise dependence strengths, computed once over present rows.
    std::vector<double> strength(mcount * mcount, 0.0);
    std::vector<char> dependent(mcount * mcount, 0);
    for (std::size_t a = 0; a < mcount; ++a)
        for (std::size_t b = a + 1; b < mcount; ++b) {
            std::vector<double> res_a, res_b, rank_a, rank_b;
            for (std::size_t i = 0; i < n; ++i)
                if (rm.residual(i, a) && rm.residual(i, b)) {
                    res_a.push_back(*rm.residual(i, a));
                    res_b.push_back(*rm.residual(i, b));
                    rank_a.push_back(static_cast<double>(*rm.rank(i, a)));
                    rank_b.push_back(static_cast<double>(*rm.rank(i, b)));
                }
            if (res_a.size() < 4) continue; // too few shared rows to ever reject
            double z = 0.0;
            if (const auto r = detail::pearson(res_a, res_b))
                z = std::abs(fisher_z(*r, res_a.size()));
            if (const auto rs = detail::spearman(rank_a, rank_b))
                z = std::max(z, std::abs(fisher_z(*rs, rank_a.size())));
            strength[a * mcount + b] = strength[b * mcount + a] = z;
            dependent[a * mcount + b] = dependent[b * mcount + a] = z >= z_crit;
        }

    std::vector<char> alive(mcount, 1);
    SelectionResult out;
    while (true) {
        std::size_t worst = mcount;
        std::size_t worst_pairs = 0;
        double worst_sum = 0.0;
        for (std::size_t a = 0; a < mcount; ++a) {
            if (!alive[a]) continue;
            std::size_t pairs = 0;
            double sum = 0.0;
            for (std::size_t b = 0; b < mcount; ++b)
                if (alive[b] && dependent[a * mcount + b]) {
                    ++pairs;
                    sum += strength[a * mcount + b];
                }
            if (pairs == 0) continue;
            const bool beats = worst == mcount || pairs > worst_pairs ||
                               (pairs == worst_pairs && sum > worst_sum) ||
                               (pairs == worst_pairs && sum == worst_sum && a > worst);
            if (beats) {
                worst = a;
                worst_pairs = pairs;
                worst_sum = sum;
            }
        }
        if (worst == mcount) break;
        alive[worst] = 0;
        out.removed.emplace_back(rm.measures[worst], worst_pairs, worst_sum);
    }

    for (std::size_t a = 0; a < mcount; ++a)
        if (alive[a]) {
            out.selected.push_back(a);
            out.selected_names.push_back(rm.measures[a]);
        }
    if (out.selected.size() < 2)
        throw PreconditionError("fewer than 2 independent measures remain after screening");
    return out;
}

// --- Friedman test and critical-difference ranking ------------------------------

/// Mean consistency rank of every database over the chosen measure
/// columns (columns missing a database's rank are skipped for that row).
inline std::vector<double> mean_ranks(const ResidualMatrix& rm,
                                      std::span<const std::size_t> columns) {
    if (columns.empty()) throw PreconditionError("mean ranks need at least one column");
    std::vector<double> out(rm.databases.size(), 0.0);
    for (std::size_t i = 0; i < rm.databases.size(); ++i) {
        double sum = 0.0;
        std::size_t k = 0;
        for (std::size_t j : columns)
            if (const auto& r = rm.rank(i, j)) {
                sum += static_cast<double>(*r);
                ++k;
            }
        if (k == 0)
            throw PreconditionError("database " + rm.databases[i] + " has no usable ranks");
        out[i] = sum / static_cast<double>(k);
    }
    return out;
}

struct FriedmanResult {
    double statistic = 0.0;
    double critical = 0.0; ///< one-tailed chi-squared at N-1 degrees of freedom
    bool significant = false;
};

/// Friedman rank test over K measures and N databases:
/// chi2 = 12K / (N(N+1)) * (sum R_i^2 - N(N+1)^2 / 4).
inline FriedmanResult friedman_test(std::span<const double> mean_ranks_,
                                    std::size_t k_measures, double significance = 0.1) {
    const std::size_t n = mean_ranks_.size();
    if (n < 3 || k_measures < 2)
        throw PreconditionError("Friedman test needs >= 3 databases and >= 2 measures");
    const double nd = static_cast<double>(n);
    double sum_sq = 0.0;
    for (double r : mean_ranks_) sum_sq += r * r;
    FriedmanResult out;
    out.statistic = 12.0 * static_cast<double>(k_measures) / (nd * (nd + 1.0)) *
                    (sum_sq - nd * (nd + 1.0) * (nd + 1.0) / 4.0);
    out.critical = chi_squared_critical(nd - 1.0, significance);
    out.significant = out.statistic > out.critical;
    return out;
}

/// Databases ordered by mean rank, partitioned into maximal contiguous
/// groups whose internal rank range stays below the critical difference.
struct RankingResult {
    std::vector<std::string> databases;   ///< original order
    std::vector<double> mean_ranks;
    std::vector<std::size_t> order;       ///< database indices, best rank first
    double critical_difference = 0.0;
    double q = 0.0;
    FriedmanResult friedman;
    /// index lists into `databases`; a single all-inclusive group when the
    /// Friedman test was not significant
    std::vector<std::vector<std::size_t>> groups;
};

/// Nemenyi critical-difference grouping: CD = q * sqrt(N(N+1) / (6K)).
/// The default q = 2.59 is the studentized-range constant for six
/// compared entities at a significance of 0.1.
inline RankingResult nemenyi_groups(std::span<const double> ranks,
                                    std::vector<std::string> databases,
                                    std::size_t k_measures, double q = 2.59,
                                    const FriedmanResult* friedman = nullptr) {
    const std::size_t n = ranks.size();
    if (n != databases.size() || n < 2)
        throw PreconditionError("need one mean rank per database (>= 2)");
    RankingResult out;
    out.databases = std::move(databases);
    out.mean_ranks.assign(ranks.begin(), ranks.end());
    out.q = q;
    const double nd = static_cast<double>(n);
    out.critical_difference =
        q * std::sqrt(nd * (nd + 1.0) / (6.0 * static_cast<double>(k_measures)));
    if (friedman) out.friedman = *friedman;

    out.order.resize(n);
    std::iota(out.order.begin(), out.order.end(), 0);
    std::sort(out.order.begin(), out.order.end(), [&](std::size_t a, std::size_t b) {
        return ranks[a] != ranks[b] ? ranks[a] < ranks[b] : a < b;
    });

    if (friedman && !friedman->significant) {
        out.groups.emplace_back(out.order); // indistinguishable as a whole
        return out;
    }

    // Maximal windows over the sorted ranks with range < CD.
    std::size_t last_end = 0;
    for (std::size_t start = 0; start < n; ++start) {
        std::size_t end = start + 1;
        while (end < n &&
               ranks[out.order[end]] - ranks[out.order[start]] < out.critical_difference)
            ++end;
        if (end > last_end) { // not contained in the previous window
            out.groups.emplace_back(out.order.begin() + static_cast<std::ptrdiff_t>(start),
                                    out.order.begin() + static_cast<std::ptrdiff_t>(end));
            last_end = end;
        }
    }
    return out;
}

} // namespace bibnet
