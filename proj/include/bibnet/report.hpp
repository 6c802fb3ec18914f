#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "bibnet/anf.hpp"
#include "bibnet/graph.hpp"
#include "bibnet/measures.hpp"
#include "bibnet/mds.hpp"
#include "bibnet/sampling.hpp"
#include "bibnet/stats.hpp"

namespace bibnet {

// --- CSV exports ---------------------------------------------------------------

inline std::string profiles_to_csv(const std::vector<ProfileRow>& rows) {
    std::string out = "degree,count,neighbor_connectivity,mean_clustering\n";
    for (const auto& row : rows) {
        out += std::to_string(row.degree) + "," + std::to_string(row.count) + ",";
        if (row.neighbor_connectivity) out += format_double(*row.neighbor_connectivity);
        out += "," + format_double(row.mean_clustering) + "\n";
    }
    return out;
}

inline std::string hop_plot_to_csv(const HopPlot& plot) {
    std::string out = "delta,h\n0,0\n";
    for (std::size_t i = 0; i < plot.h.size(); ++i)
        out += std::to_string(i + 1) + "," + format_double(plot.h[i]) + "\n";
    return out;
}

inline std::string residuals_to_csv(const ResidualMatrix& rm) {
    std::string out = "database";
    for (const auto& name : rm.measures) out += "," + name;
    out += '\n';
    for (std::size_t i = 0; i < rm.databases.size(); ++i) {
        out += rm.databases[i];
        for (std::size_t j = 0; j < rm.measures.size(); ++j) {
            out += ',';
            if (const auto& v = rm.residual(i, j)) out += format_double(*v);
        }
        out += '\n';
    }
    return out;
}

inline std::string ranks_to_csv(const ResidualMatrix& rm) {
    std::string out = "database";
    for (const auto& name : rm.measures) out += "," + name;
    out += '\n';
    for (std::size_t i = 0; i < rm.databases.size(); ++i) {
        out += rm.databases[i];
        for (std::size_t j = 0; j < rm.measures.size(); ++j) {
            out += ',';
            if (const auto& r = rm.rank(i, j)) out += std::to_string(*r);
        }
        out += '\n';
    }
    return out;
}

inline std::string flags_to_csv(const ResidualMatrix& rm) {
    std::string out = "database";
    for (const auto& name : rm.measures) out += "," + name;
    out += '\n';
    for (std::size_t i = 0; i < rm.databases.size(); ++i) {
        out += rm.databases[i];
        for (std::size_t j = 0; j < rm.measures.size(); ++j) {
            out += ',';
            out += rm.flag(i, j) ? '1' : '0';
        }
        out += '\n';
    }
    return out;
}

/// Databases best-first with their mean consistency ranks.
inline std::string ranking_to_csv(const RankingResult& ranking) {
    std::string out = "database,mean_rank\n";
    for (std::size_t idx : ranking.order)
        out += ranking.databases[idx] + "," + format_double(ranking.mean_ranks[idx]) + "\n";
    return out;
}

/// Embedding CSV, stress and restart recorded as comment headers.
inline std::string embedding_to_csv(const MdsResult& mds) {
    std::string out = "# stress " + format_double(mds.stress) + "\n# restart " +
                      std::to_string(mds.best_restart) + " iterations " +
                      std::to_string(mds.iterations) + " seed " + std::to_string(mds.seed) +
                      "\ndatabase";
    const char* axes[] = {"x", "y", "z"};
    for (std::size_t k = 0; k < mds.dimensions; ++k) {
        out += ',';
        out += k < 3 ? axes[k] : ("axis" + std::to_string(k + 1));
    }
    out += '\n';
    for (std::size_t i = 0; i < mds.labels.size(); ++i) {
        out += mds.labels[i];
        for (std::size_t k = 0; k < mds.dimensions; ++k)
            out += "," + format_double(mds.points[i * mds.dimensions + k]);
        out += '\n';
    }
    return out;
}

// --- JSON exports ---------------------------------------------------------------

inline nlohmann::json ranking_to_json(const RankingResult& ranking) {
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& group : ranking.groups) {
        nlohmann::json names = nlohmann::json::array();
        for (std::size_t idx : group) names.push_back(ranking.databases[idx]);
        groups.push_back(std::move(names));
    }
    nlohmann::json ranks = nlohmann::json::object();
    for (std::size_t i = 0; i < ranking.databases.size(); ++i)
        ranks[ranking.databases[i]] = ranking.mean_ranks[i];
    return {{"critical_difference", ranking.critical_difference},
            {"q", ranking.q},
            {"friedman",
             {{"statistic", ranking.friedman.statistic},
              {"critical", ranking.friedman.critical},
              {"significant", ranking.friedman.significant}}},
            {"mean_ranks", ranks},
            {"groups", groups}};
}

inline nlohmann::json sample_to_json(const Sample& sample) {
    return {{"ks", sample.ks},
            {"seed", sample.seed},
            {"size", sample.node_ids.size()},
            {"links", sample.induced_links.size()},
            {"truncated", sample.truncated}};
}

// --- DOT export -----------------------------------------------------------------

namespace detail {

inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

} // namespace detail

/// Graphviz export of a sample; nodes carry their original keys as
/// labels when a key table is given.
inline std::string sample_to_dot(const Sample& sample, bool directed,
                                 const std::vector<std::string>* node_keys = nullptr) {
    std::string out = directed ? "digraph sample {\n" : "graph sample {\n";
    out += "  node [shape=point];\n";
    for (NodeId v : sample.node_ids) {
        out += "  n" + std::to_string(v);
        if (node_keys && v < node_keys->size())
            out += " [label=\"" + detail::dot_escape((*node_keys)[v]) + "\", shape=circle]";
        out += ";\n";
    }
    const char* arrow = directed ? " -> " : " -- ";
    for (const Link& link : sample.induced_links)
        out += "  n" + std::to_string(link.source) + arrow + "n" + std::to_string(link.target) +
               ";\n";
    out += "}\n";
    return out;
}

// --- critical-difference diagram --------------------------------------------------

namespace detail {

inline std::string svg_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

} // namespace detail

/// Critical-difference diagram: a mean-rank number line (rank 1
/// leftmost), the CD span drawn to scale above it, one labeled stem per
/// database, and a bold line under each group of databases whose mean
/// ranks are statistically indistinguishable. A non-significant
/// Friedman test is announced in a banner instead of group lines.
inline std::string cd_diagram_svg(const RankingResult& ranking) {
    const std::size_t n = ranking.databases.size();
    const double x0 = 70.0;
    const double x1 = 570.0;
    const double axis_y = 70.0;
    const double nd = static_cast<double>(n);
    const auto x_of = [&](double rank) { return x0 + (rank - 1.0) / (nd - 1.0) * (x1 - x0); };

    const double group_band = 14.0 * static_cast<double>(ranking.groups.size());
    const double label_band = 16.0 * static_cast<double>(n);
    const double height = axis_y + group_band + label_band + 30.0;

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"" +
                      detail::svg_num(height) + "\" viewBox=\"0 0 640 " + detail::svg_num(height) +
                      "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect width=\"640\" height=\"" + detail::svg_num(height) + "\" fill=\"white\"/>\n";

    // CD scale bar.
    if (ranking.critical_difference > 0.0 && n > 1) {
        const double cd_px = ranking.critical_difference / (nd - 1.0) * (x1 - x0);
        const double bar_y = 24.0;
        svg += "<line x1=\"" + detail::svg_num(x0) + "\" y1=\"" + detail::svg_num(bar_y) +
               "\" x2=\"" + detail::svg_num(x0 + cd_px) + "\" y2=\"" + detail::svg_num(bar_y) +
               "\" stroke=\"black\"/>\n";
        for (double x : {x0, x0 + cd_px})
            svg += "<line x1=\"" + detail::svg_num(x) + "\" y1=\"" + detail::svg_num(bar_y - 4) +
                   "\" x2=\"" + detail::svg_num(x) + "\" y2=\"" + detail::svg_num(bar_y + 4) +
                   "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + detail::svg_num(x0 + cd_px + 8) + "\" y=\"" +
               detail::svg_num(bar_y + 4) + "\">CD = " +
               detail::svg_num(ranking.critical_difference) + "</text>\n";
    }

    // Axis with integer ticks.
    svg += "<line x1=\"" + detail::svg_num(x0) + "\" y1=\"" + detail::svg_num(axis_y) +
           "\" x2=\"" + detail::svg_num(x1) + "\" y2=\"" + detail::svg_num(axis_y) +
           "\" stroke=\"black\"/>\n";
    for (std::size_t r = 1; r <= n; ++r) {
        const double x = x_of(static_cast<double>(r));
        svg += "<line x1=\"" + detail::svg_num(x) + "\" y1=\"" + detail::svg_num(axis_y - 5) +
               "\" x2=\"" + detail::svg_num(x) + "\" y2=\"" + detail::svg_num(axis_y) +
               "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + detail::svg_num(x) + "\" y=\"" + detail::svg_num(axis_y - 9) +
               "\" text-anchor=\"middle\">" + std::to_string(r) + "</text>\n";
    }

    // Bold group lines just below the axis.
    double group_y = axis_y + 12.0;
    if (ranking.friedman.significant || ranking.groups.size() != 1) {
        for (const auto& group : ranking.groups) {
            double lo = ranking.mean_ranks[group.front()];
            double hi = lo;
            for (std::size_t idx : group) {
                lo = std::min(lo, ranking.mean_ranks[idx]);
                hi = std::max(hi, ranking.mean_ranks[idx]);
            }
            svg += "<line x1=\"" + detail::svg_num(x_of(lo) - 3) + "\" y1=\"" +
                   detail::svg_num(group_y) + "\" x2=\"" + detail::svg_num(x_of(hi) + 3) +
                   "\" y2=\"" + detail::svg_num(group_y) +
                   "\" stroke=\"black\" stroke-width=\"4\"/>\n";
            group_y += 14.0;
        }
    } else {
        svg += "<text x=\"320\" y=\"" + detail::svg_num(group_y + 4) +
               "\" text-anchor=\"middle\" font-style=\"italic\">no significant "
               "inconsistencies (Friedman test not rejected)</text>\n";
        group_y += 14.0;
    }

    // Stems and labels, best rank first.
    double label_y = axis_y + group_band + 24.0;
    for (std::size_t pos = 0; pos < ranking.order.size(); ++pos) {
        const std::size_t idx = ranking.order[pos];
        const double x = x_of(ranking.mean_ranks[idx]);
        const bool left = pos < (n + 1) / 2;
        const double text_x = left ? x0 - 6.0 : x1 + 6.0;
        svg += "<line x1=\"" + detail::svg_num(x) + "\" y1=\"" + detail::svg_num(axis_y) +
               "\" x2=\"" + detail::svg_num(x) + "\" y2=\"" + detail::svg_num(label_y - 4) +
               "\" stroke=\"black\" stroke-width=\"0.8\"/>\n";
        svg += "<line x1=\"" + detail::svg_num(x) + "\" y1=\"" + detail::svg_num(label_y - 4) +
               "\" x2=\"" + detail::svg_num(text_x) + "\" y2=\"" + detail::svg_num(label_y - 4) +
               "\" stroke=\"black\" stroke-width=\"0.8\"/>\n";
        svg += "<text x=\"" + detail::svg_num(text_x) + "\" y=\"" + detail::svg_num(label_y) +
               "\" text-anchor=\"" + (left ? "end" : "start") + "\">" +
               detail::xml_escape(ranking.databases[idx]) + " (" +
               detail::svg_num(ranking.mean_ranks[idx]) + ")</text>\n";
        label_y += 16.0;
    }

    svg += "</svg>\n";
    return svg;
}

} // namespace bibnet
