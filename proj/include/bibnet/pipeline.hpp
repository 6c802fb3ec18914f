#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bibnet/common.hpp"
#include "bibnet/graph.hpp"
#include "bibnet/io.hpp"
#include "bibnet/mds.hpp"
#include "bibnet/measures.hpp"
#include "bibnet/records.hpp"
#include "bibnet/report.hpp"
#include "bibnet/sampling.hpp"
#include "bibnet/stats.hpp"

namespace bibnet {

// --- paradigms -------------------------------------------------------------------

enum class Paradigm { pp, aa_cite, aa_coauth };

inline std::string_view paradigm_name(Paradigm p) {
    switch (p) {
    case Paradigm::pp: return "pp";
    case Paradigm::aa_cite: return "aa-cite";
    default: return "aa-coauth";
    }
}

inline Paradigm paradigm_from_name(std::string_view name) {
    if (name == "pp") return Paradigm::pp;
    if (name == "aa-cite") return Paradigm::aa_cite;
    if (name == "aa-coauth") return Paradigm::aa_coauth;
    throw InputError("unknown paradigm '" + std::string(name) +
                     "' (expected pp, aa-cite or aa-coauth)");
}

inline bool paradigm_directed(Paradigm p) { return p != Paradigm::aa_coauth; }

inline BuiltNetwork build_paradigm(const RecordSet& records, Paradigm p) {
    switch (p) {
    case Paradigm::pp: return build_paper_citation(records);
    case Paradigm::aa_cite: return build_author_citation(records);
    default: return build_coauthorship(records);
    }
}

// --- run configuration -------------------------------------------------------------

struct DatasetSpec {
    std::string name;
    std::string path;
    RecordFormat format = RecordFormat::jsonl;
    std::vector<Paradigm> paradigms; ///< defaults by format when empty in config
};

struct RunConfig {
    std::vector<DatasetSpec> datasets;
    double k_min = 10.0;
    int anf_realizations = 100;
    int anf_trials = 32;
    std::size_t sample_size = 250;
    std::size_t sample_attempts = 5000;
    std::uint64_t seed = 42;
    std::string out = "out";
    double significance = 0.1;
    std::size_t mds_dimensions = 2;
    std::size_t mds_restarts = 20;
    double nemenyi_q = 2.59;
    BowTieMode bowtie_mode = BowTieMode::degree;
    std::optional<Paradigm> paradigm_filter; ///< CLI --paradigm restriction

    MeasureConfig measure_config() const {
        MeasureConfig mc;
        mc.k_min = k_min;
        mc.anf_realizations = anf_realizations;
        mc.anf_trials = anf_trials;
        mc.seed = seed;
        mc.bowtie_mode = bowtie_mode;
        return mc;
    }
};

namespace detail {

inline bool safe_name(const std::string& name) {
    if (name.empty()) return false;
    for (char c : name)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.'))
            return false;
    return true;
}

} // namespace detail

inline RunConfig run_config_from_json(const nlohmann::json& j) {
    RunConfig c;
    try {
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("k_min")) c.k_min = j.at("k_min").get<double>();
        if (j.contains("significance")) c.significance = j.at("significance").get<double>();
        if (j.contains("out")) c.out = j.at("out").get<std::string>();
        if (j.contains("nemenyi_q")) c.nemenyi_q = j.at("nemenyi_q").get<double>();
        if (j.contains("bowtie")) {
            const auto mode = j.at("bowtie").get<std::string>();
            if (mode == "degree")
                c.bowtie_mode = BowTieMode::degree;
            else if (mode == "scc")
                c.bowtie_mode = BowTieMode::scc;
            else
                throw InputError("bowtie mode must be 'degree' or 'scc'");
        }
        if (j.contains("anf")) {
            const auto& a = j.at("anf");
            if (a.contains("realizations")) c.anf_realizations = a.at("realizations").get<int>();
            if (a.contains("trials")) c.anf_trials = a.at("trials").get<int>();
        }
        if (j.contains("sampling")) {
            const auto& s = j.at("sampling");
            if (s.contains("size")) c.sample_size = s.at("size").get<std::size_t>();
            if (s.contains("attempts")) c.sample_attempts = s.at("attempts").get<std::size_t>();
        }
        if (j.contains("mds")) {
            const auto& m = j.at("mds");
            if (m.contains("dimensions")) c.mds_dimensions = m.at("dimensions").get<std::size_t>();
            if (m.contains("restarts")) c.mds_restarts = m.at("restarts").get<std::size_t>();
        }
        for (const auto& d : j.at("datasets")) {
            DatasetSpec spec;
            spec.name = d.at("name").get<std::string>();
            spec.path = d.at("path").get<std::string>();
            if (d.contains("format"))
                spec.format = record_format_from_name(d.at("format").get<std::string>());
            if (d.contains("paradigms"))
                for (const auto& p : d.at("paradigms"))
                    spec.paradigms.push_back(paradigm_from_name(p.get<std::string>()));
            else if (spec.format == RecordFormat::jsonl)
                spec.paradigms = {Paradigm::pp, Paradigm::aa_cite, Paradigm::aa_coauth};
            else
                spec.paradigms = {Paradigm::pp}; // plain link lists carry no author data
            c.datasets.push_back(std::move(spec));
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed run config: ") + e.what());
    }

    if (c.datasets.empty()) throw InputError("run config needs at least one dataset");
    if (c.significance <= 0.0 || c.significance >= 1.0)
        throw InputError("significance must lie in (0, 1)");
    if (c.k_min <= 0.0) throw InputError("k_min must be positive");
    if (c.anf_realizations < 1 || c.anf_trials < 1 || c.anf_trials > 64)
        throw InputError("anf needs realizations >= 1 and 1 <= trials <= 64");
    if (c.sample_size < 2 || c.sample_attempts < 1)
        throw InputError("sampling needs size >= 2 and attempts >= 1");
    if (c.mds_dimensions != 2 && c.mds_dimensions != 3)
        throw InputError("mds dimensions must be 2 or 3");
    if (c.mds_restarts < 1) throw InputError("mds needs at least 1 restart");
    std::vector<std::string> names;
    for (const auto& d : c.datasets) {
        if (!detail::safe_name(d.name))
            throw InputError("dataset name '" + d.name +
                             "' must be non-empty [A-Za-z0-9._-] for use in file names");
        if (d.paradigms.empty())
            throw InputError("dataset " + d.name + " requests no paradigm");
        names.push_back(d.name);
    }
    std::sort(names.begin(), names.end());
    if (std::adjacent_find(names.begin(), names.end()) != names.end())
        throw InputError("dataset names must be unique");
    return c;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
    const auto parsed = nlohmann::json::parse(read_file(path), nullptr, false);
    if (parsed.is_discarded())
        throw InputError("config file " + path.string() + " is not valid JSON");
    return run_config_from_json(parsed);
}

/// Canonical JSON echo of a config (provenance and digests).
inline nlohmann::json run_config_to_json(const RunConfig& c) {
    nlohmann::json datasets = nlohmann::json::array();
    for (const auto& d : c.datasets) {
        nlohmann::json paradigms = nlohmann::json::array();
        for (Paradigm p : d.paradigms) paradigms.push_back(std::string(paradigm_name(p)));
        const char* format = d.format == RecordFormat::jsonl      ? "jsonl"
                             : d.format == RecordFormat::edgelist ? "edgelist"
                                                                  : "cora-pairs";
        datasets.push_back({{"name", d.name},
                            {"path", d.path},
                            {"format", format},
                            {"paradigms", paradigms}});
    }
    nlohmann::json j{{"datasets", datasets},
                     {"k_min", c.k_min},
                     {"anf", {{"realizations", c.anf_realizations}, {"trials", c.anf_trials}}},
                     {"sampling", {{"size", c.sample_size}, {"attempts", c.sample_attempts}}},
                     {"mds", {{"dimensions", c.mds_dimensions}, {"restarts", c.mds_restarts}}},
                     {"seed", c.seed},
                     {"out", c.out},
                     {"significance", c.significance},
                     {"nemenyi_q", c.nemenyi_q},
                     {"bowtie", c.bowtie_mode == BowTieMode::degree ? "degree" : "scc"}};
    if (c.paradigm_filter)
        j["paradigm_filter"] = std::string(paradigm_name(*c.paradigm_filter));
    return j;
}

// --- output layout ------------------------------------------------------------------

struct OutputPaths {
    std::filesystem::path root;

    std::filesystem::path graphs() const { return root / "graphs"; }
    std::filesystem::path measures() const { return root / "measures"; }
    std::filesystem::path profiles() const { return root / "profiles"; }
    std::filesystem::path samples() const { return root / "samples"; }
    std::filesystem::path compare(std::string_view paradigm) const {
        return root / "compare" / std::string(paradigm);
    }
    static std::string stem(const std::string& dataset, std::string_view paradigm) {
        return dataset + "-" + std::string(paradigm);
    }
    std::filesystem::path graph_file(const std::string& ds, std::string_view p) const {
        return graphs() / (stem(ds, p) + ".graph");
    }
    std::filesystem::path keys_file(const std::string& ds, std::string_view p) const {
        return graphs() / (stem(ds, p) + ".keys");
    }
    std::filesystem::path manifest_file() const { return graphs() / "manifest.json"; }
    std::filesystem::path measure_file(const std::string& ds, std::string_view p) const {
        return measures() / (stem(ds, p) + ".json");
    }
    std::filesystem::path table_file(std::string_view p) const {
        return measures() / ("table-" + std::string(p) + ".csv");
    }
    std::filesystem::path profile_file(const std::string& ds, std::string_view p) const {
        return profiles() / (stem(ds, p) + ".csv");
    }
    std::filesystem::path hop_plot_file(const std::string& ds, std::string_view p) const {
        return profiles() / (stem(ds, p) + "-hopplot.csv");
    }
    std::filesystem::path report_file() const { return root / "report.json"; }
};

namespace detail {

inline void dump_json(const std::filesystem::path& path, const nlohmann::json& j) {
    write_file(path, j.dump(2) + "\n");
}

inline nlohmann::json parse_json_file(const std::filesystem::path& path) {
    const auto parsed = nlohmann::json::parse(read_file(path), nullptr, false);
    if (parsed.is_discarded()) throw InputError(path.string() + " is not valid JSON");
    return parsed;
}

inline std::vector<std::string> read_key_file(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    std::vector<std::string> keys;
    std::string line;
    while (std::getline(in, line)) keys.push_back(line);
    return keys;
}

/// (dataset, paradigm) jobs in config order, after the CLI filter.
inline std::vector<std::pair<const DatasetSpec*, Paradigm>> jobs(const RunConfig& c) {
    std::vector<std::pair<const DatasetSpec*, Paradigm>> out;
    for (const auto& d : c.datasets)
        for (Paradigm p : d.paradigms)
            if (!c.paradigm_filter || p == *c.paradigm_filter) out.emplace_back(&d, p);
    if (out.empty())
        throw InputError("the paradigm filter leaves no (dataset, paradigm) job to run");
    return out;
}

} // namespace detail

// --- ingest ---------------------------------------------------------------------

/// Builds every requested (dataset, paradigm) network, persists the
/// graphs with their node-key tables, and writes graphs/manifest.json.
/// Build failures are recorded per job; the run only fails when no
/// graph at all could be built.
inline nlohmann::json run_ingest(const RunConfig& config) {
    const OutputPaths paths{config.out};
    std::filesystem::create_directories(paths.graphs());

    nlohmann::json inputs = nlohmann::json::object();
    nlohmann::json entries = nlohmann::json::array();
    std::size_t built = 0;

    for (const auto& dataset : config.datasets) {
        std::optional<RecordSet> records;
        ParseReport parse_report;
        std::string dataset_error;
        try {
            std::ifstream in(dataset.path, std::ios::binary);
            if (!in) throw InputError("cannot open " + dataset.path);
            records = parse_records(in, dataset.format, &parse_report);
            inputs[dataset.path] = digest_string(file_digest(dataset.path));
        } catch (const std::exception& e) {
            dataset_error = e.what();
        }

        for (Paradigm p : dataset.paradigms) {
            if (config.paradigm_filter && p != *config.paradigm_filter) continue;
            const auto par = std::string(paradigm_name(p));
            nlohmann::json entry{{"dataset", dataset.name}, {"paradigm", par}};
            if (!dataset_error.empty()) {
                entry["status"] = "error";
                entry["error"] = dataset_error;
                entries.push_back(std::move(entry));
                continue;
            }
            try {
                const BuiltNetwork net = build_paradigm(*records, p);
                const std::uint64_t keys_digest = key_table_digest(net.node_keys);
                save_graph(paths.graph_file(dataset.name, par), net.graph, keys_digest);
                std::string keys_text;
                for (const auto& key : net.node_keys) {
                    keys_text += key;
                    keys_text += '\n';
                }
                write_file(paths.keys_file(dataset.name, par), keys_text);
                entry["status"] = "ok";
                entry["nodes"] = net.graph.node_count();
                entry["links"] = net.graph.link_count();
                entry["self_loops"] = net.graph.self_loop_count();
                entry["dropped_nodes"] = net.dropped_nodes;
                entry["dangling_refs"] = net.dangling_refs;
                entry["self_citations"] = net.self_citations;
                entry["malformed_lines"] = parse_report.malformed_lines;
                entry["keys_digest"] = digest_string(keys_digest);
                entry["graph_file"] = paths.graph_file(dataset.name, par).generic_string();
                entry["keys_file"] = paths.keys_file(dataset.name, par).generic_string();
                ++built;
            } catch (const std::exception& e) {
                entry["status"] = "error";
                entry["error"] = e.what();
            }
            entries.push_back(std::move(entry));
        }
    }

    nlohmann::json manifest{{"tool", {{"name", "bibnet"}, {"version", version}}},
                            {"config", run_config_to_json(config)},
                            {"inputs", inputs},
                            {"graphs", entries}};
    detail::dump_json(paths.manifest_file(), manifest);
    if (built == 0)
        throw InputError("no graph could be built; see " +
                         paths.manifest_file().generic_string());
    return manifest;
}

namespace detail {

/// Persisted-graph jobs recorded as "ok" by a previous ingest run.
inline nlohmann::json load_manifest(const OutputPaths& paths) {
    if (!std::filesystem::exists(paths.manifest_file()))
        throw InputError("no ingest manifest at " + paths.manifest_file().generic_string() +
                         "; run ingest first");
    return parse_json_file(paths.manifest_file());
}

} // namespace detail

// --- measure --------------------------------------------------------------------

/// Measures every persisted graph: per-graph measure vector JSON,
/// degree-profile and hop-plot CSVs, plus one measure-table CSV per
/// paradigm. Statistically undefined measures stay missing cells.
inline nlohmann::json run_measure(const RunConfig& config) {
    const OutputPaths paths{config.out};
    const nlohmann::json manifest = detail::load_manifest(paths);
    std::filesystem::create_directories(paths.measures());
    std::filesystem::create_directories(paths.profiles());

    nlohmann::json entries = nlohmann::json::array();
    std::map<std::string, std::pair<std::vector<std::string>, std::vector<MeasureVector>>>
        by_paradigm;

    for (const auto& graph_entry : manifest.at("graphs")) {
        if (graph_entry.at("status") != "ok") {
            nlohmann::json entry = graph_entry;
            entry["status"] = "skipped";
            entry["error"] = "not ingested: " + graph_entry.value("error", std::string());
            entries.push_back(std::move(entry));
            continue;
        }
        const auto ds = graph_entry.at("dataset").get<std::string>();
        const auto par = graph_entry.at("paradigm").get<std::string>();
        if (config.paradigm_filter && paradigm_from_name(par) != *config.paradigm_filter)
            continue;
        nlohmann::json entry{{"dataset", ds}, {"paradigm", par}};
        try {
            const LoadedGraph loaded = load_graph(paths.graph_file(ds, par));
            HopPlot plot;
            const MeasureVector mv = measure_vector(loaded.graph, config.measure_config(), &plot);
            detail::dump_json(paths.measure_file(ds, par), mv.to_json());
            write_file(paths.profile_file(ds, par), profiles_to_csv(degree_profiles(loaded.graph)));
            write_file(paths.hop_plot_file(ds, par), hop_plot_to_csv(plot));
            entry["status"] = "ok";
            entry["measure_file"] = paths.measure_file(ds, par).generic_string();
            by_paradigm[par].first.push_back(ds);
            by_paradigm[par].second.push_back(mv);
        } catch (const std::exception& e) {
            entry["status"] = "error";
            entry["error"] = e.what();
        }
        entries.push_back(std::move(entry));
    }

    nlohmann::json tables = nlohmann::json::object();
    for (auto& [par, data] : by_paradigm) {
        const MeasureMatrix table = measure_matrix(data.first, data.second);
        write_file(paths.table_file(par), measure_matrix_to_csv(table));
        tables[par] = paths.table_file(par).generic_string();
    }

    nlohmann::json summary{{"graphs", entries}, {"tables", tables}};
    detail::dump_json(paths.measures() / "summary.json", summary);
    return summary;
}

// --- sample ---------------------------------------------------------------------

/// Draws the best-of-n random-walk sample of every persisted graph and
/// exports it as an edge list, a DOT file, and metadata JSON.
inline nlohmann::json run_sample(const RunConfig& config) {
    const OutputPaths paths{config.out};
    const nlohmann::json manifest = detail::load_manifest(paths);
    std::filesystem::create_directories(paths.samples());

    nlohmann::json entries = nlohmann::json::array();
    for (const auto& graph_entry : manifest.at("graphs")) {
        if (graph_entry.at("status") != "ok") continue;
        const auto ds = graph_entry.at("dataset").get<std::string>();
        const auto par = graph_entry.at("paradigm").get<std::string>();
        if (config.paradigm_filter && paradigm_from_name(par) != *config.paradigm_filter)
            continue;
        nlohmann::json entry{{"dataset", ds}, {"paradigm", par}};
        try {
            const LoadedGraph loaded = load_graph(paths.graph_file(ds, par));
            const std::vector<std::string> keys =
                detail::read_key_file(paths.keys_file(ds, par));
            const Sample sample =
                best_sample(loaded.graph, config.sample_attempts, config.sample_size, config.seed);

            const std::string stem = OutputPaths::stem(ds, par);
            std::string edges = "# sample nodes " + std::to_string(sample.node_ids.size()) +
                                " links " + std::to_string(sample.induced_links.size()) +
                                (loaded.graph.directed() ? " directed" : " undirected") + "\n";
            for (const Link& link : sample.induced_links)
                edges += std::to_string(link.source) + " " + std::to_string(link.target) + "\n";
            write_file(paths.samples() / (stem + ".edgelist"), edges);
            write_file(paths.samples() / (stem + ".dot"),
                       sample_to_dot(sample, loaded.graph.directed(), &keys));
            nlohmann::json meta = sample_to_json(sample);
            meta["dataset"] = ds;
            meta["paradigm"] = par;
            detail::dump_json(paths.samples() / (stem + ".json"), meta);

            entry["status"] = "ok";
            entry["ks"] = sample.ks;
            entry["seed"] = sample.seed;
            entry["size"] = sample.node_ids.size();
            entry["truncated"] = sample.truncated;
        } catch (const std::exception& e) {
            entry["status"] = "error";
            entry["error"] = e.what();
        }
        entries.push_back(std::move(entry));
    }

    nlohmann::json summary{{"samples", entries}};
    detail::dump_json(paths.samples() / "summary.json", summary);
    return summary;
}

// --- compare --------------------------------------------------------------------

namespace detail {

/// Columns that can enter a z-scored dissimilarity: at least two
/// present values and nonzero variance. Dropped columns are reported.
inline MeasureMatrix mds_usable_columns(const MeasureMatrix& m, nlohmann::json& dropped) {
    MeasureMatrix out;
    out.databases = m.databases;
    std::vector<std::size_t> keep;
    for (std::size_t j = 0; j < m.measures.size(); ++j) {
        std::vector<double> present;
        for (std::size_t i = 0; i < m.databases.size(); ++i)
            if (m.at(i, j)) present.push_back(*m.at(i, j));
        if (present.size() < 2) {
            dropped.push_back({{"measure", m.measures[j]}, {"reason", "fewer than 2 values"}});
            continue;
        }
        if (std::adjacent_find(present.begin(), present.end(), std::not_equal_to<>()) ==
            present.end()) {
            dropped.push_back({{"measure", m.measures[j]}, {"reason", "constant column"}});
            continue;
        }
        keep.push_back(j);
        out.measures.push_back(m.measures[j]);
    }
    for (std::size_t i = 0; i < m.databases.size(); ++i)
        for (std::size_t j : keep) out.values.push_back(m.at(i, j));
    return out;
}

} // namespace detail

/// Full consistency comparison per paradigm: studentized residuals,
/// inconsistency flags, independence screening, Friedman test, Nemenyi
/// critical-difference groups (CSV + JSON + SVG diagram) and the NMDS
/// embedding. Also assembles report.json from everything persisted so
/// far. Fails only when no paradigm has the four measured databases the
/// statistics need.
inline nlohmann::json run_compare(const RunConfig& config) {
    const OutputPaths paths{config.out};
    const nlohmann::json manifest = detail::load_manifest(paths);

    // Collect measured databases per paradigm, in config order.
    std::map<std::string, std::pair<std::vector<std::string>, std::vector<MeasureVector>>>
        by_paradigm;
    for (const auto& graph_entry : manifest.at("graphs")) {
        if (graph_entry.at("status") != "ok") continue;
        const auto ds = graph_entry.at("dataset").get<std::string>();
        const auto par = graph_entry.at("paradigm").get<std::string>();
        if (config.paradigm_filter && paradigm_from_name(par) != *config.paradigm_filter)
            continue;
        const auto file = paths.measure_file(ds, par);
        if (!std::filesystem::exists(file))
            throw InputError("no measure vector at " + file.generic_string() +
                             "; run measure first");
        by_paradigm[par].first.push_back(ds);
        by_paradigm[par].second.push_back(MeasureVector::from_json(
            detail::parse_json_file(file), paradigm_directed(paradigm_from_name(par))));
    }

    nlohmann::json compare = nlohmann::json::object();
    std::size_t compared = 0;
    for (auto& [par, data] : by_paradigm) {
        nlohmann::json section;
        if (data.first.size() < 4) {
            section["status"] = "skipped";
            section["error"] = "comparison needs >= 4 databases, have " +
                               std::to_string(data.first.size());
            compare[par] = std::move(section);
            continue;
        }
        const auto dir = paths.compare(par);
        std::filesystem::create_directories(dir);
        try {
            const MeasureMatrix matrix = measure_matrix(data.first, data.second);
            const ResidualMatrix rm = studentized_residuals(matrix, config.significance);
            write_file(dir / "residuals.csv", residuals_to_csv(rm));
            write_file(dir / "ranks.csv", ranks_to_csv(rm));
            write_file(dir / "flags.csv", flags_to_csv(rm));

            const SelectionResult selection =
                select_independent_measures(rm, config.significance);
            const std::vector<double> ranks = mean_ranks(rm, selection.selected);
            const FriedmanResult friedman =
                friedman_test(ranks, selection.selected.size(), config.significance);
            const RankingResult ranking = nemenyi_groups(
                ranks, rm.databases, selection.selected.size(), config.nemenyi_q, &friedman);
            write_file(dir / "ranking.csv", ranking_to_csv(ranking));
            detail::dump_json(dir / "groups.json", ranking_to_json(ranking));
            write_file(dir / "cd-diagram.svg", cd_diagram_svg(ranking));

            section["status"] = "ok";
            section["databases"] = data.first;
            nlohmann::json dropped = nlohmann::json::array();
            for (const auto& [measure, reason] : rm.dropped)
                dropped.push_back({{"measure", measure}, {"reason", reason}});
            section["dropped_columns"] = dropped;
            section["selected_measures"] = selection.selected_names;
            nlohmann::json removed = nlohmann::json::array();
            for (const auto& [name, pairs, zsum] : selection.removed)
                removed.push_back(
                    {{"measure", name}, {"dependent_pairs", pairs}, {"z_sum", zsum}});
            section["removed_measures"] = removed;
            section["ranking"] = ranking_to_json(ranking);
            if (!friedman.significant)
                section["banner"] = "no significant inconsistencies (Friedman test not "
                                    "rejected at the configured significance)";

            nlohmann::json mds_dropped = nlohmann::json::array();
            nlohmann::json mds_section;
            try {
                const MeasureMatrix usable = detail::mds_usable_columns(matrix, mds_dropped);
                const DissimilarityMatrix dm = dissimilarity_matrix(usable);
                MdsConfig mds_config;
                mds_config.dimensions = config.mds_dimensions;
                mds_config.restarts = config.mds_restarts;
                mds_config.seed = config.seed;
                const MdsResult mds = nmds_embed(dm, mds_config);
                write_file(dir / "embedding.csv", embedding_to_csv(mds));
                mds_section["status"] = "ok";
                mds_section["stress"] = mds.stress;
                mds_section["restart"] = mds.best_restart;
                mds_section["iterations"] = mds.iterations;
            } catch (const PreconditionError& e) {
                mds_section["status"] = "error";
                mds_section["error"] = e.what();
            }
            mds_section["dropped_columns"] = mds_dropped;
            section["mds"] = std::move(mds_section);
            ++compared;
        } catch (const PreconditionError& e) {
            section["status"] = "error";
            section["error"] = e.what();
        }
        compare[par] = std::move(section);
    }

    // Assemble the report from everything persisted so far.
    nlohmann::json report{{"tool", {{"name", "bibnet"}, {"version", version}}},
                          {"provenance",
                           {{"seed", config.seed},
                            {"k_min", config.k_min},
                            {"significance", config.significance},
                            {"config_digest",
                             digest_string(fnv1a(run_config_to_json(config).dump()))},
                            {"inputs", manifest.at("inputs")}}},
                          {"ingest", manifest.at("graphs")},
                          {"compare", compare}};
    const auto measures_summary = paths.measures() / "summary.json";
    report["measures"] = std::filesystem::exists(measures_summary)
                             ? detail::parse_json_file(measures_summary)
                             : nlohmann::json{{"status", "not run"}};
    const auto samples_summary = paths.samples() / "summary.json";
    report["samples"] = std::filesystem::exists(samples_summary)
                            ? detail::parse_json_file(samples_summary)
                            : nlohmann::json{{"status", "not run"}};
    detail::dump_json(paths.report_file(), report);

    if (compared == 0)
        throw PreconditionError("no paradigm had the >= 4 measured databases needed for "
                                "comparison; see " +
                                paths.report_file().generic_string());
    return report;
}

/// ingest > measure > sample > compare, one deterministic pass.
inline nlohmann::json run_all(const RunConfig& config) {
    run_ingest(config);
    run_measure(config);
    run_sample(config);
    return run_compare(config);
}

} // namespace bibnet
