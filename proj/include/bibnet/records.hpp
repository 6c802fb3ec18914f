#pragma once

#include <istream>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "bibnet/common.hpp"
#include "bibnet/graph.hpp"

namespace bibnet {

/// One bibliographic record. Author and reference lists are de-duplicated
/// preserving first occurrence; references are kept as raw keys and may
/// dangle (point to papers absent from the set).
struct Record {
    std::string paper_id;
    std::vector<std::string> authors;
    std::vector<std::string> refs;
    std::optional<int> year;
};

enum class RecordFormat { jsonl, edgelist, cora_pairs };

inline RecordFormat record_format_from_name(std::string_view name) {
    if (name == "jsonl") return RecordFormat::jsonl;
    if (name == "edgelist") return RecordFormat::edgelist;
    if (name == "cora-pairs") return RecordFormat::cora_pairs;
    throw InputError("unknown record format: " + std::string(name));
}

struct ParseReport {
    std::size_t data_lines = 0;      ///< non-blank, non-comment lines seen
    std::size_t malformed_lines = 0; ///< lines skipped (also covers duplicate ids)
};

/// A parsed database: records plus dense id tables for papers and authors,
/// both assigned in first-appearance order.
class RecordSet {
public:
    void add(Record r) {
        auto [it, fresh] = paper_index_.emplace(r.paper_id,
                                                static_cast<std::uint32_t>(records_.size()));
        if (!fresh) throw InputError("duplicate paper id: " + r.paper_id);
        for (const auto& a : r.authors)
            if (author_index_.emplace(a, static_cast<std::uint32_t>(author_keys_.size())).second)
                author_keys_.push_back(a);
        records_.push_back(std::move(r));
    }

    const std::vector<Record>& records() const { return records_; }
    std::size_t paper_count() const { return records_.size(); }
    std::size_t author_count() const { return author_keys_.size(); }

    std::optional<std::uint32_t> paper(const std::string& key) const {
        auto it = paper_index_.find(key);
        if (it == paper_index_.end()) return std::nullopt;
        return it->second;
    }

    std::uint32_t author(const std::string& key) const { return author_index_.at(key); }
    const std::vector<std::string>& author_keys() const { return author_keys_; }

private:
    std::vector<Record> records_;
    std::unordered_map<std::string, std::uint32_t> paper_index_;
    std::unordered_map<std::string, std::uint32_t> author_index_;
    std::vector<std::string> author_keys_;
};

namespace detail {

inline void dedup_preserving_order(std::vector<std::string>& values) {
    std::unordered_set<std::string_view> seen;
    std::size_t w = 0;
    for (std::size_t r = 0; r < values.size(); ++r)
        if (seen.insert(values[r]).second) {
            if (w != r) values[w] = std::move(values[r]);
            ++w;
        }
    values.resize(w);
}

inline std::optional<Record> record_from_json_line(const std::string& line) {
    const nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return std::nullopt;
    Record r;
    if (auto id = j.find("id"); id != j.end() && id->is_string())
        r.paper_id = id->get<std::string>();
    if (r.paper_id.empty()) return std::nullopt;
    for (const char* field : {"authors", "refs"}) {
        auto it = j.find(field);
        if (it == j.end()) continue;
        if (!it->is_array()) return std::nullopt;
        auto& dest = *field == 'a' ? r.authors : r.refs;
        for (const auto& v : *it) {
            if (!v.is_string()) return std::nullopt;
            dest.push_back(v.get<std::string>());
        }
    }
    if (auto it = j.find("year"); it != j.end()) {
        if (!it->is_number_integer()) return std::nullopt;
        r.year = it->get<int>();
    }
    dedup_preserving_order(r.authors);
    dedup_preserving_order(r.refs);
    return r;
}

} // namespace detail

/// Parses a record stream.
///
/// - jsonl: one {"id", "authors", "refs"[, "year"]} object per line.
/// - edgelist: "citing cited" id pairs; every mentioned id becomes an
///   authorless record and references accumulate on the citing side.
/// - cora-pairs: like edgelist but pairs are "cited citing", matching the
///   column order of the published Cora citation files.
///
/// Blank lines and '#' comments are skipped. Malformed lines (bad JSON,
/// missing id, wrong field types, duplicate ids, short pairs) are counted
/// and skipped; if they exceed 10% of data lines the stream is rejected,
/// since that points at a mislabeled format rather than stray dirt.
inline RecordSet parse_records(std::istream& in, RecordFormat format,
                               ParseReport* report = nullptr) {
    ParseReport local;
    RecordSet set;

    // Pair formats build one record per distinct id; refs join afterwards.
    std::vector<std::pair<std::uint32_t, std::string>> pair_refs;
    std::unordered_map<std::string, std::uint32_t> pair_ids;
    std::vector<std::string> pair_keys;

    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        ++local.data_lines;

        if (format == RecordFormat::jsonl) {
            auto r = detail::record_from_json_line(line);
            if (!r || set.paper(r->paper_id)) {
                ++local.malformed_lines;
                continue;
            }
            set.add(std::move(*r));
            continue;
        }

        std::istringstream fields(line);
        std::string a, b;
        if (!(fields >> a >> b)) {
            ++local.malformed_lines;
            continue;
        }
        if (format == RecordFormat::cora_pairs) std::swap(a, b); // stored as "cited citing"
        auto intern = [&](const std::string& key) {
            auto [it, fresh] = pair_ids.emplace(key, static_cast<std::uint32_t>(pair_keys.size()));
            if (fresh) pair_keys.push_back(key);
            return it->second;
        };
        pair_refs.emplace_back(intern(a), b);
        intern(b);
    }

    if (format != RecordFormat::jsonl) {
        std::vector<Record> records(pair_keys.size());
        for (std::size_t i = 0; i < pair_keys.size(); ++i)
            records[i].paper_id = pair_keys[i];
        for (auto& [citing, cited] : pair_refs)
            records[citing].refs.push_back(std::move(cited));
        for (auto& r : records) {
            detail::dedup_preserving_order(r.refs);
            set.add(std::move(r));
        }
    }

    if (local.malformed_lines * 10 > local.data_lines)
        throw InputError("more than 10% malformed lines (" +
                         std::to_string(local.malformed_lines) + " of " +
                         std::to_string(local.data_lines) + "); wrong format?");
    if (report) *report = local;
    return set;
}

/// A pruned network plus the original string key of every node.
struct BuiltNetwork {
    Graph graph;
    std::vector<std::string> node_keys;
    std::size_t dropped_nodes = 0;    ///< entities discarded for having no links
    std::size_t dangling_refs = 0;    ///< references to unknown papers (no link made)
    std::size_t self_citations = 0;   ///< paper self-references discarded as errors
};

namespace detail {

/// Drops zero-degree nodes, densely re-indexes the survivors in ascending
/// original order, and builds the graph.
inline BuiltNetwork finish_network(std::vector<Link> links, std::size_t entity_count,
                                   const std::vector<std::string>& entity_keys,
                                   bool directed, bool allow_self_loops,
                                   std::size_t dangling, std::size_t self_citations,
                                   const char* what) {
    if (links.empty())
        throw InputError(std::string("no ") + what + " links could be built");
    std::vector<char> used(entity_count, 0);
    for (const Link& l : links) used[l.source] = used[l.target] = 1;
    std::vector<NodeId> remap(entity_count, 0);
    BuiltNetwork out;
    for (std::size_t i = 0; i < entity_count; ++i)
        if (used[i]) {
            remap[i] = static_cast<NodeId>(out.node_keys.size());
            out.node_keys.push_back(entity_keys[i]);
        } else {
            ++out.dropped_nodes;
        }
    for (Link& l : links) {
        l.source = remap[l.source];
        l.target = remap[l.target];
    }
    out.graph = Graph::build(std::move(links), directed, allow_self_loops,
                             out.node_keys.size());
    out.dangling_refs = dangling;
    out.self_citations = self_citations;
    return out;
}

} // namespace detail

/// Paper citation network: a directed link from each paper to every
/// resolvable paper it cites. Self-citations are discarded as data errors
/// and papers that neither cite nor are cited are dropped.
inline BuiltNetwork build_paper_citation(const RecordSet& set) {
    std::vector<Link> links;
    std::vector<std::string> keys;
    keys.reserve(set.paper_count());
    std::size_t dangling = 0, self_cites = 0;
    for (std::uint32_t p = 0; p < set.paper_count(); ++p) {
        const Record& r = set.records()[p];
        keys.push_back(r.paper_id);
        for (const auto& ref : r.refs) {
            const auto q = set.paper(ref);
            if (!q)
                ++dangling;
            else if (*q == p)
                ++self_cites;
            else
                links.push_back({p, *q});
        }
    }
    return detail::finish_network(std::move(links), set.paper_count(), keys,
                                  /*directed=*/true, /*allow_self_loops=*/false,
                                  dangling, self_cites, "paper citation");
}

/// Author citation network: author u links to author v when any paper by
/// u cites any paper by v. Self-loops (authors citing their own other
/// work) are meaningful and retained; paper self-citations are not
/// followed. Authors left without links are dropped.
inline BuiltNetwork build_author_citation(const RecordSet& set) {
    bool any_authors = false;
    std::vector<Link> links;
    std::size_t dangling = 0, self_cites = 0;
    for (std::uint32_t p = 0; p < set.paper_count(); ++p) {
        const Record& r = set.records()[p];
        any_authors = any_authors || !r.authors.empty();
        for (const auto& ref : r.refs) {
            const auto q = set.paper(ref);
            if (!q) {
                ++dangling;
                continue;
            }
            if (*q == p) {
                ++self_cites;
                continue;
            }
            for (const auto& citing : r.authors)
                for (const auto& cited : set.records()[*q].authors)
                    links.push_back({set.author(citing), set.author(cited)});
        }
    }
    if (!any_authors)
        throw InputError("author citation network needs author lists, but all records are authorless");
    std::sort(links.begin(), links.end());
    links.erase(std::unique(links.begin(), links.end()), links.end());
    return detail::finish_network(std::move(links), set.author_count(), set.author_keys(),
                                  /*directed=*/true, /*allow_self_loops=*/true,
                                  dangling, self_cites, "author citation");
}

/// Co-authorship network: an undirected link between every pair of
/// authors sharing a paper. Authors never collaborating are dropped.
inline BuiltNetwork build_coauthorship(const RecordSet& set) {
    std::vector<Link> links;
    for (const Record& r : set.records())
        for (std::size_t i = 0; i < r.authors.size(); ++i)
            for (std::size_t j = i + 1; j < r.authors.size(); ++j) {
                NodeId u = set.author(r.authors[i]);
                NodeId v = set.author(r.authors[j]);
                links.push_back({std::min(u, v), std::max(u, v)});
            }
    std::sort(links.begin(), links.end());
    links.erase(std::unique(links.begin(), links.end()), links.end());
    if (links.empty())
        throw InputError("co-authorship network is empty: every record is single-authored");
    return detail::finish_network(std::move(links), set.author_count(), set.author_keys(),
                                  /*directed=*/false, /*allow_self_loops=*/false,
                                  /*dangling=*/0, /*self_citations=*/0, "co-authorship");
}

} // namespace bibnet
