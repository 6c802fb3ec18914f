#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bibnet/common.hpp"
#include "bibnet/graph.hpp"

namespace bibnet {

/// Parses a whitespace-separated "source target" edge list. Blank lines
/// and lines starting with '#' are ignored. Node ids must be base-10
/// integers that fit a NodeId; they are used verbatim.
inline std::vector<Link> read_edge_list(std::istream& in) {
    std::vector<Link> links;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream fields(line);
        unsigned long long s, t;
        if (!(fields >> s >> t) || s > UINT32_MAX || t > UINT32_MAX)
            throw InputError("edge list line " + std::to_string(line_no) +
                             " is not a node id pair: " + line);
        links.push_back({static_cast<NodeId>(s), static_cast<NodeId>(t)});
    }
    return links;
}

inline std::vector<Link> read_edge_list_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open edge list: " + path.string());
    return read_edge_list(in);
}

inline void write_edge_list(std::ostream& out, const Graph& g) {
    out << "# nodes " << g.node_count() << " links " << g.link_count()
        << (g.directed() ? " directed\n" : " undirected\n");
    for (NodeId u = 0; u < g.node_count(); ++u)
        for (NodeId v : g.out_neighbors(u))
            if (g.directed() || u <= v) out << u << ' ' << v << '\n';
}

/// Reads a whole file into memory (binary-exact).
inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

inline void write_file(const std::filesystem::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write file: " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw InputError("short write: " + path.string());
}

inline std::uint64_t file_digest(const std::filesystem::path& path) {
    return fnv1a(read_file(path));
}

/// Digest of an ordered key table (keys separated by unit separators so
/// that concatenation ambiguity cannot collide).
inline std::uint64_t key_table_digest(const std::vector<std::string>& keys) {
    std::uint64_t state = 0xcbf29ce484222325ULL;
    for (const auto& k : keys) {
        state = fnv1a(k, state);
        state = fnv1a(std::string_view("\x1f", 1), state);
    }
    return state;
}

// --- binary graph persistence ---------------------------------------------
//
// Layout: one JSON header line terminated by '\n', then link_count pairs
// of little-endian uint32 (source, target) in canonical sorted order.

inline void save_graph(const std::filesystem::path& path, const Graph& g,
                       std::uint64_t keys_digest = 0) {
    nlohmann::json header{
        {"format", "bibnet-graph"},
        {"version", 1},
        {"directed", g.directed()},
        {"nodes", g.node_count()},
        {"links", g.link_count()},
        {"self_loops", g.self_loop_count()},
        {"keys_digest", digest_string(keys_digest)},
    };
    std::string bytes = header.dump();
    bytes.push_back('\n');
    bytes.reserve(bytes.size() + 8 * g.link_count());
    auto put32 = [&bytes](NodeId x) {
        bytes.push_back(static_cast<char>(x & 0xff));
        bytes.push_back(static_cast<char>((x >> 8) & 0xff));
        bytes.push_back(static_cast<char>((x >> 16) & 0xff));
        bytes.push_back(static_cast<char>((x >> 24) & 0xff));
    };
    for (NodeId u = 0; u < g.node_count(); ++u)
        for (NodeId v : g.out_neighbors(u))
            if (g.directed() || u <= v) {
                put32(u);
                put32(v);
            }
    write_file(path, bytes);
}

struct LoadedGraph {
    Graph graph;
    std::string keys_digest;
};

inline LoadedGraph load_graph(const std::filesystem::path& path) {
    const std::string bytes = read_file(path);
    const auto eol = bytes.find('\n');
    if (eol == std::string::npos)
        throw InputError("graph file has no header line: " + path.string());
    nlohmann::json header = nlohmann::json::parse(bytes.substr(0, eol), nullptr, false);
    if (header.is_discarded() || header.value("format", "") != "bibnet-graph")
        throw InputError("not a bibnet graph file: " + path.string());

    const std::size_t nodes = header.at("nodes").get<std::size_t>();
    const std::size_t count = header.at("links").get<std::size_t>();
    const bool directed = header.at("directed").get<bool>();
    if (bytes.size() - eol - 1 != count * 8)
        throw InputError("graph file is truncated: " + path.string());

    auto get32 = [&bytes](std::size_t pos) {
        return static_cast<NodeId>(static_cast<unsigned char>(bytes[pos])) |
               static_cast<NodeId>(static_cast<unsigned char>(bytes[pos + 1])) << 8 |
               static_cast<NodeId>(static_cast<unsigned char>(bytes[pos + 2])) << 16 |
               static_cast<NodeId>(static_cast<unsigned char>(bytes[pos + 3])) << 24;
    };
    std::vector<Link> links;
    links.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        links.push_back({get32(eol + 1 + 8 * i), get32(eol + 1 + 8 * i + 4)});

    LoadedGraph out;
    out.keys_digest = header.value("keys_digest", "");
    out.graph = Graph::build(std::move(links), directed, /*allow_self_loops=*/true, nodes);
    return out;
}

} // namespace bibnet
