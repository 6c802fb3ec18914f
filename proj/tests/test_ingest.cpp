#include <catch2/catch_amalgamated.hpp>

#include <sstream>
#include <string>

#include "bibnet/records.hpp"

using bibnet::parse_records;
using bibnet::RecordFormat;
using bibnet::RecordSet;

namespace {

RecordSet parse(const std::string& text, RecordFormat format = RecordFormat::jsonl,
                bibnet::ParseReport* report = nullptr) {
    std::istringstream in(text);
    return parse_records(in, format, report);
}

// Four papers: p2 self-cites and cites a missing paper, p4 is isolated.
const std::string corpus = R"(# a comment line

{"id": "p1", "authors": ["a", "b"], "refs": [], "year": 1999}
{"id": "p2", "authors": ["b", "c"], "refs": ["p1", "p2", "px"]}
{"id": "p3", "authors": ["c"], "refs": ["p1", "p2"]}
{"id": "p4", "authors": ["d"], "refs": []}
)";

} // namespace

TEST_CASE("jsonl parsing keeps order, years and deduplicates within records") {
    const RecordSet set =
        parse(R"({"id": "p1", "authors": ["x", "y", "x"], "refs": ["r", "r"], "year": 2001}
{"id": "p2"}
)");
    REQUIRE(set.paper_count() == 2);
    const auto& r = set.records()[0];
    CHECK(r.paper_id == "p1");
    CHECK(r.authors == std::vector<std::string>{"x", "y"});
    CHECK(r.refs == std::vector<std::string>{"r"});
    REQUIRE(r.year.has_value());
    CHECK(*r.year == 2001);
    CHECK_FALSE(set.records()[1].year.has_value());
    CHECK(set.author_count() == 2);
    CHECK(set.paper("p2").has_value());
    CHECK_FALSE(set.paper("nope").has_value());
}

TEST_CASE("malformed lines are counted, skipped, and capped at 10%") {
    bibnet::ParseReport report;
    std::string many_good;
    for (int i = 0; i < 20; ++i)
        many_good += "{\"id\": \"p" + std::to_string(i) + "\"}\n";

    SECTION("a stray bad line is tolerated") {
        const RecordSet set = parse(many_good + "not json at all\n", RecordFormat::jsonl, &report);
        CHECK(set.paper_count() == 20);
        CHECK(report.data_lines == 21);
        CHECK(report.malformed_lines == 1);
    }
    SECTION("duplicate ids and wrong types are malformed") {
        std::string more_good; // keep the bad lines within the 10% budget
        for (int i = 20; i < 30; ++i) more_good += "{\"id\": \"p" + std::to_string(i) + "\"}\n";
        const RecordSet set = parse(many_good + more_good + "{\"id\": \"p0\"}\n" +
                                        "{\"id\": \"q\", \"year\": \"1999\"}\n" +
                                        "{\"id\": \"w\", \"authors\": \"solo\"}\n",
                                    RecordFormat::jsonl, &report);
        CHECK(set.paper_count() == 30);
        CHECK(report.malformed_lines == 3);
    }
    SECTION("mostly-bad input is rejected as a format error") {
        CHECK_THROWS_MATCHES(parse("junk\nmore junk\n{\"id\": \"p\"}\n"), bibnet::InputError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("wrong format")));
    }
}

TEST_CASE("paper citation network prunes and counts data errors") {
    const bibnet::BuiltNetwork net = bibnet::build_paper_citation(parse(corpus));
    CHECK(net.graph.directed());
    CHECK(net.graph.node_count() == 3); // p4 dropped
    CHECK(net.graph.link_count() == 3);
    CHECK(net.node_keys == std::vector<std::string>{"p1", "p2", "p3"});
    CHECK(net.dropped_nodes == 1);
    CHECK(net.dangling_refs == 1);  // px
    CHECK(net.self_citations == 1); // p2 -> p2
    CHECK(net.graph.has_link(1, 0));
    CHECK(net.graph.has_link(2, 0));
    CHECK(net.graph.has_link(2, 1));
    CHECK(net.graph.self_loop_count() == 0);
}

TEST_CASE("author citation network keeps self-loops and merges pairs") {
    const bibnet::BuiltNetwork net = bibnet::build_author_citation(parse(corpus));
    CHECK(net.graph.directed());
    CHECK(net.graph.node_count() == 3); // d dropped
    CHECK(net.node_keys == std::vector<std::string>{"a", "b", "c"});
    // p2 cites p1: b,c -> a,b; p3 cites p1: c -> a,b; p3 cites p2: c -> b,c.
    CHECK(net.graph.link_count() == 5);
    CHECK(net.graph.self_loop_count() == 2);
    CHECK(net.graph.has_link(1, 0)); // b -> a
    CHECK(net.graph.has_link(1, 1)); // b cites own earlier work
    CHECK(net.graph.has_link(2, 0));
    CHECK(net.graph.has_link(2, 1));
    CHECK(net.graph.has_link(2, 2));
    CHECK(net.dropped_nodes == 1);
    CHECK(net.dangling_refs == 1);
    CHECK(net.self_citations == 1);
}

TEST_CASE("co-authorship network links collaborators once") {
    const bibnet::BuiltNetwork net = bibnet::build_coauthorship(parse(corpus));
    CHECK_FALSE(net.graph.directed());
    CHECK(net.graph.node_count() == 3);
    CHECK(net.graph.link_count() == 2); // a-b, b-c
    CHECK(net.graph.has_link(0, 1));
    CHECK(net.graph.has_link(1, 2));
    CHECK_FALSE(net.graph.has_link(0, 2));
    CHECK(net.dropped_nodes == 1);
}

TEST_CASE("author paradigms reject degenerate corpora") {
    CHECK_THROWS_AS(bibnet::build_author_citation(parse("{\"id\": \"p1\", \"refs\": []}\n")),
                    bibnet::InputError);
    CHECK_THROWS_AS(
        bibnet::build_coauthorship(parse("{\"id\": \"p1\", \"authors\": [\"solo\"]}\n")),
        bibnet::InputError);
    // Papers that never cite each other yield no citation links at all.
    CHECK_THROWS_AS(
        bibnet::build_paper_citation(parse("{\"id\": \"p1\"}\n{\"id\": \"p2\"}\n")),
        bibnet::InputError);
}

TEST_CASE("edge list pairs read as citing-cited") {
    const RecordSet set = parse("# u cites v\n1 2\n1 3\n2 3\n", RecordFormat::edgelist);
    REQUIRE(set.paper_count() == 3);
    const bibnet::BuiltNetwork net = bibnet::build_paper_citation(set);
    CHECK(net.graph.node_count() == 3);
    CHECK(net.graph.link_count() == 3);
    // First appearance order: 1, 2, 3.
    CHECK(net.node_keys == std::vector<std::string>{"1", "2", "3"});
    CHECK(net.graph.has_link(0, 1));
    CHECK(net.graph.has_link(0, 2));
    CHECK(net.graph.has_link(1, 2));
}

TEST_CASE("cora pairs read as cited-citing") {
    // The same logical citations as the edge-list case, columns swapped.
    const RecordSet set = parse("2 1\n3 1\n3 2\n", RecordFormat::cora_pairs);
    const bibnet::BuiltNetwork net = bibnet::build_paper_citation(set);
    CHECK(net.graph.link_count() == 3);
    const auto id_of = [&](const std::string& key) {
        for (std::size_t i = 0; i < net.node_keys.size(); ++i)
            if (net.node_keys[i] == key) return static_cast<bibnet::NodeId>(i);
        FAIL("missing key " + key);
        return bibnet::NodeId(0);
    };
    CHECK(net.graph.has_link(id_of("1"), id_of("2")));
    CHECK(net.graph.has_link(id_of("1"), id_of("3")));
    CHECK(net.graph.has_link(id_of("2"), id_of("3")));
}

TEST_CASE("pair formats tolerate dirty lines within bounds") {
    bibnet::ParseReport report;
    const RecordSet set =
        parse("1 2\n2 3\n3 4\n4 5\n5 6\n6 7\n7 8\n8 9\n9 10\nbroken\n", RecordFormat::edgelist,
              &report);
    CHECK(report.malformed_lines == 1);
    CHECK(set.paper_count() == 10);
}

TEST_CASE("format names resolve") {
    CHECK(bibnet::record_format_from_name("jsonl") == RecordFormat::jsonl);
    CHECK(bibnet::record_format_from_name("edgelist") == RecordFormat::edgelist);
    CHECK(bibnet::record_format_from_name("cora-pairs") == RecordFormat::cora_pairs);
    CHECK_THROWS_AS(bibnet::record_format_from_name("xml"), bibnet::InputError);
}

TEST_CASE("duplicate citations collapse to one link") {
    const RecordSet set = parse("1 2\n1 2\n1 2\n2 1\n", RecordFormat::edgelist);
    const bibnet::BuiltNetwork net = bibnet::build_paper_citation(set);
    CHECK(net.graph.node_count() == 2);
    CHECK(net.graph.link_count() == 2); // 1->2 and 2->1 are distinct directed links
}
