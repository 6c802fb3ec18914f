// bibnet: build bibliographic networks, measure them, and compare the
// consistency of the underlying databases.
//
// Subcommands: ingest, measure, sample, compare, all.
// Exit codes: 0 success, 1 input error, 2 statistical preconditions unmet.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bibnet/bibnet.hpp"

namespace {

struct CliOverrides {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<double> kmin;
    std::optional<std::string> out;
    std::optional<std::string> paradigm;
};

bibnet::RunConfig resolve_config(const CliOverrides& cli) {
    bibnet::RunConfig config = bibnet::load_run_config(cli.config_path);
    if (cli.seed) config.seed = *cli.seed;
    if (cli.kmin) config.k_min = *cli.kmin;
    if (cli.out) config.out = *cli.out;
    if (cli.paradigm) config.paradigm_filter = bibnet::paradigm_from_name(*cli.paradigm);
    return config;
}

void add_common_flags(CLI::App* cmd, CliOverrides& cli) {
    cmd->add_option("--config", cli.config_path, "run configuration JSON")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", cli.seed, "override the configured random seed");
    cmd->add_option("--kmin", cli.kmin, "power-law cutoff degree")
        ->check(CLI::IsMember({10.0, 25.0}));
    cmd->add_option("--out", cli.out, "override the output directory");
    cmd->add_option("--paradigm", cli.paradigm, "restrict to one network paradigm")
        ->check(CLI::IsMember({"pp", "aa-cite", "aa-coauth"}));
}

void print_job_lines(const nlohmann::json& entries) {
    for (const auto& entry : entries) {
        std::cout << "  " << entry.value("dataset", std::string("?")) << " "
                  << entry.value("paradigm", std::string("?")) << ": "
                  << entry.value("status", std::string("?"));
        if (entry.contains("nodes"))
            std::cout << " (" << entry["nodes"].get<std::size_t>() << " nodes, "
                      << entry["links"].get<std::size_t>() << " links)";
        if (entry.contains("error")) std::cout << " - " << entry["error"].get<std::string>();
        std::cout << "\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bibliographic-network consistency toolkit"};
    app.require_subcommand(1);

    CliOverrides cli;
    auto* ingest = app.add_subcommand("ingest", "build and persist the networks");
    auto* measure = app.add_subcommand("measure", "compute measure vectors and profiles");
    auto* sample = app.add_subcommand("sample", "export representative network samples");
    auto* compare = app.add_subcommand("compare", "rank database consistency and embed");
    auto* all = app.add_subcommand("all", "run the whole pipeline");
    for (auto* cmd : {ingest, measure, sample, compare, all}) add_common_flags(cmd, cli);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Map every usage problem (unknown flag, missing/unreadable --config,
        // bad enum value) onto the documented input-error code; --help stays 0.
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const bibnet::RunConfig config = resolve_config(cli);
        if (app.got_subcommand(ingest)) {
            const auto manifest = bibnet::run_ingest(config);
            std::cout << "ingested:\n";
            print_job_lines(manifest.at("graphs"));
        } else if (app.got_subcommand(measure)) {
            const auto summary = bibnet::run_measure(config);
            std::cout << "measured:\n";
            print_job_lines(summary.at("graphs"));
        } else if (app.got_subcommand(sample)) {
            const auto summary = bibnet::run_sample(config);
            std::cout << "sampled:\n";
            print_job_lines(summary.at("samples"));
        } else {
            if (app.got_subcommand(all)) {
                bibnet::run_ingest(config);
                bibnet::run_measure(config);
                bibnet::run_sample(config);
            }
            const auto report = bibnet::run_compare(config);
            for (const auto& [paradigm, section] : report.at("compare").items()) {
                std::cout << paradigm << ": " << section.value("status", std::string("?"));
                if (section.contains("banner"))
                    std::cout << " - " << section["banner"].get<std::string>();
                if (section.contains("error"))
                    std::cout << " - " << section["error"].get<std::string>();
                std::cout << "\n";
            }
            std::cout << "report: " << bibnet::OutputPaths{config.out}.report_file().string()
                      << "\n";
        }
        return 0;
    } catch (const bibnet::InputError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 1;
    } catch (const bibnet::PreconditionError& e) {
        std::cerr << "statistical precondition unmet: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
