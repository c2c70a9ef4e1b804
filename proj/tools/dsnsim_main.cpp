// dsnsim: dense small-cell network system-level simulator.
//
//   dsnsim run   [--scenario f.ini] [--set k=v]... [--seed n] [--out dir] [--threads n]
//   dsnsim sweep [--scenario f.ini] [--densities 0,1,2,3,4,5] [--repeats n] ...
//   dsnsim map   [--scenario f.ini] [--resolution m] ...
//   dsnsim defaults            print the reference scenario file

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dsnsim/parallel.hpp"
#include "dsnsim/results.hpp"
#include "dsnsim/scenario.hpp"

namespace {

struct CommonOptions {
    std::string scenario_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> threads;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--scenario", o.scenario_path, "Scenario file (defaults to the built-in reference scenario)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--set", o.overrides, "Override a field: section.key=value (repeatable)");
    cmd->add_option("--seed", o.seed, "Run seed (run.seed)");
    cmd->add_option("--out", o.out, "Output directory (run.output_dir)");
    cmd->add_option("--threads", o.threads, "Worker threads (run.threads, 0 = OpenMP default)")->check(CLI::NonNegativeNumber);
}

dsnsim::Scenario resolve(const CommonOptions& o) {
    std::vector<std::string> overrides = o.overrides;
    if (o.seed) overrides.push_back(fmt::format("run.seed={}", *o.seed));
    if (o.out) overrides.push_back("run.output_dir=" + *o.out);
    if (o.threads) overrides.push_back(fmt::format("run.threads={}", *o.threads));

    dsnsim::Scenario s;
    if (o.scenario_path.empty()) {
        std::istringstream empty;
        s = dsnsim::parse_scenario(empty, overrides, "<reference>");
    } else {
        s = dsnsim::load_scenario(o.scenario_path, overrides);
    }
    dsnsim::set_thread_count(s.run.threads);
    return s;
}

std::vector<int> parse_densities(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        const int v = std::stoi(item, &used);
        if (used != item.size() || v < 0) throw std::invalid_argument("bad density '" + item + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument("density list is empty");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dense small-cell network system-level simulator"};
    app.require_subcommand(1);

    CommonOptions run_opts, sweep_opts, map_opts;
    auto* run = app.add_subcommand("run", "Run Monte-Carlo drops and write SINR/throughput CSVs");
    add_common(run, run_opts);

    auto* sweep = app.add_subcommand("sweep", "Measure engine runtime against pico density");
    add_common(sweep, sweep_opts);
    std::string densities = "0,1,2,3,4,5";
    int repeats = 1;
    sweep->add_option("--densities", densities, "Comma-separated picos per sector");
    sweep->add_option("--repeats", repeats, "Timed runs per density (median is reported)")->check(CLI::PositiveNumber);

    auto* map = app.add_subcommand("map", "Export a best-server SINR map of the deployment");
    add_common(map, map_opts);
    double resolution = 10.0;
    map->add_option("--resolution", resolution, "Pixel size in metres")->check(CLI::PositiveNumber);

    app.add_subcommand("defaults", "Print the reference scenario file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            dsnsim::run_scenario(resolve(run_opts), &std::cout);
        } else if (*sweep) {
            const auto list = parse_densities(densities);
            dsnsim::run_density_sweep(resolve(sweep_opts), list, repeats, &std::cout);
        } else if (*map) {
            dsnsim::export_sinr_map(resolve(map_opts), resolution, &std::cout);
        } else {
            std::cout << dsnsim::render_scenario(dsnsim::reference_scenario());
        }
    } catch (const dsnsim::ParseError& e) {
        std::cerr << "dsnsim: configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "dsnsim: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
