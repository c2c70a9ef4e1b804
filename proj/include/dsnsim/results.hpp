#pragma once

// Result files written by the run / sweep / map commands. All CSVs are
// comma-separated, LF-terminated, with a header row and a trailing `seed`
// column holding the run seed.

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dsnsim/engine.hpp"
#include "dsnsim/sinr_map.hpp"

namespace dsnsim {

struct SummaryStats {
    std::size_t count = 0;
    double mean = 0.0;
    double p5 = 0.0;
    double p50 = 0.0;
    double p95 = 0.0;
};

/// Linear-interpolation quantile of ascending `sorted`, q in [0, 1].
double quantile(std::span<const double> sorted, double q);
SummaryStats summarize(std::vector<double> values);

struct ResultBundle {
    Scenario scenario;
    std::vector<DropStatistics> drops;
    SummaryStats ue_throughput_bps;
    SummaryStats ue_wideband_sinr_db;
    SummaryStats cell_throughput_bps;
    double engine_seconds = 0.0;
    std::vector<std::filesystem::path> files;
};

/// Runs run.drops drops and writes ue_sinr.csv, ue_throughput.csv,
/// cell_throughput.csv, summary.csv and resolved_config.ini into
/// run.output_dir. Progress and the summary go to `log` when given.
ResultBundle run_scenario(const Scenario& scenario, std::ostream* log = nullptr);

struct RuntimeRecord {
    int picos_per_sector = 0;
    int n_cells = 0;
    int n_ues = 0;
    double wallclock_s = 0.0;  // median over repeats
    std::vector<double> samples;
};

/// One engine run per density; writes runtime.csv (medians) and
/// runtime_long.csv (one row per measurement).
std::vector<RuntimeRecord> run_density_sweep(const Scenario& scenario, std::span<const int> densities,
                                             int repeats = 1, std::ostream* log = nullptr);

/// Best-server SINR map of drop 0's cells over the macro grid; writes sinr_map.csv.
SinrMapGrid export_sinr_map(const Scenario& scenario, double resolution, std::ostream* log = nullptr);

}  // namespace dsnsim
