#include "dsnsim/results.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numeric>
#include <stdexcept>

#include "dsnsim/scenario.hpp"

namespace dsnsim {

namespace {

namespace fs = std::filesystem;

class CsvWriter {
  public:
    explicit CsvWriter(std::string header) : buffer_(std::move(header) + "\n") {}

    template <class... Args>
    void row(fmt::format_string<Args...> f, Args&&... args) {
        fmt::format_to(std::back_inserter(buffer_), f, std::forward<Args>(args)...);
        buffer_.push_back('\n');
    }

    fs::path save(const fs::path& dir, const std::string& name) const {
        const fs::path path = dir / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << buffer_;
        return path;
    }

  private:
    std::string buffer_;
};

fs::path write_text(const fs::path& dir, const std::string& name, const std::string& text) {
    const fs::path path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    return path;
}

fs::path prepare_output_dir(const Scenario& scenario) {
    const fs::path dir = scenario.run.output_dir.empty() ? fs::path(".") : fs::path(scenario.run.output_dir);
    fs::create_directories(dir);
    return dir;
}

bool in_center_site(int sector) { return sector / 3 == 0; }

}  // namespace

double quantile(std::span<const double> sorted, double q) {
    if (sorted.empty()) return 0.0;
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

SummaryStats summarize(std::vector<double> values) {
    SummaryStats s;
    s.count = values.size();
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    s.p5 = quantile(values, 0.05);
    s.p50 = quantile(values, 0.50);
    s.p95 = quantile(values, 0.95);
    return s;
}

ResultBundle run_scenario(const Scenario& scenario, std::ostream* log) {
    scenario.validate();
    ResultBundle bundle;
    bundle.scenario = scenario;
    const fs::path dir = prepare_output_dir(scenario);
    const std::uint64_t seed = scenario.run.seed;
    const bool center_only = scenario.run.center_site_only;

    for (int d = 0; d < scenario.run.drops; ++d) {
        try {
            bundle.drops.push_back(run_drop(scenario, seed, static_cast<std::uint32_t>(d)));
        } catch (const std::exception& e) {
            throw std::runtime_error(fmt::format("drop {}: {}", d, e.what()));
        }
        bundle.engine_seconds += bundle.drops.back().wallclock_seconds;
        if (log) *log << fmt::format("drop {} done in {:.3f} s\n", d, bundle.drops.back().wallclock_seconds);
    }

    CsvWriter ue_sinr("drop,ue_id,serving_cell,cell_kind,wideband_sinr_db,seed");
    CsvWriter ue_tput("drop,ue_id,throughput_bps,seed");
    CsvWriter cell_tput("drop,cell_id,cell_kind,n_ues,throughput_bps,seed");
    std::vector<double> tputs;
    std::vector<double> sinrs;
    std::vector<double> cell_tputs;

    for (const DropStatistics& s : bundle.drops) {
        for (int u = 0; u < s.n_ues(); ++u) {
            if (center_only && !in_center_site(s.ue_sector[static_cast<std::size_t>(u)])) continue;
            const int c = s.serving_cell[static_cast<std::size_t>(u)];
            const double sinr = s.ue_wideband_sinr_db[static_cast<std::size_t>(u)];
            const double tput = s.ue_throughput_bps(u);
            ue_sinr.row("{},{},{},{},{:.6f},{}", s.drop_index, u, c, to_string(s.cell_kind[static_cast<std::size_t>(c)]),
                        sinr, seed);
            ue_tput.row("{},{},{:.3f},{}", s.drop_index, u, tput, seed);
            tputs.push_back(tput);
            sinrs.push_back(sinr);
        }
        for (int c = 0; c < s.n_cells(); ++c) {
            if (center_only && !in_center_site(s.cell_sector[static_cast<std::size_t>(c)])) continue;
            const double tput = s.cell_throughput_bps(c);
            cell_tput.row("{},{},{},{},{:.3f},{}", s.drop_index, c, to_string(s.cell_kind[static_cast<std::size_t>(c)]),
                          s.cell_ue_count[static_cast<std::size_t>(c)], tput, seed);
            cell_tputs.push_back(tput);
        }
    }

    bundle.ue_throughput_bps = summarize(tputs);
    bundle.ue_wideband_sinr_db = summarize(sinrs);
    bundle.cell_throughput_bps = summarize(cell_tputs);

    CsvWriter summary("metric,count,mean,p5,p50,p95,seed");
    const auto add = [&](const char* name, const SummaryStats& st) {
        summary.row("{},{},{:.6f},{:.6f},{:.6f},{:.6f},{}", name, st.count, st.mean, st.p5, st.p50, st.p95, seed);
    };
    add("ue_throughput_bps", bundle.ue_throughput_bps);
    add("ue_wideband_sinr_db", bundle.ue_wideband_sinr_db);
    add("cell_throughput_bps", bundle.cell_throughput_bps);

    bundle.files.push_back(ue_sinr.save(dir, "ue_sinr.csv"));
    bundle.files.push_back(ue_tput.save(dir, "ue_throughput.csv"));
    bundle.files.push_back(cell_tput.save(dir, "cell_throughput.csv"));
    bundle.files.push_back(summary.save(dir, "summary.csv"));
    bundle.files.push_back(write_text(dir, "resolved_config.ini", render_scenario(scenario)));

    if (log) {
        const auto& t = bundle.ue_throughput_bps;
        const auto& q = bundle.ue_wideband_sinr_db;
        *log << fmt::format("UEs: {}  drops: {}  engine time: {:.3f} s\n", t.count, bundle.drops.size(),
                            bundle.engine_seconds);
        *log << fmt::format("UE throughput [Mbit/s]  mean {:.4f}  p5 {:.4f}  p50 {:.4f}  p95 {:.4f}\n", t.mean / 1e6,
                            t.p5 / 1e6, t.p50 / 1e6, t.p95 / 1e6);
        *log << fmt::format("UE wideband SINR [dB]   mean {:.2f}  p5 {:.2f}  p50 {:.2f}  p95 {:.2f}\n", q.mean, q.p5,
                            q.p50, q.p95);
        *log << "results written to " << dir.string() << "\n";
    }
    return bundle;
}

std::vector<RuntimeRecord> run_density_sweep(const Scenario& scenario, std::span<const int> densities, int repeats,
                                             std::ostream* log) {
    if (densities.empty()) throw std::invalid_argument("density list is empty");
    if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");
    for (const int d : densities) {
        if (d < 0) throw std::invalid_argument(fmt::format("density {} is negative", d));
    }
    scenario.validate();
    const fs::path dir = prepare_output_dir(scenario);
    const std::uint64_t seed = scenario.run.seed;

    std::vector<RuntimeRecord> records;
    for (const int density : densities) {
        Scenario s = scenario;
        s.geometry.picos_per_sector = density;
        RuntimeRecord r;
        r.picos_per_sector = density;
        r.n_cells = s.geometry.n_macro_sectors() * (1 + density);
        r.n_ues = s.geometry.n_ues;
        for (int k = 0; k < repeats; ++k) {
            double seconds = 0.0;
            for (int d = 0; d < s.run.drops; ++d) {
                try {
                    seconds += run_drop(s, seed, static_cast<std::uint32_t>(d)).wallclock_seconds;
                } catch (const std::exception& e) {
                    throw std::runtime_error(fmt::format("density {} drop {}: {}", density, d, e.what()));
                }
            }
            r.samples.push_back(seconds);
        }
        std::vector<double> sorted = r.samples;
        std::sort(sorted.begin(), sorted.end());
        r.wallclock_s = quantile(sorted, 0.5);
        if (log) {
            *log << fmt::format("picos/sector {}  cells {}  UEs {}  wallclock {:.4f} s\n", r.picos_per_sector,
                                r.n_cells, r.n_ues, r.wallclock_s);
        }
        records.push_back(std::move(r));
    }

    CsvWriter wide("picos_per_sector,n_cells,n_ues,wallclock_s,seed");
    CsvWriter tall("picos_per_sector,n_cells,repeat,wallclock_s,seed");
    for (const RuntimeRecord& r : records) {
        wide.row("{},{},{},{:.6f},{}", r.picos_per_sector, r.n_cells, r.n_ues, r.wallclock_s, seed);
        for (std::size_t k = 0; k < r.samples.size(); ++k) {
            tall.row("{},{},{},{:.6f},{}", r.picos_per_sector, r.n_cells, k, r.samples[k], seed);
        }
    }
    wide.save(dir, "runtime.csv");
    tall.save(dir, "runtime_long.csv");
    write_text(dir, "resolved_config.ini", render_scenario(scenario));
    return records;
}

SinrMapGrid export_sinr_map(const Scenario& scenario, double resolution, std::ostream* log) {
    if (!(resolution > 0.0)) throw std::invalid_argument("map resolution must be > 0");
    scenario.validate();
    const fs::path dir = prepare_output_dir(scenario);
    const std::uint64_t seed = scenario.run.seed;

    const NetworkLayout layout = generate_layout(scenario.geometry, StreamKey{seed, 0});
    const auto cells = layout.cells();
    const BoundingBox area = grid_bounding_box(layout.macro_sectors, scenario.geometry.inter_site_distance);
    const SinrMapGrid grid = compute_sinr_map(cells, scenario.propagation, scenario.l2s, area, resolution,
                                              Exec::Parallel, scenario.geometry.ue_antenna_gain_dbi);

    CsvWriter csv("x_m,y_m,sinr_db,seed");
    for (int iy = 0; iy < grid.ny; ++iy) {
        for (int ix = 0; ix < grid.nx; ++ix) {
            const Vec2 p = grid.point(ix, iy);
            csv.row("{:.3f},{:.3f},{:.4f},{}", p.x, p.y, grid.at(ix, iy), seed);
        }
    }
    csv.save(dir, "sinr_map.csv");

    CsvWriter cell_csv("cell_id,cell_kind,x_m,y_m,seed");
    for (const Node& c : cells) cell_csv.row("{},{},{:.3f},{:.3f},{}", c.id, to_string(c.kind), c.position.x, c.position.y, seed);
    cell_csv.save(dir, "cells.csv");

    if (log) {
        *log << fmt::format("SINR map {} x {} px at {} m, {} cells, written to {}\n", grid.nx, grid.ny, resolution,
                            cells.size(), (dir / "sinr_map.csv").string());
    }
    return grid;
}

}  // namespace dsnsim
