#include "dsnsim/sinr_map.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dsnsim {

std::pair<int, int> SinrMapGrid::nearest_pixel(Vec2 p) const {
    const int ix = static_cast<int>(std::lround((p.x - origin.x) / resolution));
    const int iy = static_cast<int>(std::lround((p.y - origin.y) / resolution));
    return {std::clamp(ix, 0, nx - 1), std::clamp(iy, 0, ny - 1)};
}

double probe_sinr(std::span<const Node> cells, Vec2 point, const PropagationConfig& propagation, double noise_mw,
                  double ue_antenna_gain_dbi) {
    // Two passes: find the server, then sum the others in index order.
    std::size_t best = 0;
    double best_mw = -1.0;
    thread_local std::vector<double> rx_mw;
    rx_mw.resize(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        rx_mw[c] = db_to_linear(cells[c].tx_power_dbm + deterministic_gain_db(cells[c], point, propagation) +
                                ue_antenna_gain_dbi);
        if (rx_mw[c] > best_mw) {
            best = c;
            best_mw = rx_mw[c];
        }
    }
    double interference = 0.0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        if (c != best) interference += rx_mw[c];
    }
    return best_mw / (interference + noise_mw);
}

SinrMapGrid compute_sinr_map(std::span<const Node> cells, const PropagationConfig& propagation,
                             const L2sConfig& l2s, const BoundingBox& area, double resolution, Exec exec,
                             double ue_antenna_gain_dbi) {
    if (!(resolution > 0.0)) throw std::invalid_argument("map resolution must be > 0");
    SinrMapGrid grid;
    grid.resolution = resolution;
    grid.origin = area.min;
    grid.nx = static_cast<int>(std::ceil(area.width() / resolution - 1e-9)) + 1;
    grid.ny = static_cast<int>(std::ceil(area.height() / resolution - 1e-9)) + 1;
    grid.values_db.assign(static_cast<std::size_t>(grid.nx) * static_cast<std::size_t>(grid.ny), 0.0);
    const double noise_mw = db_to_linear(noise_power_per_rb(l2s));

    parallel_for(exec, grid.ny, [&](std::ptrdiff_t iy) {
        for (int ix = 0; ix < grid.nx; ++ix) {
            const double s = probe_sinr(cells, grid.point(ix, static_cast<int>(iy)), propagation, noise_mw,
                                        ue_antenna_gain_dbi);
            grid.values_db[static_cast<std::size_t>(iy) * static_cast<std::size_t>(grid.nx) +
                           static_cast<std::size_t>(ix)] = linear_to_db(s);
        }
    });
    return grid;
}

}  // namespace dsnsim
