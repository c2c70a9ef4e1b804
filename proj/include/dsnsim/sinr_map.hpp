#pragma once

#include <span>
#include <utility>
#include <vector>

#include "dsnsim/deployment.hpp"
#include "dsnsim/link_abstraction.hpp"
#include "dsnsim/parallel.hpp"
#include "dsnsim/propagation.hpp"

namespace dsnsim {

/// Best-server wideband SINR sampled on a regular grid. Sample (ix, iy) sits
/// at origin + resolution * (ix, iy); values are row-major by iy.
struct SinrMapGrid {
    double resolution = 0.0;
    Vec2 origin;
    int nx = 0;
    int ny = 0;
    std::vector<double> values_db;

    double at(int ix, int iy) const {
        return values_db[static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx) + static_cast<std::size_t>(ix)];
    }
    Vec2 point(int ix, int iy) const { return {origin.x + resolution * ix, origin.y + resolution * iy}; }
    std::pair<int, int> nearest_pixel(Vec2 p) const;
};

/// Probe-UE SINR at `point`: no shadowing, every cell transmitting on the
/// full band, the strongest one serving.
double probe_sinr(std::span<const Node> cells, Vec2 point, const PropagationConfig& propagation, double noise_mw,
                  double ue_antenna_gain_dbi = 0.0);

/// Throws std::invalid_argument if resolution <= 0.
SinrMapGrid compute_sinr_map(std::span<const Node> cells, const PropagationConfig& propagation,
                             const L2sConfig& l2s, const BoundingBox& area, double resolution,
                             Exec exec = Exec::Parallel, double ue_antenna_gain_dbi = 0.0);

}  // namespace dsnsim
