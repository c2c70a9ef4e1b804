#include "dsnsim/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dsnsim {

namespace {

double log_distance_pathloss(double distance_m, double intercept, double slope, double min_distance) {
    const double d = std::max(distance_m, min_distance);
    return intercept + slope * std::log10(d / 1000.0);
}

}  // namespace

void PropagationConfig::validate() const {
    if (!(macro_pathloss_slope > 0.0) || !(pico_pathloss_slope > 0.0)) {
        throw std::invalid_argument("propagation path-loss slopes must be > 0");
    }
    if (macro_shadow_sigma < 0.0 || pico_shadow_sigma < 0.0) {
        throw std::invalid_argument("propagation shadowing sigmas must be >= 0");
    }
    if (!(antenna_theta3db > 0.0 && antenna_theta3db <= 180.0)) {
        throw std::invalid_argument("propagation.antenna_theta3db must be in (0, 180]");
    }
    if (!(antenna_max_attenuation > 0.0)) throw std::invalid_argument("propagation.antenna_max_attenuation must be > 0");
    if (!(min_distance > 0.0)) throw std::invalid_argument("propagation.min_distance must be > 0");
}

double pathloss_macro(double distance_m, const PropagationConfig& config) {
    return log_distance_pathloss(distance_m, config.macro_pathloss_intercept, config.macro_pathloss_slope,
                                 config.min_distance);
}

double pathloss_pico(double distance_m, const PropagationConfig& config) {
    return log_distance_pathloss(distance_m, config.pico_pathloss_intercept, config.pico_pathloss_slope,
                                 config.min_distance);
}

double macro_antenna_pattern(double angle_offset_deg, const PropagationConfig& config) {
    const double ratio = wrap_angle_deg(angle_offset_deg) / config.antenna_theta3db;
    return -std::min(12.0 * ratio * ratio, config.antenna_max_attenuation);
}

double pattern_gain(const Node& cell, Vec2 point, const PropagationConfig& config) {
    if (cell.kind != NodeKind::MacroSector || !cell.boresight_azimuth) return 0.0;
    const Vec2 d = point - cell.position;
    const double bearing = rad_to_deg(std::atan2(d.y, d.x));
    return macro_antenna_pattern(bearing - *cell.boresight_azimuth, config);
}

double deterministic_gain_db(const Node& cell, Vec2 point, const PropagationConfig& config) {
    const double d = distance(cell.position, point);
    const double pl = cell.kind == NodeKind::MacroSector ? pathloss_macro(d, config) : pathloss_pico(d, config);
    return -pl + cell.antenna_gain_dbi + pattern_gain(cell, point, config);
}

LinkGainMatrix build_link_gain_matrix(const NetworkLayout& layout, const PropagationConfig& config,
                                      const StreamKey& key, Exec exec) {
    const int n_cells = layout.n_cells();
    const int n_ues = layout.n_ues();
    LinkGainMatrix gains(n_cells, n_ues);

    parallel_for(exec, n_cells, [&](std::ptrdiff_t c) {
        const Node& cell = layout.cell(static_cast<int>(c));
        const double sigma = cell.kind == NodeKind::MacroSector ? config.macro_shadow_sigma : config.pico_shadow_sigma;
        const bool shadow = config.shadowing_enabled && sigma > 0.0;
        auto rng = key.substream(StreamTag::Shadowing, static_cast<std::uint64_t>(c));
        std::normal_distribution<double> shadowing(0.0, shadow ? sigma : 1.0);
        for (int u = 0; u < n_ues; ++u) {
            const Node& ue = layout.ues[static_cast<std::size_t>(u)];
            double g = deterministic_gain_db(cell, ue.position, config) + ue.antenna_gain_dbi;
            if (shadow) g += shadowing(rng);
            gains(static_cast<int>(c), u) = g;
        }
    });
    return gains;
}

}  // namespace dsnsim
