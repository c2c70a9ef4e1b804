#include "dsnsim/link_abstraction.hpp"

#include <algorithm>
#include <stdexcept>

namespace dsnsim {

void L2sConfig::validate() const {
    if (n_rb < 1) throw std::invalid_argument("l2s.n_rb must be >= 1");
    if (!(bandwidth_efficiency > 0.0 && bandwidth_efficiency <= 1.0)) {
        throw std::invalid_argument("l2s.bandwidth_efficiency must be in (0, 1]");
    }
    if (!(snr_efficiency > 0.0)) throw std::invalid_argument("l2s.snr_efficiency must be > 0");
    if (!(max_spectral_efficiency > 0.0)) throw std::invalid_argument("l2s.max_spectral_efficiency must be > 0");
    if (!(rb_bandwidth > 0.0)) throw std::invalid_argument("l2s.rb_bandwidth must be > 0");
    if (!(tti_duration > 0.0)) throw std::invalid_argument("l2s.tti_duration must be > 0");
}

double noise_power_per_rb(const L2sConfig& config) {
    return config.thermal_noise_density + 10.0 * std::log10(config.rb_bandwidth) + config.noise_figure;
}

double compute_sinr(double rx_serving_dbm, std::span<const double> rx_interferers_dbm, double noise_dbm) {
    double denominator_mw = db_to_linear(noise_dbm);
    for (const double i : rx_interferers_dbm) denominator_mw += db_to_linear(i);
    return db_to_linear(rx_serving_dbm) / denominator_mw;
}

double spectral_efficiency(double sinr_linear, const L2sConfig& config) {
    const double se = config.bandwidth_efficiency * std::log2(1.0 + std::max(sinr_linear, 0.0) / config.snr_efficiency);
    return std::min(se, config.max_spectral_efficiency);
}

double rb_rate(double sinr_linear, const L2sConfig& config) {
    return spectral_efficiency(sinr_linear, config) * config.rb_bandwidth * config.tti_duration;
}

}  // namespace dsnsim
