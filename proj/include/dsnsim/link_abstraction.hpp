#pragma once

// Link-to-system mapping: per-RB SINR to per-RB bits per TTI.

#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>

namespace dsnsim {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

struct L2sConfig {
    int n_rb = 50;  // 10 MHz
    double bandwidth_efficiency = 0.6;
    double snr_efficiency = 1.0;
    double max_spectral_efficiency = 5.55;  // bit/s/Hz
    double rb_bandwidth = 180000.0;          // Hz
    double tti_duration = 0.001;             // s
    double noise_figure = 9.0;               // dB
    double thermal_noise_density = -174.0;   // dBm/Hz

    void validate() const;

    friend bool operator==(const L2sConfig&, const L2sConfig&) = default;
};

/// Thermal noise over one RB at the UE receiver, dBm.
double noise_power_per_rb(const L2sConfig& config);

/// SINR as a linear ratio from powers in dBm. Interferers may be empty.
double compute_sinr(double rx_serving_dbm, std::span<const double> rx_interferers_dbm, double noise_dbm);

/// Modified Shannon: min(bw_eff * log2(1 + sinr / snr_eff), SE_max), bit/s/Hz.
double spectral_efficiency(double sinr_linear, const L2sConfig& config);

/// Bits one RB carries in one TTI at `sinr_linear`.
double rb_rate(double sinr_linear, const L2sConfig& config);

/// Maps an RB's SINR to the whole number of bits it delivers in one TTI.
/// The engine only talks to this interface, so an effective-SINR mapper with
/// BLER curves can replace the default.
class LinkMapper {
  public:
    virtual ~LinkMapper() = default;
    virtual std::int64_t rb_bits(double sinr_linear) const = 0;
    virtual std::string_view name() const = 0;
};

/// rb_rate rounded to the nearest bit.
class ModifiedShannonMapper final : public LinkMapper {
  public:
    explicit ModifiedShannonMapper(const L2sConfig& config) : config_(config) {}

    std::int64_t rb_bits(double sinr_linear) const override { return std::llround(rb_rate(sinr_linear, config_)); }
    std::string_view name() const override { return "modified_shannon"; }

  private:
    L2sConfig config_;
};

}  // namespace dsnsim
