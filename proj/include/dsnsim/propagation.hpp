#pragma once

#include <cstddef>
#include <vector>

#include "dsnsim/deployment.hpp"
#include "dsnsim/parallel.hpp"
#include "dsnsim/random.hpp"

namespace dsnsim {

struct PropagationConfig {
    double macro_pathloss_intercept = 128.1;  // dB at 1 km
    double macro_pathloss_slope = 37.6;       // dB/decade
    double pico_pathloss_intercept = 140.7;
    double pico_pathloss_slope = 36.7;
    double macro_shadow_sigma = 8.0;  // dB
    double pico_shadow_sigma = 10.0;
    bool shadowing_enabled = true;
    double antenna_theta3db = 70.0;  // degrees
    double antenna_max_attenuation = 25.0;
    double min_distance = 10.0;  // m, path-loss clamp
    double carrier_frequency_ghz = 2.1;  // metadata; the path-loss constants already embed it

    void validate() const;

    friend bool operator==(const PropagationConfig&, const PropagationConfig&) = default;
};

/// Macro-to-UE path loss in dB; distances below the clamp are raised to it.
double pathloss_macro(double distance_m, const PropagationConfig& config = {});

/// Pico-to-UE path loss in dB.
double pathloss_pico(double distance_m, const PropagationConfig& config = {});

/// Horizontal sector pattern A(theta) = -min(12 (theta/theta3dB)^2, A_max), in dB.
double macro_antenna_pattern(double angle_offset_deg, const PropagationConfig& config = {});

/// Pattern gain of `cell` towards `point`: the sector pattern for macros, 0 dB otherwise.
double pattern_gain(const Node& cell, Vec2 point, const PropagationConfig& config);

/// Link gain without shadowing: -pathloss + tx antenna gain + pattern.
double deterministic_gain_db(const Node& cell, Vec2 point, const PropagationConfig& config);

/// Dense (cell, ue) gain table in dB. Row-major by cell.
class LinkGainMatrix {
  public:
    LinkGainMatrix() = default;
    LinkGainMatrix(int n_cells, int n_ues, double fill = 0.0)
        : n_cells_(n_cells), n_ues_(n_ues), gains_db_(static_cast<std::size_t>(n_cells) * n_ues, fill) {}

    int n_cells() const { return n_cells_; }
    int n_ues() const { return n_ues_; }

    double operator()(int cell, int ue) const { return gains_db_[index(cell, ue)]; }
    double& operator()(int cell, int ue) { return gains_db_[index(cell, ue)]; }

    const std::vector<double>& data() const { return gains_db_; }

    friend bool operator==(const LinkGainMatrix&, const LinkGainMatrix&) = default;

  private:
    std::size_t index(int cell, int ue) const {
        return static_cast<std::size_t>(cell) * static_cast<std::size_t>(n_ues_) + static_cast<std::size_t>(ue);
    }

    int n_cells_ = 0;
    int n_ues_ = 0;
    std::vector<double> gains_db_;
};

/// Gain of every (cell, UE) pair of `layout`. Shadowing samples for cell c are
/// drawn from the substream (key, Shadowing, c) in UE order, so the result
/// does not depend on how rows are spread over threads.
LinkGainMatrix build_link_gain_matrix(const NetworkLayout& layout, const PropagationConfig& config,
                                      const StreamKey& key, Exec exec = Exec::Parallel);

}  // namespace dsnsim
