#pragma once

// Network geometry for one Monte-Carlo drop: hexagonal tri-sector macro grid,
// picos dropped inside sector areas, and area-uniform UEs.

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "dsnsim/geometry.hpp"
#include "dsnsim/random.hpp"

namespace dsnsim {

class UnsupportedGridSize : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

class PlacementFailure : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class NodeKind { MacroSector, Pico, Ue };

const char* to_string(NodeKind kind);

struct ScenarioGeometry {
    double inter_site_distance = 500.0;  // m
    int n_macro_sites = 19;
    int sectors_per_site = 3;
    int picos_per_sector = 5;
    int n_ues = 3420;
    double min_macro_pico_dist = 75.0;
    double min_pico_pico_dist = 40.0;
    double min_macro_ue_dist = 35.0;
    double min_pico_ue_dist = 10.0;
    double macro_tx_power_dbm = 46.0;
    double pico_tx_power_dbm = 30.0;
    double macro_antenna_gain_dbi = 14.0;
    double pico_antenna_gain_dbi = 5.0;
    double ue_antenna_gain_dbi = 0.0;
    double ue_speed_kmh = 3.0;  // metadata only, there is no mobility model
    int max_placement_attempts = 1000;

    int n_macro_sectors() const { return n_macro_sites * sectors_per_site; }

    /// Throws std::invalid_argument on out-of-range values.
    void validate() const;

    friend bool operator==(const ScenarioGeometry&, const ScenarioGeometry&) = default;
};

struct Node {
    int id = 0;
    NodeKind kind = NodeKind::Ue;
    Vec2 position;
    std::optional<double> boresight_azimuth;  // degrees, macro sectors only
    double tx_power_dbm = 0.0;                // cells only
    double antenna_gain_dbi = 0.0;
    int sector = 0;  // macro sector whose area contains the node (own index for macros)

    bool is_cell() const { return kind != NodeKind::Ue; }
};

struct NetworkLayout {
    std::vector<Node> macro_sectors;
    std::vector<Node> picos;
    std::vector<Node> ues;
    std::uint32_t drop_index = 0;
    std::uint64_t seed = 0;

    int n_cells() const { return static_cast<int>(macro_sectors.size() + picos.size()); }
    int n_ues() const { return static_cast<int>(ues.size()); }

    /// Cell by cell index: macro sectors first, then picos.
    const Node& cell(int index) const;

    /// All cells in cell-index order.
    std::vector<Node> cells() const;
};

/// Site centres of a hexagonal grid with 1, 7 or 19 sites, centre first, then
/// ring by ring counter-clockwise.
std::vector<Vec2> hex_site_positions(int n_macro_sites, double inter_site_distance);

/// Tri-sector macro grid. Sector k of site s gets id 3s+k and azimuth 30+120k.
std::vector<Node> build_macro_grid(const ScenarioGeometry& geometry);

/// Uniform point inside the 120 degree wedge of `sector`'s site hexagon.
Vec2 sample_in_sector(const Node& sector, double inter_site_distance, std::mt19937_64& rng);

/// Area covered by the site hexagons of `macro_sectors`.
BoundingBox grid_bounding_box(std::span<const Node> macro_sectors, double inter_site_distance);

std::vector<Node> drop_picos(const NetworkLayout& partial, const ScenarioGeometry& geometry, std::mt19937_64& rng);

std::vector<Node> drop_ues(const NetworkLayout& partial, const ScenarioGeometry& geometry, std::mt19937_64& rng);

/// Full drop: macro grid, picos and UEs from independent substreams of `key`.
NetworkLayout generate_layout(const ScenarioGeometry& geometry, const StreamKey& key);

}  // namespace dsnsim
