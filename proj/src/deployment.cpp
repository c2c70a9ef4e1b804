#include "dsnsim/deployment.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <string>

namespace dsnsim {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

int rings_for_sites(int n_macro_sites) {
    switch (n_macro_sites) {
        case 1: return 0;
        case 7: return 1;
        case 19: return 2;
        default:
            throw UnsupportedGridSize("n_macro_sites must be 1, 7 or 19, got " + std::to_string(n_macro_sites));
    }
}

std::vector<Vec2> site_positions_of(std::span<const Node> macro_sectors, int sectors_per_site) {
    std::vector<Vec2> sites;
    for (std::size_t i = 0; i < macro_sectors.size(); i += static_cast<std::size_t>(sectors_per_site)) {
        sites.push_back(macro_sectors[i].position);
    }
    return sites;
}

bool clear_of(Vec2 p, std::span<const Vec2> others, double min_dist) {
    return std::all_of(others.begin(), others.end(), [&](Vec2 o) { return distance(p, o) >= min_dist; });
}

bool clear_of(Vec2 p, std::span<const Node> others, double min_dist) {
    return std::all_of(others.begin(), others.end(), [&](const Node& o) { return distance(p, o.position) >= min_dist; });
}

}  // namespace

const char* to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::MacroSector: return "macro";
        case NodeKind::Pico: return "pico";
        case NodeKind::Ue: return "ue";
    }
    return "unknown";
}

void ScenarioGeometry::validate() const {
    if (!(inter_site_distance > 0.0)) throw std::invalid_argument("geometry.inter_site_distance must be > 0");
    if (n_macro_sites < 0 || sectors_per_site < 0 || picos_per_sector < 0 || n_ues < 0) {
        throw std::invalid_argument("geometry counts must be >= 0");
    }
    if (min_macro_pico_dist < 0.0 || min_pico_pico_dist < 0.0 || min_macro_ue_dist < 0.0 || min_pico_ue_dist < 0.0) {
        throw std::invalid_argument("geometry minimum distances must be >= 0");
    }
    if (sectors_per_site != 3) throw std::invalid_argument("geometry.sectors_per_site must be 3");
    if (max_placement_attempts < 1) throw std::invalid_argument("geometry.max_placement_attempts must be >= 1");
    rings_for_sites(n_macro_sites);
}

const Node& NetworkLayout::cell(int index) const {
    const auto n_macro = static_cast<int>(macro_sectors.size());
    return index < n_macro ? macro_sectors[static_cast<std::size_t>(index)]
                           : picos[static_cast<std::size_t>(index - n_macro)];
}

std::vector<Node> NetworkLayout::cells() const {
    std::vector<Node> out;
    out.reserve(macro_sectors.size() + picos.size());
    out.insert(out.end(), macro_sectors.begin(), macro_sectors.end());
    out.insert(out.end(), picos.begin(), picos.end());
    return out;
}

std::vector<Vec2> hex_site_positions(int n_macro_sites, double inter_site_distance) {
    const int rings = rings_for_sites(n_macro_sites);
    struct Site {
        int ring;
        double angle;
        Vec2 pos;
    };
    std::vector<Site> sites;
    // Axial lattice coordinates: basis (1, 0) and (1/2, sqrt(3)/2), scaled by the ISD.
    for (int q = -rings; q <= rings; ++q) {
        for (int r = -rings; r <= rings; ++r) {
            const int ring = std::max({std::abs(q), std::abs(r), std::abs(q + r)});
            if (ring > rings) continue;
            const Vec2 pos{inter_site_distance * (q + 0.5 * r), inter_site_distance * (0.5 * kSqrt3 * r)};
            double angle = ring == 0 ? 0.0 : rad_to_deg(std::atan2(pos.y, pos.x));
            if (angle < -1e-9) angle += 360.0;
            sites.push_back({ring, angle, pos});
        }
    }
    std::sort(sites.begin(), sites.end(), [](const Site& a, const Site& b) {
        if (a.ring != b.ring) return a.ring < b.ring;
        return a.angle < b.angle;
    });
    std::vector<Vec2> out;
    out.reserve(sites.size());
    for (const auto& s : sites) out.push_back(s.pos);
    return out;
}

std::vector<Node> build_macro_grid(const ScenarioGeometry& geometry) {
    const auto sites = hex_site_positions(geometry.n_macro_sites, geometry.inter_site_distance);
    std::vector<Node> sectors;
    sectors.reserve(sites.size() * 3);
    for (const Vec2 site : sites) {
        for (int k = 0; k < 3; ++k) {
            Node n;
            n.id = static_cast<int>(sectors.size());
            n.kind = NodeKind::MacroSector;
            n.position = site;
            n.boresight_azimuth = 30.0 + 120.0 * k;
            n.tx_power_dbm = geometry.macro_tx_power_dbm;
            n.antenna_gain_dbi = geometry.macro_antenna_gain_dbi;
            n.sector = n.id;
            sectors.push_back(n);
        }
    }
    return sectors;
}

Vec2 sample_in_sector(const Node& sector, double inter_site_distance, std::mt19937_64& rng) {
    // The wedge is a rhombus spanned by two hexagon vertices at boresight +-60 deg.
    const double radius = inter_site_distance / kSqrt3;
    const double az = sector.boresight_azimuth.value_or(0.0);
    const Vec2 edge_a = radius * direction(az - 60.0);
    const Vec2 edge_b = radius * direction(az + 60.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double u = unit(rng);
    const double v = unit(rng);
    return sector.position + u * edge_a + v * edge_b;
}

BoundingBox grid_bounding_box(std::span<const Node> macro_sectors, double inter_site_distance) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    BoundingBox box{{inf, inf}, {-inf, -inf}};
    const double radius = inter_site_distance / kSqrt3;
    for (const Node& s : macro_sectors) {
        for (int k = 0; k < 6; ++k) {
            const Vec2 v = s.position + radius * direction(30.0 + 60.0 * k);
            box.min.x = std::min(box.min.x, v.x);
            box.min.y = std::min(box.min.y, v.y);
            box.max.x = std::max(box.max.x, v.x);
            box.max.y = std::max(box.max.y, v.y);
        }
    }
    return box;
}

std::vector<Node> drop_picos(const NetworkLayout& partial, const ScenarioGeometry& geometry, std::mt19937_64& rng) {
    const auto sites = site_positions_of(partial.macro_sectors, geometry.sectors_per_site);
    std::vector<Node> picos;
    picos.reserve(partial.macro_sectors.size() * static_cast<std::size_t>(geometry.picos_per_sector));
    const int first_id = static_cast<int>(partial.macro_sectors.size());

    for (const Node& sector : partial.macro_sectors) {
        for (int j = 0; j < geometry.picos_per_sector; ++j) {
            bool placed = false;
            for (int attempt = 0; attempt < geometry.max_placement_attempts && !placed; ++attempt) {
                const Vec2 p = sample_in_sector(sector, geometry.inter_site_distance, rng);
                if (!clear_of(p, sites, geometry.min_macro_pico_dist)) continue;
                if (!clear_of(p, picos, geometry.min_pico_pico_dist)) continue;
                Node n;
                n.id = first_id + static_cast<int>(picos.size());
                n.kind = NodeKind::Pico;
                n.position = p;
                n.tx_power_dbm = geometry.pico_tx_power_dbm;
                n.antenna_gain_dbi = geometry.pico_antenna_gain_dbi;
                n.sector = sector.id;
                picos.push_back(n);
                placed = true;
            }
            if (!placed) {
                throw PlacementFailure("could not place pico " + std::to_string(j) + " in sector " +
                                       std::to_string(sector.id) + " after " +
                                       std::to_string(geometry.max_placement_attempts) + " attempts");
            }
        }
    }
    return picos;
}

std::vector<Node> drop_ues(const NetworkLayout& partial, const ScenarioGeometry& geometry, std::mt19937_64& rng) {
    std::vector<Node> ues;
    if (geometry.n_ues == 0) return ues;
    if (partial.macro_sectors.empty()) throw PlacementFailure("cannot drop UEs without a macro grid");

    const auto sites = site_positions_of(partial.macro_sectors, geometry.sectors_per_site);
    const int first_id = partial.n_cells();
    std::uniform_int_distribution<int> pick_sector(0, static_cast<int>(partial.macro_sectors.size()) - 1);
    ues.reserve(static_cast<std::size_t>(geometry.n_ues));

    for (int k = 0; k < geometry.n_ues; ++k) {
        bool placed = false;
        for (int attempt = 0; attempt < geometry.max_placement_attempts && !placed; ++attempt) {
            // Every sector wedge has the same area, so sector-then-point is area-uniform.
            const Node& sector = partial.macro_sectors[static_cast<std::size_t>(pick_sector(rng))];
            const Vec2 p = sample_in_sector(sector, geometry.inter_site_distance, rng);
            if (!clear_of(p, sites, geometry.min_macro_ue_dist)) continue;
            if (!clear_of(p, partial.picos, geometry.min_pico_ue_dist)) continue;
            Node n;
            n.id = first_id + k;
            n.kind = NodeKind::Ue;
            n.position = p;
            n.antenna_gain_dbi = geometry.ue_antenna_gain_dbi;
            n.sector = sector.id;
            ues.push_back(n);
            placed = true;
        }
        if (!placed) {
            throw PlacementFailure("could not place UE " + std::to_string(k) + " after " +
                                   std::to_string(geometry.max_placement_attempts) + " attempts");
        }
    }
    return ues;
}

NetworkLayout generate_layout(const ScenarioGeometry& geometry, const StreamKey& key) {
    geometry.validate();
    NetworkLayout layout;
    layout.seed = key.seed;
    layout.drop_index = key.drop;
    layout.macro_sectors = build_macro_grid(geometry);
    auto pico_rng = key.substream(StreamTag::Picos);
    layout.picos = drop_picos(layout, geometry, pico_rng);
    auto ue_rng = key.substream(StreamTag::Ues);
    layout.ues = drop_ues(layout, geometry, ue_rng);
    return layout;
}

}  // namespace dsnsim
