#pragma once

// Monte-Carlo drop orchestration:
//   deploy -> link gains -> association -> spectrum plan -> per-RB SINR
//   -> TTI loop (per-cell scheduling) -> statistics.
//
// There is no fast fading, so per-RB SINRs are fixed for a drop and computed
// once. The TTI loop still runs every TTI because scheduler state (RR pointer,
// PF averages) evolves.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dsnsim/deployment.hpp"
#include "dsnsim/link_abstraction.hpp"
#include "dsnsim/parallel.hpp"
#include "dsnsim/propagation.hpp"
#include "dsnsim/scheduling.hpp"
#include "dsnsim/spectrum_reuse.hpp"

namespace dsnsim {

struct RunConfig {
    std::uint64_t seed = 1;
    int ttis = 250;
    int drops = 1;
    std::string output_dir = "results";
    bool center_site_only = false;  // restrict statistics to the centre site
    double macro_bias_db = 0.0;     // association bias
    double pico_bias_db = 0.0;
    int threads = 0;                // 0 = OpenMP default
    bool check_invariants = false;  // verify mask compliance every TTI

    void validate() const;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct Scenario {
    ScenarioGeometry geometry;
    PropagationConfig propagation;
    L2sConfig l2s;
    ReusePolicy reuse;
    SchedulerConfig scheduler;
    RunConfig run;

    void validate() const;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct AssociationMap {
    std::vector<int> serving_cell;  // per UE
    double macro_bias_db = 0.0;
    double pico_bias_db = 0.0;
};

/// Each UE attaches to the cell maximising tx power + gain + kind bias; ties go
/// to the lowest cell index.
AssociationMap associate(std::span<const Node> cells, const LinkGainMatrix& gains, double macro_bias_db = 0.0,
                         double pico_bias_db = 0.0);

/// Received power in linear mW, laid out UE-major for the interference sums.
class RxPowerTable {
  public:
    RxPowerTable() = default;
    RxPowerTable(int n_ues, int n_cells)
        : n_ues_(n_ues), n_cells_(n_cells), mw_(static_cast<std::size_t>(n_ues) * n_cells, 0.0) {}

    int n_ues() const { return n_ues_; }
    int n_cells() const { return n_cells_; }
    double operator()(int ue, int cell) const { return mw_[index(ue, cell)]; }
    double& operator()(int ue, int cell) { return mw_[index(ue, cell)]; }
    std::span<const double> row(int ue) const {
        return {mw_.data() + index(ue, 0), static_cast<std::size_t>(n_cells_)};
    }

  private:
    std::size_t index(int ue, int cell) const {
        return static_cast<std::size_t>(ue) * static_cast<std::size_t>(n_cells_) + static_cast<std::size_t>(cell);
    }

    int n_ues_ = 0;
    int n_cells_ = 0;
    std::vector<double> mw_;
};

RxPowerTable received_power_mw(std::span<const Node> cells, const LinkGainMatrix& gains, Exec exec = Exec::Parallel);

/// 1 for cells with at least one associated UE. Silent cells never transmit.
std::vector<std::uint8_t> active_cells(const AssociationMap& association, int n_cells);

/// Interference in mW on `rb` at `ue`: every active cell other than the
/// serving one whose mask contains `rb`.
double per_rb_interference(int ue, int rb, const AssociationMap& association, std::span<const RbMask> masks,
                           std::span<const std::uint8_t> active, const RxPowerTable& rx);

struct SpectrumPlan {
    std::vector<RbMask> cell_masks;     // per cell
    std::vector<RbMask> ue_eligibility; // per UE, within its serving cell's mask
};

/// Sector index {0,1,2} of a cell: its own for macros, the parent sector's for picos.
int sector_index_of(const Node& cell);

/// Masks for `policy`. `reuse1_sinr_db` is each UE's wideband SINR with every
/// active cell on the full band; only FFR reads it.
SpectrumPlan plan_spectrum(std::span<const Node> cells, const AssociationMap& association,
                           std::span<const double> reuse1_sinr_db, const ReusePolicy& policy, int n_rb,
                           const StreamKey& key);

struct LinkQuality {
    int n_ues = 0;
    int n_rb = 0;
    std::vector<double> rb_sinr;        // linear, UE-major; 0 outside the serving mask
    std::vector<double> wideband_sinr;  // linear, serving power / (interference + noise) over the serving mask

    double sinr(int ue, int rb) const {
        return rb_sinr[static_cast<std::size_t>(ue) * static_cast<std::size_t>(n_rb) + static_cast<std::size_t>(rb)];
    }
};

/// Per-RB and wideband SINR of every UE. Interference is summed in cell-index
/// order for each UE, so Serial and Parallel agree bit for bit.
LinkQuality compute_link_quality(const RxPowerTable& rx, const AssociationMap& association,
                                 std::span<const RbMask> masks, std::span<const std::uint8_t> active, double noise_mw,
                                 Exec exec = Exec::Parallel);

/// Everything a drop needs once geometry and gains are fixed. Tests build
/// these directly to drive the engine on hand-made instances.
struct DropInputs {
    std::vector<Node> cells;
    int n_ues = 0;
    LinkGainMatrix gains;
    std::vector<int> ue_sector;                // macro sector containing each UE
    std::optional<SpectrumPlan> spectrum;      // overrides plan_spectrum when set
    StreamKey key;
};

struct DropStatistics {
    std::uint32_t drop_index = 0;
    std::uint64_t seed = 0;
    int tti_count = 0;
    double tti_duration = 0.001;

    std::vector<NodeKind> cell_kind;
    std::vector<int> cell_sector;
    std::vector<int> cell_ue_count;
    std::vector<std::int64_t> cell_bits;

    std::vector<int> serving_cell;
    std::vector<int> ue_sector;
    std::vector<double> ue_wideband_sinr_db;
    std::vector<std::int64_t> ue_bits;

    double wallclock_seconds = 0.0;

    int n_cells() const { return static_cast<int>(cell_kind.size()); }
    int n_ues() const { return static_cast<int>(serving_cell.size()); }
    double seconds_simulated() const { return tti_count * tti_duration; }
    double ue_throughput_bps(int ue) const {
        return static_cast<double>(ue_bits[static_cast<std::size_t>(ue)]) / seconds_simulated();
    }
    double cell_throughput_bps(int cell) const {
        return static_cast<double>(cell_bits[static_cast<std::size_t>(cell)]) / seconds_simulated();
    }
    double mean_ue_throughput_bps() const;
};

/// Runs the TTI loop on prepared inputs. `mapper` defaults to modified Shannon
/// built from scenario.l2s.
DropStatistics simulate_drop(const DropInputs& inputs, const Scenario& scenario, Exec exec = Exec::Parallel,
                             const LinkMapper* mapper = nullptr);

/// Full drop from scratch. wallclock_seconds covers the whole engine pass.
DropStatistics run_drop(const Scenario& scenario, std::uint64_t seed, std::uint32_t drop_index,
                        Exec exec = Exec::Parallel);

}  // namespace dsnsim
