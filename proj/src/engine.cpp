#include "dsnsim/engine.hpp"

#include <chrono>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dsnsim {

void RunConfig::validate() const {
    if (ttis < 1) throw std::invalid_argument("run.ttis must be >= 1");
    if (drops < 1) throw std::invalid_argument("run.drops must be >= 1");
}

void Scenario::validate() const {
    geometry.validate();
    propagation.validate();
    l2s.validate();
    reuse.validate();
    scheduler.validate();
    run.validate();
    if (reuse.scheme == ReuseScheme::Hard3 && l2s.n_rb < 3) throw ConfigError("hard3 reuse needs l2s.n_rb >= 3");
    if (reuse.scheme == ReuseScheme::Ffr) {
        const int edge = l2s.n_rb - fraction_of(reuse.ffr_center_fraction, l2s.n_rb);
        if (edge < 3) throw ConfigError("FFR edge band has " + std::to_string(edge) + " RBs, needs at least 3");
    }
}

AssociationMap associate(std::span<const Node> cells, const LinkGainMatrix& gains, double macro_bias_db,
                         double pico_bias_db) {
    AssociationMap map;
    map.macro_bias_db = macro_bias_db;
    map.pico_bias_db = pico_bias_db;
    map.serving_cell.assign(static_cast<std::size_t>(gains.n_ues()), -1);
    if (cells.empty() && gains.n_ues() > 0) throw std::invalid_argument("cannot associate UEs without cells");

    for (int u = 0; u < gains.n_ues(); ++u) {
        int best = 0;
        double best_power = 0.0;
        for (int c = 0; c < static_cast<int>(cells.size()); ++c) {
            const Node& cell = cells[static_cast<std::size_t>(c)];
            const double bias = cell.kind == NodeKind::MacroSector ? macro_bias_db : pico_bias_db;
            const double p = cell.tx_power_dbm + gains(c, u) + bias;
            if (c == 0 || p > best_power) {
                best = c;
                best_power = p;
            }
        }
        map.serving_cell[static_cast<std::size_t>(u)] = best;
    }
    return map;
}

RxPowerTable received_power_mw(std::span<const Node> cells, const LinkGainMatrix& gains, Exec exec) {
    RxPowerTable rx(gains.n_ues(), gains.n_cells());
    parallel_for(exec, gains.n_ues(), [&](std::ptrdiff_t u) {
        for (int c = 0; c < gains.n_cells(); ++c) {
            rx(static_cast<int>(u), c) = db_to_linear(cells[static_cast<std::size_t>(c)].tx_power_dbm +
                                                      gains(c, static_cast<int>(u)));
        }
    });
    return rx;
}

std::vector<std::uint8_t> active_cells(const AssociationMap& association, int n_cells) {
    std::vector<std::uint8_t> active(static_cast<std::size_t>(n_cells), 0);
    for (const int c : association.serving_cell) active[static_cast<std::size_t>(c)] = 1;
    return active;
}

double per_rb_interference(int ue, int rb, const AssociationMap& association, std::span<const RbMask> masks,
                           std::span<const std::uint8_t> active, const RxPowerTable& rx) {
    const int serving = association.serving_cell[static_cast<std::size_t>(ue)];
    double sum = 0.0;
    for (int c = 0; c < rx.n_cells(); ++c) {
        if (c == serving || !active[static_cast<std::size_t>(c)]) continue;
        if (masks[static_cast<std::size_t>(c)].test(rb)) sum += rx(ue, c);
    }
    return sum;
}

int sector_index_of(const Node& cell) {
    if (cell.kind == NodeKind::MacroSector && cell.boresight_azimuth) {
        const long k = std::lround((*cell.boresight_azimuth - 30.0) / 120.0);
        return static_cast<int>(((k % 3) + 3) % 3);
    }
    return ((cell.sector % 3) + 3) % 3;
}

SpectrumPlan plan_spectrum(std::span<const Node> cells, const AssociationMap& association,
                           std::span<const double> reuse1_sinr_db, const ReusePolicy& policy, int n_rb,
                           const StreamKey& key) {
    const auto n_cells = cells.size();
    const auto n_ues = association.serving_cell.size();
    SpectrumPlan plan;
    plan.cell_masks.assign(n_cells, RbMask::full(n_rb));
    std::vector<std::optional<RbMask>> eligibility(n_ues);

    for (std::size_t c = 0; c < n_cells; ++c) {
        const Node& cell = cells[c];
        const bool macro_style = cell.kind == NodeKind::MacroSector || policy.pico_use_macro_masks;
        switch (policy.scheme) {
            case ReuseScheme::Full1:
                break;
            case ReuseScheme::Hard3:
                if (macro_style) plan.cell_masks[c] = mask_hard_reuse3(sector_index_of(cell), n_rb);
                break;
            case ReuseScheme::Ffr: {
                if (!macro_style) break;
                std::vector<std::size_t> members;
                std::vector<double> sinrs;
                for (std::size_t u = 0; u < n_ues; ++u) {
                    if (association.serving_cell[u] != static_cast<int>(c)) continue;
                    members.push_back(u);
                    sinrs.push_back(reuse1_sinr_db[u]);
                }
                auto ffr = assign_ffr(sinrs, policy, sector_index_of(cell), n_rb);
                plan.cell_masks[c] = ffr.cell_mask;
                for (std::size_t i = 0; i < members.size(); ++i) eligibility[members[i]] = ffr.eligibility[i];
                break;
            }
            case ReuseScheme::FAloha:
                if (cell.kind == NodeKind::Pico) plan.cell_masks[c] = assign_faloha(cell.id, policy, n_rb, key);
                break;
        }
    }

    plan.ue_eligibility.reserve(n_ues);
    for (std::size_t u = 0; u < n_ues; ++u) {
        const auto serving = static_cast<std::size_t>(association.serving_cell[u]);
        plan.ue_eligibility.push_back(eligibility[u] ? *eligibility[u] : plan.cell_masks[serving]);
    }
    return plan;
}

LinkQuality compute_link_quality(const RxPowerTable& rx, const AssociationMap& association,
                                 std::span<const RbMask> masks, std::span<const std::uint8_t> active, double noise_mw,
                                 Exec exec) {
    const int n_ues = rx.n_ues();
    const int n_cells = rx.n_cells();
    const int n_rb = masks.empty() ? 0 : masks.front().size();

    // Masks as 0/1 doubles: adding p * 0.0 leaves a sum unchanged, so this
    // equals summing only the cells whose mask contains the RB.
    std::vector<double> mask_weight(static_cast<std::size_t>(n_cells) * n_rb, 0.0);
    for (int c = 0; c < n_cells; ++c) {
        for (int rb = 0; rb < n_rb; ++rb) {
            mask_weight[static_cast<std::size_t>(c) * n_rb + rb] =
                (active[static_cast<std::size_t>(c)] && masks[static_cast<std::size_t>(c)].test(rb)) ? 1.0 : 0.0;
        }
    }

    LinkQuality q;
    q.n_ues = n_ues;
    q.n_rb = n_rb;
    q.rb_sinr.assign(static_cast<std::size_t>(n_ues) * n_rb, 0.0);
    q.wideband_sinr.assign(static_cast<std::size_t>(n_ues), 0.0);

    parallel_for(exec, n_ues, [&](std::ptrdiff_t u) {
        const int serving = association.serving_cell[static_cast<std::size_t>(u)];
        const auto power = rx.row(static_cast<int>(u));
        std::vector<double> interference(static_cast<std::size_t>(n_rb), 0.0);
        for (int c = 0; c < n_cells; ++c) {
            if (c == serving) continue;
            const double p = power[static_cast<std::size_t>(c)];
            const double* w = &mask_weight[static_cast<std::size_t>(c) * n_rb];
            for (int rb = 0; rb < n_rb; ++rb) interference[static_cast<std::size_t>(rb)] += p * w[rb];
        }

        const double signal = power[static_cast<std::size_t>(serving)];
        const RbMask& own = masks[static_cast<std::size_t>(serving)];
        double total_signal = 0.0;
        double total_denominator = 0.0;
        double* out = &q.rb_sinr[static_cast<std::size_t>(u) * n_rb];
        for (int rb = 0; rb < n_rb; ++rb) {
            if (!own.test(rb)) continue;
            const double denominator = interference[static_cast<std::size_t>(rb)] + noise_mw;
            out[rb] = signal / denominator;
            total_signal += signal;
            total_denominator += denominator;
        }
        q.wideband_sinr[static_cast<std::size_t>(u)] = total_denominator > 0.0 ? total_signal / total_denominator : 0.0;
    });
    return q;
}

double DropStatistics::mean_ue_throughput_bps() const {
    if (ue_bits.empty()) return 0.0;
    const std::int64_t total = std::accumulate(ue_bits.begin(), ue_bits.end(), std::int64_t{0});
    return static_cast<double>(total) / seconds_simulated() / static_cast<double>(ue_bits.size());
}

namespace {

void check_decision(const ScheduleDecision& d, const RbMask& cell_mask, std::span<const RbMask> eligibility,
                    std::span<const int> local_pos, int cell) {
    for (int rb = 0; rb < cell_mask.size(); ++rb) {
        const int ue = d.assignment[static_cast<std::size_t>(rb)];
        if (ue == kUnassigned) continue;
        const int pos = local_pos[static_cast<std::size_t>(ue)];
        if (!cell_mask.test(rb) || pos < 0 || !eligibility[static_cast<std::size_t>(pos)].test(rb)) {
            throw std::logic_error("cell " + std::to_string(cell) + " scheduled UE " + std::to_string(ue) +
                                   " on RB " + std::to_string(rb) + " outside its mask");
        }
    }
}

}  // namespace

DropStatistics simulate_drop(const DropInputs& inputs, const Scenario& scenario, Exec exec, const LinkMapper* mapper) {
    const ModifiedShannonMapper default_mapper(scenario.l2s);
    if (mapper == nullptr) mapper = &default_mapper;

    const int n_cells = static_cast<int>(inputs.cells.size());
    const int n_ues = inputs.n_ues;
    const int n_rb = scenario.l2s.n_rb;
    const double noise_mw = db_to_linear(noise_power_per_rb(scenario.l2s));

    const AssociationMap association =
        associate(inputs.cells, inputs.gains, scenario.run.macro_bias_db, scenario.run.pico_bias_db);
    const RxPowerTable rx = received_power_mw(inputs.cells, inputs.gains, exec);
    const auto active = active_cells(association, n_cells);

    SpectrumPlan plan;
    if (inputs.spectrum) {
        plan = *inputs.spectrum;
    } else {
        std::vector<double> reuse1_db;
        if (scenario.reuse.scheme == ReuseScheme::Ffr) {
            const std::vector<RbMask> full(static_cast<std::size_t>(n_cells), RbMask::full(n_rb));
            const auto reuse1 = compute_link_quality(rx, association, full, active, noise_mw, exec);
            reuse1_db.reserve(reuse1.wideband_sinr.size());
            for (const double s : reuse1.wideband_sinr) reuse1_db.push_back(linear_to_db(s));
        }
        plan = plan_spectrum(inputs.cells, association, reuse1_db, scenario.reuse, n_rb, inputs.key);
    }

    const LinkQuality quality = compute_link_quality(rx, association, plan.cell_masks, active, noise_mw, exec);

    // Per-cell UE lists (ascending UE index) and each UE's position in its list.
    std::vector<std::vector<int>> members(static_cast<std::size_t>(n_cells));
    std::vector<int> local_pos(static_cast<std::size_t>(n_ues), -1);
    for (int u = 0; u < n_ues; ++u) {
        auto& list = members[static_cast<std::size_t>(association.serving_cell[static_cast<std::size_t>(u)])];
        local_pos[static_cast<std::size_t>(u)] = static_cast<int>(list.size());
        list.push_back(u);
    }

    std::vector<std::int64_t> ue_bits(static_cast<std::size_t>(n_ues), 0);
    const int ttis = scenario.run.ttis;
    const bool check = scenario.run.check_invariants;

    parallel_for_dynamic(exec, n_cells, [&](std::ptrdiff_t ci) {
        const int c = static_cast<int>(ci);
        const auto& ues = members[static_cast<std::size_t>(c)];
        if (ues.empty()) return;
        const RbMask& cell_mask = plan.cell_masks[static_cast<std::size_t>(c)];
        const int n = static_cast<int>(ues.size());

        RateMatrix rates(n, n_rb);
        std::vector<RbMask> eligibility;
        eligibility.reserve(ues.size());
        for (int i = 0; i < n; ++i) {
            const int u = ues[static_cast<std::size_t>(i)];
            eligibility.push_back(plan.ue_eligibility[static_cast<std::size_t>(u)] & cell_mask);
            for (int rb = 0; rb < n_rb; ++rb) {
                if (cell_mask.test(rb)) rates(i, rb) = mapper->rb_bits(quality.sinr(u, rb));
            }
        }

        SchedulerState state = SchedulerState::initial(scenario.scheduler, n);
        for (int t = 0; t < ttis; ++t) {
            const ScheduleDecision d = schedule(ues, rates, state, cell_mask, eligibility);
            if (check) check_decision(d, cell_mask, eligibility, local_pos, c);
            for (int rb = 0; rb < n_rb; ++rb) {
                const int u = d.assignment[static_cast<std::size_t>(rb)];
                if (u == kUnassigned) continue;
                ue_bits[static_cast<std::size_t>(u)] += rates(local_pos[static_cast<std::size_t>(u)], rb);
            }
        }
    });

    DropStatistics stats;
    stats.drop_index = inputs.key.drop;
    stats.seed = inputs.key.seed;
    stats.tti_count = ttis;
    stats.tti_duration = scenario.l2s.tti_duration;
    stats.cell_kind.reserve(static_cast<std::size_t>(n_cells));
    stats.cell_sector.reserve(static_cast<std::size_t>(n_cells));
    for (const Node& cell : inputs.cells) {
        stats.cell_kind.push_back(cell.kind);
        stats.cell_sector.push_back(cell.sector);
    }
    stats.cell_ue_count.assign(static_cast<std::size_t>(n_cells), 0);
    stats.cell_bits.assign(static_cast<std::size_t>(n_cells), 0);
    stats.serving_cell = association.serving_cell;
    stats.ue_sector = inputs.ue_sector;
    if (stats.ue_sector.size() != static_cast<std::size_t>(n_ues)) stats.ue_sector.assign(static_cast<std::size_t>(n_ues), 0);
    stats.ue_bits = ue_bits;
    stats.ue_wideband_sinr_db.reserve(static_cast<std::size_t>(n_ues));
    for (int u = 0; u < n_ues; ++u) {
        const auto c = static_cast<std::size_t>(association.serving_cell[static_cast<std::size_t>(u)]);
        stats.cell_ue_count[c] += 1;
        stats.cell_bits[c] += ue_bits[static_cast<std::size_t>(u)];
        stats.ue_wideband_sinr_db.push_back(linear_to_db(quality.wideband_sinr[static_cast<std::size_t>(u)]));
    }
    return stats;
}

DropStatistics run_drop(const Scenario& scenario, std::uint64_t seed, std::uint32_t drop_index, Exec exec) {
    scenario.validate();
    const auto start = std::chrono::steady_clock::now();

    const StreamKey key{seed, drop_index};
    const NetworkLayout layout = generate_layout(scenario.geometry, key);

    DropInputs inputs;
    inputs.cells = layout.cells();
    inputs.n_ues = layout.n_ues();
    inputs.gains = build_link_gain_matrix(layout, scenario.propagation, key, exec);
    inputs.ue_sector.reserve(layout.ues.size());
    for (const Node& ue : layout.ues) inputs.ue_sector.push_back(ue.sector);
    inputs.key = key;

    DropStatistics stats = simulate_drop(inputs, scenario, exec);
    stats.wallclock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return stats;
}

}  // namespace dsnsim
