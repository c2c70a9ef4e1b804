#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "dsnsim/engine.hpp"
#include "dsnsim/scenario.hpp"
#include "support/reference_model.hpp"

using namespace dsnsim;

namespace {

Node make_cell(int id, NodeKind kind, double tx_dbm, int sector = 0) {
    Node n;
    n.id = id;
    n.kind = kind;
    n.tx_power_dbm = tx_dbm;
    n.sector = sector;
    return n;
}

Scenario small_scenario(int sites, int picos, int ues, int ttis = 20) {
    Scenario s = reference_scenario();
    s.geometry.n_macro_sites = sites;
    s.geometry.picos_per_sector = picos;
    s.geometry.n_ues = ues;
    s.run.ttis = ttis;
    s.run.check_invariants = true;
    return s;
}

bool same_statistics(const DropStatistics& a, const DropStatistics& b) {
    return a.serving_cell == b.serving_cell && a.ue_bits == b.ue_bits && a.cell_bits == b.cell_bits &&
           a.ue_wideband_sinr_db == b.ue_wideband_sinr_db && a.cell_ue_count == b.cell_ue_count &&
           a.cell_kind == b.cell_kind && a.ue_sector == b.ue_sector && a.tti_count == b.tti_count;
}

}  // namespace

TEST_CASE("association: a single cell serves everyone") {
    const std::vector<Node> cells{make_cell(0, NodeKind::Pico, 30.0)};
    LinkGainMatrix gains(1, 5, -100.0);
    const auto map = associate(cells, gains);
    CHECK(map.serving_cell == std::vector<int>(5, 0));
}

TEST_CASE("association: at equal path loss the macro wins") {
    std::vector<Node> cells{make_cell(0, NodeKind::Pico, 30.0), make_cell(1, NodeKind::MacroSector, 46.0)};
    LinkGainMatrix gains(2, 1);
    gains(0, 0) = -100.0 + 5.0;
    gains(1, 0) = -100.0 + 14.0;
    CHECK(associate(cells, gains).serving_cell[0] == 1);
}

TEST_CASE("association: ties go to the lowest cell index") {
    std::vector<Node> cells{make_cell(0, NodeKind::MacroSector, 40.0), make_cell(1, NodeKind::MacroSector, 40.0)};
    LinkGainMatrix gains(2, 1, -90.0);
    CHECK(associate(cells, gains).serving_cell[0] == 0);
}

TEST_CASE("association: pico bias flips UEs inside the power gap") {
    // Macro at x = 0, pico at x = 400, UEs on the line between them, no pattern or shadowing.
    PropagationConfig cfg;
    Node macro = make_cell(0, NodeKind::MacroSector, 46.0);
    macro.antenna_gain_dbi = 14.0;
    Node pico = make_cell(1, NodeKind::Pico, 30.0);
    pico.position = {400.0, 0.0};
    pico.antenna_gain_dbi = 5.0;
    const std::vector<Node> cells{macro, pico};

    const int n = 391;
    LinkGainMatrix gains(2, n);
    for (int u = 0; u < n; ++u) {
        const Vec2 p{5.0 + u, 0.0};
        gains(0, u) = -pathloss_macro(distance(p, macro.position), cfg) + 14.0;
        gains(1, u) = -pathloss_pico(distance(p, pico.position), cfg) + 5.0;
    }
    const auto plain = associate(cells, gains);
    const auto biased = associate(cells, gains, 0.0, 10.0);
    for (int u = 0; u < n; ++u) {
        const double macro_rx = 46.0 + gains(0, u);
        const double pico_rx = 30.0 + gains(1, u);
        const int expect_plain = pico_rx > macro_rx ? 1 : 0;
        const int expect_biased = pico_rx + 10.0 > macro_rx ? 1 : 0;
        CHECK(plain.serving_cell[static_cast<std::size_t>(u)] == expect_plain);
        CHECK(biased.serving_cell[static_cast<std::size_t>(u)] == expect_biased);
    }
    const auto picos = [](const AssociationMap& m) { return std::count(m.serving_cell.begin(), m.serving_cell.end(), 1); };
    CHECK(picos(biased) > picos(plain));
}

TEST_CASE("per-RB interference") {
    const std::vector<Node> cells{make_cell(0, NodeKind::MacroSector, 46.0, 0), make_cell(1, NodeKind::MacroSector, 46.0, 1),
                                  make_cell(2, NodeKind::MacroSector, 46.0, 2)};
    LinkGainMatrix gains(3, 3, -100.0);
    for (int u = 0; u < 3; ++u) gains(u, u) = -80.0;
    const auto map = associate(cells, gains);
    const auto rx = received_power_mw(cells, gains);
    const auto active = active_cells(map, 3);

    SUBCASE("no other active cell") {
        const std::vector<std::uint8_t> only_serving{1, 0, 0};
        const std::vector<RbMask> masks(3, RbMask::full(6));
        CHECK(per_rb_interference(0, 2, map, masks, only_serving, rx) == 0.0);
    }
    SUBCASE("reuse-3 co-site sectors do not interfere") {
        std::vector<RbMask> masks;
        for (int k = 0; k < 3; ++k) masks.push_back(mask_hard_reuse3(k, 6));
        for (int u = 0; u < 3; ++u) {
            for (int rb = 0; rb < 6; ++rb) {
                if (masks[static_cast<std::size_t>(u)].test(rb)) CHECK(per_rb_interference(u, rb, map, masks, active, rx) == 0.0);
            }
        }
    }
    SUBCASE("co-channel cells add up") {
        const std::vector<RbMask> masks(3, RbMask::full(6));
        CHECK(per_rb_interference(0, 0, map, masks, active, rx) == doctest::Approx(2.0 * db_to_linear(46.0 - 100.0)));
    }
}

TEST_CASE("two co-channel cells at equal gain give 0 dB without noise") {
    const std::vector<Node> cells{make_cell(0, NodeKind::Pico, 30.0), make_cell(1, NodeKind::Pico, 30.0)};
    LinkGainMatrix gains(2, 2, -60.0);
    const auto map = associate(cells, gains);
    // second UE keeps cell 1 active
    gains(1, 1) = -59.0;
    const auto map2 = associate(cells, gains);
    const auto rx = received_power_mw(cells, gains);
    const std::vector<RbMask> masks(2, RbMask::full(4));
    const auto q = compute_link_quality(rx, map2, masks, active_cells(map2, 2), 0.0);
    CHECK(map.serving_cell[0] == 0);
    CHECK(q.sinr(0, 0) == doctest::Approx(1.0));
    CHECK(linear_to_db(q.wideband_sinr[0]) == doctest::Approx(0.0));
}

TEST_CASE("silent cells do not interfere and deactivation never lowers SINR") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> g(-130.0, -70.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int n_cells = 5, n_ues = 6, n_rb = 8;
        std::vector<Node> cells;
        for (int c = 0; c < n_cells; ++c) cells.push_back(make_cell(c, c % 2 ? NodeKind::Pico : NodeKind::MacroSector, c % 2 ? 30.0 : 46.0));
        LinkGainMatrix gains(n_cells, n_ues);
        for (int c = 0; c < n_cells; ++c) {
            for (int u = 0; u < n_ues; ++u) gains(c, u) = g(rng);
        }
        const auto map = associate(cells, gains);
        const auto rx = received_power_mw(cells, gains);
        const std::vector<RbMask> masks(static_cast<std::size_t>(n_cells), RbMask::full(n_rb));
        const double noise = db_to_linear(noise_power_per_rb(L2sConfig{}));
        const auto active = active_cells(map, n_cells);
        const auto base = compute_link_quality(rx, map, masks, active, noise);

        std::vector<std::uint8_t> all_on(static_cast<std::size_t>(n_cells), 1);
        const auto everyone = compute_link_quality(rx, map, masks, all_on, noise);
        for (int c = 0; c < n_cells; ++c) {
            auto fewer = active;
            if (!fewer[static_cast<std::size_t>(c)]) continue;
            fewer[static_cast<std::size_t>(c)] = 0;
            const auto q = compute_link_quality(rx, map, masks, fewer, noise);
            for (int u = 0; u < n_ues; ++u) {
                if (map.serving_cell[static_cast<std::size_t>(u)] == c) continue;
                CHECK(q.wideband_sinr[static_cast<std::size_t>(u)] >= base.wideband_sinr[static_cast<std::size_t>(u)]);
            }
        }
        for (int u = 0; u < n_ues; ++u) {
            CHECK(everyone.wideband_sinr[static_cast<std::size_t>(u)] <= base.wideband_sinr[static_cast<std::size_t>(u)]);
            double expected_i = 0.0;
            for (int c = 0; c < n_cells; ++c) {
                if (c != map.serving_cell[static_cast<std::size_t>(u)] && active[static_cast<std::size_t>(c)]) expected_i += rx(u, c);
            }
            CHECK(per_rb_interference(u, 0, map, masks, active, rx) == doctest::Approx(expected_i));
        }
    }
}

TEST_CASE("1 cell, 1 UE, round robin: every RB every TTI") {
    DropInputs in;
    in.cells = {make_cell(0, NodeKind::MacroSector, 46.0)};
    in.n_ues = 1;
    in.gains = LinkGainMatrix(1, 1, -120.0);
    Scenario s = reference_scenario();
    s.run.ttis = 250;
    const auto stats = simulate_drop(in, s);
    const double sinr = db_to_linear(46.0 - 120.0) / db_to_linear(noise_power_per_rb(s.l2s));
    const std::int64_t per_rb = std::llround(rb_rate(sinr, s.l2s));
    CHECK(stats.ue_bits[0] == 50 * 250 * per_rb);
    CHECK(stats.ue_throughput_bps(0) == doctest::Approx(50.0 * static_cast<double>(per_rb) * 1000.0));
    CHECK(stats.ue_wideband_sinr_db[0] == doctest::Approx(linear_to_db(sinr)));

    s.run.ttis = 1;
    const auto one = simulate_drop(in, s);
    CHECK(one.ue_throughput_bps(0) == doctest::Approx(stats.ue_throughput_bps(0)));
}

TEST_CASE("engine matches the brute-force reference on micro-instances") {
    std::mt19937_64 rng(2024);
    int policies[3] = {0, 0, 0};
    for (int trial = 0; trial < 300; ++trial) {
        const auto inst = testing::random_micro_instance(rng);
        ++policies[static_cast<int>(inst.policy)];
        const auto expected = testing::reference_simulate(inst);
        const auto stats = simulate_drop(testing::to_drop_inputs(inst), testing::to_scenario(inst), Exec::Serial);
        CHECK(stats.serving_cell == expected.serving);
        CHECK(stats.ue_bits == expected.ue_bits);
        const auto par = simulate_drop(testing::to_drop_inputs(inst), testing::to_scenario(inst), Exec::Parallel);
        CHECK(par.ue_bits == stats.ue_bits);
    }
    for (const int n : policies) CHECK(n > 50);
}

TEST_CASE("cell throughput is the exact sum of its UEs") {
    for (const auto scheme : {ReuseScheme::Full1, ReuseScheme::Hard3, ReuseScheme::Ffr, ReuseScheme::FAloha}) {
        for (const auto policy : {SchedulerPolicy::RoundRobin, SchedulerPolicy::ProportionalFair, SchedulerPolicy::BestCqi}) {
            Scenario s = small_scenario(7, 2, 400);
            s.reuse.scheme = scheme;
            s.scheduler.policy = policy;
            const auto stats = run_drop(s, 3, 0);
            std::vector<std::int64_t> sums(static_cast<std::size_t>(stats.n_cells()), 0);
            for (int u = 0; u < stats.n_ues(); ++u) {
                CHECK(stats.ue_bits[static_cast<std::size_t>(u)] >= 0);
                sums[static_cast<std::size_t>(stats.serving_cell[static_cast<std::size_t>(u)])] += stats.ue_bits[static_cast<std::size_t>(u)];
            }
            CHECK(sums == stats.cell_bits);
            const auto total_cells = std::accumulate(stats.cell_bits.begin(), stats.cell_bits.end(), std::int64_t{0});
            const auto total_ues = std::accumulate(stats.ue_bits.begin(), stats.ue_bits.end(), std::int64_t{0});
            CHECK(total_cells == total_ues);
            // per TTI a cell can deliver at most popcount(mask) * 999 bits
            for (int c = 0; c < stats.n_cells(); ++c) CHECK(stats.cell_bits[static_cast<std::size_t>(c)] <= 50LL * 999 * s.run.ttis);
        }
    }
}

TEST_CASE("spectrum plans follow the reuse scheme") {
    Scenario s = small_scenario(7, 2, 300);
    const auto layout = generate_layout(s.geometry, StreamKey{1, 0});
    const auto cells = layout.cells();
    const auto gains = build_link_gain_matrix(layout, s.propagation, StreamKey{1, 0});
    const auto map = associate(cells, gains);
    const std::vector<double> sinr(static_cast<std::size_t>(layout.n_ues()), 3.0);

    ReusePolicy policy;
    policy.scheme = ReuseScheme::Hard3;
    auto plan = plan_spectrum(cells, map, sinr, policy, 50, StreamKey{1, 0});
    for (const Node& c : cells) {
        const auto& m = plan.cell_masks[static_cast<std::size_t>(c.id)];
        if (c.kind == NodeKind::MacroSector) {
            CHECK(m == mask_hard_reuse3(c.id % 3, 50));
        } else {
            CHECK(m == RbMask::full(50));
        }
    }

    policy.pico_use_macro_masks = true;
    plan = plan_spectrum(cells, map, sinr, policy, 50, StreamKey{1, 0});
    for (const Node& c : layout.picos) CHECK(plan.cell_masks[static_cast<std::size_t>(c.id)] == mask_hard_reuse3(c.sector % 3, 50));

    policy = ReusePolicy{};
    policy.scheme = ReuseScheme::FAloha;
    plan = plan_spectrum(cells, map, sinr, policy, 50, StreamKey{1, 0});
    for (const Node& c : cells) {
        CHECK(plan.cell_masks[static_cast<std::size_t>(c.id)].count() == (c.kind == NodeKind::Pico ? 17 : 50));
    }

    policy.scheme = ReuseScheme::Ffr;
    plan = plan_spectrum(cells, map, sinr, policy, 50, StreamKey{1, 0});
    for (int u = 0; u < layout.n_ues(); ++u) {
        const int c = map.serving_cell[static_cast<std::size_t>(u)];
        CHECK(plan.ue_eligibility[static_cast<std::size_t>(u)].is_subset_of(plan.cell_masks[static_cast<std::size_t>(c)]));
    }
}

TEST_CASE("same scenario and seed give identical statistics, serial or parallel") {
    for (const auto scheme : {ReuseScheme::Full1, ReuseScheme::Ffr, ReuseScheme::FAloha}) {
        Scenario s = small_scenario(7, 3, 600, 30);
        s.reuse.scheme = scheme;
        s.scheduler.policy = SchedulerPolicy::ProportionalFair;
        const auto a = run_drop(s, 17, 2, Exec::Parallel);
        const auto b = run_drop(s, 17, 2, Exec::Parallel);
        const auto c = run_drop(s, 17, 2, Exec::Serial);
        CHECK(same_statistics(a, b));
        CHECK(same_statistics(a, c));
        const auto other = run_drop(s, 18, 2, Exec::Parallel);
        CHECK(!same_statistics(a, other));
    }
}

TEST_CASE("thread count does not change results") {
    Scenario s = small_scenario(19, 2, 1500, 25);
    s.scheduler.policy = SchedulerPolicy::ProportionalFair;
    const int before = thread_count();
    set_thread_count(1);
    const auto one = run_drop(s, 5, 0);
    set_thread_count(4);
    const auto four = run_drop(s, 5, 0);
    set_thread_count(before);
    CHECK(same_statistics(one, four));
}

TEST_CASE("densification raises mean UE throughput at fixed UE count") {
    Scenario s = reference_scenario();
    s.run.ttis = 50;
    s.geometry.picos_per_sector = 0;
    const double macro_only = run_drop(s, 1, 0).mean_ue_throughput_bps();
    s.geometry.picos_per_sector = 5;
    const double dense = run_drop(s, 1, 0).mean_ue_throughput_bps();
    CHECK(dense > macro_only);
}

TEST_CASE("invalid scenarios are rejected") {
    Scenario s = reference_scenario();
    s.run.ttis = 0;
    CHECK_THROWS(run_drop(s, 1, 0));
    s = reference_scenario();
    s.reuse.scheme = ReuseScheme::Ffr;
    s.reuse.ffr_center_fraction = 0.99;
    CHECK_THROWS_AS(run_drop(s, 1, 0), ConfigError);
}
