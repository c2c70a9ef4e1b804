#include "reference_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace dsnsim::testing {

namespace {

double mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

// Every assignment of the allowed RBs to allowed UEs, visited in
// lexicographic order (RB 0 most significant, lower UE position first).
void for_each_assignment(const std::vector<std::vector<int>>& options,
                         const std::function<void(const std::vector<int>&)>& visit) {
    std::vector<std::size_t> digit(options.size(), 0);
    std::vector<int> current(options.size(), -1);
    while (true) {
        for (std::size_t rb = 0; rb < options.size(); ++rb) current[rb] = options[rb].empty() ? -1 : options[rb][digit[rb]];
        visit(current);
        bool advanced = false;
        for (std::size_t k = options.size(); k-- > 0 && !advanced;) {
            if (options[k].empty()) continue;
            if (++digit[k] < options[k].size()) {
                advanced = true;
            } else {
                digit[k] = 0;
            }
        }
        if (!advanced) return;
    }
}

}  // namespace

MicroInstance random_micro_instance(std::mt19937_64& rng) {
    auto uniform_int = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    auto coin = [&](double p) { return std::bernoulli_distribution(p)(rng); };
    std::uniform_real_distribution<double> gain(-140.0, -70.0);

    MicroInstance m;
    m.n_cells = uniform_int(1, 3);
    m.n_ues = uniform_int(1, 4);
    m.n_rb = uniform_int(1, 6);
    m.ttis = uniform_int(1, 30);
    m.policy = static_cast<SchedulerPolicy>(uniform_int(0, 2));
    m.l2s.n_rb = m.n_rb;
    m.pf_time_constant = static_cast<double>(uniform_int(2, 100));

    for (int c = 0; c < m.n_cells; ++c) {
        const bool macro = coin(0.5);
        m.kind.push_back(macro ? NodeKind::MacroSector : NodeKind::Pico);
        m.tx_dbm.push_back(macro ? 46.0 : 30.0);
        std::vector<double> row;
        for (int u = 0; u < m.n_ues; ++u) row.push_back(gain(rng));
        m.gain_db.push_back(row);

        std::vector<bool> mask(static_cast<std::size_t>(m.n_rb), true);
        if (coin(0.6)) {
            for (auto&& b : mask) b = coin(0.6);
            mask[static_cast<std::size_t>(uniform_int(0, m.n_rb - 1))] = true;
        }
        m.cell_mask.push_back(mask);
    }
    for (int u = 0; u < m.n_ues; ++u) {
        std::vector<bool> e(static_cast<std::size_t>(m.n_rb), true);
        if (coin(0.3)) {
            for (auto&& b : e) b = coin(0.7);
        }
        m.eligible.push_back(e);
    }
    return m;
}

ReferenceResult reference_simulate(const MicroInstance& m) {
    ReferenceResult out;
    const auto n_cells = static_cast<std::size_t>(m.n_cells);
    const auto n_ues = static_cast<std::size_t>(m.n_ues);
    const auto n_rb = static_cast<std::size_t>(m.n_rb);

    for (std::size_t u = 0; u < n_ues; ++u) {
        std::vector<double> p;
        for (std::size_t c = 0; c < n_cells; ++c) p.push_back(m.tx_dbm[c] + m.gain_db[c][u]);
        out.serving.push_back(static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin()));
    }
    std::vector<bool> active(n_cells, false);
    for (const int s : out.serving) active[static_cast<std::size_t>(s)] = true;

    const double noise = mw(m.l2s.thermal_noise_density + 10.0 * std::log10(m.l2s.rb_bandwidth) + m.l2s.noise_figure);
    std::vector<std::vector<std::int64_t>> bits(n_ues, std::vector<std::int64_t>(n_rb, 0));
    for (std::size_t u = 0; u < n_ues; ++u) {
        const auto s = static_cast<std::size_t>(out.serving[u]);
        for (std::size_t rb = 0; rb < n_rb; ++rb) {
            if (!m.cell_mask[s][rb]) continue;
            double interference = 0.0;
            for (std::size_t c = 0; c < n_cells; ++c) {
                if (c != s && active[c] && m.cell_mask[c][rb]) interference += mw(m.tx_dbm[c] + m.gain_db[c][u]);
            }
            const double sinr = mw(m.tx_dbm[s] + m.gain_db[s][u]) / (interference + noise);
            const double se = std::min(m.l2s.bandwidth_efficiency * std::log2(1.0 + sinr / m.l2s.snr_efficiency),
                                       m.l2s.max_spectral_efficiency);
            bits[u][rb] = std::llround(se * m.l2s.rb_bandwidth * m.l2s.tti_duration);
        }
    }

    out.ue_bits.assign(n_ues, 0);
    for (std::size_t c = 0; c < n_cells; ++c) {
        std::vector<std::size_t> ues;
        for (std::size_t u = 0; u < n_ues; ++u) {
            if (out.serving[u] == static_cast<int>(c)) ues.push_back(u);
        }
        if (ues.empty()) continue;
        const std::size_t n = ues.size();

        // options[rb] = positions (into ues) allowed on rb
        std::vector<std::vector<int>> options(n_rb);
        for (std::size_t rb = 0; rb < n_rb; ++rb) {
            if (!m.cell_mask[c][rb]) continue;
            for (std::size_t i = 0; i < n; ++i) {
                if (m.eligible[ues[i]][rb]) options[rb].push_back(static_cast<int>(i));
            }
        }

        std::size_t rr_next = 0;
        std::vector<double> avg(n, m.pf_init_epsilon);
        for (int t = 0; t < m.ttis; ++t) {
            std::vector<int> chosen(n_rb, -1);
            if (m.policy == SchedulerPolicy::RoundRobin) {
                for (std::size_t rb = 0; rb < n_rb; ++rb) {
                    if (options[rb].empty()) continue;
                    for (std::size_t k = 0; k < n; ++k) {
                        const std::size_t i = (rr_next + k) % n;
                        if (std::find(options[rb].begin(), options[rb].end(), static_cast<int>(i)) == options[rb].end()) continue;
                        chosen[rb] = static_cast<int>(i);
                        rr_next = (i + 1) % n;
                        break;
                    }
                }
            } else {
                // Exhaustive search for the assignment maximising the summed
                // metric; the first one found in lexicographic order wins ties.
                const bool pf = m.policy == SchedulerPolicy::ProportionalFair;
                long double best = -1.0L;
                for_each_assignment(options, [&](const std::vector<int>& a) {
                    long double total = 0.0L;
                    for (std::size_t rb = 0; rb < n_rb; ++rb) {
                        if (a[rb] < 0) continue;
                        const auto i = static_cast<std::size_t>(a[rb]);
                        const auto b = static_cast<double>(bits[ues[i]][rb]);
                        total += pf ? static_cast<long double>(b / avg[i]) : static_cast<long double>(b);
                    }
                    if (total > best) {
                        best = total;
                        chosen = a;
                    }
                });
            }

            std::vector<double> served(n, 0.0);
            for (std::size_t rb = 0; rb < n_rb; ++rb) {
                if (chosen[rb] < 0) continue;
                const auto i = static_cast<std::size_t>(chosen[rb]);
                out.ue_bits[ues[i]] += bits[ues[i]][rb];
                served[i] += static_cast<double>(bits[ues[i]][rb]);
            }
            if (m.policy == SchedulerPolicy::ProportionalFair) {
                for (std::size_t i = 0; i < n; ++i) {
                    avg[i] = (1.0 - 1.0 / m.pf_time_constant) * avg[i] + (1.0 / m.pf_time_constant) * served[i];
                }
            }
        }
    }
    return out;
}

DropInputs to_drop_inputs(const MicroInstance& m) {
    DropInputs in;
    in.n_ues = m.n_ues;
    in.gains = LinkGainMatrix(m.n_cells, m.n_ues);
    for (int c = 0; c < m.n_cells; ++c) {
        Node cell;
        cell.id = c;
        cell.kind = m.kind[static_cast<std::size_t>(c)];
        cell.tx_power_dbm = m.tx_dbm[static_cast<std::size_t>(c)];
        cell.sector = c;
        in.cells.push_back(cell);
        for (int u = 0; u < m.n_ues; ++u) in.gains(c, u) = m.gain_db[static_cast<std::size_t>(c)][static_cast<std::size_t>(u)];
    }
    SpectrumPlan plan;
    for (const auto& bits : m.cell_mask) {
        RbMask mask(m.n_rb);
        for (int rb = 0; rb < m.n_rb; ++rb) mask.set(rb, bits[static_cast<std::size_t>(rb)]);
        plan.cell_masks.push_back(mask);
    }
    for (const auto& bits : m.eligible) {
        RbMask mask(m.n_rb);
        for (int rb = 0; rb < m.n_rb; ++rb) mask.set(rb, bits[static_cast<std::size_t>(rb)]);
        plan.ue_eligibility.push_back(mask);
    }
    in.spectrum = plan;
    in.ue_sector.assign(static_cast<std::size_t>(m.n_ues), 0);
    in.key = StreamKey{7, 0};
    return in;
}

Scenario to_scenario(const MicroInstance& m) {
    Scenario s;
    s.l2s = m.l2s;
    s.scheduler.policy = m.policy;
    s.scheduler.pf_time_constant = m.pf_time_constant;
    s.scheduler.pf_init_epsilon = m.pf_init_epsilon;
    s.run.ttis = m.ttis;
    s.run.check_invariants = true;
    return s;
}

}  // namespace dsnsim::testing
