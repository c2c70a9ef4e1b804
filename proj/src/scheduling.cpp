#include "dsnsim/scheduling.hpp"

#include <algorithm>
#include <stdexcept>

namespace dsnsim {

namespace {

// Empty eligibility means every UE may use every RB of the cell.
bool eligible(std::span<const RbMask> eligibility, std::size_t ue, int rb) {
    return eligibility.empty() || eligibility[ue].test(rb);
}

ScheduleDecision unassigned(int n_rb) {
    return ScheduleDecision{std::vector<int>(static_cast<std::size_t>(n_rb), kUnassigned)};
}

// Per RB, the position in `ue_ids` of the winning UE, or -1.
template <class Metric>
std::vector<int> argmax_positions(std::span<const int> ue_ids, const RbMask& cell_mask,
                                  std::span<const RbMask> eligibility, Metric metric) {
    std::vector<int> winner(static_cast<std::size_t>(cell_mask.size()), -1);
    for (int rb = 0; rb < cell_mask.size(); ++rb) {
        if (!cell_mask.test(rb)) continue;
        int best = -1;
        double best_metric = 0.0;
        for (std::size_t u = 0; u < ue_ids.size(); ++u) {
            if (!eligible(eligibility, u, rb)) continue;
            const double m = metric(u, rb);
            if (best < 0 || m > best_metric || (m == best_metric && ue_ids[u] < ue_ids[static_cast<std::size_t>(best)])) {
                best = static_cast<int>(u);
                best_metric = m;
            }
        }
        winner[static_cast<std::size_t>(rb)] = best;
    }
    return winner;
}

ScheduleDecision to_decision(std::span<const int> ue_ids, const std::vector<int>& positions) {
    ScheduleDecision d = unassigned(static_cast<int>(positions.size()));
    for (std::size_t rb = 0; rb < positions.size(); ++rb) {
        if (positions[rb] >= 0) d.assignment[rb] = ue_ids[static_cast<std::size_t>(positions[rb])];
    }
    return d;
}

}  // namespace

const char* to_string(SchedulerPolicy policy) {
    switch (policy) {
        case SchedulerPolicy::RoundRobin: return "rr";
        case SchedulerPolicy::ProportionalFair: return "pf";
        case SchedulerPolicy::BestCqi: return "bcqi";
    }
    return "unknown";
}

void SchedulerConfig::validate() const {
    if (!(pf_time_constant >= 1.0)) throw std::invalid_argument("scheduler.pf_time_constant must be >= 1");
    if (!(pf_init_epsilon > 0.0)) throw std::invalid_argument("scheduler.pf_init_epsilon must be > 0");
}

int ScheduleDecision::assigned_count() const {
    return static_cast<int>(std::count_if(assignment.begin(), assignment.end(), [](int u) { return u != kUnassigned; }));
}

int ScheduleDecision::count_for(int ue_id) const {
    return static_cast<int>(std::count(assignment.begin(), assignment.end(), ue_id));
}

SchedulerState SchedulerState::initial(const SchedulerConfig& config, int n_ues) {
    SchedulerState s;
    s.policy = config.policy;
    s.pf_time_constant = config.pf_time_constant;
    s.pf_init_epsilon = config.pf_init_epsilon;
    s.pf_avg_throughput.assign(static_cast<std::size_t>(n_ues), config.pf_init_epsilon);
    return s;
}

ScheduleDecision schedule_rr(std::span<const int> ue_ids, const RbMask& cell_mask,
                             std::span<const RbMask> eligibility, SchedulerState& state) {
    ScheduleDecision d = unassigned(cell_mask.size());
    const int n = static_cast<int>(ue_ids.size());
    if (n == 0) return d;
    int pointer = state.rr_pointer % n;
    for (int rb = 0; rb < cell_mask.size(); ++rb) {
        if (!cell_mask.test(rb)) continue;
        for (int k = 0; k < n; ++k) {
            const int candidate = (pointer + k) % n;
            if (!eligible(eligibility, static_cast<std::size_t>(candidate), rb)) continue;
            d.assignment[static_cast<std::size_t>(rb)] = ue_ids[static_cast<std::size_t>(candidate)];
            pointer = (candidate + 1) % n;
            break;
        }
    }
    state.rr_pointer = pointer;
    return d;
}

ScheduleDecision schedule_bcqi(std::span<const int> ue_ids, const RateMatrix& rates, const RbMask& cell_mask,
                               std::span<const RbMask> eligibility) {
    const auto winner = argmax_positions(ue_ids, cell_mask, eligibility, [&](std::size_t u, int rb) {
        return static_cast<double>(rates(static_cast<int>(u), rb));
    });
    return to_decision(ue_ids, winner);
}

ScheduleDecision schedule_pf(std::span<const int> ue_ids, const RateMatrix& rates, SchedulerState& state,
                             const RbMask& cell_mask, std::span<const RbMask> eligibility) {
    if (state.pf_avg_throughput.size() != ue_ids.size()) {
        state.pf_avg_throughput.resize(ue_ids.size(), state.pf_init_epsilon);
    }
    const auto& avg = state.pf_avg_throughput;
    const auto winner = argmax_positions(ue_ids, cell_mask, eligibility, [&](std::size_t u, int rb) {
        return static_cast<double>(rates(static_cast<int>(u), rb)) / avg[u];
    });

    std::vector<double> served(ue_ids.size(), 0.0);
    for (int rb = 0; rb < cell_mask.size(); ++rb) {
        const int pos = winner[static_cast<std::size_t>(rb)];
        if (pos >= 0) served[static_cast<std::size_t>(pos)] += static_cast<double>(rates(pos, rb));
    }
    const double alpha = 1.0 / state.pf_time_constant;
    for (std::size_t u = 0; u < ue_ids.size(); ++u) {
        state.pf_avg_throughput[u] = (1.0 - alpha) * state.pf_avg_throughput[u] + alpha * served[u];
    }
    return to_decision(ue_ids, winner);
}

ScheduleDecision schedule(std::span<const int> ue_ids, const RateMatrix& rates, SchedulerState& state,
                          const RbMask& cell_mask, std::span<const RbMask> eligibility) {
    switch (state.policy) {
        case SchedulerPolicy::RoundRobin: return schedule_rr(ue_ids, cell_mask, eligibility, state);
        case SchedulerPolicy::ProportionalFair: return schedule_pf(ue_ids, rates, state, cell_mask, eligibility);
        case SchedulerPolicy::BestCqi: return schedule_bcqi(ue_ids, rates, cell_mask, eligibility);
    }
    throw std::logic_error("unknown scheduler policy");
}

}  // namespace dsnsim
