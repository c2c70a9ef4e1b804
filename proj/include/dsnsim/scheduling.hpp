#pragma once

// Full-buffer downlink schedulers. One scheduler instance per cell; every
// associated UE always has data pending.
//
// UEs are passed as a list of ids in the order the cell tracks them. Rate
// matrices and eligibility masks are indexed by position in that list, while
// decisions carry the ids. Ties always go to the lowest UE id.

#include <cstdint>
#include <span>
#include <vector>

#include "dsnsim/spectrum_reuse.hpp"

namespace dsnsim {

enum class SchedulerPolicy { RoundRobin, ProportionalFair, BestCqi };

const char* to_string(SchedulerPolicy policy);

struct SchedulerConfig {
    SchedulerPolicy policy = SchedulerPolicy::RoundRobin;
    double pf_time_constant = 100.0;  // TTIs
    double pf_init_epsilon = 1e-6;    // bits/TTI, cold-start average

    void validate() const;

    friend bool operator==(const SchedulerConfig&, const SchedulerConfig&) = default;
};

inline constexpr int kUnassigned = -1;

struct ScheduleDecision {
    std::vector<int> assignment;  // per RB: UE id or kUnassigned

    int assigned_count() const;
    int count_for(int ue_id) const;
};

/// Whole bits per (UE, RB) for one TTI. Rows follow the cell's UE list.
class RateMatrix {
  public:
    RateMatrix() = default;
    RateMatrix(int n_ues, int n_rb) : n_ues_(n_ues), n_rb_(n_rb), bits_(static_cast<std::size_t>(n_ues) * n_rb, 0) {}

    int n_ues() const { return n_ues_; }
    int n_rb() const { return n_rb_; }

    std::int64_t operator()(int ue, int rb) const { return bits_[index(ue, rb)]; }
    std::int64_t& operator()(int ue, int rb) { return bits_[index(ue, rb)]; }

  private:
    std::size_t index(int ue, int rb) const {
        return static_cast<std::size_t>(ue) * static_cast<std::size_t>(n_rb_) + static_cast<std::size_t>(rb);
    }

    int n_ues_ = 0;
    int n_rb_ = 0;
    std::vector<std::int64_t> bits_;
};

struct SchedulerState {
    SchedulerPolicy policy = SchedulerPolicy::RoundRobin;
    int rr_pointer = 0;                     // position in the cell's UE list
    std::vector<double> pf_avg_throughput;  // bits/TTI, per UE position
    double pf_time_constant = 100.0;
    double pf_init_epsilon = 1e-6;

    static SchedulerState initial(const SchedulerConfig& config, int n_ues);
};

/// Cyclic over UEs starting at the pointer; an ineligible UE is skipped, and
/// an RB nobody may use stays unassigned. The pointer ends past the last UE served.
ScheduleDecision schedule_rr(std::span<const int> ue_ids, const RbMask& cell_mask,
                             std::span<const RbMask> eligibility, SchedulerState& state);

/// Per RB, the eligible UE with the highest rate.
ScheduleDecision schedule_bcqi(std::span<const int> ue_ids, const RateMatrix& rates, const RbMask& cell_mask,
                               std::span<const RbMask> eligibility);

/// Per RB, the eligible UE maximising rate / average throughput; afterwards
/// every UE's average moves towards the bits it got this TTI.
ScheduleDecision schedule_pf(std::span<const int> ue_ids, const RateMatrix& rates, SchedulerState& state,
                             const RbMask& cell_mask, std::span<const RbMask> eligibility);

/// Dispatches on state.policy.
ScheduleDecision schedule(std::span<const int> ue_ids, const RateMatrix& rates, SchedulerState& state,
                          const RbMask& cell_mask, std::span<const RbMask> eligibility);

}  // namespace dsnsim
