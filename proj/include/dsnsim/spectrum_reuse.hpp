#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsnsim/random.hpp"

namespace dsnsim {

class ConfigError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Set of resource blocks a cell may transmit on (or a UE may be scheduled on).
class RbMask {
  public:
    RbMask() = default;
    explicit RbMask(int n_rb, bool value = false) : bits_(static_cast<std::size_t>(n_rb), value) {}

    static RbMask full(int n_rb) { return RbMask(n_rb, true); }
    static RbMask range(int n_rb, int first, int count);

    int size() const { return static_cast<int>(bits_.size()); }
    bool test(int rb) const { return bits_[static_cast<std::size_t>(rb)]; }
    void set(int rb, bool value = true) { bits_[static_cast<std::size_t>(rb)] = value; }

    int count() const;
    bool any() const { return count() > 0; }
    bool is_subset_of(const RbMask& other) const;
    bool intersects(const RbMask& other) const;

    RbMask operator|(const RbMask& other) const;
    RbMask operator&(const RbMask& other) const;
    friend bool operator==(const RbMask&, const RbMask&) = default;

    /// "1101..." with RB 0 first.
    std::string to_string() const;

  private:
    std::vector<bool> bits_;
};

enum class ReuseScheme { Full1, Hard3, Ffr, FAloha };

const char* to_string(ReuseScheme scheme);

struct ReusePolicy {
    ReuseScheme scheme = ReuseScheme::Full1;
    double ffr_center_fraction = 0.5;
    double ffr_edge_sinr_threshold = 5.0;  // dB
    double faloha_fraction = 1.0 / 3.0;
    bool pico_use_macro_masks = false;  // picos follow the macro Hard3/FFR masks of their parent sector

    void validate() const;

    friend bool operator==(const ReusePolicy&, const ReusePolicy&) = default;
};

/// ceil(fraction * n) that ignores floating-point noise in the product.
int fraction_of(double fraction, int n);

/// [first, first + size) of chunk k when `count` RBs starting at `first` are
/// split into three contiguous chunks, remainder going to the lower chunks.
struct Chunk {
    int first = 0;
    int size = 0;
};
Chunk third_chunk(int first, int count, int k);

RbMask mask_full_reuse(int n_rb);

/// Chunk `sector_index` of a three-way split of the band.
RbMask mask_hard_reuse3(int sector_index, int n_rb);

struct FfrAssignment {
    RbMask cell_mask;                 // centre band plus own edge chunk
    RbMask center_band;
    RbMask edge_chunk;
    std::vector<RbMask> eligibility;  // one per UE, in input order
};

/// Centre band = first ceil(center_fraction * n_rb) RBs, reused everywhere.
/// The rest is split three ways like Hard3. UEs below the SINR threshold are
/// edge UEs and only get the sector's edge chunk; the others only the centre.
/// Throws ConfigError if the edge band has fewer than 3 RBs.
FfrAssignment assign_ffr(std::span<const double> wideband_sinr_db, const ReusePolicy& policy, int sector_index,
                         int n_rb);

/// Exactly ceil(faloha_fraction * n_rb) RBs chosen uniformly at random. The
/// draw comes from substream (key, FAloha, pico_id).
RbMask assign_faloha(int pico_id, const ReusePolicy& policy, int n_rb, const StreamKey& key);

}  // namespace dsnsim
