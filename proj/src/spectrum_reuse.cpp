#include "dsnsim/spectrum_reuse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dsnsim {

RbMask RbMask::range(int n_rb, int first, int count) {
    RbMask m(n_rb);
    for (int rb = first; rb < first + count; ++rb) m.set(rb);
    return m;
}

int RbMask::count() const { return static_cast<int>(std::count(bits_.begin(), bits_.end(), true)); }

bool RbMask::is_subset_of(const RbMask& other) const {
    for (int rb = 0; rb < size(); ++rb) {
        if (test(rb) && !other.test(rb)) return false;
    }
    return true;
}

bool RbMask::intersects(const RbMask& other) const {
    for (int rb = 0; rb < size(); ++rb) {
        if (test(rb) && other.test(rb)) return true;
    }
    return false;
}

RbMask RbMask::operator|(const RbMask& other) const {
    RbMask out(size());
    for (int rb = 0; rb < size(); ++rb) out.set(rb, test(rb) || other.test(rb));
    return out;
}

RbMask RbMask::operator&(const RbMask& other) const {
    RbMask out(size());
    for (int rb = 0; rb < size(); ++rb) out.set(rb, test(rb) && other.test(rb));
    return out;
}

std::string RbMask::to_string() const {
    std::string s;
    s.reserve(bits_.size());
    for (const bool b : bits_) s.push_back(b ? '1' : '0');
    return s;
}

const char* to_string(ReuseScheme scheme) {
    switch (scheme) {
        case ReuseScheme::Full1: return "full1";
        case ReuseScheme::Hard3: return "hard3";
        case ReuseScheme::Ffr: return "ffr";
        case ReuseScheme::FAloha: return "faloha";
    }
    return "unknown";
}

void ReusePolicy::validate() const {
    if (!(ffr_center_fraction >= 0.0 && ffr_center_fraction <= 1.0)) {
        throw ConfigError("reuse.ffr_center_fraction must be in [0, 1]");
    }
    if (!(faloha_fraction > 0.0 && faloha_fraction <= 1.0)) {
        throw ConfigError("reuse.faloha_fraction must be in (0, 1]");
    }
}

int fraction_of(double fraction, int n) {
    return static_cast<int>(std::ceil(fraction * n - 1e-9));
}

Chunk third_chunk(int first, int count, int k) {
    const int base = count / 3;
    const int extra = count % 3;
    Chunk c;
    c.size = base + (k < extra ? 1 : 0);
    c.first = first + k * base + std::min(k, extra);
    return c;
}

RbMask mask_full_reuse(int n_rb) { return RbMask::full(n_rb); }

RbMask mask_hard_reuse3(int sector_index, int n_rb) {
    if (n_rb < 3) throw ConfigError("hard reuse 3 needs at least 3 RBs");
    if (sector_index < 0 || sector_index > 2) throw ConfigError("sector index must be 0, 1 or 2");
    const Chunk c = third_chunk(0, n_rb, sector_index);
    return RbMask::range(n_rb, c.first, c.size);
}

FfrAssignment assign_ffr(std::span<const double> wideband_sinr_db, const ReusePolicy& policy, int sector_index,
                         int n_rb) {
    if (sector_index < 0 || sector_index > 2) throw ConfigError("sector index must be 0, 1 or 2");
    const int n_center = std::min(fraction_of(policy.ffr_center_fraction, n_rb), n_rb);
    const int n_edge = n_rb - n_center;
    if (n_edge < 3) {
        throw ConfigError("FFR edge band has " + std::to_string(n_edge) + " RBs, needs at least 3");
    }
    const Chunk c = third_chunk(n_center, n_edge, sector_index);

    FfrAssignment out;
    out.center_band = RbMask::range(n_rb, 0, n_center);
    out.edge_chunk = RbMask::range(n_rb, c.first, c.size);
    out.cell_mask = out.center_band | out.edge_chunk;
    out.eligibility.reserve(wideband_sinr_db.size());
    for (const double sinr : wideband_sinr_db) {
        out.eligibility.push_back(sinr < policy.ffr_edge_sinr_threshold ? out.edge_chunk : out.center_band);
    }
    return out;
}

RbMask assign_faloha(int pico_id, const ReusePolicy& policy, int n_rb, const StreamKey& key) {
    const int k = std::min(fraction_of(policy.faloha_fraction, n_rb), n_rb);
    std::vector<int> all(static_cast<std::size_t>(n_rb));
    std::iota(all.begin(), all.end(), 0);
    std::vector<int> chosen;
    chosen.reserve(static_cast<std::size_t>(k));
    auto rng = key.substream(StreamTag::FAloha, static_cast<std::uint64_t>(pico_id));
    std::sample(all.begin(), all.end(), std::back_inserter(chosen), k, rng);

    RbMask mask(n_rb);
    for (const int rb : chosen) mask.set(rb);
    return mask;
}

}  // namespace dsnsim
