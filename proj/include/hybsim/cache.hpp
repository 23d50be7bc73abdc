#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "hybsim/geometry.hpp"
#include "hybsim/replacement.hpp"

namespace hybsim {

enum class AccessKind : uint8_t { kRead, kWrite, kFlush, kIoRead, kIoWrite };

enum class Verdict : uint8_t { kHit, kMiss };

/// Domain ids are 4 bits. 0 is the non-isolated domain; 1..15 are
/// isolated execution domains.
inline constexpr uint8_t kMaxIdid = 15;

struct AccessRequest {
    uint32_t pid = 0;
    uint8_t idid = 0;
    AccessKind kind = AccessKind::kRead;
    uint64_t addr = 0;
};

/// One cache line. line_addr is the full line address (extended tag);
/// together with idid it identifies the copy, since isolated domains
/// may each hold their own copy of a shared read-only line.
struct CacheLine {
    bool valid = false;
    bool dirty = false;
    uint64_t line_addr = 0;
    uint8_t idid = 0;
};

struct VictimInfo {
    uint64_t line_addr = 0;
    uint8_t idid = 0;
    bool dirty = false;
};

struct AccessOutcome {
    Verdict verdict = Verdict::kMiss;
    std::optional<SlotIndex> hit_slot;
    std::optional<SlotIndex> filled_slot;
    std::optional<VictimInfo> victim;       // valid line displaced by the fill
    std::optional<uint64_t> writeback;      // line address of a dirty victim
};

struct FlushOutcome {
    bool invalidated = false;
    std::optional<uint64_t> writeback;
};

/// One cache level with soft partitioning.
///
/// Non-isolated requests (idid 0) see a conventional set-associative
/// cache: lookup within the home set, true-LRU victim over all ways.
/// Isolated requests see only the subcache (the iso_ways highest ways
/// of every set) as one fully associative pool: a hit requires both
/// the full line address and the exact idid to match, and a miss fills
/// a uniformly random subcache entry regardless of occupancy. Either
/// path may therefore silently evict the other's lines from subcache
/// ways; no request ever observes another domain's line as a hit.
class HybridCache {
public:
    HybridCache(const CacheConfig& cfg, uint64_t rng_seed);

    /// Read or write. Throws std::invalid_argument for other kinds or
    /// an idid above kMaxIdid; std::out_of_range for oversized addrs.
    AccessOutcome access(const AccessRequest& req);

    /// Invalidates the copy of addr belonging to idid, if present.
    /// Dirty contents are reported as a writeback. Recency unchanged.
    FlushOutcome flush(uint64_t addr, uint8_t idid);

    /// Presence check by exhaustive scan, no state change. Kept free
    /// of the indexed lookup structures so tests can use it as an
    /// independent second opinion on access().
    bool probe(uint64_t addr, uint8_t idid) const;

    /// Copy of the full array, set-major (set * num_ways + way).
    std::vector<CacheLine> snapshot() const { return lines_; }

    const CacheLine& peek(uint32_t set, uint32_t way) const;
    const LruState& recency() const { return lru_; }
    const CacheConfig& config() const { return cfg_; }

private:
    CacheLine& at(uint32_t set, uint32_t way) {
        return lines_[size_t(set) * cfg_.num_ways + way];
    }
    const CacheLine& at(uint32_t set, uint32_t way) const {
        return lines_[size_t(set) * cfg_.num_ways + way];
    }

    static uint64_t iso_key(uint64_t line_addr, uint8_t idid) {
        return (line_addr << 4) | idid;
    }

    void unindex_if_isolated(const CacheLine& line);
    AccessOutcome fill(SlotIndex slot, uint64_t line_addr, uint8_t idid, bool write);

    CacheConfig cfg_;
    std::vector<CacheLine> lines_;
    LruState lru_;
    SeededRng rng_;
    // (line_addr, idid != 0) -> subcache entry index, for O(1) fully
    // associative matching. probe() deliberately ignores this.
    std::unordered_map<uint64_t, uint32_t> iso_index_;
};

}  // namespace hybsim
