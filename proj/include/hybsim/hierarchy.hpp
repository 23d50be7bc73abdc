#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "hybsim/cache.hpp"

namespace hybsim {

struct HierarchyConfig {
    std::vector<CacheConfig> levels;  // closest to the core first
    uint32_t memory_latency_cycles = 100;
    uint64_t seed = kDefaultSeed;
};

/// Three-level geometry used throughout: 64 KiB / 8-way L1,
/// 256 KiB / 8-way L2, 4 MiB / 16-way L3, 64 B lines, 46-bit
/// addresses, two isolated ways per set at every level. Latencies
/// (4 / 12 / 42 / 100 cycles) are simulator defaults, not derived
/// from any hardware.
HierarchyConfig default_hierarchy();

struct LevelOutcome {
    uint32_t level = 0;
    AccessOutcome outcome;
};

struct HierarchyOutcome {
    /// Index of the level that serviced the request, or
    /// kServicedByMemory if every level missed.
    uint32_t serviced_level = 0;
    uint64_t total_latency_cycles = 0;
    std::vector<LevelOutcome> level_outcomes;  // one per traversed level
};

inline constexpr uint32_t kServicedByMemory = 0xFFFFFFFF;

struct DomainCounters {
    uint64_t accesses = 0;
    uint64_t hits = 0;
    uint64_t misses = 0;
    uint64_t evictions = 0;
    uint64_t writebacks = 0;
};

/// One row of the stats report: counters for a (level, idid) pair plus
/// the derived miss rate and average access time. amat for level k is
/// hit_latency_k + miss_rate_k * amat_{k+1}, with memory latency as
/// the innermost term; rows with zero accesses report zero throughout.
struct StatsRow {
    std::string level;
    uint32_t level_index = 0;
    uint8_t idid = 0;
    uint64_t accesses = 0;
    uint64_t hits = 0;
    uint64_t misses = 0;
    double miss_rate = 0.0;
    uint64_t evictions = 0;
    uint64_t writebacks = 0;
    double amat_cycles = 0.0;
};

/// Multi-level cache stack, non-inclusive, fill on return: a request
/// walks outward from level 0 until it hits (or reaches memory) and
/// every level it missed in has already installed the line by then.
/// Latency is the sum of hit latencies of all traversed levels plus
/// memory latency on a full miss. Counters are kept per (level, idid)
/// and never mix domains.
class CacheHierarchy {
public:
    explicit CacheHierarchy(const HierarchyConfig& cfg);

    HierarchyOutcome access(const AccessRequest& req);

    /// Flushes (addr, idid) at every level. Writebacks count per level.
    std::vector<FlushOutcome> flush(uint64_t addr, uint8_t idid);

    /// True if any level holds (addr, idid). Non-mutating.
    bool probe(uint64_t addr, uint8_t idid) const;

    /// Rows sorted by (level, idid). Domains that were never seen are
    /// omitted; idid 0 always appears.
    std::vector<StatsRow> stats() const;

    void reset_stats();

    uint64_t memory_fetches(uint8_t idid) const { return memory_fetches_[idid]; }

    uint32_t num_levels() const { return uint32_t(levels_.size()); }
    const HybridCache& level(uint32_t i) const { return levels_.at(i); }
    HybridCache& level(uint32_t i) { return levels_.at(i); }
    const HierarchyConfig& config() const { return cfg_; }

private:
    HierarchyConfig cfg_;
    std::vector<HybridCache> levels_;
    std::vector<std::array<DomainCounters, kMaxIdid + 1>> counters_;
    std::array<uint64_t, kMaxIdid + 1> memory_fetches_{};
    std::array<bool, kMaxIdid + 1> idid_seen_{};
};

}  // namespace hybsim
