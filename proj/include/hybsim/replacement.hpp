#pragma once

#include <cstdint>
#include <vector>

namespace hybsim {

/// Per-set true-LRU bookkeeping as an explicit recency order.
///
/// Each set holds a permutation of its way indices, most recent first.
/// A fresh state orders ways ascending, so way 0 is MRU and the
/// highest-numbered way is the first victim.
class LruState {
public:
    LruState() = default;
    LruState(uint32_t num_sets, uint32_t num_ways);

    /// Moves the way to the MRU position of its set.
    void touch(uint32_t set, uint32_t way);

    /// Way currently in the LRU position. Does not modify state.
    uint32_t victim(uint32_t set) const;

    /// Recency order of one set, MRU first. Always a permutation of
    /// [0, num_ways).
    const std::vector<uint32_t>& order(uint32_t set) const;

    uint32_t num_sets() const { return uint32_t(order_.size()); }
    uint32_t num_ways() const { return num_ways_; }

private:
    void check(uint32_t set, uint32_t way) const;

    uint32_t num_ways_ = 0;
    std::vector<std::vector<uint32_t>> order_;
};

/// Deterministic 64-bit generator (splitmix64). Identical seeds give
/// identical streams on every platform; never seeded from time.
class SeededRng {
public:
    explicit SeededRng(uint64_t seed) : state_(seed) {}

    uint64_t next_u64();

    /// Uniform draw from [0, n). Debiased via 128-bit multiply with
    /// rejection, so every residue is exactly equally likely.
    uint64_t next_uniform(uint64_t n);

    /// Derives an independent stream seed; used to give each trial or
    /// experiment its own generator without correlated streams.
    static uint64_t mix(uint64_t seed, uint64_t stream);

private:
    uint64_t state_;
};

/// Victim choice for the fully associative subcache: uniform over all
/// n_isolated entries, independent of occupancy.
uint32_t random_victim(SeededRng& rng, uint32_t n_isolated);

/// Seed used by every entry point when the caller does not supply one.
inline constexpr uint64_t kDefaultSeed = 52711;

}  // namespace hybsim
