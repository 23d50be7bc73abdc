#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hybsim/hierarchy.hpp"
#include "hybsim/trace.hpp"

namespace hybsim {

/// kBaseline locks every party into the non-isolated domain, turning
/// the model into a conventional set-associative stack. kHybCache
/// places the victim (and optionally the attacker) in isolated
/// domains served by the subcache.
enum class CacheMode : uint8_t { kBaseline, kHybCache };

/// Whether the victim actually executes between the attacker's two
/// phases. kIdle gives the no-signal control run.
enum class WaitModel : uint8_t { kVictimRuns, kIdle };

struct AttackScenario {
    CacheMode mode = CacheMode::kHybCache;
    uint8_t attacker_idid = 0;
    uint8_t victim_idid = 1;
    VictimSpec victim;
    uint32_t trials = 20;
    uint64_t seed = kDefaultSeed;
    WaitModel wait_model = WaitModel::kVictimRuns;
    HierarchyConfig hierarchy = default_hierarchy();
    // worker threads for independent trials; results are identical for
    // any value because each trial derives its own seed
    uint32_t parallel_trials = 1;
};

/// Places the victim's three lines in distinct, fixed sets of the
/// innermost level, away from the tags the attacks use for priming.
VictimSpec default_victim_spec(const CacheConfig& l1, std::string key_bits);

/// Deterministic random bit string of the given length.
std::string random_key(uint32_t bits, uint64_t seed);

struct TrialResult {
    std::string recovered_bits;
    // per key bit: the attacker's measured latencies for the two
    // monitored lines or line groups (bit-0 signal first)
    std::vector<std::array<uint64_t, 2>> probe_latency;
    uint64_t slow_probes = 0;  // probe/reload accesses that missed L1
};

struct DetectionReport {
    CacheMode mode = CacheMode::kBaseline;
    std::string key_bits;
    std::string recovered_bits;  // per-bit majority across trials
    double accuracy = 0.0;       // matched bits / (trials * key length)
    std::vector<TrialResult> trials;
};

/// Prime+probe against the victim's key-dependent branch: fill the two
/// monitored sets with the attacker's lines, let the victim run one
/// key bit, then re-touch the fill in reverse order and compare the
/// two sets' total latencies. Ties resolve by a per-trial coin so the
/// no-signal case converges to chance.
DetectionReport prime_probe(const AttackScenario& s);

/// Flush+reload against the same victim: flush both branch lines in
/// the attacker's domain, let the victim run one key bit, reload both
/// and classify by innermost-level hit. If neither reload hits there
/// is no signal and the bit falls back to 0.
DetectionReport flush_reload(const AttackScenario& s);

struct EvictionSample {
    uint32_t n_isolated = 0;
    std::vector<uint64_t> samples;  // accesses needed per trial

    double sample_mean() const;
    double sample_variance() const;  // unbiased, n-1 denominator
};

/// Measures how many uniformly random single-entry evictions are
/// needed before every one of n_isolated entries has been hit at
/// least once (the cost of flushing another domain's whole subcache).
EvictionSample evict_subcache_experiment(uint32_t n_isolated, uint32_t trials,
                                         uint64_t seed, uint32_t parallel_trials = 1);

struct OccupancyPoint {
    uint64_t working_set_size = 0;      // victim lines touched
    std::vector<uint64_t> survivals;    // attacker lines left, per trial
    double mean_survivals = 0.0;
};

struct OccupancyReport {
    uint32_t n_isolated = 0;
    std::vector<OccupancyPoint> points;
    // Spearman correlation over all (size, survivals) trial pairs;
    // the residual-occupancy channel shows as a strong negative value
    double rank_correlation = 0.0;
};

/// Residual-occupancy channel: the attacker first owns the whole
/// subcache, the victim touches k distinct lines, and the attacker
/// counts how many of its lines survived. Runs on a single-level
/// hierarchy built from the scenario's innermost level. Requires both
/// parties isolated and distinct.
OccupancyReport occupancy_probe(const AttackScenario& s,
                                std::span<const uint64_t> working_set_sizes,
                                uint32_t trials_per_size,
                                uint64_t attacker_base = 0x10000000,
                                uint64_t victim_base = 0x20000000);

}  // namespace hybsim
